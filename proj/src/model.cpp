#include "embedlab/model.hpp"

#include <cstring>

#include "embedlab/error.hpp"
#include "embedlab/io.hpp"

namespace embedlab {

std::string to_string(ModelKind kind) {
  return kind == ModelKind::Lsa ? "lsa" : "sgns";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "lsa") return ModelKind::Lsa;
  if (name == "sgns") return ModelKind::Sgns;
  throw DataError("unknown model kind: " + name + " (expected lsa or sgns)");
}

Eigen::Ref<const Eigen::RowVectorXd> EmbeddingModel::vector_of(
    const std::string& word) const {
  const auto idx = vocab.find(word);
  if (!idx) throw DataError("word not in model vocabulary: " + word);
  return vectors.row(static_cast<Eigen::Index>(*idx));
}

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', 'V'};

// This format assumes a little-endian host, which covers every platform the
// project targets; loaders validate magic and version, not endianness.
template <typename T>
void put(std::string& out, const T& value) {
  static_assert(std::is_trivially_copyable_v<T>);
  const char* p = reinterpret_cast<const char*>(&value);
  out.append(p, sizeof(T));
}

class Reader {
 public:
  Reader(const std::string& bytes, const std::string& origin)
      : bytes_(bytes), origin_(origin) {}

  template <typename T>
  T get() {
    static_assert(std::is_trivially_copyable_v<T>);
    need(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string get_string(std::size_t len) {
    need(len);
    std::string s = bytes_.substr(pos_, len);
    pos_ += len;
    return s;
  }

  bool exhausted() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) {
    if (pos_ + n > bytes_.size()) {
      throw DataError("truncated model file: " + origin_);
    }
  }
  const std::string& bytes_;
  std::string origin_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_model(const EmbeddingModel& model,
                const std::filesystem::path& path) {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put(out, kModelFormatVersion);
  put(out, static_cast<std::uint8_t>(model.kind));
  put(out, model.requested_dimension);
  put(out, model.effective_dimension);
  put(out, model.document_count);
  put(out, model.seed);
  put(out, static_cast<std::uint32_t>(model.provenance.size()));
  out += model.provenance;
  put(out, static_cast<std::uint64_t>(model.vocab.size()));
  for (std::size_t w = 0; w < model.vocab.size(); ++w) {
    const std::string& word = model.vocab.words[w];
    put(out, static_cast<std::uint32_t>(word.size()));
    out += word;
    put(out, model.vocab.corpus_frequency[w]);
    put(out, model.vocab.document_frequency[w]);
  }
  put(out, static_cast<std::uint64_t>(model.vectors.rows()));
  put(out, static_cast<std::uint64_t>(model.vectors.cols()));
  out.append(reinterpret_cast<const char*>(model.vectors.data()),
             sizeof(double) * static_cast<std::size_t>(model.vectors.size()));
  put(out, static_cast<std::uint32_t>(model.singular_values.size()));
  for (double s : model.singular_values) put(out, s);
  atomic_write(path, out);
}

EmbeddingModel load_model(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  Reader in(bytes, path.string());
  char magic[4];
  for (char& c : magic) c = in.get<char>();
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw DataError("not a model file (bad magic): " + path.string());
  }
  const auto version = in.get<std::uint32_t>();
  if (version != kModelFormatVersion) {
    throw DataError("unsupported model format version " +
                    std::to_string(version) + " in " + path.string());
  }
  EmbeddingModel model;
  const auto kind = in.get<std::uint8_t>();
  if (kind > 1) throw DataError("bad model kind tag in " + path.string());
  model.kind = static_cast<ModelKind>(kind);
  model.requested_dimension = in.get<std::uint32_t>();
  model.effective_dimension = in.get<std::uint32_t>();
  model.document_count = in.get<std::uint64_t>();
  model.seed = in.get<std::uint64_t>();
  model.provenance = in.get_string(in.get<std::uint32_t>());
  const auto vocab_size = in.get<std::uint64_t>();
  model.vocab.words.reserve(vocab_size);
  for (std::uint64_t w = 0; w < vocab_size; ++w) {
    std::string word = in.get_string(in.get<std::uint32_t>());
    model.vocab.index.emplace(word, static_cast<std::uint32_t>(w));
    model.vocab.words.push_back(std::move(word));
    model.vocab.corpus_frequency.push_back(in.get<std::uint64_t>());
    model.vocab.document_frequency.push_back(in.get<std::uint32_t>());
  }
  const auto rows = in.get<std::uint64_t>();
  const auto cols = in.get<std::uint64_t>();
  if (rows != vocab_size) {
    throw DataError("model vector count does not match vocabulary in " +
                    path.string());
  }
  model.vectors.resize(static_cast<Eigen::Index>(rows),
                       static_cast<Eigen::Index>(cols));
  for (std::uint64_t i = 0; i < rows * cols; ++i) {
    model.vectors.data()[i] = in.get<double>();
  }
  const auto n_singular = in.get<std::uint32_t>();
  model.singular_values.resize(n_singular);
  for (auto& s : model.singular_values) s = in.get<double>();
  if (!in.exhausted()) {
    throw DataError("trailing bytes in model file: " + path.string());
  }
  return model;
}

void export_text(const EmbeddingModel& model,
                 const std::filesystem::path& path) {
  std::string out;
  char buf[64];
  for (std::size_t w = 0; w < model.vocab.size(); ++w) {
    out += model.vocab.words[w];
    for (Eigen::Index j = 0; j < model.vectors.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), " %.8g",
                    model.vectors(static_cast<Eigen::Index>(w), j));
      out += buf;
    }
    out += '\n';
  }
  atomic_write(path, out);
}

}  // namespace embedlab
