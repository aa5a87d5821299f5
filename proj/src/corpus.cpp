#include "embedlab/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "embedlab/error.hpp"
#include "embedlab/io.hpp"
#include "embedlab/rng.hpp"
#include "embedlab/text.hpp"

namespace embedlab {

extern const char* const kBuiltinStopwords[];
extern const std::size_t kBuiltinStopwordCount;

namespace {

std::string digest_of(const std::unordered_set<std::string>& words) {
  std::vector<std::string> sorted(words.begin(), words.end());
  std::sort(sorted.begin(), sorted.end());
  std::string joined;
  for (const auto& w : sorted) {
    joined += w;
    joined += '\n';
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash_bytes(joined)));
  return buf;
}

}  // namespace

Stoplist Stoplist::from_words(std::vector<std::string> words) {
  Stoplist s;
  s.words.insert(std::make_move_iterator(words.begin()),
                 std::make_move_iterator(words.end()));
  s.digest = digest_of(s.words);
  return s;
}

Stoplist Stoplist::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stoplist file: " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    words.push_back(line.substr(first, last - first + 1));
  }
  return from_words(std::move(words));
}

const Stoplist& Stoplist::builtin() {
  static const Stoplist instance = [] {
    std::vector<std::string> words(kBuiltinStopwords,
                                   kBuiltinStopwords + kBuiltinStopwordCount);
    return from_words(std::move(words));
  }();
  return instance;
}

std::uint64_t Corpus::total_tokens() const {
  std::uint64_t n = 0;
  for (const auto& doc : documents) n += doc.tokens.size();
  return n;
}

std::vector<std::string> tokenize(std::string_view text,
                                  const Stoplist& stoplist) {
  std::vector<std::string> tokens;
  std::string current;
  const auto flush = [&] {
    if (!current.empty()) {
      if (!stoplist.contains(current)) tokens.push_back(current);
      current.clear();
    }
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    char32_t cp = 0;
    if (!decode_utf8(text, pos, cp)) {
      flush();
      ++pos;  // skip the offending byte
      continue;
    }
    if (is_alphabetic(cp)) {
      append_utf8(current, to_lower(cp));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

namespace {

Corpus corpus_from_texts(const std::vector<std::string>& texts,
                         const Stoplist& stoplist) {
  Corpus corpus;
  corpus.stoplist_digest = stoplist.digest;
  for (const auto& text : texts) {
    auto tokens = tokenize(text, stoplist);
    if (tokens.empty()) {
      ++corpus.dropped_empty;
      continue;
    }
    TokenizedDocument doc;
    doc.id = static_cast<std::uint32_t>(corpus.documents.size());
    doc.tokens = std::move(tokens);
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

void check_utf8(std::string_view bytes, const std::string& origin) {
  const std::size_t bad = find_invalid_utf8(bytes);
  if (bad != std::string_view::npos) {
    throw DataError("invalid UTF-8 in " + origin + " at byte offset " +
                    std::to_string(bad));
  }
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   const Stoplist& stoplist) {
  std::vector<std::string> texts;
  if (format == CorpusFormat::Lines) {
    std::string bytes = read_file(path);
    check_utf8(bytes, path.string());
    std::size_t start = 0;
    while (start <= bytes.size()) {
      const std::size_t nl = bytes.find('\n', start);
      if (nl == std::string::npos) {
        if (start < bytes.size()) texts.push_back(bytes.substr(start));
        break;
      }
      texts.push_back(bytes.substr(start, nl - start));
      start = nl + 1;
    }
  } else {
    std::error_code ec;
    std::filesystem::directory_iterator it(path, ec);
    if (ec) {
      throw DataError("cannot open corpus directory: " + path.string() +
                      " (" + ec.message() + ")");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : it) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) {
                return a.filename().string() < b.filename().string();
              });
    for (const auto& file : files) {
      std::string bytes = read_file(file);
      check_utf8(bytes, file.string());
      texts.push_back(std::move(bytes));
    }
  }
  Corpus corpus = corpus_from_texts(texts, stoplist);
  if (corpus.documents.empty()) {
    throw DataError("zero surviving documents in corpus: " + path.string());
  }
  if (corpus.dropped_empty > 0) {
    warn("dropped " + std::to_string(corpus.dropped_empty) +
         " empty document(s) from " + path.string());
  }
  return corpus;
}

Corpus corpus_from_token_lists(std::vector<std::vector<std::string>> docs,
                               std::string stoplist_digest) {
  Corpus corpus;
  corpus.stoplist_digest = std::move(stoplist_digest);
  for (auto& tokens : docs) {
    if (tokens.empty()) {
      ++corpus.dropped_empty;
      continue;
    }
    TokenizedDocument doc;
    doc.id = static_cast<std::uint32_t>(corpus.documents.size());
    doc.tokens = std::move(tokens);
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

void write_corpus_lines(const Corpus& corpus,
                        const std::filesystem::path& path) {
  std::string out;
  for (const auto& doc : corpus.documents) {
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      if (i > 0) out += ' ';
      out += doc.tokens[i];
    }
    out += '\n';
  }
  atomic_write(path, out);
}

CountMatrix build_count_matrix(const Corpus& corpus) {
  if (corpus.documents.empty()) {
    throw DataError("build_count_matrix: empty corpus");
  }
  CountMatrix cm;
  Vocabulary& vocab = cm.vocab;
  std::vector<Eigen::Triplet<double>> triplets;
  std::unordered_map<std::uint32_t, std::uint32_t> local;  // word -> count
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    local.clear();
    for (const auto& token : corpus.documents[d].tokens) {
      auto [it, inserted] = vocab.index.try_emplace(
          token, static_cast<std::uint32_t>(vocab.words.size()));
      if (inserted) {
        vocab.words.push_back(token);
        vocab.corpus_frequency.push_back(0);
        vocab.document_frequency.push_back(0);
      }
      ++local[it->second];
      ++vocab.corpus_frequency[it->second];
    }
    for (const auto& [w, count] : local) {
      triplets.emplace_back(static_cast<int>(w), static_cast<int>(d),
                            static_cast<double>(count));
      ++vocab.document_frequency[w];
    }
  }
  cm.counts.resize(static_cast<Eigen::Index>(vocab.size()),
                   static_cast<Eigen::Index>(corpus.documents.size()));
  cm.counts.setFromTriplets(triplets.begin(), triplets.end());
  cm.counts.makeCompressed();
  return cm;
}

DocFrequency doc_frequency(const Corpus& corpus,
                           const std::vector<std::string>& words) {
  DocFrequency result;
  std::unordered_set<std::string> query(words.begin(), words.end());
  for (const auto& w : query) result.counts[w] = 0;
  std::unordered_set<std::string> seen;
  for (const auto& doc : corpus.documents) {
    seen.clear();
    bool hit = false;
    for (const auto& token : doc.tokens) {
      if (query.count(token) && seen.insert(token).second) {
        ++result.counts[token];
        hit = true;
      }
    }
    if (hit) result.documents.push_back(doc.id);
  }
  return result;
}

std::vector<std::string> unique_sorted(std::vector<std::string> words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

}  // namespace embedlab
