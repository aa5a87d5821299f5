#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "embedlab/corpus.hpp"

namespace embedlab {

using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class ModelKind : std::uint8_t { Lsa = 0, Sgns = 1 };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// Trained word vectors plus their training provenance. `vectors` has one row
// per vocabulary word; `singular_values` is populated for LSA models only.
struct EmbeddingModel {
  ModelKind kind = ModelKind::Lsa;
  Vocabulary vocab;
  RowMatrixXd vectors;
  std::vector<double> singular_values;
  std::uint32_t requested_dimension = 0;
  std::uint32_t effective_dimension = 0;
  std::uint64_t document_count = 0;
  std::uint64_t seed = 0;
  std::string provenance;  // key=value parameter echo

  std::size_t dimension() const {
    return static_cast<std::size_t>(vectors.cols());
  }
  bool has(const std::string& word) const {
    return vocab.find(word).has_value();
  }
  // Row view of a word's vector; throws DataError for unknown words.
  Eigen::Ref<const Eigen::RowVectorXd> vector_of(const std::string& word) const;
};

// Binary model format, version 1 (little endian):
//   magic "EMBV", u32 version, u8 kind,
//   u32 requested_dim, u32 effective_dim, u64 document_count, u64 seed,
//   u32 provenance_len, provenance bytes,
//   u64 vocab_size, then per word: u32 len, bytes, u64 corpus_freq,
//   u32 doc_freq,
//   u64 rows, u64 cols, rows*cols f64 (row major),
//   u32 n_singular, n_singular f64.
void save_model(const EmbeddingModel& model,
                const std::filesystem::path& path);
EmbeddingModel load_model(const std::filesystem::path& path);

// Plain-text export: word followed by its components, one word per line.
void export_text(const EmbeddingModel& model,
                 const std::filesystem::path& path);

inline constexpr std::uint32_t kModelFormatVersion = 1;

}  // namespace embedlab
