#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "embedlab/corpus.hpp"
#include "embedlab/model.hpp"

namespace embedlab {

// Log-entropy weighted counts. Entry (w,d) = log2(1 + tf_wd) * g(w) with
// g(w) = 1 + sum_d p_wd log2(p_wd) / log2(n) and p_wd = tf_wd / gf_w.
// g is 1 for a word concentrated in a single document and 0 for a word
// spread uniformly over all n documents. Sparsity pattern matches the
// source counts.
struct WeightedMatrix {
  SparseRowMatrix values;
  Eigen::VectorXd global_weights;
};

WeightedMatrix log_entropy(const CountMatrix& counts);

struct SvdOptions {
  std::size_t oversampling = 10;
  int power_iterations = 2;
  // Matrices with both sides at or below this take the exact dense path.
  Eigen::Index dense_threshold = 512;
};

struct SvdResult {
  Eigen::MatrixXd left;             // m x k', orthonormal columns
  Eigen::VectorXd singular_values;  // k', non-increasing
  Eigen::MatrixXd right;            // n x k', orthonormal columns
  std::size_t effective_k = 0;      // min(k, m, n)
};

// Rank-k truncated SVD. Small matrices use Eigen's dense SVD directly;
// larger ones use a randomized range finder (Gaussian test matrix with
// `oversampling` extra columns, `power_iterations` rounds of re-orthogonalized
// power iteration) followed by an exact SVD of the projected matrix.
// Deterministic for a fixed seed.
SvdResult truncated_svd(const SparseRowMatrix& matrix, std::size_t k,
                        std::uint64_t seed, const SvdOptions& options = {});

// Which factor becomes the word vectors.
enum class LsaVectors { UTimesSigma, ULeft };

std::string to_string(LsaVectors v);
LsaVectors lsa_vectors_from_string(const std::string& name);

struct LsaConfig {
  std::size_t dimension = 300;
  std::uint64_t seed = 1;
  LsaVectors vectors = LsaVectors::UTimesSigma;
  SvdOptions svd;
};

// Count -> log-entropy -> truncated SVD pipeline. Requests beyond the rank
// bound min(|V|, n) clamp to it with a warning; the model records both the
// requested and effective dimension.
EmbeddingModel lsa_embed(const Corpus& corpus, const LsaConfig& config);

}  // namespace embedlab
