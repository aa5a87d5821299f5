#include "embedlab/lsa.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "embedlab/error.hpp"
#include "embedlab/rng.hpp"

namespace embedlab {

WeightedMatrix log_entropy(const CountMatrix& counts) {
  const Eigen::Index n_docs = counts.counts.cols();
  if (n_docs < 2) {
    throw DataError("log_entropy requires at least 2 documents, got " +
                    std::to_string(n_docs));
  }
  const double log2n = std::log2(static_cast<double>(n_docs));
  WeightedMatrix out;
  out.values = counts.counts;
  out.global_weights.resize(counts.counts.rows());
  for (Eigen::Index w = 0; w < out.values.rows(); ++w) {
    double gf = 0.0;
    for (SparseRowMatrix::InnerIterator it(counts.counts, w); it; ++it) {
      gf += it.value();
    }
    double entropy = 0.0;
    for (SparseRowMatrix::InnerIterator it(counts.counts, w); it; ++it) {
      const double p = it.value() / gf;
      entropy += p * std::log2(p);
    }
    const double g = 1.0 + entropy / log2n;
    out.global_weights[w] = g;
    for (SparseRowMatrix::InnerIterator it(out.values, w); it; ++it) {
      it.valueRef() = std::log2(1.0 + it.value()) * g;
    }
  }
  return out;
}

namespace {

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  // Column-major fill order; part of the determinism contract.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      m(i, j) = rng.normal();
    }
  }
  return m;
}

Eigen::MatrixXd thin_q(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

SvdResult from_dense_svd(const Eigen::BDCSVD<Eigen::MatrixXd>& svd,
                         std::size_t k_eff) {
  const auto k = static_cast<Eigen::Index>(k_eff);
  SvdResult result;
  result.left = svd.matrixU().leftCols(k);
  result.singular_values = svd.singularValues().head(k);
  result.right = svd.matrixV().leftCols(k);
  result.effective_k = k_eff;
  return result;
}

}  // namespace

SvdResult truncated_svd(const SparseRowMatrix& matrix, std::size_t k,
                        std::uint64_t seed, const SvdOptions& options) {
  if (k < 1) throw DataError("truncated_svd: k must be >= 1");
  const Eigen::Index m = matrix.rows();
  const Eigen::Index n = matrix.cols();
  const Eigen::Index rank_bound = std::min(m, n);
  const std::size_t k_eff =
      std::min(k, static_cast<std::size_t>(rank_bound));

  if (m <= options.dense_threshold && n <= options.dense_threshold) {
    Eigen::MatrixXd dense(matrix);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(
        dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return from_dense_svd(svd, k_eff);
  }

  const Eigen::Index sketch = std::min<Eigen::Index>(
      static_cast<Eigen::Index>(k_eff + options.oversampling), rank_bound);
  Rng rng(derive_seed(seed, {hash_bytes("svd"), static_cast<std::uint64_t>(k)}));
  Eigen::MatrixXd omega = gaussian_matrix(n, sketch, rng);
  Eigen::MatrixXd q = thin_q(matrix * omega);
  for (int it = 0; it < options.power_iterations; ++it) {
    const Eigen::MatrixXd z = thin_q(matrix.transpose() * q);
    q = thin_q(matrix * z);
  }
  const Eigen::MatrixXd projected = q.transpose() * matrix;  // sketch x n
  Eigen::BDCSVD<Eigen::MatrixXd> svd(
      projected, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult result = from_dense_svd(svd, k_eff);
  result.left = q * result.left;
  return result;
}

std::string to_string(LsaVectors v) {
  return v == LsaVectors::UTimesSigma ? "usigma" : "u";
}

LsaVectors lsa_vectors_from_string(const std::string& name) {
  if (name == "usigma") return LsaVectors::UTimesSigma;
  if (name == "u") return LsaVectors::ULeft;
  throw DataError("unknown LSA vector convention: " + name +
                  " (expected usigma or u)");
}

EmbeddingModel lsa_embed(const Corpus& corpus, const LsaConfig& config) {
  if (corpus.size() < 2) {
    throw DataError("lsa_embed requires at least 2 documents");
  }
  CountMatrix counts = build_count_matrix(corpus);
  const WeightedMatrix weighted = log_entropy(counts);
  SvdResult svd =
      truncated_svd(weighted.values, config.dimension, config.seed, config.svd);
  if (svd.effective_k < config.dimension) {
    warn("lsa dimension clamped from " + std::to_string(config.dimension) +
         " to " + std::to_string(svd.effective_k) + " (rank bound)");
  }

  EmbeddingModel model;
  model.kind = ModelKind::Lsa;
  model.vocab = std::move(counts.vocab);
  if (config.vectors == LsaVectors::UTimesSigma) {
    model.vectors = svd.left * svd.singular_values.asDiagonal();
  } else {
    model.vectors = svd.left;
  }
  model.singular_values.assign(
      svd.singular_values.data(),
      svd.singular_values.data() + svd.singular_values.size());
  model.requested_dimension = static_cast<std::uint32_t>(config.dimension);
  model.effective_dimension = static_cast<std::uint32_t>(svd.effective_k);
  model.document_count = corpus.size();
  model.seed = config.seed;
  model.provenance = "vectors=" + to_string(config.vectors);
  return model;
}

}  // namespace embedlab
