#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "embedlab/corpus.hpp"
#include "embedlab/model.hpp"
#include "embedlab/rng.hpp"

namespace embedlab {

struct SgnsParams {
  std::size_t dimension = 100;
  std::size_t window = 15;     // maximum context offset
  std::size_t negatives = 15;  // noise draws per positive pair
  double subsample_threshold = 1e-3;
  enum class SubsampleMode {
    Probabilistic,  // discard with probability max(0, 1 - sqrt(t/f))
    HardCutoff,     // discard every token with frequency above t
  };
  SubsampleMode subsample_mode = SubsampleMode::Probabilistic;
  std::size_t epochs = 5;
  double initial_lr = 0.025;
  double final_lr = 1e-4;
  // 1 = deterministic mode (bit-reproducible). More workers update shared
  // vectors without locks, so results become schedule-dependent.
  std::size_t workers = 1;
  std::uint64_t seed = 1;

  void validate() const;
  std::string echo() const;
};

// Discard probability max(0, 1 - sqrt(threshold / frequency)).
double subsample_probability(double frequency, double threshold);

// Linear schedule from initial_lr to final_lr over `budget` scanned tokens.
double sgns_learning_rate(const SgnsParams& params, std::uint64_t scanned,
                          std::uint64_t budget);

// Cumulative distribution over the vocabulary proportional to count^power.
struct NoiseTable {
  std::vector<double> cumulative;

  static NoiseTable build(const std::vector<std::uint64_t>& counts,
                          double power = 0.75);
  std::uint32_t sample(Rng& rng) const;
  double probability(std::size_t w) const;
};

enum class PairLabel { Positive, Negative };

// Loss of one (center, context) pair: -log sigmoid(w.c) for positives,
// -log sigmoid(-w.c) for negatives.
double sgns_pair_loss(const Eigen::Ref<const Eigen::VectorXd>& center,
                      const Eigen::Ref<const Eigen::VectorXd>& context,
                      PairLabel label);

// Gradients (d/d center, d/d context) of the pair loss.
std::pair<Eigen::VectorXd, Eigen::VectorXd> sgns_gradient(
    const Eigen::Ref<const Eigen::VectorXd>& center,
    const Eigen::Ref<const Eigen::VectorXd>& context, PairLabel label);

struct SgnsModel {
  EmbeddingModel embedding;    // input vectors, the exported embedding
  RowMatrixXd output_vectors;  // context side
  SgnsParams params;
};

// Skip-gram with negative sampling over documents as sentences. Per epoch
// and document: subsample tokens, then for every surviving center token draw
// a window size b uniform in {1..window} and train on all surviving tokens
// within b, each paired with `negatives` noise draws (draws that hit the
// positive context are consumed but skipped). The learning rate interpolates
// linearly from initial_lr to final_lr per scanned token.
SgnsModel train_sgns(const Corpus& corpus, const SgnsParams& params);

}  // namespace embedlab
