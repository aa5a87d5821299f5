#include "embedlab/sgns.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "embedlab/error.hpp"

namespace embedlab {

void SgnsParams::validate() const {
  if (dimension < 1) throw DataError("sgns: dimension must be >= 1");
  if (window < 1) throw DataError("sgns: window must be >= 1");
  if (negatives < 1) throw DataError("sgns: negatives must be >= 1");
  if (!(subsample_threshold > 0.0 && subsample_threshold <= 1.0)) {
    throw DataError("sgns: subsample threshold must be in (0, 1]");
  }
  if (epochs < 1) throw DataError("sgns: epochs must be >= 1");
  if (!(initial_lr > 0.0 && final_lr > 0.0)) {
    throw DataError("sgns: learning rates must be positive");
  }
  if (final_lr > initial_lr) {
    throw DataError("sgns: final learning rate must not exceed the initial");
  }
  if (workers < 1) throw DataError("sgns: workers must be >= 1");
}

std::string SgnsParams::echo() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "window=%zu;negatives=%zu;t=%g;mode=%s;epochs=%zu;lr0=%g;"
                "lrf=%g;workers=%zu",
                window, negatives, subsample_threshold,
                subsample_mode == SubsampleMode::Probabilistic ? "prob"
                                                               : "hard",
                epochs, initial_lr, final_lr, workers);
  return buf;
}

double subsample_probability(double frequency, double threshold) {
  if (!(frequency > 0.0 && frequency <= 1.0)) {
    throw DataError("subsample_probability: frequency must be in (0, 1]");
  }
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw DataError("subsample_probability: threshold must be in (0, 1]");
  }
  return std::max(0.0, 1.0 - std::sqrt(threshold / frequency));
}

double sgns_learning_rate(const SgnsParams& params, std::uint64_t scanned,
                          std::uint64_t budget) {
  const double progress = std::min(
      1.0, static_cast<double>(scanned) / static_cast<double>(budget));
  return params.initial_lr + (params.final_lr - params.initial_lr) * progress;
}

NoiseTable NoiseTable::build(const std::vector<std::uint64_t>& counts,
                             double power) {
  if (counts.empty()) throw DataError("noise table: empty vocabulary");
  NoiseTable table;
  table.cumulative.resize(counts.size());
  double total = 0.0;
  for (std::size_t w = 0; w < counts.size(); ++w) {
    if (counts[w] == 0) throw DataError("noise table: zero count");
    total += std::pow(static_cast<double>(counts[w]), power);
    table.cumulative[w] = total;
  }
  for (double& c : table.cumulative) c /= total;
  table.cumulative.back() = 1.0;
  return table;
}

std::uint32_t NoiseTable::sample(Rng& rng) const {
  const double u = rng.next_double();
  const auto it =
      std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return static_cast<std::uint32_t>(
      std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1));
}

double NoiseTable::probability(std::size_t w) const {
  return w == 0 ? cumulative[0] : cumulative[w] - cumulative[w - 1];
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_pair(const Eigen::Ref<const Eigen::VectorXd>& center,
                const Eigen::Ref<const Eigen::VectorXd>& context) {
  if (center.size() != context.size()) {
    throw DataError("sgns pair: dimension mismatch (" +
                    std::to_string(center.size()) + " vs " +
                    std::to_string(context.size()) + ")");
  }
}

}  // namespace

double sgns_pair_loss(const Eigen::Ref<const Eigen::VectorXd>& center,
                      const Eigen::Ref<const Eigen::VectorXd>& context,
                      PairLabel label) {
  check_pair(center, context);
  const double dot = center.dot(context);
  const double signed_dot = label == PairLabel::Positive ? dot : -dot;
  // -log(sigmoid(x)) = log(1 + exp(-x)), computed stably
  if (signed_dot > 0) {
    return std::log1p(std::exp(-signed_dot));
  }
  return -signed_dot + std::log1p(std::exp(signed_dot));
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> sgns_gradient(
    const Eigen::Ref<const Eigen::VectorXd>& center,
    const Eigen::Ref<const Eigen::VectorXd>& context, PairLabel label) {
  check_pair(center, context);
  const double target = label == PairLabel::Positive ? 1.0 : 0.0;
  const double factor = sigmoid(center.dot(context)) - target;
  return {factor * context, factor * center};
}

namespace {

struct TrainState {
  const std::vector<std::vector<std::uint32_t>>* docs;
  const std::vector<double>* discard_p;
  const NoiseTable* noise;
  const SgnsParams* params;
  RowMatrixXd* input;
  RowMatrixXd* output;
  std::uint64_t stream_salt = 0;
  std::uint64_t total_budget = 0;
  std::atomic<std::uint64_t> processed{0};
  std::atomic<std::uint64_t> pair_count{0};
};

Rng document_stream(const SgnsParams& params, std::uint64_t salt,
                    std::size_t epoch, std::uint32_t doc) {
  // Keyed by (epoch, document) rather than by worker so the draw sequence
  // does not depend on how documents are partitioned.
  return Rng(derive_seed(params.seed,
                         {hash_bytes("doc"), salt, epoch, doc}));
}

struct Survivor {
  std::uint32_t word;
  std::uint32_t scan_pos;  // token position before subsampling
};

// One subsampling draw per token that can be discarded; survivors keep
// their order and remember their scan position (the rate schedule is keyed
// to scanned tokens, not surviving ones).
std::vector<Survivor> subsample_document(
    const std::vector<std::uint32_t>& tokens,
    const std::vector<double>& discard_p, Rng& rng) {
  std::vector<Survivor> survivors;
  survivors.reserve(tokens.size());
  for (std::uint32_t pos = 0; pos < tokens.size(); ++pos) {
    const std::uint32_t w = tokens[pos];
    const double p = discard_p[w];
    if (p > 0.0 && rng.next_double() < p) continue;
    survivors.push_back({w, pos});
  }
  return survivors;
}

void train_document(TrainState& state, std::size_t epoch, std::uint32_t d) {
  const SgnsParams& params = *state.params;
  const auto& tokens = (*state.docs)[d];
  Rng rng = document_stream(params, state.stream_salt, epoch, d);
  const std::vector<Survivor> survivors =
      subsample_document(tokens, *state.discard_p, rng);
  const std::uint64_t scanned_before =
      state.processed.fetch_add(tokens.size(), std::memory_order_relaxed);
  const auto lr_at = [&](std::uint64_t scanned) {
    return sgns_learning_rate(params, scanned, state.total_budget);
  };

  const Eigen::Index k = state.input->cols();
  Eigen::VectorXd center_grad(k);
  std::uint64_t pairs = 0;
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    const double token_lr = lr_at(scanned_before + survivors[i].scan_pos);
    const std::size_t b = 1 + rng.below(params.window);
    const std::size_t lo = i >= b ? i - b : 0;
    const std::size_t hi = std::min(survivors.size(), i + b + 1);
    const std::uint32_t center = survivors[i].word;
    auto w = state.input->row(center);
    for (std::size_t j = lo; j < hi; ++j) {
      if (j == i) continue;
      const std::uint32_t positive = survivors[j].word;
      center_grad.setZero();
      for (std::size_t t = 0; t <= params.negatives; ++t) {
        std::uint32_t target_word;
        double target_label;
        if (t == 0) {
          target_word = positive;
          target_label = 1.0;
        } else {
          target_word = state.noise->sample(rng);
          if (target_word == positive) continue;  // draw consumed, no update
          target_label = 0.0;
        }
        auto c = state.output->row(target_word);
        const double g =
            (target_label - sigmoid(w.dot(c.transpose()))) * token_lr;
        center_grad += g * c.transpose();
        c += g * w;
      }
      w += center_grad.transpose();
      ++pairs;
    }
  }
  state.pair_count.fetch_add(pairs, std::memory_order_relaxed);
}

}  // namespace

SgnsModel train_sgns(const Corpus& corpus, const SgnsParams& params) {
  params.validate();
  if (corpus.documents.empty()) throw DataError("train_sgns: empty corpus");

  CountMatrix cm = build_count_matrix(corpus);
  Vocabulary vocab = std::move(cm.vocab);
  const std::uint64_t total_tokens = corpus.total_tokens();

  std::vector<std::vector<std::uint32_t>> docs(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    docs[d].reserve(corpus.documents[d].tokens.size());
    for (const auto& token : corpus.documents[d].tokens) {
      docs[d].push_back(*vocab.find(token));
    }
  }

  std::vector<double> discard_p(vocab.size(), 0.0);
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    const double f = static_cast<double>(vocab.corpus_frequency[w]) /
                     static_cast<double>(total_tokens);
    if (params.subsample_mode == SgnsParams::SubsampleMode::Probabilistic) {
      discard_p[w] = subsample_probability(f, params.subsample_threshold);
    } else {
      discard_p[w] = f > params.subsample_threshold ? 1.0 : 0.0;
    }
  }
  const NoiseTable noise = NoiseTable::build(vocab.corpus_frequency);

  const std::size_t k = params.dimension;
  RowMatrixXd input(vocab.size(), k);
  Rng init_rng(derive_seed(params.seed, {hash_bytes("init")}));
  for (Eigen::Index i = 0; i < input.rows(); ++i) {
    for (Eigen::Index j = 0; j < input.cols(); ++j) {
      input(i, j) = (init_rng.next_double() - 0.5) / static_cast<double>(k);
    }
  }
  RowMatrixXd output = RowMatrixXd::Zero(vocab.size(), k);

  TrainState state;
  state.docs = &docs;
  state.discard_p = &discard_p;
  state.noise = &noise;
  state.params = &params;
  state.input = &input;
  state.output = &output;
  state.total_budget = params.epochs * total_tokens;

  // A training stream is vacuous when no document keeps two tokens after
  // subsampling. Retry once with a fresh stream, then report it.
  for (std::uint64_t salt = 0;; ++salt) {
    bool has_pair = false;
    for (std::uint32_t d = 0; d < docs.size() && !has_pair; ++d) {
      Rng rng = document_stream(params, salt, 0, d);
      has_pair = subsample_document(docs[d], discard_p, rng).size() >= 2;
    }
    if (has_pair) {
      state.stream_salt = salt;
      break;
    }
    if (salt >= 1) {
      throw DataError(
          "train_sgns: empty effective corpus after subsampling (every "
          "document lost its token pairs)");
    }
    warn("train_sgns: subsampling left no token pairs; retrying with a new "
         "stream");
  }

  const std::size_t workers = std::min(params.workers, docs.size());
  if (workers <= 1) {
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
      for (std::uint32_t d = 0; d < docs.size(); ++d) {
        train_document(state, epoch, d);
      }
    }
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (docs.size() + workers - 1) / workers;
    for (std::size_t wi = 0; wi < workers; ++wi) {
      const std::size_t lo = wi * chunk;
      const std::size_t hi = std::min(docs.size(), lo + chunk);
      pool.emplace_back([&state, &params, lo, hi] {
        for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
          for (std::size_t d = lo; d < hi; ++d) {
            train_document(state, epoch, static_cast<std::uint32_t>(d));
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  SgnsModel model;
  model.embedding.kind = ModelKind::Sgns;
  model.embedding.vocab = std::move(vocab);
  model.embedding.vectors = input;
  model.embedding.requested_dimension = static_cast<std::uint32_t>(k);
  model.embedding.effective_dimension = static_cast<std::uint32_t>(k);
  model.embedding.document_count = corpus.size();
  model.embedding.seed = params.seed;
  model.embedding.provenance = params.echo();
  model.output_vectors = std::move(output);
  model.params = params;
  return model;
}

}  // namespace embedlab
