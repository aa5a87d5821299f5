#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "embedlab/corpus.hpp"
#include "embedlab/eval.hpp"
#include "embedlab/model.hpp"
#include "embedlab/rng.hpp"

namespace embedlab::test {

// Self-cleaning temp directory for file-based tests.
class TmpDir {
 public:
  explicit TmpDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("embedlab_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TmpDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TmpDir(const TmpDir&) = delete;
  TmpDir& operator=(const TmpDir&) = delete;

  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in),
          std::istreambuf_iterator<char>()};
}

// Random corpus over a compact vocabulary ("w0".."w{vocab-1}").
inline Corpus random_corpus(std::size_t docs, std::size_t min_tokens,
                            std::size_t max_tokens, std::size_t vocab,
                            std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<std::string>> lists;
  for (std::size_t d = 0; d < docs; ++d) {
    const std::size_t len =
        min_tokens + rng.below(max_tokens - min_tokens + 1);
    std::vector<std::string> tokens;
    for (std::size_t t = 0; t < len; ++t) {
      tokens.push_back("w" + std::to_string(rng.below(vocab)));
    }
    lists.push_back(std::move(tokens));
  }
  return corpus_from_token_lists(std::move(lists), "test");
}

// Quadratic-loop silhouette oracle, independent of the eval implementation:
// plain loops over explicit cosine distances.
inline double silhouette_oracle(
    const std::vector<std::vector<Eigen::RowVectorXd>>& clusters) {
  const auto dist = [](const Eigen::RowVectorXd& a,
                       const Eigen::RowVectorXd& b) {
    return 1.0 - a.dot(b) / (a.norm() * b.norm());
  };
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::size_t i = 0; i < clusters[c].size(); ++i) {
      double a_sum = 0.0;
      for (std::size_t j = 0; j < clusters[c].size(); ++j) {
        if (j != i) a_sum += dist(clusters[c][i], clusters[c][j]);
      }
      const double a =
          a_sum / static_cast<double>(clusters[c].size() - 1);
      double b = std::numeric_limits<double>::infinity();
      for (std::size_t o = 0; o < clusters.size(); ++o) {
        if (o == c) continue;
        double sum = 0.0;
        for (const auto& v : clusters[o]) sum += dist(clusters[c][i], v);
        b = std::min(b, sum / static_cast<double>(clusters[o].size()));
      }
      const double denom = std::max(a, b);
      total += denom == 0.0 ? 0.0 : (b - a) / denom;
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

// Model with explicitly planted vectors; vocab frequencies are dummies.
inline EmbeddingModel planted_model(
    const std::vector<std::pair<std::string, Eigen::RowVectorXd>>& entries) {
  EmbeddingModel model;
  model.kind = ModelKind::Lsa;
  const auto dim = entries.empty() ? 0 : entries[0].second.size();
  model.vectors.resize(static_cast<Eigen::Index>(entries.size()), dim);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    model.vocab.words.push_back(entries[i].first);
    model.vocab.index.emplace(entries[i].first,
                              static_cast<std::uint32_t>(i));
    model.vocab.corpus_frequency.push_back(1);
    model.vocab.document_frequency.push_back(1);
    model.vectors.row(static_cast<Eigen::Index>(i)) = entries[i].second;
  }
  model.requested_dimension = static_cast<std::uint32_t>(dim);
  model.effective_dimension = static_cast<std::uint32_t>(dim);
  return model;
}

inline double spearman(const std::vector<double>& xs,
                       const std::vector<double>& ys) {
  const auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double rank = 1.0;
      double ties = 1.0;
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (j == i) continue;
        if (v[j] < v[i]) rank += 1.0;
        if (v[j] == v[i]) ties += 1.0;
      }
      r[i] = rank + (ties - 1.0) / 2.0;
    }
    return r;
  };
  const auto rx = ranks(xs);
  const auto ry = ranks(ys);
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double cov = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cov += (rx[i] - mx) * (ry[i] - my);
    vx += (rx[i] - mx) * (rx[i] - mx);
    vy += (ry[i] - my) * (ry[i] - my);
  }
  return cov / std::sqrt(vx * vy);
}

}  // namespace embedlab::test
