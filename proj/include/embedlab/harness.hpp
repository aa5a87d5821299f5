#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "embedlab/corpus.hpp"
#include "embedlab/eval.hpp"
#include "embedlab/lsa.hpp"
#include "embedlab/model.hpp"
#include "embedlab/sgns.hpp"
#include "embedlab/stats.hpp"
#include "embedlab/subset.hpp"

namespace embedlab {

enum class TaskKind { Categorization, Mcq };

std::string to_string(TaskKind task);
TaskKind task_kind_from_string(const std::string& name);

// Grid experiment definition. Loaded from a key=value file ('#' comments);
// unknown keys are rejected. See README for the key set.
struct ExperimentConfig {
  std::filesystem::path corpus_path;
  CorpusFormat corpus_format = CorpusFormat::Lines;
  std::filesystem::path stoplist_path;  // empty = bundled list
  TaskKind task = TaskKind::Categorization;
  std::filesystem::path task_file;
  std::size_t category_size = 10;
  std::size_t least_frequent = 0;  // 0 = use every item
  std::vector<DiscardMethod> methods = {DiscardMethod::Random,
                                        DiscardMethod::OutOfDomain};
  // Empty = 6-point geometric grid from the minimum feasible size to the
  // full corpus.
  std::vector<std::size_t> sizes;
  std::size_t replicates = 10;
  std::vector<ModelKind> models = {ModelKind::Lsa, ModelKind::Sgns};
  std::vector<std::size_t> lsa_dimensions = {5, 10, 20, 50, 100, 300, 500, 1000};
  std::vector<std::size_t> sgns_dimensions = {5, 10, 20, 50, 100, 300, 500};
  std::uint64_t master_seed = 1;
  // Deterministic mode trains single-worker and writes wall_time_s as 0 so
  // identical runs produce byte-identical CSVs; workers still parallelize
  // across grid points.
  bool deterministic = true;
  std::size_t workers = 1;
  MissingWordPolicy missing_words = MissingWordPolicy::Strict;
  LsaVectors lsa_vectors = LsaVectors::UTimesSigma;
  SgnsParams sgns;  // dimension/seed/workers fields are overridden per row
  std::filesystem::path output = "results.csv";

  static ExperimentConfig load(const std::filesystem::path& path);
  void validate() const;
};

// One grid point outcome. CSV columns, in order:
// model,method,size_docs,replicate,dimension,effective_dimension,task,
// score,seed,wall_time_s
struct ResultRow {
  ModelKind model = ModelKind::Lsa;
  std::string method;  // "random", "ood"
  std::size_t size_docs = 0;
  std::size_t replicate = 0;
  std::size_t dimension = 0;
  std::size_t effective_dimension = 0;
  TaskKind task = TaskKind::Categorization;
  double score = 0.0;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
};

// Runs every missing grid point and keeps `config.output` current after
// each subcorpus is finished (atomic rewrite, canonical row order), so an
// interrupted run resumes without recomputation. Returns the complete table.
//
// The full-corpus point is computed once per (model, dimension) with a
// method-independent seed and its rows are replicated across methods and
// replicates, so both curves share the endpoint by construction.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

std::string format_results_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> load_results_csv(const std::filesystem::path& path);
void write_results_csv(const std::vector<ResultRow>& rows,
                       const std::filesystem::path& path);

// Replicate-mean per dimension; best dimension by mean score (ties to the
// smallest dimension); SEM of the replicate scores at the best dimension.
// CSV columns: model,method,size_docs,best_dimension,mean_score,sem,replicates
struct SummaryRow {
  ModelKind model = ModelKind::Lsa;
  std::string method;
  std::size_t size_docs = 0;
  std::size_t best_dimension = 0;
  double mean_score = 0.0;
  double sem = 0.0;
  std::size_t replicates = 0;
};

std::vector<SummaryRow> aggregate_best_dimension(
    const std::vector<ResultRow>& rows);

std::string format_summary_csv(const std::vector<SummaryRow>& rows);
void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::filesystem::path& path);

// Gnuplot-style blocks, one per (model, method): `size mean sem` lines
// separated by blank lines.
std::string format_plot_data(const std::vector<SummaryRow>& rows);
void write_plot_data(const std::vector<SummaryRow>& rows,
                     const std::filesystem::path& path);

// Seed scheme (documented contract): the replicate seed is
// derive_seed(master, [hash(method), size, replicate]) except at the full
// corpus size, which canonicalizes to derive_seed(master, [hash("full"),
// size, 0]); the model seed is derive_seed(replicate_seed, [hash(model),
// dimension]).
std::uint64_t replicate_seed(std::uint64_t master_seed,
                             DiscardMethod method, std::size_t size,
                             std::size_t replicate, bool full_corpus);
std::uint64_t model_seed(std::uint64_t replicate_seed_value, ModelKind model,
                         std::size_t dimension);

}  // namespace embedlab
