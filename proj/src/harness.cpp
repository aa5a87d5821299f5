#include "embedlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "embedlab/error.hpp"
#include "embedlab/io.hpp"
#include "embedlab/rng.hpp"

namespace embedlab {

std::string to_string(TaskKind task) {
  return task == TaskKind::Categorization ? "categorization" : "mcq";
}

TaskKind task_kind_from_string(const std::string& name) {
  if (name == "categorization" || name == "categories") {
    return TaskKind::Categorization;
  }
  if (name == "mcq") return TaskKind::Mcq;
  throw DataError("unknown task kind: " + name +
                  " (expected categorization or mcq)");
}

std::uint64_t replicate_seed(std::uint64_t master_seed, DiscardMethod method,
                             std::size_t size, std::size_t replicate,
                             bool full_corpus) {
  if (full_corpus) {
    return derive_seed(master_seed, {hash_bytes("full"), size, 0});
  }
  return derive_seed(master_seed,
                     {hash_bytes(to_string(method)), size, replicate});
}

std::uint64_t model_seed(std::uint64_t replicate_seed_value, ModelKind model,
                         std::size_t dimension) {
  return derive_seed(replicate_seed_value,
                     {hash_bytes(to_string(model)), dimension});
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  try {
    const long long v = std::stoll(value);
    if (v < 0) throw std::out_of_range("negative");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw DataError("config key " + key + ": bad integer `" + value + "`");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    return std::stod(value);
  } catch (const std::exception&) {
    throw DataError("config key " + key + ": bad number `" + value + "`");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw DataError("config key " + key + ": bad boolean `" + value + "`");
}

std::vector<std::size_t> parse_size_list(const std::string& key,
                                         const std::string& value) {
  std::vector<std::size_t> out;
  for (const auto& part : split(value, ',')) {
    const std::string p = trim(part);
    if (!p.empty()) out.push_back(parse_size(key, p));
  }
  if (out.empty()) throw DataError("config key " + key + ": empty list");
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  ExperimentConfig config;
  const std::string bytes = read_file(path);
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < bytes.size()) {
    std::size_t nl = bytes.find('\n', start);
    if (nl == std::string::npos) nl = bytes.size();
    const std::string raw = bytes.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected `key = value`");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "corpus") {
      config.corpus_path = value;
    } else if (key == "corpus_format") {
      if (value == "lines") {
        config.corpus_format = CorpusFormat::Lines;
      } else if (value == "dir") {
        config.corpus_format = CorpusFormat::Dir;
      } else {
        throw DataError("config key corpus_format: expected lines or dir");
      }
    } else if (key == "stoplist") {
      config.stoplist_path = value;
    } else if (key == "task") {
      config.task = task_kind_from_string(value);
    } else if (key == "task_file") {
      config.task_file = value;
    } else if (key == "category_size") {
      config.category_size = parse_size(key, value);
    } else if (key == "least_frequent") {
      config.least_frequent = parse_size(key, value);
    } else if (key == "methods") {
      config.methods.clear();
      for (const auto& part : split(value, ',')) {
        config.methods.push_back(discard_method_from_string(trim(part)));
      }
    } else if (key == "sizes") {
      config.sizes = parse_size_list(key, value);
    } else if (key == "replicates") {
      config.replicates = parse_size(key, value);
    } else if (key == "models") {
      config.models.clear();
      for (const auto& part : split(value, ',')) {
        config.models.push_back(model_kind_from_string(trim(part)));
      }
    } else if (key == "lsa_dims") {
      config.lsa_dimensions = parse_size_list(key, value);
    } else if (key == "sgns_dims") {
      config.sgns_dimensions = parse_size_list(key, value);
    } else if (key == "master_seed") {
      try {
        config.master_seed = std::stoull(value);
      } catch (const std::exception&) {
        throw DataError("config key master_seed: bad integer `" + value + "`");
      }
    } else if (key == "deterministic") {
      config.deterministic = parse_bool(key, value);
    } else if (key == "workers") {
      config.workers = parse_size(key, value);
    } else if (key == "missing_words") {
      if (value == "strict") {
        config.missing_words = MissingWordPolicy::Strict;
      } else if (value == "lenient") {
        config.missing_words = MissingWordPolicy::Lenient;
      } else {
        throw DataError("config key missing_words: expected strict or lenient");
      }
    } else if (key == "lsa_vectors") {
      config.lsa_vectors = lsa_vectors_from_string(value);
    } else if (key == "sgns_window") {
      config.sgns.window = parse_size(key, value);
    } else if (key == "sgns_negatives") {
      config.sgns.negatives = parse_size(key, value);
    } else if (key == "sgns_subsample_threshold") {
      config.sgns.subsample_threshold = parse_double(key, value);
    } else if (key == "sgns_subsample_mode") {
      if (value == "prob") {
        config.sgns.subsample_mode = SgnsParams::SubsampleMode::Probabilistic;
      } else if (value == "hard") {
        config.sgns.subsample_mode = SgnsParams::SubsampleMode::HardCutoff;
      } else {
        throw DataError("config key sgns_subsample_mode: expected prob or hard");
      }
    } else if (key == "sgns_epochs") {
      config.sgns.epochs = parse_size(key, value);
    } else if (key == "sgns_lr_initial") {
      config.sgns.initial_lr = parse_double(key, value);
    } else if (key == "sgns_lr_final") {
      config.sgns.final_lr = parse_double(key, value);
    } else if (key == "output") {
      config.output = value;
    } else {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": unknown config key `" + key + "`");
    }
  }
  return config;
}

void ExperimentConfig::validate() const {
  if (corpus_path.empty()) throw DataError("config: corpus is required");
  if (task_file.empty()) throw DataError("config: task_file is required");
  if (replicates < 1) throw DataError("config: replicates must be >= 1");
  if (methods.empty()) throw DataError("config: methods must not be empty");
  if (models.empty()) throw DataError("config: models must not be empty");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      if (methods[i] == methods[j]) throw DataError("config: duplicate method");
    }
  }
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = i + 1; j < models.size(); ++j) {
      if (models[i] == models[j]) throw DataError("config: duplicate model");
    }
  }
  if (!std::is_sorted(sizes.begin(), sizes.end())) {
    throw DataError("config: sizes must be ascending");
  }
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] == sizes[i - 1]) throw DataError("config: duplicate size");
  }
  for (ModelKind m : models) {
    const auto& dims =
        m == ModelKind::Lsa ? lsa_dimensions : sgns_dimensions;
    if (dims.empty()) {
      throw DataError("config: dimension grid for " + to_string(m) +
                      " must not be empty");
    }
    for (std::size_t d : dims) {
      if (d < 1) throw DataError("config: dimensions must be >= 1");
    }
  }
  if (workers < 1) throw DataError("config: workers must be >= 1");
}

namespace {

int method_rank(const std::string& method) {
  return method == "random" ? 0 : 1;
}

using RowKey = std::tuple<int, int, std::size_t, std::size_t, std::size_t>;

RowKey key_of(const ResultRow& row) {
  return {static_cast<int>(row.model), method_rank(row.method), row.size_docs,
          row.replicate, row.dimension};
}

std::string format_double(double v, const char* fmt = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

constexpr const char* kResultsHeader =
    "model,method,size_docs,replicate,dimension,effective_dimension,task,"
    "score,seed,wall_time_s";

struct Job {
  DiscardMethod method = DiscardMethod::Random;
  std::size_t size = 0;
  std::size_t replicate = 0;
  bool full = false;
};

}  // namespace

std::string format_results_csv(const std::vector<ResultRow>& rows) {
  std::string out = kResultsHeader;
  out += '\n';
  for (const auto& row : rows) {
    out += to_string(row.model) + "," + row.method + "," +
           std::to_string(row.size_docs) + "," +
           std::to_string(row.replicate) + "," +
           std::to_string(row.dimension) + "," +
           std::to_string(row.effective_dimension) + "," +
           to_string(row.task) + "," + format_double(row.score) + "," +
           std::to_string(row.seed) + "," +
           format_double(row.wall_time_s, "%.3f") + "\n";
  }
  return out;
}

void write_results_csv(const std::vector<ResultRow>& rows,
                       const std::filesystem::path& path) {
  atomic_write(path, format_results_csv(rows));
}

std::vector<ResultRow> load_results_csv(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  std::vector<ResultRow> rows;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < bytes.size()) {
    std::size_t nl = bytes.find('\n', start);
    if (nl == std::string::npos) nl = bytes.size();
    std::string line = bytes.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    start = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kResultsHeader) {
        throw DataError(path.string() + ": unexpected results header");
      }
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 10) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected 10 columns");
    }
    ResultRow row;
    row.model = model_kind_from_string(fields[0]);
    row.method = fields[1];
    if (fields[1] != "random" && fields[1] != "ood") {
      throw DataError(path.string() + ": unknown method " + fields[1]);
    }
    row.size_docs = parse_size("size_docs", fields[2]);
    row.replicate = parse_size("replicate", fields[3]);
    row.dimension = parse_size("dimension", fields[4]);
    row.effective_dimension = parse_size("effective_dimension", fields[5]);
    row.task = task_kind_from_string(fields[6]);
    row.score = parse_double("score", fields[7]);
    try {
      row.seed = std::stoull(fields[8]);
    } catch (const std::exception&) {
      throw DataError(path.string() + ": bad seed " + fields[8]);
    }
    row.wall_time_s = parse_double("wall_time_s", fields[9]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Stoplist stoplist = config.stoplist_path.empty()
                                ? Stoplist::builtin()
                                : Stoplist::load(config.stoplist_path);
  const Corpus corpus =
      load_corpus(config.corpus_path, config.corpus_format, stoplist);

  CategorySet categories;
  McqSet questions;
  std::vector<std::string> test_words;
  if (config.task == TaskKind::Categorization) {
    categories = CategorySet::load(config.task_file, config.category_size);
    if (config.least_frequent > 0) {
      categories =
          select_least_frequent(categories, corpus, config.least_frequent);
    }
    test_words = unique_sorted(categories.all_words());
  } else {
    questions = McqSet::load(config.task_file);
    if (config.least_frequent > 0) {
      questions =
          select_least_frequent(questions, corpus, config.least_frequent);
    }
    test_words = unique_sorted(questions.all_words());
  }

  if (config.missing_words == MissingWordPolicy::Strict) {
    const DocFrequency df = doc_frequency(corpus, test_words);
    std::string missing;
    std::size_t missing_count = 0;
    for (const auto& w : test_words) {
      if (df.counts.at(w) == 0) {
        if (++missing_count <= 5) missing += " " + w;
      }
    }
    if (missing_count > 0) {
      throw DataError("task words absent from the corpus (strict mode):" +
                      missing +
                      (missing_count > 5 ? " ... (" +
                                               std::to_string(missing_count) +
                                               " total)"
                                         : ""));
    }
  }

  const std::size_t min_size =
      std::max<std::size_t>(2, min_specific_size(corpus, test_words));
  std::vector<std::size_t> sizes = config.sizes;
  if (sizes.empty()) {
    // 6-point geometric grid from the minimum feasible size to the corpus.
    const double lo = static_cast<double>(min_size);
    const double hi = static_cast<double>(corpus.size());
    for (int i = 0; i < 6; ++i) {
      const double f = lo * std::pow(hi / lo, i / 5.0);
      sizes.push_back(static_cast<std::size_t>(std::llround(f)));
    }
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  }
  const bool has_ood =
      std::find(config.methods.begin(), config.methods.end(),
                DiscardMethod::OutOfDomain) != config.methods.end();
  for (std::size_t s : sizes) {
    if (s < 2 || s > corpus.size()) {
      throw DataError("size " + std::to_string(s) + " out of range [2, " +
                      std::to_string(corpus.size()) + "]");
    }
    if (has_ood && s < min_size) {
      throw DataError("size " + std::to_string(s) +
                      " is below the out-of-domain minimum " +
                      std::to_string(min_size));
    }
  }

  const auto evaluate = [&](const EmbeddingModel& model) {
    if (config.task == TaskKind::Categorization) {
      return silhouette_score(categories, model, config.missing_words).score;
    }
    return mcq_accuracy(questions, model, config.missing_words).score;
  };

  // Resume: previously completed rows are kept verbatim.
  std::map<RowKey, ResultRow> table;
  if (std::filesystem::exists(config.output)) {
    for (auto& row : load_results_csv(config.output)) {
      if (row.task != config.task) {
        throw DataError(config.output.string() +
                        " holds rows for a different task; refusing to mix");
      }
      const RowKey key = key_of(row);
      table.emplace(key, std::move(row));
    }
  }

  std::vector<Job> jobs;
  bool full_added = false;
  for (DiscardMethod method : config.methods) {
    for (std::size_t size : sizes) {
      if (size == corpus.size()) {
        if (!full_added) {
          jobs.push_back({method, size, 0, true});
          full_added = true;
        }
        continue;
      }
      for (std::size_t rep = 0; rep < config.replicates; ++rep) {
        jobs.push_back({method, size, rep, false});
      }
    }
  }

  const auto dims_of = [&](ModelKind m) -> const std::vector<std::size_t>& {
    return m == ModelKind::Lsa ? config.lsa_dimensions
                               : config.sgns_dimensions;
  };

  // Coordinates a finished job must cover (full jobs fan out over methods
  // and replicates).
  const auto coordinates_of = [&](const Job& job) {
    std::vector<std::pair<DiscardMethod, std::size_t>> coords;
    if (job.full) {
      for (DiscardMethod m : config.methods) {
        for (std::size_t rep = 0; rep < config.replicates; ++rep) {
          coords.push_back({m, rep});
        }
      }
    } else {
      coords.push_back({job.method, job.replicate});
    }
    return coords;
  };

  std::mutex table_mutex;
  const auto job_done = [&](const Job& job) {
    for (const auto& [method, rep] : coordinates_of(job)) {
      for (ModelKind m : config.models) {
        for (std::size_t dim : dims_of(m)) {
          const RowKey key{static_cast<int>(m),
                           method_rank(to_string(method)), job.size, rep, dim};
          if (!table.count(key)) return false;
        }
      }
    }
    return true;
  };

  const auto flush_table = [&]() {
    std::vector<ResultRow> rows;
    rows.reserve(table.size());
    for (const auto& [_, row] : table) rows.push_back(row);
    write_results_csv(rows, config.output);
  };

  const auto run_job = [&](const Job& job) {
    // Build the subcorpus for this grid point.
    const std::uint64_t rep_seed = replicate_seed(
        config.master_seed, job.method, job.size, job.replicate, job.full);
    Corpus view;
    if (job.full) {
      view = corpus;
    } else if (job.method == DiscardMethod::Random) {
      view = random_discard(corpus, job.size, test_words, rep_seed)
                 .to_corpus();
    } else {
      view = out_of_domain_discard(corpus, job.size, test_words, rep_seed)
                 .to_corpus();
    }

    std::vector<ResultRow> rows;
    for (ModelKind m : config.models) {
      for (std::size_t dim : dims_of(m)) {
        const std::uint64_t seed = model_seed(rep_seed, m, dim);
        const auto t0 = std::chrono::steady_clock::now();
        EmbeddingModel model;
        if (m == ModelKind::Lsa) {
          LsaConfig lsa;
          lsa.dimension = dim;
          lsa.seed = seed;
          lsa.vectors = config.lsa_vectors;
          model = lsa_embed(view, lsa);
        } else {
          SgnsParams params = config.sgns;
          params.dimension = dim;
          params.seed = seed;
          params.workers = config.deterministic ? 1 : params.workers;
          model = train_sgns(view, params).embedding;
        }
        const double score = evaluate(model);
        const auto t1 = std::chrono::steady_clock::now();
        ResultRow row;
        row.model = m;
        row.size_docs = job.size;
        row.dimension = dim;
        row.effective_dimension = model.effective_dimension;
        row.task = config.task;
        row.score = score;
        row.seed = seed;
        row.wall_time_s =
            config.deterministic
                ? 0.0
                : std::chrono::duration<double>(t1 - t0).count();
        rows.push_back(std::move(row));
      }
    }

    std::lock_guard<std::mutex> lock(table_mutex);
    for (const auto& [method, rep] : coordinates_of(job)) {
      for (ResultRow row : rows) {
        row.method = to_string(method);
        row.replicate = rep;
        const RowKey key = key_of(row);
        table.insert_or_assign(key, std::move(row));
      }
    }
    flush_table();
  };

  // Grid points are independent; per-point seeds make the result
  // schedule-independent.
  std::vector<std::size_t> pending;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (!job_done(jobs[j])) pending.push_back(j);
  }
  const std::size_t workers = std::min(config.workers, pending.size());
  if (workers <= 1) {
    for (std::size_t j : pending) run_job(jobs[j]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= pending.size()) return;
          try {
            run_job(jobs[pending[i]]);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<ResultRow> rows;
  rows.reserve(table.size());
  for (const auto& [_, row] : table) rows.push_back(row);
  {
    std::lock_guard<std::mutex> lock(table_mutex);
    flush_table();
  }
  return rows;
}

std::vector<SummaryRow> aggregate_best_dimension(
    const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw DataError("aggregate: no result rows");
  using GroupKey = std::tuple<int, int, std::size_t>;  // model, method, size
  std::map<GroupKey, std::map<std::size_t, std::vector<double>>> groups;
  std::map<GroupKey, std::string> method_names;
  for (const auto& row : rows) {
    const GroupKey key{static_cast<int>(row.model), method_rank(row.method),
                       row.size_docs};
    groups[key][row.dimension].push_back(row.score);
    method_names[key] = row.method;
  }
  std::vector<SummaryRow> summaries;
  for (const auto& [key, by_dim] : groups) {
    std::size_t replicate_count = by_dim.begin()->second.size();
    for (const auto& [dim, scores] : by_dim) {
      if (scores.size() != replicate_count) {
        throw DataError(
            "aggregate: unbalanced replicate counts at model=" +
            to_string(static_cast<ModelKind>(std::get<0>(key))) +
            " method=" + method_names[key] +
            " size=" + std::to_string(std::get<2>(key)));
      }
    }
    std::size_t best_dim = 0;
    double best_mean = -std::numeric_limits<double>::infinity();
    for (const auto& [dim, scores] : by_dim) {  // ascending dim: ties keep
      const double m = mean(scores);            // the smallest
      if (m > best_mean) {
        best_mean = m;
        best_dim = dim;
      }
    }
    SummaryRow summary;
    summary.model = static_cast<ModelKind>(std::get<0>(key));
    summary.method = method_names[key];
    summary.size_docs = std::get<2>(key);
    summary.best_dimension = best_dim;
    summary.mean_score = best_mean;
    summary.sem = sem(by_dim.at(best_dim));
    summary.replicates = replicate_count;
    summaries.push_back(std::move(summary));
  }
  return summaries;
}

std::string format_summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out =
      "model,method,size_docs,best_dimension,mean_score,sem,replicates\n";
  for (const auto& row : rows) {
    out += to_string(row.model) + "," + row.method + "," +
           std::to_string(row.size_docs) + "," +
           std::to_string(row.best_dimension) + "," +
           format_double(row.mean_score) + "," + format_double(row.sem) +
           "," + std::to_string(row.replicates) + "\n";
  }
  return out;
}

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::filesystem::path& path) {
  atomic_write(path, format_summary_csv(rows));
}

std::string format_plot_data(const std::vector<SummaryRow>& rows) {
  std::string out;
  std::string block;
  for (const auto& row : rows) {
    const std::string header =
        "# model=" + to_string(row.model) + " method=" + row.method;
    if (header != block) {
      if (!block.empty()) out += "\n";
      out += header + "\n";
      block = header;
    }
    out += std::to_string(row.size_docs) + "\t" +
           format_double(row.mean_score) + "\t" + format_double(row.sem) +
           "\n";
  }
  return out;
}

void write_plot_data(const std::vector<SummaryRow>& rows,
                     const std::filesystem::path& path) {
  atomic_write(path, format_plot_data(rows));
}

}  // namespace embedlab
