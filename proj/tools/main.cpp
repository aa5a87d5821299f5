// embedlab: train LSA and skip-gram embeddings and measure how their task
// performance responds to corpus size and specificity.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "embedlab/error.hpp"
#include "embedlab/harness.hpp"
#include "embedlab/io.hpp"
#include "embedlab/lsa.hpp"
#include "embedlab/model.hpp"
#include "embedlab/sgns.hpp"
#include "embedlab/stats.hpp"
#include "embedlab/subset.hpp"
#include "embedlab/synth.hpp"

namespace {

using namespace embedlab;

constexpr const char* kVersion =
    "embedlab 0.1.0 (model format 1, results format 1)";

Stoplist stoplist_from(const std::string& path) {
  return path.empty() ? Stoplist::builtin() : Stoplist::load(path);
}

CorpusFormat format_from(const std::string& name) {
  if (name == "lines") return CorpusFormat::Lines;
  if (name == "dir") return CorpusFormat::Dir;
  throw DataError("unknown corpus format: " + name + " (expected lines or dir)");
}

std::vector<double> load_score_column(const std::string& path) {
  std::vector<double> values;
  std::size_t line_no = 0;
  std::size_t start = 0;
  const std::string bytes = read_file(path);
  while (start < bytes.size()) {
    std::size_t nl = bytes.find('\n', start);
    if (nl == std::string::npos) nl = bytes.size();
    std::string line = bytes.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    start = nl + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    try {
      values.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": bad number `" + line + "`");
    }
  }
  if (values.empty()) throw DataError("no scores in " + path);
  return values;
}

// Test words of a task file, optionally narrowed to the m least frequent
// items against the corpus.
std::vector<std::string> task_test_words(const std::string& task_type,
                                         const std::string& task_file,
                                         std::size_t category_size,
                                         std::size_t least_frequent,
                                         const Corpus& corpus) {
  if (task_kind_from_string(task_type) == TaskKind::Categorization) {
    CategorySet cats = CategorySet::load(task_file, category_size);
    if (least_frequent > 0) {
      cats = select_least_frequent(cats, corpus, least_frequent);
    }
    return unique_sorted(cats.all_words());
  }
  McqSet qs = McqSet::load(task_file);
  if (least_frequent > 0) {
    qs = select_least_frequent(qs, corpus, least_frequent);
  }
  return unique_sorted(qs.all_words());
}

struct TrainArgs {
  std::string corpus, format = "lines", stoplist, model, out, text_out;
  std::size_t dim = 0;
  std::uint64_t seed = 1;
  std::string lsa_vectors = "usigma";
  SgnsParams sgns;
  std::string subsample_mode = "prob";
};

void run_train(const TrainArgs& args) {
  const Stoplist stoplist = stoplist_from(args.stoplist);
  const Corpus corpus =
      load_corpus(args.corpus, format_from(args.format), stoplist);
  EmbeddingModel model;
  if (model_kind_from_string(args.model) == ModelKind::Lsa) {
    LsaConfig config;
    config.dimension = args.dim;
    config.seed = args.seed;
    config.vectors = lsa_vectors_from_string(args.lsa_vectors);
    model = lsa_embed(corpus, config);
  } else {
    SgnsParams params = args.sgns;
    params.dimension = args.dim;
    params.seed = args.seed;
    params.subsample_mode = args.subsample_mode == "hard"
                                ? SgnsParams::SubsampleMode::HardCutoff
                                : SgnsParams::SubsampleMode::Probabilistic;
    model = train_sgns(corpus, params).embedding;
  }
  save_model(model, args.out);
  if (!args.text_out.empty()) export_text(model, args.text_out);
  std::cout << "model=" << to_string(model.kind)
            << " vocab=" << model.vocab.size()
            << " dim=" << model.effective_dimension
            << " docs=" << model.document_count << "\n";
}

struct EvalArgs {
  std::string model, task_type, task, corpus, format = "lines", stoplist, out;
  std::size_t category_size = 10;
  std::size_t least_frequent = 0;
  std::string missing = "strict";
};

void run_eval(const EvalArgs& args) {
  const EmbeddingModel model = load_model(args.model);
  const MissingWordPolicy policy = args.missing == "lenient"
                                       ? MissingWordPolicy::Lenient
                                       : MissingWordPolicy::Strict;
  std::optional<Corpus> corpus;
  if (args.least_frequent > 0) {
    if (args.corpus.empty()) {
      throw DataError("--least-frequent needs --corpus for item frequencies");
    }
    corpus = load_corpus(args.corpus, format_from(args.format),
                         stoplist_from(args.stoplist));
  }
  EvalResult result;
  if (task_kind_from_string(args.task_type) == TaskKind::Categorization) {
    CategorySet cats = CategorySet::load(args.task, args.category_size);
    if (corpus) cats = select_least_frequent(cats, *corpus, args.least_frequent);
    result = silhouette_score(cats, model, policy);
  } else {
    McqSet qs = McqSet::load(args.task);
    if (corpus) qs = select_least_frequent(qs, *corpus, args.least_frequent);
    result = mcq_accuracy(qs, model, policy);
  }
  if (args.out.empty()) {
    std::cout << format_eval_result(result);
  } else {
    write_eval_result(result, args.out);
  }
}

struct SubsetArgs {
  std::string corpus, format = "lines", stoplist, method, task_type, task, out;
  std::size_t n = 0;
  std::size_t category_size = 10;
  std::size_t least_frequent = 0;
  std::uint64_t seed = 1;
};

void run_subset(const SubsetArgs& args) {
  const Corpus corpus = load_corpus(args.corpus, format_from(args.format),
                                    stoplist_from(args.stoplist));
  const auto test_words =
      task_test_words(args.task_type, args.task, args.category_size,
                      args.least_frequent, corpus);
  const Subcorpus sub =
      discard_method_from_string(args.method) == DiscardMethod::Random
          ? random_discard(corpus, args.n, test_words, args.seed)
          : out_of_domain_discard(corpus, args.n, test_words, args.seed);
  write_manifest(sub, args.out);
  std::cout << "retained=" << sub.retained.size()
            << " swaps=" << sub.repair_swaps << "\n";
}

struct SynthArgs {
  SyntheticSpec spec;
  std::string out_corpus, out_categories, out_mcq;
};

void run_synth(const SynthArgs& args) {
  const SyntheticCorpus synth = generate_synthetic_corpus(args.spec);
  write_corpus_lines(synth.corpus, args.out_corpus);
  if (!args.out_categories.empty()) {
    write_category_file(synth.categories, args.out_categories);
  }
  if (!args.out_mcq.empty()) write_mcq_file(synth.questions, args.out_mcq);
  std::cout << "documents=" << synth.corpus.size()
            << " tokens=" << synth.corpus.total_tokens()
            << " categories=" << synth.categories.categories.size()
            << " questions=" << synth.questions.questions.size() << "\n";
}

struct ExperimentArgs {
  std::string config, out;
  std::size_t workers = 0;
  std::uint64_t seed = 0;
  bool has_seed = false;
  bool overwrite = false;
};

void run_experiment_cmd(const ExperimentArgs& args) {
  ExperimentConfig config = ExperimentConfig::load(args.config);
  if (!args.out.empty()) config.output = args.out;
  if (args.workers > 0) config.workers = args.workers;
  if (args.has_seed) config.master_seed = args.seed;
  if (args.overwrite) std::filesystem::remove(config.output);
  const auto rows = run_experiment(config);
  std::cout << "rows=" << rows.size() << " output=" << config.output.string()
            << "\n";
}

struct SummarizeArgs {
  std::string results, out, plot_data;
};

void run_summarize(const SummarizeArgs& args) {
  const auto rows = load_results_csv(args.results);
  const auto summaries = aggregate_best_dimension(rows);
  write_summary_csv(summaries, args.out);
  if (!args.plot_data.empty()) write_plot_data(summaries, args.plot_data);
  std::cout << "groups=" << summaries.size() << "\n";
}

struct KsArgs {
  std::string a, b;
};

void run_ks(const KsArgs& args) {
  const KsResult result =
      ks_test(load_score_column(args.a), load_score_column(args.b));
  std::printf("statistic\tp_value\n%.17g\t%.17g\n", result.statistic,
              result.p_value);
}

void add_corpus_flags(CLI::App* cmd, std::string& corpus, std::string& format,
                      std::string& stoplist, bool required = true) {
  auto* opt = cmd->add_option("--corpus", corpus, "Corpus path");
  if (required) opt->required();
  cmd->add_option("--format", format, "Corpus format: lines or dir")
      ->check(CLI::IsMember({"lines", "dir"}))
      ->capture_default_str();
  cmd->add_option("--stoplist", stoplist,
                  "Stoplist file (default: bundled English list)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corpus ablation benchmarking for LSA and skip-gram word "
               "embeddings"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd =
      app.add_subcommand("train", "Train an embedding model on a corpus");
  add_corpus_flags(train_cmd, train.corpus, train.format, train.stoplist);
  train_cmd->add_option("--model", train.model, "Model kind: lsa or sgns")
      ->required()
      ->check(CLI::IsMember({"lsa", "sgns"}));
  train_cmd->add_option("--dim", train.dim, "Embedding dimension")->required();
  train_cmd->add_option("--seed", train.seed, "Random seed")
      ->capture_default_str();
  train_cmd->add_option("--out", train.out, "Output model file (binary)")
      ->required();
  train_cmd->add_option("--text-out", train.text_out,
                        "Optional plain-text vector export");
  train_cmd
      ->add_option("--lsa-vectors", train.lsa_vectors,
                   "LSA vector convention: usigma (U*Sigma) or u")
      ->check(CLI::IsMember({"usigma", "u"}))
      ->capture_default_str();
  train_cmd->add_option("--epochs", train.sgns.epochs, "SGNS epochs")
      ->capture_default_str();
  train_cmd->add_option("--window", train.sgns.window, "SGNS window size")
      ->capture_default_str();
  train_cmd
      ->add_option("--negatives", train.sgns.negatives,
                   "SGNS negative samples per pair")
      ->capture_default_str();
  train_cmd
      ->add_option("--subsample-threshold", train.sgns.subsample_threshold,
                   "SGNS frequent-token subsampling threshold")
      ->capture_default_str();
  train_cmd
      ->add_option("--subsample-mode", train.subsample_mode,
                   "SGNS subsampling: prob or hard")
      ->check(CLI::IsMember({"prob", "hard"}))
      ->capture_default_str();
  train_cmd->add_option("--lr-initial", train.sgns.initial_lr,
                        "SGNS initial learning rate")
      ->capture_default_str();
  train_cmd->add_option("--lr-final", train.sgns.final_lr,
                        "SGNS final learning rate")
      ->capture_default_str();
  train_cmd
      ->add_option("--sgns-workers", train.sgns.workers,
                   "SGNS training threads (>1 is non-deterministic)")
      ->capture_default_str();
  train_cmd->callback([&] { run_train(train); });

  EvalArgs eval_args;
  auto* eval_cmd =
      app.add_subcommand("eval", "Score a trained model on a task file");
  eval_cmd->add_option("--model", eval_args.model, "Model file")->required();
  eval_cmd
      ->add_option("--task-type", eval_args.task_type,
                   "Task kind: categorization or mcq")
      ->required()
      ->check(CLI::IsMember({"categorization", "categories", "mcq"}));
  eval_cmd->add_option("--task", eval_args.task, "Task file")->required();
  eval_cmd
      ->add_option("--category-size", eval_args.category_size,
                   "Required words per category (0 = any)")
      ->capture_default_str();
  eval_cmd
      ->add_option("--least-frequent", eval_args.least_frequent,
                   "Evaluate only the m least frequent items (needs --corpus)")
      ->capture_default_str();
  add_corpus_flags(eval_cmd, eval_args.corpus, eval_args.format,
                   eval_args.stoplist, /*required=*/false);
  eval_cmd
      ->add_option("--missing", eval_args.missing,
                   "Missing task words: strict or lenient")
      ->check(CLI::IsMember({"strict", "lenient"}))
      ->capture_default_str();
  eval_cmd->add_option("--out", eval_args.out,
                       "Output file (default: stdout)");
  std::uint64_t eval_seed = 1;
  eval_cmd->add_option("--seed", eval_seed, "Accepted for uniformity; unused");
  eval_cmd->callback([&] { run_eval(eval_args); });

  SubsetArgs subset;
  auto* subset_cmd = app.add_subcommand(
      "subset", "Build a subcorpus by random or out-of-domain discarding");
  add_corpus_flags(subset_cmd, subset.corpus, subset.format, subset.stoplist);
  subset_cmd->add_option("--method", subset.method, "random or ood")
      ->required()
      ->check(CLI::IsMember({"random", "ood"}));
  subset_cmd->add_option("--n", subset.n, "Documents to retain")->required();
  subset_cmd
      ->add_option("--task-type", subset.task_type,
                   "Task kind: categorization or mcq")
      ->required()
      ->check(CLI::IsMember({"categorization", "categories", "mcq"}));
  subset_cmd->add_option("--task", subset.task, "Task file (test words)")
      ->required();
  subset_cmd
      ->add_option("--category-size", subset.category_size,
                   "Required words per category (0 = any)")
      ->capture_default_str();
  subset_cmd
      ->add_option("--least-frequent", subset.least_frequent,
                   "Use only the m least frequent items' words")
      ->capture_default_str();
  subset_cmd->add_option("--seed", subset.seed, "Random seed")
      ->capture_default_str();
  subset_cmd->add_option("--out", subset.out, "Manifest output path")
      ->required();
  subset_cmd->callback([&] { run_subset(subset); });

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Generate a planted-topic corpus with matching task files");
  synth_cmd->add_option("--topics", synth.spec.topics, "Topic count")
      ->capture_default_str();
  synth_cmd
      ->add_option("--words-per-topic", synth.spec.words_per_topic,
                   "Exclusive vocabulary per topic")
      ->capture_default_str();
  synth_cmd
      ->add_option("--shared-words", synth.spec.shared_words,
                   "Shared background vocabulary")
      ->capture_default_str();
  synth_cmd
      ->add_option("--docs-per-topic", synth.spec.docs_per_topic,
                   "Documents per topic")
      ->capture_default_str();
  synth_cmd
      ->add_option("--tokens-per-doc", synth.spec.tokens_per_doc,
                   "Tokens per document")
      ->capture_default_str();
  synth_cmd
      ->add_option("--alpha", synth.spec.alpha,
                   "Topic purity in (0.5, 1]")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.spec.seed, "Random seed")
      ->capture_default_str();
  synth_cmd
      ->add_option("--category-size", synth.spec.category_size,
                   "Words per generated category")
      ->capture_default_str();
  synth_cmd
      ->add_option("--questions-per-topic", synth.spec.questions_per_topic,
                   "Questions per topic")
      ->capture_default_str();
  synth_cmd
      ->add_option("--task-min-count", synth.spec.task_min_count,
                   "Minimum occurrences for task words")
      ->capture_default_str();
  synth_cmd->add_option("--out-corpus", synth.out_corpus, "Corpus output")
      ->required();
  synth_cmd->add_option("--out-categories", synth.out_categories,
                        "Category task output");
  synth_cmd->add_option("--out-mcq", synth.out_mcq, "MCQ task output");
  synth_cmd->callback([&] { run_synth(synth); });

  ExperimentArgs experiment;
  auto* experiment_cmd = app.add_subcommand(
      "experiment", "Run the full discard-method x size x dimension grid");
  experiment_cmd->add_option("--config", experiment.config, "Config file")
      ->required();
  experiment_cmd->add_option("--out", experiment.out,
                             "Results CSV (overrides config)");
  experiment_cmd->add_option("--workers", experiment.workers,
                             "Parallel grid jobs (overrides config)");
  auto* seed_opt = experiment_cmd->add_option(
      "--seed", experiment.seed, "Master seed (overrides config)");
  experiment_cmd->add_flag("--overwrite", experiment.overwrite,
                           "Discard an existing results file");
  experiment_cmd->callback([&, seed_opt] {
    experiment.has_seed = seed_opt->count() > 0;
    run_experiment_cmd(experiment);
  });

  SummarizeArgs summarize;
  auto* summarize_cmd = app.add_subcommand(
      "summarize", "Aggregate results to best-dimension means with SEM");
  summarize_cmd->add_option("--results", summarize.results, "Results CSV")
      ->required();
  summarize_cmd->add_option("--out", summarize.out, "Summary CSV")->required();
  summarize_cmd->add_option("--plot-data", summarize.plot_data,
                            "Optional plot-data export");
  std::uint64_t summarize_seed = 1;
  summarize_cmd->add_option("--seed", summarize_seed,
                            "Accepted for uniformity; unused");
  summarize_cmd->callback([&] { run_summarize(summarize); });

  KsArgs ks;
  auto* ks_cmd = app.add_subcommand(
      "ks", "Two-sample Kolmogorov-Smirnov test on two score columns");
  ks_cmd->add_option("--a", ks.a, "First score file (one value per line)")
      ->required();
  ks_cmd->add_option("--b", ks.b, "Second score file")->required();
  std::uint64_t ks_seed = 1;
  ks_cmd->add_option("--seed", ks_seed, "Accepted for uniformity; unused");
  ks_cmd->callback([&] { run_ks(ks); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // help or version
    }
    std::cerr << "embedlab: error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "embedlab: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "embedlab: internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
