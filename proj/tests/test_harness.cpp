#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "embedlab/error.hpp"
#include "embedlab/harness.hpp"
#include "embedlab/synth.hpp"
#include "helpers.hpp"

using namespace embedlab;
using test::TmpDir;

namespace {

// Shared small synthetic setup for experiment-level tests.
struct SmallExperiment {
  TmpDir tmp{"harness"};
  SyntheticSpec spec;
  std::size_t min_size = 0;

  SmallExperiment() {
    spec.topics = 3;
    spec.words_per_topic = 60;
    spec.shared_words = 20;
    spec.docs_per_topic = 30;
    spec.tokens_per_doc = 25;
    spec.alpha = 0.9;
    spec.seed = 5;
    spec.category_size = 5;
    spec.questions_per_topic = 0;
    spec.task_min_count = 2;
    const SyntheticCorpus synth = generate_synthetic_corpus(spec);
    write_corpus_lines(synth.corpus, tmp.file("corpus.txt"));
    write_category_file(synth.categories, tmp.file("cats.tsv"));
    min_size = min_specific_size(synth.corpus,
                                 unique_sorted(synth.categories.all_words()));
  }

  ExperimentConfig config(const std::string& output) const {
    ExperimentConfig c;
    c.corpus_path = tmp.file("corpus.txt");
    c.task = TaskKind::Categorization;
    c.task_file = tmp.file("cats.tsv");
    c.category_size = spec.category_size;
    c.sizes = {std::max<std::size_t>(min_size, 40), 70, 90};
    c.replicates = 2;
    c.models = {ModelKind::Lsa, ModelKind::Sgns};
    c.lsa_dimensions = {2, 4};
    c.sgns_dimensions = {4};
    c.sgns.epochs = 2;
    c.sgns.window = 4;
    c.sgns.negatives = 4;
    c.master_seed = 11;
    c.output = tmp.file(output);
    // deterministic single-worker defaults
    return c;
  }
};

}  // namespace

TEST_CASE("config file parsing") {
  TmpDir tmp("config");

  SUBCASE("full round trip of keys") {
    test::write_text(tmp.file("c.cfg"),
                     "# comment line\n"
                     "corpus = corpus.txt\n"
                     "corpus_format = lines\n"
                     "task = categorization\n"
                     "task_file = cats.tsv\n"
                     "category_size = 5\n"
                     "least_frequent = 2\n"
                     "methods = random,ood\n"
                     "sizes = 10, 20, 40\n"
                     "replicates = 3\n"
                     "models = lsa\n"
                     "lsa_dims = 2,4,8\n"
                     "master_seed = 99\n"
                     "deterministic = true\n"
                     "workers = 2\n"
                     "missing_words = strict\n"
                     "lsa_vectors = u\n"
                     "sgns_epochs = 3\n"
                     "output = out.csv\n");
    const ExperimentConfig c = ExperimentConfig::load(tmp.file("c.cfg"));
    CHECK(c.corpus_path == "corpus.txt");
    CHECK(c.task == TaskKind::Categorization);
    CHECK(c.category_size == 5);
    CHECK(c.least_frequent == 2);
    CHECK(c.sizes == std::vector<std::size_t>{10, 20, 40});
    CHECK(c.replicates == 3);
    CHECK(c.models == std::vector<ModelKind>{ModelKind::Lsa});
    CHECK(c.lsa_dimensions == std::vector<std::size_t>{2, 4, 8});
    CHECK(c.master_seed == 99);
    CHECK(c.workers == 2);
    CHECK(c.lsa_vectors == LsaVectors::ULeft);
    CHECK(c.sgns.epochs == 3);
    CHECK(c.output == "out.csv");
    c.validate();
  }

  SUBCASE("unknown keys are rejected") {
    test::write_text(tmp.file("c.cfg"), "corpus = x\nbogus_key = 1\n");
    CHECK_THROWS_WITH_AS(ExperimentConfig::load(tmp.file("c.cfg")),
                         doctest::Contains("unknown config key"), DataError);
  }

  SUBCASE("validation catches bad grids") {
    ExperimentConfig c;
    c.corpus_path = "x";
    c.task_file = "y";
    c.sizes = {20, 10};
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("ascending"),
                         DataError);
    c.sizes = {10, 10};
    CHECK_THROWS_AS(c.validate(), DataError);
    c.sizes = {};
    c.replicates = 0;
    CHECK_THROWS_AS(c.validate(), DataError);
  }
}

TEST_CASE("seed derivation separates grid points") {
  std::set<std::uint64_t> seeds;
  std::size_t count = 0;
  for (DiscardMethod method :
       {DiscardMethod::Random, DiscardMethod::OutOfDomain}) {
    for (std::size_t size : {100, 200, 400}) {
      for (std::size_t rep = 0; rep < 10; ++rep) {
        const std::uint64_t rs = replicate_seed(42, method, size, rep, false);
        for (ModelKind model : {ModelKind::Lsa, ModelKind::Sgns}) {
          for (std::size_t dim : {5, 10, 20, 50}) {
            seeds.insert(model_seed(rs, model, dim));
            ++count;
          }
        }
      }
    }
  }
  CHECK(seeds.size() == count);
  // full-corpus canonicalization ignores method and replicate
  CHECK(replicate_seed(42, DiscardMethod::Random, 500, 3, true) ==
        replicate_seed(42, DiscardMethod::OutOfDomain, 500, 9, true));
  // master seed changes every stream
  CHECK(replicate_seed(42, DiscardMethod::Random, 100, 0, false) !=
        replicate_seed(43, DiscardMethod::Random, 100, 0, false));
}

TEST_CASE("results csv round trip") {
  TmpDir tmp("csv");
  std::vector<ResultRow> rows;
  ResultRow r;
  r.model = ModelKind::Lsa;
  r.method = "random";
  r.size_docs = 100;
  r.replicate = 3;
  r.dimension = 20;
  r.effective_dimension = 20;
  r.task = TaskKind::Categorization;
  r.score = 0.123456789012345;
  r.seed = 9876543210123456789ull;
  r.wall_time_s = 0.0;
  rows.push_back(r);
  r.model = ModelKind::Sgns;
  r.method = "ood";
  r.score = -0.25;
  rows.push_back(r);
  write_results_csv(rows, tmp.file("r.csv"));
  const auto loaded = load_results_csv(tmp.file("r.csv"));
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].model == ModelKind::Lsa);
  CHECK(loaded[0].score == rows[0].score);
  CHECK(loaded[0].seed == rows[0].seed);
  CHECK(loaded[1].method == "ood");
  CHECK(loaded[1].score == -0.25);

  SUBCASE("header mismatch is rejected") {
    test::write_text(tmp.file("bad.csv"), "not,a,results,file\n");
    CHECK_THROWS_AS(load_results_csv(tmp.file("bad.csv")), DataError);
  }
}

TEST_CASE("aggregate_best_dimension") {
  const auto row = [](ModelKind m, const std::string& method,
                      std::size_t size, std::size_t rep, std::size_t dim,
                      double score) {
    ResultRow r;
    r.model = m;
    r.method = method;
    r.size_docs = size;
    r.replicate = rep;
    r.dimension = dim;
    r.effective_dimension = dim;
    r.score = score;
    return r;
  };

  SUBCASE("best dimension by mean score") {
    std::vector<ResultRow> rows{
        row(ModelKind::Lsa, "random", 10, 0, 5, 0.2),
        row(ModelKind::Lsa, "random", 10, 1, 5, 0.4),
        row(ModelKind::Lsa, "random", 10, 0, 10, 0.4),
        row(ModelKind::Lsa, "random", 10, 1, 10, 0.6),
    };
    const auto summaries = aggregate_best_dimension(rows);
    REQUIRE(summaries.size() == 1);
    CHECK(summaries[0].best_dimension == 10);
    CHECK(summaries[0].mean_score == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(summaries[0].replicates == 2);
  }

  SUBCASE("ties go to the smallest dimension") {
    std::vector<ResultRow> rows{
        row(ModelKind::Lsa, "random", 10, 0, 20, 0.5),
        row(ModelKind::Lsa, "random", 10, 0, 50, 0.5),
    };
    const auto summaries = aggregate_best_dimension(rows);
    CHECK(summaries[0].best_dimension == 20);
  }

  SUBCASE("sem of {0.4, 0.6} is 0.1") {
    std::vector<ResultRow> rows{
        row(ModelKind::Lsa, "ood", 10, 0, 5, 0.4),
        row(ModelKind::Lsa, "ood", 10, 1, 5, 0.6),
    };
    const auto summaries = aggregate_best_dimension(rows);
    CHECK(summaries[0].sem == doctest::Approx(0.1).epsilon(1e-12));
  }

  SUBCASE("row order does not matter") {
    std::vector<ResultRow> rows{
        row(ModelKind::Lsa, "random", 10, 0, 5, 0.1),
        row(ModelKind::Sgns, "ood", 20, 1, 10, 0.7),
        row(ModelKind::Lsa, "random", 10, 1, 5, 0.3),
        row(ModelKind::Sgns, "ood", 20, 0, 10, 0.5),
    };
    auto forward = aggregate_best_dimension(rows);
    std::reverse(rows.begin(), rows.end());
    auto backward = aggregate_best_dimension(rows);
    REQUIRE(forward.size() == backward.size());
    for (std::size_t i = 0; i < forward.size(); ++i) {
      CHECK(forward[i].mean_score == backward[i].mean_score);
      CHECK(forward[i].best_dimension == backward[i].best_dimension);
      CHECK(forward[i].sem == backward[i].sem);
    }
  }

  SUBCASE("unbalanced replicate counts error") {
    std::vector<ResultRow> rows{
        row(ModelKind::Lsa, "random", 10, 0, 5, 0.1),
        row(ModelKind::Lsa, "random", 10, 1, 5, 0.3),
        row(ModelKind::Lsa, "random", 10, 0, 10, 0.2),
    };
    CHECK_THROWS_WITH_AS(aggregate_best_dimension(rows),
                         doctest::Contains("unbalanced"), DataError);
  }
}

TEST_CASE("ks_test statistics and p-values") {
  SUBCASE("identical samples") {
    const KsResult r = ks_test({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0});
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == 1.0);
  }

  SUBCASE("disjoint samples reach D = 1") {
    const KsResult r = ks_test({1.0, 2.0, 3.0}, {4.0, 5.0, 6.0});
    CHECK(r.statistic == 1.0);
    // leading term 2*exp(-2 * 1.5) = 0.0996, full series slightly below
    CHECK(r.p_value == doctest::Approx(0.0996).epsilon(1e-2));
    CHECK(std::abs(r.p_value - 0.09956185) <= 1e-6);
  }

  SUBCASE("symmetry on random samples") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> a;
      std::vector<double> b;
      for (int i = 0; i < 12; ++i) a.push_back(rng.normal());
      for (int i = 0; i < 9; ++i) b.push_back(rng.normal() + 0.3);
      const KsResult ab = ks_test(a, b);
      const KsResult ba = ks_test(b, a);
      CHECK(ab.statistic == ba.statistic);
      CHECK(ab.p_value == ba.p_value);
    }
  }

  SUBCASE("ties are handled exactly") {
    // jump points: 0 -> |2/4 - 1/4| = 0.25; 1 -> 0; 2 -> 0.25; 3 -> 0
    const KsResult r = ks_test({0.0, 0.0, 1.0, 2.0}, {0.0, 1.0, 1.0, 3.0});
    CHECK(r.statistic == doctest::Approx(0.25).epsilon(1e-15));
  }

  SUBCASE("empty samples error") {
    CHECK_THROWS_AS(ks_test({}, {1.0}), DataError);
  }
}

TEST_CASE("synthetic corpus generation") {
  SUBCASE("document and token counts") {
    SyntheticSpec spec;
    spec.topics = 10;
    spec.words_per_topic = 200;
    spec.shared_words = 50;
    spec.docs_per_topic = 200;
    spec.tokens_per_doc = 50;
    spec.alpha = 0.9;
    spec.seed = 1;
    spec.task_min_count = 2;
    const SyntheticCorpus synth = generate_synthetic_corpus(spec);
    CHECK(synth.corpus.size() == 2000);
    CHECK(synth.corpus.total_tokens() == 2000 * 50);
    CHECK(synth.categories.categories.size() == 10);
    for (const auto& cat : synth.categories.categories) {
      CHECK(cat.words.size() == 10);
    }
    CHECK(synth.questions.questions.size() == 20);
  }

  SUBCASE("alpha = 1 keeps topics pure") {
    SyntheticSpec spec;
    spec.topics = 4;
    spec.words_per_topic = 50;
    spec.shared_words = 10;
    spec.docs_per_topic = 20;
    spec.tokens_per_doc = 30;
    spec.alpha = 1.0;
    spec.seed = 2;
    spec.category_size = 5;
    spec.questions_per_topic = 1;
    spec.task_min_count = 1;
    const SyntheticCorpus synth = generate_synthetic_corpus(spec);
    for (std::size_t d = 0; d < synth.corpus.size(); ++d) {
      const std::size_t topic = d / spec.docs_per_topic;
      const std::string own_prefix =
          "w" + std::string{static_cast<char>('a' + topic / 26)} +
          std::string{static_cast<char>('a' + topic % 26)};
      for (const auto& token : synth.corpus.documents[d].tokens) {
        CHECK(token.substr(0, 3) == own_prefix);
      }
    }
  }

  SUBCASE("task words reference realized corpus words") {
    SyntheticSpec spec;
    spec.topics = 5;
    spec.words_per_topic = 80;
    spec.shared_words = 30;
    spec.docs_per_topic = 40;
    spec.tokens_per_doc = 30;
    spec.seed = 3;
    spec.category_size = 6;
    spec.questions_per_topic = 2;
    spec.task_min_count = 2;
    const SyntheticCorpus synth = generate_synthetic_corpus(spec);
    const auto words = unique_sorted(synth.categories.all_words());
    const DocFrequency df = doc_frequency(synth.corpus, words);
    for (const auto& w : words) CHECK(df.counts.at(w) > 0);
    const auto qwords = unique_sorted(synth.questions.all_words());
    const DocFrequency qdf = doc_frequency(synth.corpus, qwords);
    for (const auto& w : qwords) CHECK(qdf.counts.at(w) > 0);
  }

  SUBCASE("vocabulary exhaustion is reported") {
    SyntheticSpec spec;
    spec.topics = 4;
    spec.words_per_topic = 5;  // cannot supply 10-word categories
    spec.shared_words = 5;
    spec.docs_per_topic = 3;
    spec.tokens_per_doc = 5;
    spec.seed = 4;
    CHECK_THROWS_WITH_AS(generate_synthetic_corpus(spec),
                         doctest::Contains("vocabulary exhausted"), DataError);
  }

  SUBCASE("invalid specs are rejected") {
    SyntheticSpec spec;
    spec.alpha = 0.4;
    CHECK_THROWS_AS(generate_synthetic_corpus(spec), DataError);
    spec = {};
    spec.tokens_per_doc = 0;
    CHECK_THROWS_AS(generate_synthetic_corpus(spec), DataError);
  }
}

TEST_CASE("planted structure is recoverable by LSA at k = topics") {
  SyntheticSpec spec;
  spec.topics = 4;
  spec.words_per_topic = 60;
  spec.shared_words = 20;
  spec.docs_per_topic = 40;
  spec.tokens_per_doc = 30;
  spec.alpha = 0.9;
  spec.category_size = 6;
  spec.questions_per_topic = 0;
  spec.task_min_count = 3;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    spec.seed = seed;
    const SyntheticCorpus synth = generate_synthetic_corpus(spec);
    LsaConfig config;
    config.dimension = spec.topics;
    config.seed = seed;
    const EmbeddingModel model = lsa_embed(synth.corpus, config);
    const EvalResult r = silhouette_score(synth.categories, model);
    CHECK(r.score > 0.2);
  }
}

TEST_CASE("run_experiment produces the expected grid") {
  SmallExperiment env;
  ExperimentConfig config = env.config("results.csv");
  const auto rows = run_experiment(config);
  // |methods| * |sizes| * replicates * (|lsa_dims| + |sgns_dims|)
  CHECK(rows.size() == 2 * 3 * 2 * (2 + 1));
  // rows land inside the task's score range
  for (const auto& row : rows) {
    CHECK(row.score >= -1.0);
    CHECK(row.score <= 1.0);
    CHECK(row.effective_dimension <= row.dimension);
  }
  // full-corpus rows are shared: same seed and score across methods
  double full_score = 0.0;
  std::uint64_t full_seed = 0;
  bool first = true;
  for (const auto& row : rows) {
    if (row.size_docs == 90 && row.model == ModelKind::Lsa &&
        row.dimension == 2) {
      if (first) {
        full_score = row.score;
        full_seed = row.seed;
        first = false;
      } else {
        CHECK(row.score == full_score);
        CHECK(row.seed == full_seed);
      }
    }
  }
  CHECK_FALSE(first);

  SUBCASE("summaries cover every group and sizes stay in the grid") {
    const auto summaries = aggregate_best_dimension(rows);
    CHECK(summaries.size() == 2 * 2 * 3);  // models x methods x sizes
    for (const auto& s : summaries) {
      CHECK((s.best_dimension == 2 || s.best_dimension == 4));
      CHECK(s.replicates == 2);
    }
    const std::string plot = format_plot_data(summaries);
    CHECK(plot.find("# model=lsa method=random") != std::string::npos);
    CHECK(plot.find("# model=sgns method=ood") != std::string::npos);
  }
}

TEST_CASE("experiment reruns and resumes byte-identically") {
  SmallExperiment env;
  ExperimentConfig config = env.config("a.csv");
  run_experiment(config);
  const std::string first = test::slurp(env.tmp.file("a.csv"));

  // identical rerun from scratch
  ExperimentConfig config2 = env.config("b.csv");
  run_experiment(config2);
  CHECK(test::slurp(env.tmp.file("b.csv")) == first);

  // rerun over the finished file recomputes nothing and keeps bytes
  run_experiment(config);
  CHECK(test::slurp(env.tmp.file("a.csv")) == first);

  // drop half the rows to simulate an interrupted run, then resume
  std::string truncated;
  std::size_t line_no = 0;
  for (std::size_t start = 0; start < first.size();) {
    std::size_t nl = first.find('\n', start);
    if (nl == std::string::npos) nl = first.size();
    const std::string line = first.substr(start, nl - start + 1);
    if (line_no == 0 || line_no % 2 == 1) truncated += line;
    start = nl + 1;
    ++line_no;
  }
  test::write_text(env.tmp.file("a.csv"), truncated);
  run_experiment(config);
  CHECK(test::slurp(env.tmp.file("a.csv")) == first);

  // more workers, same bytes
  ExperimentConfig config3 = env.config("c.csv");
  config3.workers = 3;
  run_experiment(config3);
  CHECK(test::slurp(env.tmp.file("c.csv")) == first);
}

TEST_CASE("experiment rejects sizes below the out-of-domain minimum") {
  SmallExperiment env;
  ExperimentConfig config = env.config("d.csv");
  REQUIRE(env.min_size > 2);  // otherwise the guard below has nothing to do
  config.sizes = {env.min_size - 1, 90};
  CHECK_THROWS_WITH_AS(run_experiment(config),
                       doctest::Contains("out-of-domain minimum"), DataError);
}

TEST_CASE("experiment rejects task words missing from the corpus") {
  SmallExperiment env;
  ExperimentConfig config = env.config("e.csv");
  // append a category of unseen words to the task file
  std::string extra = test::slurp(env.tmp.file("cats.tsv"));
  for (int i = 0; i < 5; ++i) {
    extra += "phantom\tunseenword" + std::string(1, static_cast<char>('a' + i)) + "\n";
  }
  test::write_text(env.tmp.file("cats.tsv"), extra);
  CHECK_THROWS_WITH_AS(run_experiment(config),
                       doctest::Contains("absent from the corpus"), DataError);
}

TEST_CASE("random discarding degrades mean score monotonically in size") {
  // 5-point grid, LSA only; Spearman(size, mean score) must be strongly
  // positive (the paper's dashed-line behaviour).
  SmallExperiment env;
  ExperimentConfig config = env.config("spearman.csv");
  config.methods = {DiscardMethod::Random};
  config.models = {ModelKind::Lsa};
  config.lsa_dimensions = {3};
  config.replicates = 10;
  const std::size_t lo = std::max<std::size_t>(env.min_size, 35);
  config.sizes = {lo, lo + 11, lo + 22, lo + 33, 90};
  const auto rows = run_experiment(config);
  const auto summaries = aggregate_best_dimension(rows);
  REQUIRE(summaries.size() == 5);
  std::vector<double> sizes;
  std::vector<double> means;
  for (const auto& s : summaries) {
    sizes.push_back(static_cast<double>(s.size_docs));
    means.push_back(s.mean_score);
  }
  CHECK(test::spearman(sizes, means) > 0.8);
}
