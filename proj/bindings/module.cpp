#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "embedlab/error.hpp"
#include "embedlab/eval.hpp"
#include "embedlab/harness.hpp"
#include "embedlab/lsa.hpp"
#include "embedlab/model.hpp"
#include "embedlab/sgns.hpp"
#include "embedlab/stats.hpp"
#include "embedlab/subset.hpp"
#include "embedlab/synth.hpp"

namespace py = pybind11;
using namespace embedlab;

namespace {

Stoplist stoplist_arg(const std::optional<std::filesystem::path>& path) {
  return path ? Stoplist::load(*path) : Stoplist::builtin();
}

CorpusFormat format_arg(const std::string& name) {
  if (name == "lines") return CorpusFormat::Lines;
  if (name == "dir") return CorpusFormat::Dir;
  throw DataError("unknown corpus format: " + name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Corpus ablation benchmarking for LSA and skip-gram embeddings";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  py::class_<Corpus>(m, "Corpus")
      .def_property_readonly("size", &Corpus::size)
      .def_property_readonly("total_tokens", &Corpus::total_tokens)
      .def_readonly("stoplist_digest", &Corpus::stoplist_digest)
      .def_readonly("dropped_empty", &Corpus::dropped_empty)
      .def("tokens",
           [](const Corpus& c, std::size_t doc) {
             if (doc >= c.size()) throw DataError("document id out of range");
             return c.documents[doc].tokens;
           })
      .def("__len__", &Corpus::size);

  py::class_<Subcorpus>(m, "Subcorpus")
      .def_property_readonly(
          "retained", [](const Subcorpus& s) { return s.retained; })
      .def_readonly("repair_swaps", &Subcorpus::repair_swaps)
      .def_readonly("seed", &Subcorpus::seed)
      .def("to_corpus", &Subcorpus::to_corpus);

  py::class_<EmbeddingModel>(m, "EmbeddingModel")
      .def_property_readonly(
          "kind", [](const EmbeddingModel& m_) { return to_string(m_.kind); })
      .def_property_readonly(
          "words", [](const EmbeddingModel& m_) { return m_.vocab.words; })
      .def_readonly("vectors", &EmbeddingModel::vectors)
      .def_readonly("singular_values", &EmbeddingModel::singular_values)
      .def_readonly("requested_dimension", &EmbeddingModel::requested_dimension)
      .def_readonly("effective_dimension", &EmbeddingModel::effective_dimension)
      .def_readonly("document_count", &EmbeddingModel::document_count)
      .def_readonly("seed", &EmbeddingModel::seed)
      .def("has", &EmbeddingModel::has)
      .def("vector",
           [](const EmbeddingModel& m_, const std::string& word) {
             return Eigen::RowVectorXd(m_.vector_of(word));
           })
      .def("save", &save_model)
      .def("export_text", &export_text);

  py::class_<CategorySet>(m, "CategorySet")
      .def_static("load", &CategorySet::load, py::arg("path"),
                  py::arg("expected_size") = 10)
      .def("all_words", &CategorySet::all_words)
      .def("__len__",
           [](const CategorySet& s) { return s.categories.size(); })
      .def("category",
           [](const CategorySet& s, std::size_t i) {
             if (i >= s.categories.size()) {
               throw DataError("category index out of range");
             }
             return py::make_tuple(s.categories[i].name,
                                   s.categories[i].words);
           });

  py::class_<McqSet>(m, "McqSet")
      .def_static("load", &McqSet::load)
      .def("all_words", &McqSet::all_words)
      .def("__len__", [](const McqSet& s) { return s.questions.size(); })
      .def("question", [](const McqSet& s, std::size_t i) {
        if (i >= s.questions.size()) {
          throw DataError("question index out of range");
        }
        const auto& q = s.questions[i];
        return py::make_tuple(q.target, q.choices, q.answer);
      });

  py::class_<EvalResult>(m, "EvalResult")
      .def_readonly("score", &EvalResult::score)
      .def_readonly("skipped", &EvalResult::skipped)
      .def_property_readonly("task",
                             [](const EvalResult& r) {
                               return to_string(r.task);
                             })
      .def_property_readonly("items", [](const EvalResult& r) {
        py::list out;
        for (const auto& item : r.items) {
          out.append(py::make_tuple(item.id, item.group, item.value, item.tie,
                                    item.skipped));
        }
        return out;
      });

  py::class_<KsResult>(m, "KsResult")
      .def_readonly("statistic", &KsResult::statistic)
      .def_readonly("p_value", &KsResult::p_value);

  py::class_<SyntheticSpec>(m, "SyntheticSpec")
      .def(py::init<>())
      .def_readwrite("topics", &SyntheticSpec::topics)
      .def_readwrite("words_per_topic", &SyntheticSpec::words_per_topic)
      .def_readwrite("shared_words", &SyntheticSpec::shared_words)
      .def_readwrite("docs_per_topic", &SyntheticSpec::docs_per_topic)
      .def_readwrite("tokens_per_doc", &SyntheticSpec::tokens_per_doc)
      .def_readwrite("alpha", &SyntheticSpec::alpha)
      .def_readwrite("seed", &SyntheticSpec::seed)
      .def_readwrite("category_size", &SyntheticSpec::category_size)
      .def_readwrite("questions_per_topic", &SyntheticSpec::questions_per_topic)
      .def_readwrite("task_min_count", &SyntheticSpec::task_min_count);

  py::class_<SyntheticCorpus>(m, "SyntheticCorpus")
      .def_readonly("corpus", &SyntheticCorpus::corpus)
      .def_readonly("categories", &SyntheticCorpus::categories)
      .def_readonly("questions", &SyntheticCorpus::questions);

  m.def(
      "tokenize",
      [](const std::string& text,
         const std::optional<std::vector<std::string>>& stop) {
        return tokenize(text, stop ? Stoplist::from_words(*stop)
                                   : Stoplist::builtin());
      },
      py::arg("text"), py::arg("stoplist") = std::nullopt);

  m.def(
      "load_corpus",
      [](const std::filesystem::path& path, const std::string& format,
         const std::optional<std::filesystem::path>& stoplist) {
        return load_corpus(path, format_arg(format), stoplist_arg(stoplist));
      },
      py::arg("path"), py::arg("format") = "lines",
      py::arg("stoplist") = std::nullopt);

  m.def("corpus_from_tokens",
        [](std::vector<std::vector<std::string>> docs) {
          return corpus_from_token_lists(std::move(docs),
                                         Stoplist::from_words({}).digest);
        });

  m.def("write_corpus_lines", &write_corpus_lines);

  m.def("count_matrix_dense", [](const Corpus& corpus) {
    CountMatrix cm = build_count_matrix(corpus);
    return py::make_tuple(cm.vocab.words, Eigen::MatrixXd(cm.counts));
  });

  m.def("log_entropy_dense", [](const Corpus& corpus) {
    const CountMatrix cm = build_count_matrix(corpus);
    const WeightedMatrix w = log_entropy(cm);
    return py::make_tuple(cm.vocab.words, Eigen::MatrixXd(w.values),
                          Eigen::VectorXd(w.global_weights));
  });

  m.def("min_specific_size", &min_specific_size);
  m.def("random_discard", &random_discard, py::arg("corpus"), py::arg("n"),
        py::arg("test_words"), py::arg("seed"),
        py::keep_alive<0, 1>());  // subcorpus references its parent
  m.def("out_of_domain_discard", &out_of_domain_discard, py::arg("corpus"),
        py::arg("n"), py::arg("test_words"), py::arg("seed"),
        py::keep_alive<0, 1>());

  m.def(
      "truncated_svd",
      [](const Eigen::MatrixXd& dense, std::size_t k, std::uint64_t seed) {
        const SparseRowMatrix sparse = dense.sparseView();
        const SvdResult r = truncated_svd(sparse, k, seed);
        return py::make_tuple(r.left, r.singular_values, r.right);
      },
      py::arg("matrix"), py::arg("k"), py::arg("seed") = 1);

  m.def(
      "lsa_embed",
      [](const Corpus& corpus, std::size_t dimension, std::uint64_t seed,
         const std::string& vectors) {
        LsaConfig config;
        config.dimension = dimension;
        config.seed = seed;
        config.vectors = lsa_vectors_from_string(vectors);
        return lsa_embed(corpus, config);
      },
      py::arg("corpus"), py::arg("dimension"), py::arg("seed") = 1,
      py::arg("vectors") = "usigma");

  m.def(
      "train_sgns",
      [](const Corpus& corpus, std::size_t dimension, std::uint64_t seed,
         std::size_t window, std::size_t negatives, double subsample_threshold,
         std::size_t epochs, double lr_initial, double lr_final,
         std::size_t workers) {
        SgnsParams params;
        params.dimension = dimension;
        params.seed = seed;
        params.window = window;
        params.negatives = negatives;
        params.subsample_threshold = subsample_threshold;
        params.epochs = epochs;
        params.initial_lr = lr_initial;
        params.final_lr = lr_final;
        params.workers = workers;
        return train_sgns(corpus, params).embedding;
      },
      py::arg("corpus"), py::arg("dimension"), py::arg("seed") = 1,
      py::arg("window") = 15, py::arg("negatives") = 15,
      py::arg("subsample_threshold") = 1e-3, py::arg("epochs") = 5,
      py::arg("lr_initial") = 0.025, py::arg("lr_final") = 1e-4,
      py::arg("workers") = 1);

  m.def("load_model", &load_model);
  m.def("cosine", &cosine);
  m.def(
      "silhouette_score",
      [](const CategorySet& categories, const EmbeddingModel& model,
         bool strict) {
        return silhouette_score(categories, model,
                                strict ? MissingWordPolicy::Strict
                                       : MissingWordPolicy::Lenient);
      },
      py::arg("categories"), py::arg("model"), py::arg("strict") = true);
  m.def(
      "mcq_accuracy",
      [](const McqSet& questions, const EmbeddingModel& model, bool strict) {
        return mcq_accuracy(questions, model,
                            strict ? MissingWordPolicy::Strict
                                   : MissingWordPolicy::Lenient);
      },
      py::arg("questions"), py::arg("model"), py::arg("strict") = true);
  m.def("select_least_frequent_categories",
        py::overload_cast<const CategorySet&, const Corpus&, std::size_t>(
            &select_least_frequent));
  m.def("select_least_frequent_questions",
        py::overload_cast<const McqSet&, const Corpus&, std::size_t>(
            &select_least_frequent));

  m.def("ks_test", &ks_test);

  m.def("generate_synthetic_corpus", &generate_synthetic_corpus);
  m.def("write_category_file", &write_category_file);
  m.def("write_mcq_file", &write_mcq_file);

  m.def(
      "run_experiment",
      [](const std::filesystem::path& config_path,
         const std::optional<std::filesystem::path>& output,
         std::size_t workers) {
        ExperimentConfig config = ExperimentConfig::load(config_path);
        if (output) config.output = *output;
        if (workers > 0) config.workers = workers;
        const auto rows = run_experiment(config);
        return py::make_tuple(rows.size(), config.output);
      },
      py::arg("config"), py::arg("output") = std::nullopt,
      py::arg("workers") = 0);

  m.def("summarize",
        [](const std::filesystem::path& results,
           const std::filesystem::path& summary) {
          const auto rows = load_results_csv(results);
          const auto summaries = aggregate_best_dimension(rows);
          write_summary_csv(summaries, summary);
          return summaries.size();
        });

#ifdef EMBEDLAB_VERSION
  m.attr("__version__") = EMBEDLAB_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
