#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "embedlab/corpus.hpp"
#include "embedlab/model.hpp"

namespace embedlab {

// Semantic categorization task: named categories of member words.
struct CategorySet {
  struct Category {
    std::string name;
    std::vector<std::string> words;
  };
  std::vector<Category> categories;

  // Lines of `category<TAB>word`. Every category must have exactly
  // `expected_size` words (0 accepts any size >= 2); no word may appear in
  // two categories.
  static CategorySet load(const std::filesystem::path& path,
                          std::size_t expected_size = 10);
  std::vector<std::string> all_words() const;
};

// Multiple-choice synonym question: target word, 4 choices, known answer.
struct McqQuestion {
  std::string target;
  std::array<std::string, 4> choices;
  int answer = 0;  // index into choices

  std::vector<std::string> all_words() const;
};

struct McqSet {
  std::vector<McqQuestion> questions;

  // Lines of `target<TAB>correct<TAB>distractor<TAB>distractor<TAB>
  // distractor`; the loader records answer index 0.
  static McqSet load(const std::filesystem::path& path);
  std::vector<std::string> all_words() const;
};

// How to treat task words missing from a model's vocabulary: Strict throws;
// Lenient counts the item against the score (silhouette -1, question wrong)
// and reports it as skipped.
enum class MissingWordPolicy { Strict, Lenient };

// Cosine similarity; throws DataError on dimension mismatch or a zero-norm
// vector. Distance is 1 - similarity.
double cosine(const Eigen::Ref<const Eigen::RowVectorXd>& v1,
              const Eigen::Ref<const Eigen::RowVectorXd>& v2);

struct EvalResult {
  enum class Task { Categorization, Mcq } task = Task::Categorization;
  double score = 0.0;
  std::size_t skipped = 0;
  struct Item {
    std::string id;     // word or question target
    std::string group;  // category name or chosen word
    double value;       // silhouette coefficient or 0/1 correctness
    bool tie = false;
    bool skipped = false;
  };
  std::vector<Item> items;
};

std::string to_string(EvalResult::Task task);

// Silhouette coefficient of one word: a = mean cosine distance to the other
// members of its category, b = smallest mean distance to another category;
// s = (b - a) / max(a, b), with s = 0 when max(a, b) = 0.
double silhouette_coefficient(const std::string& word,
                              const CategorySet& categories,
                              const EmbeddingModel& model);

// Mean silhouette coefficient over all member words of all categories.
EvalResult silhouette_score(const CategorySet& categories,
                            const EmbeddingModel& model,
                            MissingWordPolicy policy = MissingWordPolicy::Strict);

struct McqAnswer {
  int chosen = -1;   // -1 when skipped in lenient mode
  bool tie = false;
  bool skipped = false;
};

// Argmax of cosine(target, choice); exact ties go to the lowest index and
// set the tie flag.
McqAnswer answer_mcq(const McqQuestion& question, const EmbeddingModel& model,
                     MissingWordPolicy policy = MissingWordPolicy::Strict);

EvalResult mcq_accuracy(const McqSet& questions, const EmbeddingModel& model,
                        MissingWordPolicy policy = MissingWordPolicy::Strict);

// Item frequency = number of documents containing at least one of the
// item's words. Returns the m least frequent items, ties kept in input
// order.
CategorySet select_least_frequent(const CategorySet& categories,
                                  const Corpus& corpus, std::size_t m);
McqSet select_least_frequent(const McqSet& questions, const Corpus& corpus,
                             std::size_t m);

// Tab-separated export: one `detail` row per item, then one `summary` row.
std::string format_eval_result(const EvalResult& result);
void write_eval_result(const EvalResult& result,
                       const std::filesystem::path& path);

}  // namespace embedlab
