#include "embedlab/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "embedlab/error.hpp"
#include "embedlab/io.hpp"

namespace embedlab {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < bytes.size()) {
    std::size_t nl = bytes.find('\n', start);
    if (nl == std::string::npos) nl = bytes.size();
    std::string line = bytes.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
    start = nl + 1;
  }
  return lines;
}

}  // namespace

CategorySet CategorySet::load(const std::filesystem::path& path,
                              std::size_t expected_size) {
  CategorySet set;
  std::unordered_map<std::string, std::size_t> by_name;
  std::unordered_set<std::string> seen_words;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    const auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected `category<TAB>word`");
    }
    if (!seen_words.insert(fields[1]).second) {
      throw DataError(path.string() + ": word in two categories: " +
                      fields[1]);
    }
    auto [it, inserted] = by_name.try_emplace(fields[0], set.categories.size());
    if (inserted) set.categories.push_back({fields[0], {}});
    set.categories[it->second].words.push_back(fields[1]);
  }
  if (set.categories.empty()) {
    throw DataError("empty category file: " + path.string());
  }
  for (const auto& cat : set.categories) {
    if (expected_size > 0 && cat.words.size() != expected_size) {
      throw DataError(path.string() + ": category " + cat.name + " has " +
                      std::to_string(cat.words.size()) + " words, expected " +
                      std::to_string(expected_size));
    }
    if (expected_size == 0 && cat.words.size() < 2) {
      throw DataError(path.string() + ": category " + cat.name +
                      " needs at least 2 words");
    }
  }
  return set;
}

std::vector<std::string> CategorySet::all_words() const {
  std::vector<std::string> words;
  for (const auto& cat : categories) {
    words.insert(words.end(), cat.words.begin(), cat.words.end());
  }
  return words;
}

std::vector<std::string> McqQuestion::all_words() const {
  std::vector<std::string> words{target};
  words.insert(words.end(), choices.begin(), choices.end());
  return words;
}

McqSet McqSet::load(const std::filesystem::path& path) {
  McqSet set;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    const auto fields = split_tabs(line);
    if (fields.size() != 5 ||
        std::any_of(fields.begin(), fields.end(),
                    [](const std::string& f) { return f.empty(); })) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected `target<TAB>correct<TAB>d1<TAB>d2<TAB>d3`");
    }
    McqQuestion q;
    q.target = fields[0];
    for (int i = 0; i < 4; ++i) q.choices[i] = fields[i + 1];
    q.answer = 0;
    std::unordered_set<std::string> uniq(q.choices.begin(), q.choices.end());
    if (uniq.size() != 4) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": duplicate choices");
    }
    set.questions.push_back(std::move(q));
  }
  if (set.questions.empty()) {
    throw DataError("empty question file: " + path.string());
  }
  return set;
}

std::vector<std::string> McqSet::all_words() const {
  std::vector<std::string> words;
  for (const auto& q : questions) {
    const auto qw = q.all_words();
    words.insert(words.end(), qw.begin(), qw.end());
  }
  return words;
}

double cosine(const Eigen::Ref<const Eigen::RowVectorXd>& v1,
              const Eigen::Ref<const Eigen::RowVectorXd>& v2) {
  if (v1.size() != v2.size()) {
    throw DataError("cosine: dimension mismatch");
  }
  const double n1 = v1.norm();
  const double n2 = v2.norm();
  if (n1 == 0.0 || n2 == 0.0) {
    throw DataError("cosine: zero-norm vector (untrained or degenerate word)");
  }
  return v1.dot(v2) / (n1 * n2);
}

namespace {

// Distance matrix over the task words that resolve to vectors. Words missing
// from the model (lenient mode) get no row and score -1.
struct TaskVectors {
  std::vector<std::vector<std::string>> words;     // per category
  std::vector<std::vector<int>> row_of;            // -1 when missing
  Eigen::MatrixXd distance;                        // pairwise 1 - cosine
  std::size_t missing = 0;

  TaskVectors(const CategorySet& categories, const EmbeddingModel& model,
              MissingWordPolicy policy) {
    if (categories.categories.size() < 2) {
      throw DataError("silhouette needs at least 2 categories");
    }
    std::vector<Eigen::RowVectorXd> rows;
    for (const auto& cat : categories.categories) {
      words.push_back(cat.words);
      auto& ids = row_of.emplace_back();
      for (const auto& word : cat.words) {
        const auto idx = model.vocab.find(word);
        const bool zero =
            idx && model.vectors.row(*idx).norm() == 0.0;
        if (!idx || zero) {
          if (policy == MissingWordPolicy::Strict) {
            throw DataError(zero ? "degenerate (zero) vector for task word: " +
                                       word
                                 : "task word missing from model: " + word);
          }
          warn("task word " + std::string(idx ? "degenerate" : "missing") +
               ", counted against the score: " + word);
          ids.push_back(-1);
          ++missing;
          continue;
        }
        ids.push_back(static_cast<int>(rows.size()));
        rows.push_back(model.vectors.row(*idx));
      }
    }
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd unit(n, model.vectors.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
      unit.row(i) = rows[static_cast<std::size_t>(i)].normalized();
    }
    distance = (1.0 - (unit * unit.transpose()).array()).matrix();
  }
};

double coefficient_for(const TaskVectors& tv, std::size_t cat,
                       std::size_t member) {
  const int row = tv.row_of[cat][member];
  if (row < 0) return -1.0;
  // a: mean distance to the other members of the own category
  double a_sum = 0.0;
  std::size_t a_count = 0;
  for (std::size_t j = 0; j < tv.row_of[cat].size(); ++j) {
    if (j == member || tv.row_of[cat][j] < 0) continue;
    a_sum += tv.distance(row, tv.row_of[cat][j]);
    ++a_count;
  }
  if (a_count == 0) return -1.0;  // no within-category evidence left
  const double a = a_sum / static_cast<double>(a_count);
  // b: smallest mean distance to any other category
  double b = std::numeric_limits<double>::infinity();
  for (std::size_t other = 0; other < tv.row_of.size(); ++other) {
    if (other == cat) continue;
    double sum = 0.0;
    std::size_t count = 0;
    for (int other_row : tv.row_of[other]) {
      if (other_row < 0) continue;
      sum += tv.distance(row, other_row);
      ++count;
    }
    if (count > 0) b = std::min(b, sum / static_cast<double>(count));
  }
  if (!std::isfinite(b)) return -1.0;  // every neighbour category vanished
  const double denom = std::max(a, b);
  if (denom == 0.0) return 0.0;
  return (b - a) / denom;
}

}  // namespace

double silhouette_coefficient(const std::string& word,
                              const CategorySet& categories,
                              const EmbeddingModel& model) {
  const TaskVectors tv(categories, model, MissingWordPolicy::Strict);
  for (std::size_t cat = 0; cat < tv.words.size(); ++cat) {
    for (std::size_t member = 0; member < tv.words[cat].size(); ++member) {
      if (tv.words[cat][member] == word) {
        return coefficient_for(tv, cat, member);
      }
    }
  }
  throw DataError("word not in any category: " + word);
}

EvalResult silhouette_score(const CategorySet& categories,
                            const EmbeddingModel& model,
                            MissingWordPolicy policy) {
  const TaskVectors tv(categories, model, policy);
  EvalResult result;
  result.task = EvalResult::Task::Categorization;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t cat = 0; cat < tv.words.size(); ++cat) {
    for (std::size_t member = 0; member < tv.words[cat].size(); ++member) {
      const double s = coefficient_for(tv, cat, member);
      const bool was_missing = tv.row_of[cat][member] < 0;
      result.items.push_back({tv.words[cat][member],
                              categories.categories[cat].name, s, false,
                              was_missing});
      if (was_missing) ++result.skipped;
      sum += s;
      ++count;
    }
  }
  result.score = sum / static_cast<double>(count);
  return result;
}

McqAnswer answer_mcq(const McqQuestion& question, const EmbeddingModel& model,
                     MissingWordPolicy policy) {
  const auto lookup =
      [&](const std::string& word) -> std::optional<Eigen::Index> {
    const auto idx = model.vocab.find(word);
    if (!idx || model.vectors.row(*idx).norm() == 0.0) {
      if (policy == MissingWordPolicy::Strict) {
        throw DataError(!idx ? "task word missing from model: " + word
                             : "degenerate (zero) vector for task word: " +
                                   word);
      }
      return std::nullopt;
    }
    return static_cast<Eigen::Index>(*idx);
  };
  McqAnswer answer;
  const auto target = lookup(question.target);
  if (!target) {
    answer.skipped = true;
    return answer;
  }
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    const auto choice = lookup(question.choices[i]);
    if (!choice) {
      answer.skipped = true;
      return answer;
    }
    const double sim =
        cosine(model.vectors.row(*target), model.vectors.row(*choice));
    if (sim > best) {
      best = sim;
      answer.chosen = i;
      answer.tie = false;
    } else if (sim == best) {
      answer.tie = true;  // kept the lowest index
    }
  }
  return answer;
}

EvalResult mcq_accuracy(const McqSet& questions, const EmbeddingModel& model,
                        MissingWordPolicy policy) {
  if (questions.questions.empty()) {
    throw DataError("mcq_accuracy: no questions");
  }
  EvalResult result;
  result.task = EvalResult::Task::Mcq;
  std::size_t correct = 0;
  for (const auto& q : questions.questions) {
    const McqAnswer a = answer_mcq(q, model, policy);
    if (a.skipped) {
      warn("question skipped (missing word), counted incorrect: " + q.target);
      ++result.skipped;
      result.items.push_back({q.target, "", 0.0, false, true});
      continue;
    }
    const bool is_correct = a.chosen == q.answer;
    if (is_correct) ++correct;
    result.items.push_back({q.target,
                            q.choices[static_cast<std::size_t>(a.chosen)],
                            is_correct ? 1.0 : 0.0, a.tie, false});
  }
  result.score =
      static_cast<double>(correct) /
      static_cast<double>(questions.questions.size());
  return result;
}

namespace {

template <typename Set, typename WordsOf>
std::vector<std::size_t> least_frequent_order(const Set& items,
                                              const Corpus& corpus,
                                              std::size_t m,
                                              WordsOf words_of) {
  if (m > items.size()) {
    throw DataError("select_least_frequent: m=" + std::to_string(m) +
                    " exceeds item count " + std::to_string(items.size()));
  }
  std::vector<std::size_t> freq(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    freq[i] = doc_frequency(corpus, words_of(items[i])).documents.size();
  }
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return freq[a] < freq[b];
                   });
  order.resize(m);
  std::sort(order.begin(), order.end());  // keep original item order
  return order;
}

}  // namespace

CategorySet select_least_frequent(const CategorySet& categories,
                                  const Corpus& corpus, std::size_t m) {
  const auto order = least_frequent_order(
      categories.categories, corpus, m,
      [](const CategorySet::Category& c) { return c.words; });
  CategorySet out;
  for (std::size_t i : order) out.categories.push_back(categories.categories[i]);
  return out;
}

McqSet select_least_frequent(const McqSet& questions, const Corpus& corpus,
                             std::size_t m) {
  const auto order = least_frequent_order(
      questions.questions, corpus, m,
      [](const McqQuestion& q) { return q.all_words(); });
  McqSet out;
  for (std::size_t i : order) out.questions.push_back(questions.questions[i]);
  return out;
}

std::string to_string(EvalResult::Task task) {
  return task == EvalResult::Task::Categorization ? "categorization" : "mcq";
}

std::string format_eval_result(const EvalResult& result) {
  std::string out;
  char buf[64];
  for (const auto& item : result.items) {
    std::snprintf(buf, sizeof(buf), "%.17g", item.value);
    out += "detail\t" + item.id + "\t" + item.group + "\t" + buf + "\t" +
           (item.tie ? "1" : "0") + "\t" + (item.skipped ? "1" : "0") + "\n";
  }
  std::snprintf(buf, sizeof(buf), "%.17g", result.score);
  out += "summary\t" + to_string(result.task) + "\t" + buf + "\t" +
         std::to_string(result.items.size()) + "\t" +
         std::to_string(result.skipped) + "\n";
  return out;
}

void write_eval_result(const EvalResult& result,
                       const std::filesystem::path& path) {
  atomic_write(path, format_eval_result(result));
}

}  // namespace embedlab
