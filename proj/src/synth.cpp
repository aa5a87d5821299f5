#include "embedlab/synth.hpp"

#include <algorithm>
#include <unordered_map>

#include "embedlab/error.hpp"
#include "embedlab/io.hpp"
#include "embedlab/rng.hpp"

namespace embedlab {

void SyntheticSpec::validate() const {
  if (topics < 2) throw DataError("synthetic spec: need at least 2 topics");
  if (words_per_topic < 1 || shared_words < 1 || docs_per_topic < 1 ||
      tokens_per_doc < 1) {
    throw DataError("synthetic spec: all counts must be >= 1");
  }
  if (!(alpha > 0.5 && alpha <= 1.0)) {
    throw DataError("synthetic spec: alpha must be in (0.5, 1]");
  }
  if (category_size < 2) {
    throw DataError("synthetic spec: category size must be >= 2");
  }
  if (topics < 4 && questions_per_topic > 0) {
    throw DataError("synthetic spec: questions need at least 4 topics");
  }
}

namespace {

// Base-26 id rendering keeps generated words purely alphabetic so they pass
// through tokenization unchanged.
std::string alpha26(std::size_t value, int width) {
  std::string s(static_cast<std::size_t>(width), 'a');
  for (int i = width - 1; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = static_cast<char>('a' + value % 26);
    value /= 26;
  }
  return s;
}

std::string topic_word(std::size_t topic, std::size_t index) {
  return "w" + alpha26(topic, 2) + alpha26(index, 4);
}

std::string shared_word(std::size_t index) { return "q" + alpha26(index, 4); }

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec) {
  spec.validate();
  if (spec.topics > 26 * 26 || spec.words_per_topic > 456976 ||
      spec.shared_words > 456976) {
    throw DataError("synthetic spec: counts exceed the word id space");
  }
  Rng rng(derive_seed(spec.seed, {hash_bytes("synth")}));

  std::vector<std::vector<std::string>> docs;
  docs.reserve(spec.topics * spec.docs_per_topic);
  // realized occurrence counts per (topic, word index)
  std::vector<std::unordered_map<std::size_t, std::uint64_t>> counts(
      spec.topics);
  for (std::size_t topic = 0; topic < spec.topics; ++topic) {
    for (std::size_t d = 0; d < spec.docs_per_topic; ++d) {
      std::vector<std::string> tokens;
      tokens.reserve(spec.tokens_per_doc);
      for (std::size_t t = 0; t < spec.tokens_per_doc; ++t) {
        if (rng.next_double() < spec.alpha) {
          const std::size_t index = rng.below(spec.words_per_topic);
          ++counts[topic][index];
          tokens.push_back(topic_word(topic, index));
        } else {
          tokens.push_back(shared_word(rng.below(spec.shared_words)));
        }
      }
      docs.push_back(std::move(tokens));
    }
  }

  SyntheticCorpus out;
  out.corpus = corpus_from_token_lists(
      std::move(docs), Stoplist::from_words({}).digest);

  // Task words per topic: least frequent realized words above the count
  // floor. Rare words maximize the out-of-domain discard range while still
  // being trainable.
  const std::size_t needed =
      spec.category_size + 2 * spec.questions_per_topic;
  std::vector<std::vector<std::string>> picks(spec.topics);
  for (std::size_t topic = 0; topic < spec.topics; ++topic) {
    std::vector<std::pair<std::uint64_t, std::size_t>> eligible;
    for (const auto& [index, count] : counts[topic]) {
      if (count >= spec.task_min_count) eligible.push_back({count, index});
    }
    if (eligible.size() < needed) {
      throw DataError(
          "synthetic spec: vocabulary exhausted; topic " +
          std::to_string(topic) + " realized only " +
          std::to_string(eligible.size()) + " words with count >= " +
          std::to_string(spec.task_min_count) + " but the task needs " +
          std::to_string(needed));
    }
    std::sort(eligible.begin(), eligible.end());
    for (std::size_t i = 0; i < needed; ++i) {
      picks[topic].push_back(topic_word(topic, eligible[i].second));
    }
  }

  for (std::size_t topic = 0; topic < spec.topics; ++topic) {
    CategorySet::Category cat;
    cat.name = "topic" + alpha26(topic, 2);
    cat.words.assign(picks[topic].begin(),
                     picks[topic].begin() +
                         static_cast<std::ptrdiff_t>(spec.category_size));
    out.categories.categories.push_back(std::move(cat));
  }

  for (std::size_t topic = 0; topic < spec.topics; ++topic) {
    for (std::size_t q = 0; q < spec.questions_per_topic; ++q) {
      McqQuestion question;
      question.target = picks[topic][spec.category_size + 2 * q];
      question.choices[0] = picks[topic][spec.category_size + 2 * q + 1];
      for (std::size_t d = 0; d < 3; ++d) {
        const std::size_t other = (topic + 1 + d) % spec.topics;
        question.choices[d + 1] =
            picks[other][spec.category_size + 2 * q + (d % 2)];
      }
      question.answer = 0;
      out.questions.questions.push_back(std::move(question));
    }
  }

  return out;
}

void write_category_file(const CategorySet& categories,
                         const std::filesystem::path& path) {
  std::string out;
  for (const auto& cat : categories.categories) {
    for (const auto& word : cat.words) {
      out += cat.name + "\t" + word + "\n";
    }
  }
  atomic_write(path, out);
}

void write_mcq_file(const McqSet& questions,
                    const std::filesystem::path& path) {
  std::string out;
  for (const auto& q : questions.questions) {
    out += q.target;
    for (const auto& choice : q.choices) out += "\t" + choice;
    out += "\n";
  }
  atomic_write(path, out);
}

}  // namespace embedlab
