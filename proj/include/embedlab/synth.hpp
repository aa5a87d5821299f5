#pragma once

#include <cstdint>

#include "embedlab/corpus.hpp"
#include "embedlab/eval.hpp"

namespace embedlab {

// Planted-topic corpus: every document belongs to one topic and draws each
// token from its topic's exclusive vocabulary with probability alpha, else
// from the shared background vocabulary. Task files reference only words
// that actually occur in the generated documents.
struct SyntheticSpec {
  std::size_t topics = 10;
  std::size_t words_per_topic = 1000;
  std::size_t shared_words = 500;
  std::size_t docs_per_topic = 200;
  std::size_t tokens_per_doc = 60;
  double alpha = 0.9;  // topic purity, in (0.5, 1]
  std::uint64_t seed = 1;
  // Task construction: per topic, one category of `category_size` words and
  // `questions_per_topic` questions, built from the least frequent realized
  // words with at least `task_min_count` occurrences.
  std::size_t category_size = 10;
  std::size_t questions_per_topic = 2;
  std::uint64_t task_min_count = 3;

  void validate() const;
};

struct SyntheticCorpus {
  Corpus corpus;            // documents in topic-major order
  CategorySet categories;   // one category per topic
  McqSet questions;         // same-topic target/correct, cross-topic distractors
};

SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec);

void write_category_file(const CategorySet& categories,
                         const std::filesystem::path& path);
void write_mcq_file(const McqSet& questions,
                    const std::filesystem::path& path);

}  // namespace embedlab
