#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "embedlab/corpus.hpp"

namespace embedlab {

enum class DiscardMethod { Random, OutOfDomain };

std::string to_string(DiscardMethod m);
DiscardMethod discard_method_from_string(const std::string& name);

// A size-n selection of parent documents. `retained` holds parent document
// ids, sorted ascending; materialize with to_corpus() (ids are re-assigned
// densely, parent order preserved).
struct Subcorpus {
  const Corpus* parent = nullptr;
  std::vector<std::uint32_t> retained;
  DiscardMethod method = DiscardMethod::Random;
  std::size_t target_size = 0;
  std::uint64_t seed = 0;
  std::size_t repair_swaps = 0;

  Corpus to_corpus() const;
};

// Number of documents containing at least one test word; the smallest n the
// out-of-domain method can reach.
std::size_t min_specific_size(const Corpus& corpus,
                              const std::vector<std::string>& test_words);

// Uniform size-n selection, then a repair loop: while some corpus-present
// test word is missing from the selection, swap a uniformly chosen retained
// document for a uniformly chosen discarded document containing it. The loop
// runs to a fixed point (a swap can evict another word's only carrier) and
// aborts after 100 * |test_words| swaps, which signals that no covering
// subset is reachable at this size.
Subcorpus random_discard(const Corpus& corpus, std::size_t n,
                         const std::vector<std::string>& test_words,
                         std::uint64_t seed);

// Keeps every document containing a test word; fills up to n with a uniform
// sample of the remaining (out-of-domain) documents.
Subcorpus out_of_domain_discard(const Corpus& corpus, std::size_t n,
                                const std::vector<std::string>& test_words,
                                std::uint64_t seed);

// Manifest: retained parent document ids, one per line.
void write_manifest(const Subcorpus& subcorpus,
                    const std::filesystem::path& path);
std::vector<std::uint32_t> read_manifest(const std::filesystem::path& path);

}  // namespace embedlab
