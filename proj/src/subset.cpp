#include "embedlab/subset.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "embedlab/error.hpp"
#include "embedlab/io.hpp"
#include "embedlab/rng.hpp"

namespace embedlab {

std::string to_string(DiscardMethod m) {
  return m == DiscardMethod::Random ? "random" : "ood";
}

DiscardMethod discard_method_from_string(const std::string& name) {
  if (name == "random") return DiscardMethod::Random;
  if (name == "ood" || name == "out_of_domain") return DiscardMethod::OutOfDomain;
  throw DataError("unknown discard method: " + name +
                  " (expected random or ood)");
}

Corpus Subcorpus::to_corpus() const {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(retained.size());
  for (std::uint32_t id : retained) {
    docs.push_back(parent->documents.at(id).tokens);
  }
  return corpus_from_token_lists(std::move(docs), parent->stoplist_digest);
}

namespace {

void check_size(const Corpus& corpus, std::size_t n) {
  if (n < 1 || n > corpus.size()) {
    throw DataError("subcorpus size " + std::to_string(n) +
                    " out of range [1, " + std::to_string(corpus.size()) + "]");
  }
}

// Word index over the test words only; documents become small index sets.
struct TestWordIndex {
  std::vector<std::string> words;                     // sorted unique, present
  std::vector<std::vector<std::uint32_t>> doc_words;  // per doc, sorted
  std::vector<std::vector<std::uint32_t>> carriers;   // per word, doc ids

  TestWordIndex(const Corpus& corpus, const std::vector<std::string>& query) {
    std::unordered_map<std::string, std::uint32_t> id;
    for (const auto& w : unique_sorted(query)) {
      // present-in-corpus filter happens lazily below
      id.emplace(w, 0);
    }
    doc_words.resize(corpus.size());
    std::unordered_map<std::string, std::vector<std::uint32_t>> found;
    for (const auto& doc : corpus.documents) {
      std::unordered_set<std::string> seen;
      for (const auto& token : doc.tokens) {
        if (id.count(token) && seen.insert(token).second) {
          found[token].push_back(doc.id);
        }
      }
    }
    std::vector<std::string> present;
    for (const auto& [w, _] : id) {
      if (found.count(w)) present.push_back(w);
    }
    std::sort(present.begin(), present.end());
    words = std::move(present);
    carriers.resize(words.size());
    for (std::uint32_t w = 0; w < words.size(); ++w) {
      carriers[w] = found[words[w]];
      for (std::uint32_t d : carriers[w]) doc_words[d].push_back(w);
    }
  }
};

// Partial Fisher-Yates: the first n entries of a shuffled identity become
// the sample.
std::vector<std::uint32_t> uniform_subset(std::size_t universe, std::size_t n,
                                          Rng& rng) {
  std::vector<std::uint32_t> ids(universe);
  for (std::size_t i = 0; i < universe; ++i) {
    ids[i] = static_cast<std::uint32_t>(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng.below(universe - i);
    std::swap(ids[i], ids[j]);
  }
  ids.resize(n);
  return ids;
}

}  // namespace

std::size_t min_specific_size(const Corpus& corpus,
                              const std::vector<std::string>& test_words) {
  return doc_frequency(corpus, test_words).documents.size();
}

Subcorpus random_discard(const Corpus& corpus, std::size_t n,
                         const std::vector<std::string>& test_words,
                         std::uint64_t seed) {
  check_size(corpus, n);
  Rng rng(seed);
  TestWordIndex index(corpus, test_words);

  std::vector<std::uint32_t> retained = uniform_subset(corpus.size(), n, rng);
  std::vector<char> is_retained(corpus.size(), 0);
  for (std::uint32_t d : retained) is_retained[d] = 1;

  std::vector<std::uint32_t> coverage(index.words.size(), 0);
  for (std::uint32_t d : retained) {
    for (std::uint32_t w : index.doc_words[d]) ++coverage[w];
  }

  const auto first_missing = [&]() -> std::size_t {
    for (std::size_t w = 0; w < coverage.size(); ++w) {
      if (coverage[w] == 0) return w;
    }
    return coverage.size();
  };

  const std::size_t max_swaps = 100 * std::max<std::size_t>(1, index.words.size());
  std::size_t swaps = 0;
  for (;;) {
    const std::size_t missing = first_missing();
    if (missing == coverage.size()) break;
    if (swaps >= max_swaps) {
      throw DataError("random_discard: cannot cover all test words with " +
                      std::to_string(n) + " documents (gave up after " +
                      std::to_string(swaps) + " swaps)");
    }
    // Discarded carriers of the missing word.
    std::vector<std::uint32_t> donors;
    for (std::uint32_t d : index.carriers[missing]) {
      if (!is_retained[d]) donors.push_back(d);
    }
    if (donors.empty()) {
      throw InternalError("random_discard: missing word has no carrier");
    }
    const std::uint32_t incoming = donors[rng.below(donors.size())];
    const std::size_t out_pos = rng.below(retained.size());
    const std::uint32_t outgoing = retained[out_pos];

    retained[out_pos] = incoming;
    is_retained[outgoing] = 0;
    is_retained[incoming] = 1;
    for (std::uint32_t w : index.doc_words[outgoing]) --coverage[w];
    for (std::uint32_t w : index.doc_words[incoming]) ++coverage[w];
    ++swaps;
  }

  std::sort(retained.begin(), retained.end());
  Subcorpus sub;
  sub.parent = &corpus;
  sub.retained = std::move(retained);
  sub.method = DiscardMethod::Random;
  sub.target_size = n;
  sub.seed = seed;
  sub.repair_swaps = swaps;
  return sub;
}

Subcorpus out_of_domain_discard(const Corpus& corpus, std::size_t n,
                                const std::vector<std::string>& test_words,
                                std::uint64_t seed) {
  check_size(corpus, n);
  Rng rng(seed);
  const DocFrequency df = doc_frequency(corpus, test_words);
  const std::vector<std::uint32_t>& specific = df.documents;
  if (n < specific.size()) {
    throw DataError("out_of_domain_discard: n=" + std::to_string(n) +
                    " is below the minimum specific size " +
                    std::to_string(specific.size()));
  }
  std::vector<char> is_specific(corpus.size(), 0);
  for (std::uint32_t d : specific) is_specific[d] = 1;
  std::vector<std::uint32_t> pool;
  for (std::uint32_t d = 0; d < corpus.size(); ++d) {
    if (!is_specific[d]) pool.push_back(d);
  }

  std::vector<std::uint32_t> retained = specific;
  for (std::uint32_t pick :
       uniform_subset(pool.size(), n - specific.size(), rng)) {
    retained.push_back(pool[pick]);
  }
  std::sort(retained.begin(), retained.end());

  Subcorpus sub;
  sub.parent = &corpus;
  sub.retained = std::move(retained);
  sub.method = DiscardMethod::OutOfDomain;
  sub.target_size = n;
  sub.seed = seed;
  sub.repair_swaps = 0;
  return sub;
}

void write_manifest(const Subcorpus& subcorpus,
                    const std::filesystem::path& path) {
  std::string out;
  for (std::uint32_t id : subcorpus.retained) {
    out += std::to_string(id);
    out += '\n';
  }
  atomic_write(path, out);
}

std::vector<std::uint32_t> read_manifest(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  std::vector<std::uint32_t> ids;
  std::size_t start = 0;
  std::size_t line_no = 1;
  while (start < bytes.size()) {
    std::size_t nl = bytes.find('\n', start);
    if (nl == std::string::npos) nl = bytes.size();
    const std::string line = bytes.substr(start, nl - start);
    if (!line.empty()) {
      try {
        ids.push_back(static_cast<std::uint32_t>(std::stoul(line)));
      } catch (const std::exception&) {
        throw DataError("manifest " + path.string() + ": bad id on line " +
                        std::to_string(line_no));
      }
    }
    start = nl + 1;
    ++line_no;
  }
  return ids;
}

}  // namespace embedlab
