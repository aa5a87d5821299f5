#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/SparseCore>

namespace embedlab {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Word list applied at tokenization time. The digest identifies the list
// content (order and comments do not matter), so corpora record exactly
// which stoplist produced them.
struct Stoplist {
  std::unordered_set<std::string> words;
  std::string digest;

  static Stoplist from_words(std::vector<std::string> words);
  // One lowercase word per line; blank lines and '#' comments are skipped.
  static Stoplist load(const std::filesystem::path& path);
  // Bundled English list (see data/stopwords_en.txt).
  static const Stoplist& builtin();

  bool contains(const std::string& w) const { return words.count(w) > 0; }
};

struct RawDocument {
  std::uint32_t id = 0;
  std::string text;
};

struct TokenizedDocument {
  std::uint32_t id = 0;
  std::vector<std::string> tokens;  // lowercase, alphabetic, stoplist-free
};

struct Corpus {
  std::vector<TokenizedDocument> documents;
  std::string stoplist_digest;
  std::size_t dropped_empty = 0;  // documents with no surviving tokens

  std::size_t size() const { return documents.size(); }
  std::uint64_t total_tokens() const;
};

enum class CorpusFormat { Lines, Dir };

// Maximal runs of alphabetic code points, lowercased, stoplist removed.
// Total: bytes that are not valid UTF-8 simply break tokens.
std::vector<std::string> tokenize(std::string_view text,
                                  const Stoplist& stoplist);

// `lines`: one document per LF-separated line. `dir`: one document per .txt
// file, lexicographic filename order. Documents left empty by tokenization
// are dropped (counted in dropped_empty); zero surviving documents is an
// error, as is invalid UTF-8 (reported with its byte offset).
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   const Stoplist& stoplist = Stoplist::builtin());

// Builds a corpus from already-clean token sequences (synthetic corpora,
// subcorpus materialization, tests). Empty sequences are dropped and
// counted; ids are assigned densely in input order.
Corpus corpus_from_token_lists(std::vector<std::vector<std::string>> docs,
                               std::string stoplist_digest);

// One document per line, tokens joined by single spaces (`lines` format).
void write_corpus_lines(const Corpus& corpus,
                        const std::filesystem::path& path);

struct Vocabulary {
  std::vector<std::string> words;  // index -> word, first-appearance order
  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<std::uint64_t> corpus_frequency;    // total occurrences
  std::vector<std::uint32_t> document_frequency;  // documents containing it

  std::size_t size() const { return words.size(); }
  std::optional<std::uint32_t> find(const std::string& w) const {
    auto it = index.find(w);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

// Sparse word-by-document occurrence counts. Rows are words in
// first-appearance order, columns are documents; values are integral and
// no explicit zeros are stored.
struct CountMatrix {
  Vocabulary vocab;
  SparseRowMatrix counts;
};

CountMatrix build_count_matrix(const Corpus& corpus);

struct DocFrequency {
  // Per queried word: number of documents containing it (0 when absent).
  std::unordered_map<std::string, std::size_t> counts;
  // Sorted ids of documents containing at least one queried word.
  std::vector<std::uint32_t> documents;
};

DocFrequency doc_frequency(const Corpus& corpus,
                           const std::vector<std::string>& words);

// Dedupes and sorts; the canonical shape for test-word sets.
std::vector<std::string> unique_sorted(std::vector<std::string> words);

}  // namespace embedlab
