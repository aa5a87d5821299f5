#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <unordered_set>

#include "embedlab/error.hpp"
#include "embedlab/subset.hpp"
#include "helpers.hpp"

using namespace embedlab;
using test::TmpDir;

namespace {

bool covers(const Corpus& corpus, const Subcorpus& sub,
            const std::vector<std::string>& words) {
  std::unordered_set<std::string> need;
  for (const auto& w : words) {
    if (doc_frequency(corpus, {w}).counts.at(w) > 0) need.insert(w);
  }
  for (std::uint32_t d : sub.retained) {
    for (const auto& t : corpus.documents[d].tokens) need.erase(t);
  }
  return need.empty();
}

}  // namespace

TEST_CASE("min_specific_size counts carrier documents") {
  const Corpus c = corpus_from_token_lists({{"a"}, {"b"}, {"c"}}, "test");
  CHECK(min_specific_size(c, {"a", "b"}) == 2);
  CHECK(min_specific_size(c, {"zz"}) == 0);
}

TEST_CASE("min_specific_size matches doc_frequency on random corpora") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Corpus c = test::random_corpus(80, 2, 20, 30, 100 + seed);
    const std::vector<std::string> words{"w1", "w5", "w9", "w29"};
    CHECK(min_specific_size(c, words) ==
          doc_frequency(c, words).documents.size());
  }
}

TEST_CASE("random_discard basics") {
  const Corpus c = corpus_from_token_lists(
      {{"x"}, {"y"}, {"z"}, {"needle", "x"}, {"y", "z"}}, "test");

  SUBCASE("n equal to corpus size keeps everything with zero swaps") {
    const Subcorpus sub = random_discard(c, 5, {"needle"}, 7);
    CHECK(sub.retained == std::vector<std::uint32_t>{0, 1, 2, 3, 4});
    CHECK(sub.repair_swaps == 0);
  }

  SUBCASE("sole carrier is always retained, any seed") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const Subcorpus sub = random_discard(c, 2, {"needle"}, seed);
      CHECK(sub.retained.size() == 2);
      CHECK(std::find(sub.retained.begin(), sub.retained.end(), 3u) !=
            sub.retained.end());
    }
  }

  SUBCASE("n out of range") {
    CHECK_THROWS_AS(random_discard(c, 6, {}, 1), DataError);
    CHECK_THROWS_AS(random_discard(c, 0, {}, 1), DataError);
  }

  SUBCASE("infeasible coverage is detected") {
    // two words whose only carriers are distinct documents, n = 1
    const Corpus c2 =
        corpus_from_token_lists({{"alpha"}, {"beta"}, {"x"}}, "test");
    CHECK_THROWS_WITH_AS(random_discard(c2, 1, {"alpha", "beta"}, 3),
                         doctest::Contains("cannot cover"), DataError);
  }
}

TEST_CASE("random_discard covers all present test words over many seeds") {
  const Corpus c = test::random_corpus(200, 3, 20, 60, 77);
  const std::vector<std::string> words{"w0", "w7", "w13", "w59", "w31"};
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Subcorpus sub = random_discard(c, 30, words, seed);
    REQUIRE(sub.retained.size() == 30);
    CHECK(covers(c, sub, words));
  }
}

TEST_CASE("out_of_domain_discard basics") {
  // test words live in docs 1 and 3
  const Corpus c = corpus_from_token_lists(
      {{"x"}, {"needle"}, {"y"}, {"pin", "x"}, {"z"}}, "test");
  const std::vector<std::string> words{"needle", "pin"};

  SUBCASE("forced retention plus one filler") {
    const Subcorpus sub = out_of_domain_discard(c, 3, words, 5);
    REQUIRE(sub.retained.size() == 3);
    CHECK(std::find(sub.retained.begin(), sub.retained.end(), 1u) !=
          sub.retained.end());
    CHECK(std::find(sub.retained.begin(), sub.retained.end(), 3u) !=
          sub.retained.end());
  }

  SUBCASE("boundary n equals the specific document set") {
    const Subcorpus sub = out_of_domain_discard(c, 2, words, 5);
    CHECK(sub.retained == std::vector<std::uint32_t>{1, 3});
  }

  SUBCASE("below the minimum errors with the computed minimum") {
    CHECK_THROWS_WITH_AS(out_of_domain_discard(c, 1, words, 5),
                         doctest::Contains("minimum specific size 2"),
                         DataError);
  }
}

TEST_CASE("out_of_domain_discard never removes a carrier over many seeds") {
  const Corpus c = test::random_corpus(200, 3, 20, 60, 78);
  const std::vector<std::string> words{"w2", "w17", "w23"};
  const DocFrequency df = doc_frequency(c, words);
  const std::set<std::uint32_t> carriers(df.documents.begin(),
                                         df.documents.end());
  const std::size_t n = carriers.size() + 20;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Subcorpus sub = out_of_domain_discard(c, n, words, seed);
    REQUIRE(sub.retained.size() == n);
    std::set<std::uint32_t> retained(sub.retained.begin(),
                                     sub.retained.end());
    for (std::uint32_t carrier : carriers) {
      CHECK(retained.count(carrier) == 1);
    }
  }
}

TEST_CASE("both methods are deterministic in all inputs") {
  const Corpus c = test::random_corpus(120, 3, 15, 40, 9);
  const std::vector<std::string> words{"w1", "w2"};
  const Subcorpus r1 = random_discard(c, 40, words, 123);
  const Subcorpus r2 = random_discard(c, 40, words, 123);
  CHECK(r1.retained == r2.retained);
  CHECK(r1.repair_swaps == r2.repair_swaps);
  const Subcorpus o1 = out_of_domain_discard(c, 80, words, 123);
  const Subcorpus o2 = out_of_domain_discard(c, 80, words, 123);
  CHECK(o1.retained == o2.retained);
  // a different seed moves at least something, overwhelmingly likely
  const Subcorpus r3 = random_discard(c, 40, words, 124);
  CHECK(r1.retained != r3.retained);
}

TEST_CASE("subcorpus materializes with dense ids and parent order") {
  const Corpus c =
      corpus_from_token_lists({{"a"}, {"b"}, {"c"}, {"d"}}, "digest1");
  Subcorpus sub;
  sub.parent = &c;
  sub.retained = {1, 3};
  const Corpus view = sub.to_corpus();
  REQUIRE(view.size() == 2);
  CHECK(view.documents[0].id == 0);
  CHECK(view.documents[0].tokens == std::vector<std::string>{"b"});
  CHECK(view.documents[1].id == 1);
  CHECK(view.documents[1].tokens == std::vector<std::string>{"d"});
  CHECK(view.stoplist_digest == "digest1");
}

TEST_CASE("manifest round trip") {
  TmpDir tmp("manifest");
  const Corpus c = test::random_corpus(50, 2, 8, 20, 31);
  const Subcorpus sub = random_discard(c, 10, {"w3"}, 55);
  write_manifest(sub, tmp.file("m.txt"));
  CHECK(read_manifest(tmp.file("m.txt")) == sub.retained);
}
