#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "clr/text/corpus.hpp"
#include "clr/text/tokenizer.hpp"
#include "clr/text/vocab.hpp"

using namespace clr;

TEST_CASE("tokenize basic sentences") {
  CHECK(tokenize("The cat sat.") == std::vector<std::string>{"the", "cat", "sat", "."});
  CHECK(tokenize("").empty());
  CHECK(tokenize("don't  stop") == std::vector<std::string>{"don", "'", "t", "stop"});
}

TEST_CASE("tokenize handles unicode whitespace and non-ascii words") {
  CHECK(tokenize("a b") == std::vector<std::string>{"a", "b"});
  CHECK(tokenize("a b　c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(tokenize("café bar") == std::vector<std::string>{"café", "bar"});
  CHECK(tokenize("  spaced\tout \n") == std::vector<std::string>{"spaced", "out"});
}

TEST_CASE("tokenize splits every ascii punctuation mark") {
  CHECK(tokenize("wait, (really)?") ==
        std::vector<std::string>{"wait", ",", "(", "really", ")", "?"});
  for (const auto& tok : tokenize("a,b.c;d!e")) CHECK(!tok.empty());
}

TEST_CASE("build_vocab counts, thresholds and caps") {
  const std::vector<std::vector<std::string>> corpus = {{"a", "b"}, {"a"}};
  const auto v1 = Vocabulary::build(corpus, 1, 10);
  CHECK(v1.size() == 7);
  CHECK(v1.contains("a"));
  CHECK(v1.contains("b"));

  const auto v2 = Vocabulary::build(corpus, 2, 10);
  CHECK(v2.size() == 6);
  CHECK(v2.contains("a"));
  CHECK(!v2.contains("b"));
}

TEST_CASE("build_vocab breaks frequency ties lexicographically") {
  // "z" and "m" both appear once; with room for one more token the
  // lexicographically smaller "m" must survive.
  const std::vector<std::vector<std::string>> corpus = {{"a", "a", "z", "m"}};
  const auto v = Vocabulary::build(corpus, 1, 7);
  CHECK(v.size() == 7);
  CHECK(v.contains("a"));
  CHECK(v.contains("m"));
  CHECK(!v.contains("z"));
}

TEST_CASE("build_vocab rejects an empty corpus") {
  CHECK_THROWS_WITH_AS(Vocabulary::build({}, 1, 10), "empty corpus", std::invalid_argument);
}

TEST_CASE("specials occupy ids 0 through 4") {
  const auto v = Vocabulary::build({{"x"}}, 1, 10);
  CHECK(v.token(0) == "[PAD]");
  CHECK(v.token(1) == "[UNK]");
  CHECK(v.token(2) == "[CLS]");
  CHECK(v.token(3) == "[MASK]");
  CHECK(v.token(4) == "[DEL]");
  CHECK(v.id("[MASK]") == Vocabulary::kMask);
}

TEST_CASE("encode maps unknown tokens to UNK and round-trips the rest") {
  const auto v = Vocabulary::build({{"a", "b", "c"}}, 1, 20);
  CHECK(v.encode({"a"}) == TokenIds{v.id("a")});
  CHECK(v.encode({"zzz-unseen"}) == TokenIds{Vocabulary::kUnk});

  const std::vector<std::string> tokens = {"c", "a", "b", "a"};
  CHECK(v.decode(v.encode(tokens)) == tokens);
  CHECK(v.encode(tokens).size() == tokens.size());
}

TEST_CASE("vocabulary files round-trip byte-identically") {
  const auto dir = std::filesystem::temp_directory_path() / "clr_vocab_test";
  std::filesystem::create_directories(dir);
  const auto p1 = (dir / "v1.txt").string();
  const auto p2 = (dir / "v2.txt").string();

  const std::vector<std::vector<std::string>> corpus = {{"pear", "plum", "fig", "plum"}};
  Vocabulary::build(corpus, 1, 64).save(p1);
  Vocabulary::build(corpus, 1, 64).save(p2);

  std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
  std::string s1((std::istreambuf_iterator<char>(f1)), {});
  std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);
  CHECK(!s1.empty());

  const auto loaded = Vocabulary::load(p1);
  CHECK(loaded.size() == 8);
  CHECK(loaded.id("plum") == Vocabulary::build(corpus, 1, 64).id("plum"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("corpus ingestion filters by length and keeps text intact") {
  const std::vector<std::string> lines = {
      "one two three four",       // kept, length 4
      "too short",                // dropped
      "a b c d e f",              // kept
      "",                         // dropped
  };
  const auto corpus = filter_sentences(lines, CorpusOptions{4, 64});
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0] == std::vector<std::string>{"one", "two", "three", "four"});

  const auto tight = filter_sentences(lines, CorpusOptions{4, 5});
  CHECK(tight.size() == 1);
}
