#include "doctest.h"
#include "stratatopics/error.hpp"
#include "stratatopics/preprocess.hpp"
#include "stratatopics/synth.hpp"

using namespace stratatopics;

TEST_CASE("planted vocabularies survive cleaning") {
  const auto tagger = default_tagger();
  const CleanConfig cfg;
  std::set<std::string> seen;
  for (std::size_t t = 0; t < synthetic_groups().size(); ++t) {
    const auto& words = planted_vocabulary(t);
    CHECK(words.size() == 10);
    for (const auto& w : words) {
      INFO(w);
      CHECK(seen.insert(w).second);
      CHECK(clean_text(w, cfg, *tagger) == std::vector<std::string>{w});
    }
  }
}

TEST_CASE("synthetic corpus") {
  const Corpus a = synthesize_corpus({.sentences = 120, .seed = 9});
  CHECK(a.size() == 120);
  CHECK(a == synthesize_corpus({.sentences = 120, .seed = 9}));
  CHECK_FALSE(a == synthesize_corpus({.sentences = 120, .seed = 10}));
  for (const auto& g : a.groups()) {
    CHECK(std::find(synthetic_groups().begin(), synthetic_groups().end(), g) !=
          synthetic_groups().end());
  }
  for (const auto& s : a.sentences()) {
    CHECK(!s.concepts.empty());
    CHECK(s.concepts.size() <= 2);
  }
  // every content word is a noun or verb, so only filler is dropped
  const auto cleaned = clean_corpus(a, CleanConfig{}, *default_tagger());
  for (const auto& c : cleaned) CHECK(c.tokens.size() == 6);

  const Corpus themed = synthesize_corpus({.sentences = 40, .seed = 1, .themes = 2});
  CHECK(themed.groups() == std::vector<std::string>{"Black"});
  for (const auto& s : themed.sentences()) CHECK(s.concepts == std::set<ConceptId>{5});

  CHECK_THROWS_AS(synthesize_corpus({.themes = 1}), ConfigError);
  CHECK_THROWS_AS(synthesize_corpus({.themes = 7}), ConfigError);
}
