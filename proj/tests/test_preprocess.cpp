#include <random>
#include <sstream>

#include "doctest.h"
#include "stratatopics/error.hpp"
#include "stratatopics/preprocess.hpp"
#include "stratatopics/synth.hpp"

using namespace stratatopics;

using Tokens = std::vector<std::string>;

TEST_CASE("tokenize") {
  CHECK(tokenize("a,b c.") == Tokens{"a", "b", "c"});
  CHECK(tokenize("mother's") == Tokens{"mother", "s"});
  CHECK(tokenize("cardiotocograph (CTG) trace") == Tokens{"cardiotocograph", "CTG", "trace"});
  CHECK(tokenize("") == Tokens{});
  CHECK(tokenize("well-being check now") == Tokens{"well", "being", "check", "now"});
}

TEST_CASE("default tagger") {
  auto tagger = default_tagger();
  CHECK(tagger->tag(Tokens{"baby"}) == std::vector<Pos>{Pos::Noun});
  CHECK(tagger->tag(Tokens{}).empty());
  CHECK(tagger->tag(Tokens{"zzxqv"}) == std::vector<Pos>{Pos::Noun});
  CHECK(tagger->tag(Tokens{"delivered", "quickly", "42"}) ==
        std::vector<Pos>{Pos::Verb, Pos::Adv, Pos::Other});
  CHECK(tagger->tag(Tokens{"zzxqving", "zzxqved", "zzxqvment"}) ==
        std::vector<Pos>{Pos::Verb, Pos::Verb, Pos::Noun});
}

TEST_CASE("tagger preserves length for random token lists") {
  auto tagger = default_tagger();
  std::mt19937_64 rng(3);
  const std::string alphabet = "abcdefghij0123456789";
  for (int trial = 0; trial < 200; ++trial) {
    Tokens tokens(rng() % 20);
    for (auto& t : tokens) {
      const std::size_t len = 1 + rng() % 8;
      for (std::size_t i = 0; i < len; ++i) t.push_back(alphabet[rng() % alphabet.size()]);
    }
    CHECK(tagger->tag(tokens).size() == tokens.size());
  }
}

TEST_CASE("lexicon and stopword files") {
  std::istringstream lex("# comment\nfoo\tVERB\nBar\tnoun\n");
  auto tagger = LexiconTagger::parse(lex);
  CHECK(tagger.size() == 2);
  CHECK(tagger.tag_word("foo") == Pos::Verb);
  CHECK(tagger.tag_word("bar") == Pos::Noun);
  std::istringstream bad("foo VERB\n");
  CHECK_THROWS_AS(LexiconTagger::parse(bad), ParseError);

  std::istringstream stop("# list\nThe\n  and # trailing\n\n");
  CHECK(parse_stopwords(stop) == std::unordered_set<std::string>{"the", "and"});
  CHECK(default_stopwords().size() == 179);
  CHECK(default_stopwords().contains("the"));
  CHECK(default_tagger()->tag(Tokens{"nave"}) == std::vector<Pos>{Pos::Adj});
}

TEST_CASE("clean_text golden traces") {
  const CleanConfig cfg;
  const auto& tagger = *default_tagger();
  CHECK(clean_text("", cfg, tagger) == Tokens{});
  CHECK(clean_text("The baby was delivered quickly", cfg, tagger) == Tokens{"baby", "delivered"});
  CHECK(clean_text("naïve CTG review at 3pm", cfg, tagger) == Tokens{"ctg", "review"});
}

TEST_CASE("clean_text keeps digits until the POS filter") {
  CleanConfig cfg;
  cfg.keep_pos = {Pos::Noun, Pos::Verb, Pos::Other};
  CHECK(clean_text("scan at 36 weeks x", cfg, *default_tagger()) == Tokens{"scan", "36", "weeks"});
}

TEST_CASE("clean config validation") {
  CleanConfig cfg;
  cfg.min_token_len = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.min_token_len = 2;
  cfg.keep_pos.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("clean_text output invariants and idempotence") {
  const CleanConfig cfg;
  const auto& tagger = *default_tagger();
  const Corpus c = synthesize_corpus({.sentences = 200, .seed = 5});
  std::vector<std::string> texts;
  for (const auto& s : c.sentences()) texts.push_back(s.text);
  texts.push_back("Café staff didn't escalate the CTG-3 trace at 10:30; mother's BP 140/90.");
  texts.push_back("  ...  ");
  texts.push_back("üñîçødé words \xF0\x9F\x98\x80 only");
  for (const auto& text : texts) {
    const Tokens out = clean_text(text, cfg, tagger);
    std::string joined;
    for (const auto& t : out) {
      CHECK_FALSE(cfg.stopwords.contains(t));
      CHECK(t.size() >= cfg.min_token_len);
      for (char ch : t) CHECK(static_cast<unsigned char>(ch) < 0x80);
      joined += t + " ";
    }
    CHECK(clean_text(joined, cfg, tagger) == out);
  }
}
