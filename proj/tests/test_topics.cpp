#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "stratatopics/synth.hpp"
#include "stratatopics/topics.hpp"

using namespace stratatopics;

namespace {

TopicSummary summary(int topic, std::vector<std::string> words, std::size_t count,
                     std::string group = "Black", ConceptId concept_id = 5) {
  return {concept_id, group, topic, std::move(words), count};
}

Corpus small_corpus(const std::string& body) {
  std::istringstream in("FileID,SentenceID,Sentence,Concepts,Ethnicity,Year\n" + body);
  return parse_corpus_csv(in, ConceptTaxonomy::builtin());
}

}  // namespace

TEST_CASE("remove_duplicates") {
  CHECK(remove_duplicates({}).empty());

  auto out = remove_duplicates({summary(1, {"a", "b"}, 3), summary(2, {"b", "a"}, 4)});
  REQUIRE(out.size() == 1);
  CHECK(out[0].sentence_count == 7);
  CHECK(out[0].keywords == std::vector<std::string>{"a", "b"});

  auto three = remove_duplicates({summary(1, {"a"}, 1), summary(2, {"a"}, 1), summary(3, {"c"}, 2)});
  REQUIRE(three.size() == 2);
  CHECK(three[1].topic_index == 2);
  CHECK(three[1].keywords == std::vector<std::string>{"c"});

  // different strata never collapse into each other
  auto strata = remove_duplicates({summary(1, {"a"}, 1, "Black"), summary(1, {"a"}, 1, "Asian")});
  CHECK(strata.size() == 2);

  CHECK(remove_duplicates(out) == out);
  CHECK(remove_duplicates(three) == three);
}

TEST_CASE("count_sentences_per_topic partitions the retained sentences") {
  LdaModel<double> model;
  model.doc_topic.resize(4, 3);
  model.doc_topic << 0.2, 0.5, 0.3,   //
      0.4, 0.4, 0.2,                  // tie -> lowest index
      0.1, 0.1, 0.8,                  //
      0.6, 0.2, 0.2;
  DocTermMatrix<double> m;
  m.weights.resize(4, 1);
  auto counts = count_sentences_per_topic(model, m);
  CHECK(counts == std::vector<std::size_t>{2, 1, 1});
  DocTermMatrix<double> wrong;
  wrong.weights.resize(3, 1);
  CHECK_THROWS_AS(count_sentences_per_topic(model, wrong), ValidationError);
}

TEST_CASE("extract_topics") {
  const Corpus corpus = synthesize_corpus({.sentences = 40, .seed = 3, .themes = 2});

  SUBCASE("empty stratum is NoData") {
    ExtractionRequest req;
    req.concept_id = 1;
    auto result = extract_topics(corpus, req);
    REQUIRE(std::holds_alternative<NoData>(result));
    CHECK(std::get<NoData>(result).reason == NoData::Reason::EmptySubset);
  }
  SUBCASE("everything cleans away") {
    auto c = small_corpus("F1,S1,The and of,COVID,Black,\nF1,S2,quickly very,COVID,Black,\n");
    ExtractionRequest req;
    req.concept_id = 4;
    auto result = extract_topics(c, req);
    REQUIRE(std::holds_alternative<NoData>(result));
    CHECK(std::get<NoData>(result).reason == NoData::Reason::NothingAfterCleaning);
  }
  SUBCASE("planted themes separate") {
    ExtractionRequest req;
    req.concept_id = 5;
    req.group = "Black";
    req.num_topics = 2;
    req.lda.seed = 3;
    auto result = extract_topics(corpus, req);
    REQUIRE(std::holds_alternative<StratumTopics>(result));
    const auto& topics = std::get<StratumTopics>(result);
    REQUIRE(topics.summaries.size() == 2);
    const std::vector<std::vector<std::string>> planted = {planted_vocabulary(0), planted_vocabulary(1)};
    CHECK(oracle::purity(topics.summaries[0].keywords, planted) >= 0.9);
    CHECK(oracle::purity(topics.summaries[1].keywords, planted) >= 0.9);
    CHECK(oracle::purity(topics.summaries[0].keywords, {planted_vocabulary(0)}) !=
          oracle::purity(topics.summaries[1].keywords, {planted_vocabulary(0)}));
    std::size_t total = 0;
    for (const auto& s : topics.summaries) total += s.sentence_count;
    CHECK(total == topics.retained.size());
    CHECK(topics.stratum_size == 40);
  }
  SUBCASE("tiny strata still yield up to K topics with capped keyword lists") {
    auto c = small_corpus(
        "F1,S1,Mother needs treatment plan,Care Planning,Asian,\n"
        "F1,S2,Treatment delay for mother,Care Planning,Asian,\n"
        "F1,S3,Plan care review,Care Planning,Asian,\n"
        "F1,S4,Risk assessment needed,Care Planning,Asian,\n"
        "F1,S5,Pathway for care,Care Planning,Asian,\n");
    ExtractionRequest req;
    req.concept_id = 5;
    req.group = "Asian";
    auto result = extract_topics(c, req);
    REQUIRE(std::holds_alternative<StratumTopics>(result));
    const auto& topics = std::get<StratumTopics>(result);
    CHECK(topics.raw_keywords.size() == 5);
    CHECK(!topics.summaries.empty());
    CHECK(topics.summaries.size() <= 5);
    std::size_t total = 0;
    for (const auto& s : topics.summaries) {
      total += s.sentence_count;
      CHECK(s.keywords.size() == std::min<std::size_t>(10, topics.matrix.vocab.terms().size()));
    }
    CHECK(total == 5);
  }
  SUBCASE("bad request") {
    ExtractionRequest req;
    req.num_topics = 0;
    CHECK_THROWS_AS(extract_topics(corpus, req), ConfigError);
  }
}

TEST_CASE("extract_all covers every present stratum in order") {
  const Corpus corpus = synthesize_corpus({.sentences = 300, .seed = 12});
  ExtractionRequest defaults;
  defaults.num_topics = 3;
  defaults.top_n = 5;
  auto strata = extract_strata(corpus, defaults);

  std::set<std::pair<ConceptId, std::string>> expected;
  for (const auto& s : corpus.sentences()) {
    for (auto c : s.concepts) expected.emplace(c, s.ethnicity);
  }
  REQUIRE(strata.size() == expected.size());
  auto it = expected.begin();
  std::size_t rows = 0;
  for (const auto& o : strata) {
    CHECK(o.concept_id == it->first);
    CHECK(o.group == it->second);
    ++it;
    if (auto* t = std::get_if<StratumTopics>(&o.result)) {
      rows += t->summaries.size();
      CHECK(t->summaries.size() <= 3);
      std::size_t total = 0;
      for (const auto& s : t->summaries) total += s.sentence_count;
      CHECK(total == t->retained.size());
    }
  }
  CHECK(extract_all(corpus, defaults).size() == rows);

  ExtractionRequest one = defaults;
  one.concept_id = 5;
  for (const auto& o : extract_strata(corpus, one)) CHECK(o.concept_id == 5);
}

TEST_CASE("topics CSV") {
  const auto& tax = ConceptTaxonomy::builtin();
  SUBCASE("one summary gives header plus one row") {
    std::ostringstream out;
    export_topics_csv({summary(1, {"body", "plans", "occasions", "period", "mass", "index",
                                   "inclusion", "inform", "bmi", "mothers"},
                               3, "White British")},
                      tax, out);
    CHECK(out.str() ==
          "Concept,Ethnicity,Topic,Keywords,SentenceCount\n"
          "Care Planning,White British,1,\"body, plans, occasions, period, mass, index, "
          "inclusion, inform, bmi, mothers\",3\n");
  }
  SUBCASE("round trip, including names that need quoting and pooled rows") {
    std::vector<TopicSummary> rows = {
        summary(1, {"a", "b"}, 2, "Black", 3),
        summary(2, {"c"}, 0, "Data not received", 27),
        {std::nullopt, std::nullopt, 1, {"x", "y", "z"}, 9},
    };
    std::stringstream buf;
    export_topics_csv(rows, tax, buf);
    CHECK(parse_topics_csv(buf, tax) == rows);
  }
}

TEST_CASE("aggregate by group") {
  auto agg = aggregate_by_group({summary(2, {"a"}, 7, "G")});
  CHECK(agg.cell("G", 2) == 7);
  CHECK(agg.total("G") == 7);

  // five cells summing to 79
  std::vector<TopicSummary> asian;
  const std::size_t counts[] = {22, 24, 14, 9, 10};
  for (int t = 1; t <= 5; ++t) asian.push_back(summary(t, {"w"}, counts[t - 1], "Asian"));
  asian.push_back(summary(1, {"w"}, 9, "Mixed Background"));
  asian.push_back(summary(2, {"w"}, 2, "Mixed Background"));
  auto table = aggregate_by_group(asian);
  CHECK(table.total("Asian") == 79);
  std::ostringstream out;
  write_aggregate_csv(table, out, 5);
  CHECK(out.str() ==
        "Ethnicity,Topic 1,Topic 2,Topic 3,Topic 4,Topic 5,Total sentences\n"
        "Asian,22,24,14,9,10,79\n"
        "Mixed Background,9,2,0,0,0,11\n");
}
