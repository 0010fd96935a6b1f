#include "doctest.h"
#include "json.hpp"
#include "stratatopics/corpus.hpp"
#include "stratatopics/synth.hpp"
#include "support/run.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json without_timestamp(const std::string& text) {
  auto doc = json::parse(text);
  doc.erase("createdAt");
  return doc;
}

}  // namespace

TEST_CASE("synth is deterministic and uses the six group labels") {
  const auto dir = cli::scratch_dir("synth");
  REQUIRE(cli::run(dir, "synth --n 300 --seed 7 --out a.csv").code == 0);
  REQUIRE(cli::run(dir, "synth --n 300 --seed 7 --out b.csv").code == 0);
  CHECK(cli::slurp(dir / "a.csv") == cli::slurp(dir / "b.csv"));
  std::ifstream in(dir / "a.csv");
  const auto corpus = stratatopics::parse_corpus_csv(in, stratatopics::ConceptTaxonomy::builtin());
  CHECK(corpus.size() == 300);
  CHECK(corpus.groups() == stratatopics::synthetic_groups());
  auto printed = cli::run(dir, "synth --n 300 --seed 7");
  CHECK(printed.out == cli::slurp(dir / "a.csv"));
}

TEST_CASE("ingest") {
  const auto dir = cli::scratch_dir("ingest");
  REQUIRE(cli::run(dir, "synth --n 200 --out c.csv").code == 0);
  auto ok = cli::run(dir, "ingest --corpus c.csv");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("1\tAcuity (") == 0);
  CHECK(ok.out.find("Total sentences: 200\n") != std::string::npos);

  std::ofstream(dir / "bad.csv") << "FileID,SentenceID,Sentence,Concepts,Ethnicity,Year\n"
                                    "F1,S1,Some text,COVID,Asian,\n"
                                    "F1,S2,More text,Bogus,Asian,\n";
  auto bad = cli::run(dir, "ingest --corpus bad.csv --json-errors");
  CHECK(bad.code == 2);
  const auto err = json::parse(bad.err);
  CHECK(err["error"] == "validation");
  CHECK(err["message"].get<std::string>().find("row 3") != std::string::npos);
  CHECK(std::count(bad.err.begin(), bad.err.end(), '\n') == 1);

  std::ofstream(dir / "empty.csv").flush();
  auto empty = cli::run(dir, "ingest --corpus empty.csv");
  CHECK(empty.code == 2);
  CHECK(empty.err.find("no rows") != std::string::npos);

  CHECK(cli::run(dir, "ingest --corpus missing.csv").code == 4);
  CHECK(cli::run(dir, "ingest").code == 2);

  std::ofstream(dir / "tax.csv") << "id,name\n1,Alpha\n2,Beta\n";
  std::ofstream(dir / "small.csv") << "FileID,SentenceID,Sentence,Concepts,Ethnicity,Year\n"
                                      "F1,S1,Some text,Beta,Asian,\n";
  auto custom = cli::run(dir, "ingest --corpus small.csv --taxonomy tax.csv");
  CHECK(custom.code == 0);
  CHECK(custom.out == "1\tAlpha (0)\n2\tBeta (1)\nTotal sentences: 1\n");
}

TEST_CASE("topics writes three reproducible files") {
  const auto dir = cli::scratch_dir("topics");
  REQUIRE(cli::run(dir, "synth --n 400 --seed 7 --out c.csv").code == 0);
  REQUIRE(cli::run(dir, "topics --corpus c.csv --seed 7 --out a").code == 0);
  REQUIRE(cli::run(dir, "topics --corpus c.csv --seed 7 --out b").code == 0);
  for (const char* f : {"topics.csv", "aggregate.csv"}) {
    CHECK(cli::slurp(dir / "a" / f) == cli::slurp(dir / "b" / f));
  }
  const auto ma = without_timestamp(cli::slurp(dir / "a/manifest.json"));
  CHECK(ma == without_timestamp(cli::slurp(dir / "b/manifest.json")));
  CHECK(ma["status"] == "complete");
  CHECK(ma["seed"] == 7);
  CHECK(ma["inputs"][0]["role"] == "corpus");
  CHECK(ma["inputs"][0]["sha256"].get<std::string>().size() == 64);
  CHECK(!fs::exists(dir / "a/topics.csv.tmp"));

  const auto topics = cli::slurp(dir / "a/topics.csv");
  CHECK(topics.rfind("Concept,Ethnicity,Topic,Keywords,SentenceCount\n", 0) == 0);
  CHECK(cli::slurp(dir / "a/aggregate.csv")
            .rfind("Ethnicity,Topic 1,Topic 2,Topic 3,Topic 4,Topic 5,Total sentences\n", 0) == 0);

  REQUIRE(cli::run(dir, "topics --corpus c.csv --seed 8 --out c").code == 0);
  CHECK(cli::slurp(dir / "c/topics.csv") != topics);

  SUBCASE("filters") {
    REQUIRE(cli::run(dir, "topics --corpus c.csv --concept 'Care Planning' --out f").code == 0);
    std::istringstream rows(cli::slurp(dir / "f/topics.csv"));
    std::string line;
    std::getline(rows, line);
    while (std::getline(rows, line)) CHECK(line.rfind("Care Planning,", 0) == 0);
  }
  SUBCASE("targeted empty stratum exits 3 without outputs") {
    auto r = cli::run(dir, "topics --corpus c.csv --concept 5 --group Martian --out e --json-errors");
    CHECK(r.code == 3);
    CHECK(json::parse(r.err)["error"] == "no_data");
    CHECK(!fs::exists(dir / "e/topics.csv"));
    CHECK(json::parse(cli::slurp(dir / "e/manifest.json"))["status"] == "in_progress");
  }
  SUBCASE("bad knobs are validation errors") {
    CHECK(cli::run(dir, "topics --corpus c.csv --num-topics 0 --out x").code == 2);
    CHECK(cli::run(dir, "topics --corpus c.csv --concept 99 --out x").code == 2);
  }
}

TEST_CASE("stopword override from the environment") {
  const auto dir = cli::scratch_dir("stop");
  REQUIRE(cli::run(dir, "synth --n 200 --seed 2 --themes 2 --out c.csv").code == 0);
  std::ofstream(dir / "stop.txt") << "the\nof\nallergy\ninterpreter\n";
  REQUIRE(cli::run(dir, "topics --corpus c.csv --out plain").code == 0);
  REQUIRE(cli::run(dir, "topics --corpus c.csv --out env", "STRATATOPICS_STOPWORDS=stop.txt ").code == 0);
  const auto plain = cli::slurp(dir / "plain/topics.csv");
  const auto env = cli::slurp(dir / "env/topics.csv");
  CHECK(plain.find("allergy") != std::string::npos);
  CHECK(env.find("allergy") == std::string::npos);
  CHECK(env.find("interpreter") == std::string::npos);
  CHECK(json::parse(cli::slurp(dir / "env/manifest.json"))["inputs"][1]["role"] == "stopwords");

  REQUIRE(cli::run(dir, "topics --corpus c.csv --stopwords stop.txt --out flag").code == 0);
  CHECK(cli::slurp(dir / "flag/topics.csv") == env);
  CHECK(cli::run(dir, "topics --corpus c.csv --out x", "STRATATOPICS_STOPWORDS=nope.txt ").code == 4);
}

TEST_CASE("graph") {
  const auto dir = cli::scratch_dir("graph");
  REQUIRE(cli::run(dir, "synth --n 600 --seed 7 --out c.csv").code == 0);
  const std::string base = "graph --corpus c.csv --concept 5 --group Black ";

  auto j = cli::run(dir, base + "--merged --seed 2");
  REQUIRE(j.code == 0);
  const auto doc = json::parse(j.out);
  CHECK(doc["threshold"] == 0.5);
  CHECK(!doc["nodes"].empty());
  CHECK(cli::run(dir, base + "--merged --seed 2").out == j.out);

  auto svg = cli::run(dir, base + "--threshold 1.0 --format svg");
  REQUIRE(svg.code == 0);
  CHECK(svg.out.find("<svg") != std::string::npos);
  CHECK(svg.out.find("<line") == std::string::npos);

  auto dot = cli::run(dir, base + "--threshold -1 --format dot --topic 1");
  REQUIRE(dot.code == 0);
  CHECK(dot.out.rfind("graph keywords {", 0) == 0);

  CHECK(cli::run(dir, base + "--format png").code == 2);
  CHECK(cli::run(dir, base + "--threshold 2").code == 2);
  CHECK(cli::run(dir, base + "--topic 40").code == 2);
  CHECK(cli::run(dir, "graph --corpus c.csv --concept 5 --group Martian").code == 3);

  REQUIRE(cli::run(dir, base + "--merged --out g.json").code == 0);
  CHECK(json::parse(cli::slurp(dir / "g.json")) == json::parse(cli::run(dir, base + "--merged").out));
}
