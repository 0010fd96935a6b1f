// Command-line front end: ingest, topics, graph, synth, serve.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "stratatopics/error.hpp"
#include "stratatopics/graph.hpp"
#include "stratatopics/manifest.hpp"
#include "stratatopics/service.hpp"
#include "stratatopics/synth.hpp"
#include "stratatopics/topics.hpp"

namespace fs = std::filesystem;
using namespace stratatopics;

namespace {

enum Exit { kOk = 0, kValidation = 2, kNoData = 3, kIo = 4 };

struct NoDataExit : Error {
  using Error::Error;
};

struct Common {
  std::string corpus;
  std::string taxonomy;
  std::string stopwords;
  bool json_errors = false;
};

struct Loaded {
  Corpus corpus;
  std::string corpus_hash;
  std::vector<ManifestInput> inputs;
  CleanConfig clean;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return buf.str();
}

Loaded load(const Common& c) {
  if (c.corpus.empty()) throw ConfigError("--corpus is required");
  Loaded out{Corpus{}, {}, {}, {}};
  ConceptTaxonomy taxonomy = ConceptTaxonomy::builtin();
  if (!c.taxonomy.empty()) {
    const std::string text = read_file(c.taxonomy);
    std::istringstream in(text);
    taxonomy = ConceptTaxonomy::parse_csv(in);
    out.inputs.push_back({"taxonomy", c.taxonomy, sha256_hex(text)});
  }
  std::string stopwords = c.stopwords;
  if (stopwords.empty()) {
    if (const char* env = std::getenv("STRATATOPICS_STOPWORDS"); env && *env) stopwords = env;
  }
  if (!stopwords.empty()) {
    const std::string text = read_file(stopwords);
    std::istringstream in(text);
    out.clean.stopwords = parse_stopwords(in);
    out.inputs.push_back({"stopwords", stopwords, sha256_hex(text)});
  }
  const std::string text = read_file(c.corpus);
  out.corpus_hash = sha256_hex(text);
  out.inputs.insert(out.inputs.begin(), {"corpus", c.corpus, out.corpus_hash});
  std::istringstream in(text);
  out.corpus = parse_corpus_csv(in, taxonomy);
  if (out.corpus.size() == 0) throw ValidationError("no rows");
  return out;
}

std::optional<ConceptId> concept_option(const Corpus& corpus, const std::string& value) {
  if (value.empty()) return std::nullopt;
  auto id = corpus.taxonomy().resolve(value);
  if (!id) throw ValidationError("unknown concept: " + value);
  return id;
}

std::optional<std::string> group_option(const std::string& value) {
  if (value.empty()) return std::nullopt;
  return value;
}

ExtractionRequest make_request(const Loaded& data, const std::string& concept_arg,
                               const std::string& group_arg, int num_topics, int top_n,
                               std::uint64_t seed) {
  ExtractionRequest req;
  req.concept_id = concept_option(data.corpus, concept_arg);
  req.group = group_option(group_arg);
  req.num_topics = num_topics;
  req.top_n = top_n;
  req.lda.seed = seed;
  req.clean = data.clean;
  req.validate();
  return req;
}

nlohmann::ordered_json config_json(const ExtractionRequest& req, const Corpus& corpus) {
  nlohmann::ordered_json cfg;
  cfg["concept"] = req.concept_id ? nlohmann::ordered_json(corpus.taxonomy().name(*req.concept_id))
                                  : nlohmann::ordered_json(nullptr);
  cfg["group"] = req.group ? nlohmann::ordered_json(*req.group) : nlohmann::ordered_json(nullptr);
  cfg["num_topics"] = req.num_topics;
  cfg["top_n"] = req.top_n;
  cfg["weighting"] = to_string(req.lda_input);
  cfg["idf"] = req.idf == IdfVariant::Smoothed ? "smoothed" : "plain";
  nlohmann::ordered_json clean;
  clean["stopword_count"] = req.clean.stopwords.size();
  clean["min_token_len"] = req.clean.min_token_len;
  std::vector<std::string> pos;
  for (auto p : req.clean.keep_pos) pos.emplace_back(to_string(p));
  clean["keep_pos"] = pos;
  clean["strip_non_ascii"] = req.clean.strip_non_ascii;
  cfg["clean"] = clean;
  LdaConfig<double> lda = req.lda;
  lda.num_topics = req.num_topics;
  cfg["lda"] = {{"alpha", lda.doc_prior()},
                {"eta", lda.topic_prior()},
                {"max_iter", lda.max_iter},
                {"tol", lda.tol},
                {"estep_max_iter", lda.estep_max_iter},
                {"estep_tol", lda.estep_tol}};
  return cfg;
}

int cmd_ingest(const Common& c) {
  const Loaded data = load(c);
  write_concept_report(data.corpus, std::cout);
  return kOk;
}

struct TopicsArgs {
  std::string out = "out";
  std::string concept_arg;
  std::string group;
  int num_topics = 5;
  int top_n = 10;
  std::uint64_t seed = 0;
};

int cmd_topics(const Common& c, const TopicsArgs& a) {
  const Loaded data = load(c);
  const auto req = make_request(data, a.concept_arg, a.group, a.num_topics, a.top_n, a.seed);

  const fs::path dir = a.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  RunManifest manifest;
  manifest.command = "topics";
  manifest.created_at = utc_timestamp();
  manifest.inputs = data.inputs;
  manifest.config = config_json(req, data.corpus);
  manifest.seed = a.seed;
  manifest.outputs = {"topics.csv", "aggregate.csv"};
  write_file_atomic(dir / "manifest.json", manifest.to_json().dump(2) + "\n");

  std::vector<TopicSummary> summaries;
  std::optional<std::string> first_no_data;
  for (const auto& o : extract_strata(data.corpus, req)) {
    if (const auto* t = std::get_if<StratumTopics>(&o.result)) {
      summaries.insert(summaries.end(), t->summaries.begin(), t->summaries.end());
    } else if (!first_no_data) {
      first_no_data = std::get<NoData>(o.result).message();
    }
  }
  if (summaries.empty()) {
    throw NoDataExit(first_no_data.value_or(NoData{}.message()));
  }

  std::ostringstream topics, aggregate;
  export_topics_csv(summaries, data.corpus.taxonomy(), topics);
  write_aggregate_csv(aggregate_by_group(summaries), aggregate, req.num_topics);
  write_file_atomic(dir / "topics.csv", topics.str());
  write_file_atomic(dir / "aggregate.csv", aggregate.str());

  manifest.status = "complete";
  write_file_atomic(dir / "manifest.json", manifest.to_json().dump(2) + "\n");
  std::cerr << summaries.size() << " topics written to " << dir.string() << '\n';
  return kOk;
}

struct GraphArgs {
  std::string concept_arg;
  std::string group;
  double threshold = kDefaultThreshold;
  std::string format = "json";
  bool merged = false;
  int topic = 1;
  int num_topics = 5;
  int top_n = 10;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_graph(const Common& c, const GraphArgs& a) {
  const Loaded data = load(c);
  const auto req = make_request(data, a.concept_arg, a.group, a.num_topics, a.top_n, a.seed);
  if (a.threshold < -1.0 || a.threshold > 1.0) throw ConfigError("threshold must be in [-1, 1]");
  auto result = extract_topics(data.corpus, req);
  if (auto* nd = std::get_if<NoData>(&result)) throw NoDataExit(nd->message());
  const auto& st = std::get<StratumTopics>(result);

  KeywordGraph g;
  std::vector<std::string> words;
  std::vector<std::vector<std::string>> lists;
  if (a.merged) {
    for (const auto& s : st.summaries) lists.push_back(s.keywords);
  } else {
    if (a.topic < 1 || static_cast<std::size_t>(a.topic) > st.summaries.size()) {
      throw ConfigError("topic must be in [1, " + std::to_string(st.summaries.size()) + "]");
    }
    lists.push_back(st.summaries[static_cast<std::size_t>(a.topic - 1)].keywords);
  }
  for (const auto& l : lists) {
    for (const auto& w : l) {
      if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
    }
  }
  const auto sim = term_cosine_similarity(st.matrix, words);
  g = a.merged ? build_merged_keyword_graph(lists, sim, a.threshold)
               : build_keyword_graph(lists.front(), sim, a.threshold, a.topic);
  const auto lg = layout(g, {.seed = a.seed});

  const GraphFormat fmt = a.format == "dot"   ? GraphFormat::Dot
                          : a.format == "svg" ? GraphFormat::Svg
                                              : GraphFormat::Json;
  std::ostringstream buf;
  export_graph(lg, fmt, buf);
  if (a.out.empty()) {
    std::cout << buf.str();
  } else {
    write_file_atomic(a.out, buf.str());
  }
  return kOk;
}

struct SynthArgs {
  std::size_t n = 1000;
  std::uint64_t seed = 7;
  int themes = 0;
  std::string out;
};

int cmd_synth(const SynthArgs& a) {
  SynthConfig cfg;
  cfg.sentences = a.n;
  cfg.seed = a.seed;
  cfg.themes = a.themes;
  std::ostringstream buf;
  write_corpus_csv(synthesize_corpus(cfg), buf);
  if (a.out.empty()) {
    std::cout << buf.str();
  } else {
    write_file_atomic(a.out, buf.str());
  }
  return kOk;
}

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
  std::size_t cache = 64;
};

HttpServer* g_server = nullptr;

int cmd_serve(const Common& c, const ServeArgs& a) {
  const Loaded data = load(c);
  ExtractionRequest base;
  base.clean = data.clean;
  Service service(data.corpus, data.corpus_hash, base, a.cache);
  std::optional<fs::path> static_dir;
  if (!a.static_dir.empty()) static_dir = a.static_dir;
  HttpServer server(service, static_dir);
  if (!server.bind(a.host, a.port)) {
    throw IoError("cannot bind " + a.host + ":" + std::to_string(a.port));
  }
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });
  std::cerr << "listening on http://" << a.host << ':' << a.port << '\n';
  server.listen();
  g_server = nullptr;
  return kOk;
}

int report(const Common& c, int code, const char* kind, const std::exception& e,
           std::optional<std::size_t> row = std::nullopt) {
  if (c.json_errors) {
    nlohmann::ordered_json doc{{"error", kind}, {"message", e.what()}, {"exitCode", code}};
    if (row) doc["row"] = *row;
    std::cerr << doc.dump() << '\n';
  } else {
    std::cerr << "error: " << e.what() << '\n';
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stratified topic extraction and keyword networks"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_flag("--json-errors", common.json_errors, "Print errors as one JSON line on stderr");

  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("--corpus", common.corpus, "Annotated sentence CSV")->required();
    sub->add_option("--taxonomy", common.taxonomy, "Concept taxonomy CSV (id,name)");
    sub->add_option("--stopwords", common.stopwords,
                    "Stopword list, one per line (default: $STRATATOPICS_STOPWORDS or built in)");
  };

  auto* ingest = app.add_subcommand("ingest", "Validate a corpus and print per-concept counts");
  add_inputs(ingest);

  TopicsArgs ta;
  auto* topics = app.add_subcommand("topics", "Extract topics for every stratum");
  add_inputs(topics);
  topics->add_option("--out", ta.out, "Output directory")->capture_default_str();
  topics->add_option("--concept", ta.concept_arg, "Concept id or name");
  topics->add_option("--group", ta.group, "Ethnicity group");
  topics->add_option("--num-topics", ta.num_topics)->capture_default_str();
  topics->add_option("--top-n", ta.top_n)->capture_default_str();
  topics->add_option("--seed", ta.seed)->capture_default_str();

  GraphArgs ga;
  auto* graph = app.add_subcommand("graph", "Keyword similarity graph for one stratum");
  add_inputs(graph);
  graph->add_option("--concept", ga.concept_arg, "Concept id or name")->required();
  graph->add_option("--group", ga.group, "Ethnicity group")->required();
  graph->add_option("--threshold", ga.threshold)->capture_default_str();
  graph->add_option("--format", ga.format)
      ->check(CLI::IsMember({"json", "dot", "svg"}))
      ->capture_default_str();
  graph->add_flag("--merged", ga.merged, "Union of all topics' keywords");
  graph->add_option("--topic", ga.topic, "Topic to draw when not merged")->capture_default_str();
  graph->add_option("--num-topics", ga.num_topics)->capture_default_str();
  graph->add_option("--top-n", ga.top_n)->capture_default_str();
  graph->add_option("--seed", ga.seed)->capture_default_str();
  graph->add_option("--out", ga.out, "Output file (default stdout)");

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus CSV");
  synth->add_option("--n", sa.n, "Number of sentences")->capture_default_str();
  synth->add_option("--seed", sa.seed)->capture_default_str();
  synth->add_option("--themes", sa.themes,
                    "0: per-group vocabularies; >= 2: one stratum mixing that many themes")
      ->capture_default_str();
  synth->add_option("--out", sa.out, "Output file (default stdout)");

  ServeArgs va;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  add_inputs(serve);
  serve->add_option("--host", va.host)->capture_default_str();
  serve->add_option("--port", va.port)->capture_default_str();
  serve->add_option("--static-dir", va.static_dir, "Explorer bundle served at /");
  serve->add_option("--cache", va.cache, "Cached analyses")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (common.json_errors) return report(common, kValidation, "usage", e);
    app.exit(e);
    return kValidation;
  }

  try {
    if (*ingest) return cmd_ingest(common);
    if (*topics) return cmd_topics(common, ta);
    if (*graph) return cmd_graph(common, ga);
    if (*synth) return cmd_synth(sa);
    if (*serve) return cmd_serve(common, va);
  } catch (const NoDataExit& e) {
    return report(common, kNoData, "no_data", e);
  } catch (const ParseError& e) {
    return report(common, kValidation, "validation", e, e.row());
  } catch (const ValidationError& e) {
    return report(common, kValidation, "validation", e);
  } catch (const ConfigError& e) {
    return report(common, kValidation, "config", e);
  } catch (const IoError& e) {
    return report(common, kIo, "io", e);
  } catch (const std::exception& e) {
    return report(common, 1, "internal", e);
  }
  return kOk;
}
