#include "stratatopics/service.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "stratatopics/error.hpp"

namespace stratatopics {
namespace {

using ojson = nlohmann::ordered_json;

struct HttpError {
  int status;
  std::string code;
  std::string message;
};

HttpResponse json_response(int status, const ojson& doc) {
  return {status, "application/json", doc.dump(), {}};
}

HttpResponse error_response(const HttpError& e) {
  return json_response(e.status, ojson{{"error", e.code}, {"message", e.message}});
}

HttpError bad_request(std::string message) { return {400, "bad_request", std::move(message)}; }

std::optional<ConceptId> resolve_concept(const ConceptTaxonomy& tax, std::string_view token) {
  if (token.empty() || token == kAllLabel) return std::nullopt;
  auto id = tax.resolve(token);
  if (!id) throw HttpError{422, "unknown_concept", "unknown concept: " + std::string(token)};
  return id;
}

std::optional<std::string> resolve_group(const std::vector<std::string>& groups,
                                         std::string_view token) {
  if (token.empty() || token == kAllLabel) return std::nullopt;
  if (std::find(groups.begin(), groups.end(), token) == groups.end()) {
    throw HttpError{422, "unknown_group", "unknown group: " + std::string(token)};
  }
  return std::string(token);
}

void check_ranges(const AnalyzeParams& p) {
  if (p.num_topics < 1 || p.num_topics > AnalyzeParams::kMaxTopics) {
    throw bad_request("num_topics must be in [1, " + std::to_string(AnalyzeParams::kMaxTopics) + "]");
  }
  if (p.top_n < 1 || p.top_n > AnalyzeParams::kMaxTopN) {
    throw bad_request("top_n must be in [1, " + std::to_string(AnalyzeParams::kMaxTopN) + "]");
  }
  if (!(p.threshold >= -1.0 && p.threshold <= 1.0)) {
    throw bad_request("threshold must be in [-1, 1]");
  }
}

template <typename T>
T parse_number(std::string_view key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw bad_request("invalid " + std::string(key) + ": " + text);
  return value;
}

template <>
double parse_number<double>(std::string_view key, const std::string& text) {
  // from_chars for double is missing from libstdc++ 11
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(value)) {
    throw bad_request("invalid " + std::string(key) + ": " + text);
  }
  return value;
}

AnalyzeParams params_from_json(const Corpus& corpus, std::string_view body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw bad_request(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw bad_request("request body must be a JSON object");

  AnalyzeParams p;
  for (const auto& [key, value] : doc.items()) {
    if (key == "concept") {
      if (value.is_null()) continue;
      if (value.is_number_integer()) {
        const auto id = value.get<std::int64_t>();
        if (id < 1 || static_cast<std::size_t>(id) > corpus.taxonomy().size()) {
          throw HttpError{422, "unknown_concept", "unknown concept: " + std::to_string(id)};
        }
        p.concept_id = static_cast<ConceptId>(id);
      } else if (value.is_string()) {
        p.concept_id = resolve_concept(corpus.taxonomy(), value.get<std::string>());
      } else {
        throw bad_request("concept must be an id, a name or null");
      }
    } else if (key == "group") {
      if (value.is_null()) continue;
      if (!value.is_string()) throw bad_request("group must be a string or null");
      p.group = resolve_group(corpus.groups(), value.get<std::string>());
    } else if (key == "num_topics" || key == "top_n") {
      if (!value.is_number_integer()) throw bad_request(key + " must be an integer");
      const auto v = value.get<std::int64_t>();
      const auto clamped = static_cast<int>(std::clamp<std::int64_t>(v, -1, 1 << 20));
      (key == "num_topics" ? p.num_topics : p.top_n) = clamped;
    } else if (key == "threshold") {
      if (!value.is_number()) throw bad_request("threshold must be a number");
      p.threshold = value.get<double>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw bad_request("seed must be a non-negative integer");
      p.seed = value.get<std::uint64_t>();
    } else {
      throw bad_request("unknown field: " + key);
    }
  }
  check_ranges(p);
  return p;
}

AnalyzeParams params_from_query(const Corpus& corpus,
                                const std::multimap<std::string, std::string>& query) {
  AnalyzeParams p;
  for (const auto& [key, value] : query) {
    if (key == "fmt") continue;
    if (key == "concept") {
      p.concept_id = resolve_concept(corpus.taxonomy(), value);
    } else if (key == "group") {
      p.group = resolve_group(corpus.groups(), value);
    } else if (key == "num_topics") {
      p.num_topics = parse_number<int>(key, value);
    } else if (key == "top_n") {
      p.top_n = parse_number<int>(key, value);
    } else if (key == "threshold") {
      p.threshold = parse_number<double>(key, value);
    } else if (key == "seed") {
      p.seed = parse_number<std::uint64_t>(key, value);
    } else {
      throw bad_request("unknown parameter: " + key);
    }
  }
  check_ranges(p);
  return p;
}

ojson params_json(const AnalyzeParams& p) {
  ojson doc;
  doc["concept"] = p.concept_id ? ojson(*p.concept_id) : ojson(nullptr);
  doc["group"] = p.group ? ojson(*p.group) : ojson(nullptr);
  doc["num_topics"] = p.num_topics;
  doc["top_n"] = p.top_n;
  doc["threshold"] = p.threshold;
  doc["seed"] = p.seed;
  return doc;
}

std::string cache_key(const AnalyzeParams& p) {
  // threshold is applied after the cached work
  std::ostringstream key;
  key << (p.concept_id ? std::to_string(*p.concept_id) : "*") << '\x1f' << (p.group ? "=" + *p.group : "*")
      << '\x1f' << p.num_topics << '\x1f' << p.top_n << '\x1f' << p.seed;
  return key.str();
}

std::string elapsed_ms(std::chrono::steady_clock::time_point start) {
  const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", static_cast<double>(us) / 1000.0);
  return buf;
}

constexpr const char* kPlaceholderPage = R"HTML(<!doctype html>
<html><head><meta charset="utf-8"><title>stratatopics</title></head>
<body>
<h1>stratatopics</h1>
<p>No explorer bundle is mounted. Start the server with <code>--static-dir</code> to serve one.</p>
<ul>
<li><code>GET /api/v1/meta</code></li>
<li><code>POST /api/v1/analyze</code></li>
<li><code>GET /api/v1/export?fmt=csv|json</code></li>
</ul>
</body></html>
)HTML";

}  // namespace

Service::Service(Corpus corpus, std::string corpus_hash, ExtractionRequest base,
                 std::size_t cache_capacity)
    : corpus_(std::move(corpus)),
      corpus_hash_(std::move(corpus_hash)),
      base_(std::move(base)),
      capacity_(std::max<std::size_t>(cache_capacity, 1)) {
  base_.validate();
}

std::size_t Service::cache_size() const {
  std::lock_guard lock(mutex_);
  return lru_.size();
}

HttpResponse Service::meta() const {
  ojson doc;
  const auto counts = concept_counts(corpus_);
  doc["concepts"] = ojson::array();
  for (const auto& e : corpus_.taxonomy().entries()) {
    doc["concepts"].push_back({{"id", e.id}, {"name", e.name}, {"count", counts.at(e.id)}});
  }
  doc["groups"] = ojson::array();
  for (const auto& [name, n] : group_counts(corpus_)) {
    doc["groups"].push_back({{"name", name}, {"count", n}});
  }
  std::set<std::string> files;
  for (const auto& s : corpus_.sentences()) files.insert(s.file_id);
  doc["stats"] = {{"sentences", corpus_.size()}, {"files", files.size()}};
  doc["defaults"] = params_json(AnalyzeParams{});
  doc["corpusHash"] = corpus_hash_;
  return json_response(200, doc);
}

std::shared_ptr<const Analysis> Service::compute(const AnalyzeParams& p) const {
  ExtractionRequest req = base_;
  req.concept_id = p.concept_id;
  req.group = p.group;
  req.num_topics = p.num_topics;
  req.top_n = p.top_n;
  req.lda.seed = p.seed;

  auto out = std::make_shared<Analysis>();
  auto result = extract_topics(corpus_, req);
  if (auto* nd = std::get_if<NoData>(&result)) {
    out->no_data = *nd;
    return out;
  }
  auto& st = std::get<StratumTopics>(result);
  out->topics = st.summaries;
  out->stratum_size = st.stratum_size;
  out->retained = st.retained.size();
  out->vocabulary = static_cast<std::size_t>(st.matrix.weights.cols());

  std::vector<std::vector<std::string>> keyword_lists;
  std::vector<std::string> words;
  for (const auto& s : st.summaries) {
    keyword_lists.push_back(s.keywords);
    for (const auto& w : s.keywords) {
      if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
    }
  }
  const auto sim = term_cosine_similarity(st.matrix, words);
  out->layout = layout(build_merged_keyword_graph(keyword_lists, sim, kDefaultThreshold),
                       LayoutConfig{.seed = p.seed});
  out->all_pairs = all_pairs(words, sim);
  return out;
}

std::shared_ptr<const Analysis> Service::run(const AnalyzeParams& params) {
  const auto key = cache_key(params);
  {
    std::lock_guard lock(mutex_);
    if (auto it = index_.find(key); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
  }
  // computed outside the lock; racing identical requests produce equal values
  auto value = compute(params);
  std::lock_guard lock(mutex_);
  if (auto it = index_.find(key); it != index_.end()) return it->second->second;
  lru_.emplace_front(key, value);
  index_[key] = lru_.begin();
  while (lru_.size() > capacity_) {
    index_.erase(lru_.back().first);
    lru_.pop_back();
  }
  return value;
}

std::string Service::response_json(const AnalyzeParams& p, const Analysis& a) const {
  ojson doc;
  doc["request"] = params_json(p);
  doc["topics"] = ojson::array();
  for (const auto& t : a.topics) {
    doc["topics"].push_back({
        {"concept", t.concept_id ? ojson(*t.concept_id) : ojson(nullptr)},
        {"conceptName", t.concept_id ? corpus_.taxonomy().name(*t.concept_id) : std::string(kAllLabel)},
        {"group", t.group ? ojson(*t.group) : ojson(nullptr)},
        {"topic", t.topic_index},
        {"keywords", t.keywords},
        {"sentenceCount", t.sentence_count},
    });
  }
  LayoutedGraph shown = a.layout;
  shown.graph.threshold = p.threshold;
  shown.graph.edges.clear();
  for (const auto& e : a.all_pairs) {
    if (e.weight > p.threshold) shown.graph.edges.push_back(e);
  }
  auto graph = graph_to_json(shown);
  graph["allPairs"] = edges_to_json(a.all_pairs);
  doc["graph"] = std::move(graph);
  doc["stats"] = {{"stratumSize", a.stratum_size},
                  {"retained", a.retained},
                  {"vocabulary", a.vocabulary}};
  doc["seed"] = p.seed;
  doc["corpusHash"] = corpus_hash_;
  return doc.dump();
}

HttpResponse Service::analyze(std::string_view body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto params = params_from_json(corpus_, body);
    const auto analysis = run(params);
    if (analysis->no_data) {
      return error_response({404, "no_data", analysis->no_data->message()});
    }
    HttpResponse r{200, "application/json", response_json(params, *analysis), {}};
    r.headers["X-Compute-Ms"] = elapsed_ms(start);
    return r;
  } catch (const HttpError& e) {
    return error_response(e);
  } catch (const ConfigError& e) {
    return error_response(bad_request(e.what()));
  }
}

HttpResponse Service::export_result(const std::multimap<std::string, std::string>& query) {
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto fmt = query.find("fmt");
    if (fmt == query.end()) throw bad_request("missing fmt (csv or json)");
    if (query.count("fmt") > 1) throw bad_request("repeated fmt");
    if (fmt->second != "csv" && fmt->second != "json") {
      throw bad_request("fmt must be csv or json");
    }
    const auto params = params_from_query(corpus_, query);
    const auto analysis = run(params);
    if (analysis->no_data) {
      return error_response({404, "no_data", analysis->no_data->message()});
    }
    HttpResponse r;
    if (fmt->second == "csv") {
      std::ostringstream out;
      export_topics_csv(analysis->topics, corpus_.taxonomy(), out);
      r.content_type = "text/csv; charset=utf-8";
      r.body = out.str();
      r.headers["Content-Disposition"] = "attachment; filename=\"topics.csv\"";
    } else {
      r.body = response_json(params, *analysis);
      r.headers["Content-Disposition"] = "attachment; filename=\"analysis.json\"";
    }
    r.headers["X-Compute-Ms"] = elapsed_ms(start);
    return r;
  } catch (const HttpError& e) {
    return error_response(e);
  } catch (const ConfigError& e) {
    return error_response(bad_request(e.what()));
  }
}

struct HttpServer::Impl {
  explicit Impl(Service& s) : service(s) {}
  Service& service;
  httplib::Server server;
};

namespace {

void send(httplib::Response& res, const HttpResponse& r) {
  res.status = r.status;
  for (const auto& [k, v] : r.headers) res.set_header(k, v);
  res.set_content(r.body, r.content_type);
}

}  // namespace

HttpServer::HttpServer(Service& service, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto& srv = impl_->server;
  srv.set_payload_max_length(1 << 20);
  srv.Get("/api/v1/meta", [this](const httplib::Request&, httplib::Response& res) {
    send(res, impl_->service.meta());
  });
  srv.Post("/api/v1/analyze", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, impl_->service.analyze(req.body));
  });
  srv.Get("/api/v1/export", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, impl_->service.export_result(req.params));
  });
  if (static_dir) {
    if (!srv.set_mount_point("/", static_dir->string())) {
      throw IoError("static directory not found: " + static_dir->string());
    }
  } else {
    srv.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
    });
  }
  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    send(res, error_response({500, "internal", message}));
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind_any_port(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool HttpServer::bind(const std::string& host, int port) {
  return impl_->server.bind_to_port(host, port);
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace stratatopics
