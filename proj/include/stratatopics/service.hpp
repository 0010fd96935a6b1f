#pragma once

#include <cstddef>
#include <filesystem>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "stratatopics/corpus.hpp"
#include "stratatopics/graph.hpp"
#include "stratatopics/topics.hpp"

namespace stratatopics {

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

/// Parameters of one analysis. A null concept or group pools over it.
struct AnalyzeParams {
  std::optional<ConceptId> concept_id;
  std::optional<std::string> group;
  int num_topics = 5;
  int top_n = 10;
  double threshold = kDefaultThreshold;
  std::uint64_t seed = 0;

  static constexpr int kMaxTopics = 50;
  static constexpr int kMaxTopN = 100;
};

/// Topics plus the merged keyword graph of one stratum, before the request
/// threshold is applied.
struct Analysis {
  std::optional<NoData> no_data;
  std::vector<TopicSummary> topics;
  LayoutedGraph layout;  // positions from the graph at kDefaultThreshold
  std::vector<GraphEdge> all_pairs;
  std::size_t stratum_size = 0;
  std::size_t retained = 0;
  std::size_t vocabulary = 0;
};

/// Request handlers over an immutable corpus snapshot. Thread-safe; results
/// are memoized per (stratum, num_topics, top_n, seed) in a bounded LRU.
class Service {
 public:
  Service(Corpus corpus, std::string corpus_hash, ExtractionRequest base = {},
          std::size_t cache_capacity = 64);

  HttpResponse meta() const;
  HttpResponse analyze(std::string_view body);
  /// Query keys: fmt (csv|json), concept, group, num_topics, top_n, seed, threshold.
  HttpResponse export_result(const std::multimap<std::string, std::string>& query);

  /// Throws ValidationError (400) or ConfigError (422) via the handlers.
  std::shared_ptr<const Analysis> run(const AnalyzeParams& params);

  const Corpus& corpus() const noexcept { return corpus_; }
  const std::string& corpus_hash() const noexcept { return corpus_hash_; }
  std::size_t cache_size() const;

 private:
  std::string response_json(const AnalyzeParams& p, const Analysis& a) const;
  std::shared_ptr<const Analysis> compute(const AnalyzeParams& p) const;

  Corpus corpus_;
  std::string corpus_hash_;
  ExtractionRequest base_;
  std::size_t capacity_;

  using Key = std::string;
  mutable std::mutex mutex_;
  std::list<std::pair<Key, std::shared_ptr<const Analysis>>> lru_;
  std::unordered_map<Key, decltype(lru_)::iterator> index_;
};

/// Blocking HTTP front end. `static_dir`, when set, is mounted at `/`;
/// otherwise `/` serves a small placeholder page.
class HttpServer {
 public:
  HttpServer(Service& service, std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to an ephemeral port and returns it, or -1.
  int bind_any_port(const std::string& host);
  bool bind(const std::string& host, int port);
  /// Serves until stop(); returns false if the socket was never bound.
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace stratatopics
