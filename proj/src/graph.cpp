#include "stratatopics/graph.hpp"

#include <cstdio>
#include <numbers>
#include "json.hpp"

#include "stratatopics/error.hpp"

namespace stratatopics {
namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

void check_threshold(double threshold) {
  if (!(threshold >= -1.0 && threshold <= 1.0)) {
    throw ConfigError("threshold must be in [-1, 1]");
  }
}

std::vector<Eigen::Index> label_indices(std::span<const GraphNode> nodes,
                                        const SimilarityMatrix<double>& sim) {
  std::vector<Eigen::Index> idx;
  idx.reserve(nodes.size());
  for (const auto& node : nodes) {
    auto i = sim.index_of(node.word);
    if (!i) throw ValidationError("unknown word: " + node.word);
    idx.push_back(*i);
  }
  return idx;
}

KeywordGraph connect(std::vector<GraphNode> nodes, const SimilarityMatrix<double>& sim,
                     double threshold) {
  check_threshold(threshold);
  const auto idx = label_indices(nodes, sim);
  KeywordGraph g;
  g.threshold = threshold;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      const double s = sim.values(idx[i], idx[j]);
      if (s > threshold) g.edges.push_back({nodes[i].word, nodes[j].word, s});
    }
  }
  g.nodes = std::move(nodes);
  return g;
}

}  // namespace

Eigen::Index KeywordGraph::index_of(std::string_view word) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].word == word) return static_cast<Eigen::Index>(i);
  }
  return -1;
}

Eigen::Vector2d LayoutedGraph::position(std::string_view word) const {
  const Eigen::Index i = graph.index_of(word);
  if (i < 0) throw ValidationError("unknown node: " + std::string(word));
  return positions.col(i);
}

KeywordGraph build_keyword_graph(std::span<const std::string> words,
                                 const SimilarityMatrix<double>& sim, double threshold,
                                 int topic) {
  std::vector<GraphNode> nodes;
  for (const auto& w : words) {
    if (std::none_of(nodes.begin(), nodes.end(), [&](const auto& n) { return n.word == w; })) {
      nodes.push_back({w, topic});
    }
  }
  return connect(std::move(nodes), sim, threshold);
}

KeywordGraph build_merged_keyword_graph(std::span<const std::vector<std::string>> topics,
                                        const SimilarityMatrix<double>& sim, double threshold) {
  std::vector<GraphNode> nodes;
  for (std::size_t t = 0; t < topics.size(); ++t) {
    for (const auto& w : topics[t]) {
      if (std::none_of(nodes.begin(), nodes.end(), [&](const auto& n) { return n.word == w; })) {
        nodes.push_back({w, static_cast<int>(t + 1)});
      }
    }
  }
  return connect(std::move(nodes), sim, threshold);
}

std::vector<GraphEdge> all_pairs(std::span<const std::string> words,
                                 const SimilarityMatrix<double>& sim) {
  std::vector<GraphNode> nodes;
  for (const auto& w : words) nodes.push_back({w, 1});
  const auto idx = label_indices(nodes, sim);
  std::vector<GraphEdge> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      out.push_back({words[i], words[j], sim.values(idx[i], idx[j])});
    }
  }
  return out;
}

LayoutedGraph layout(const KeywordGraph& g, const LayoutConfig& cfg) {
  const Eigen::Index n = static_cast<Eigen::Index>(g.nodes.size());
  LayoutedGraph out{g, Eigen::Matrix2Xd(2, n)};
  if (n == 0) return out;

  std::mt19937_64 rng(cfg.seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  Eigen::Matrix2Xd start(2, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = uniform();
    start(0, i) = x;
    start(1, i) = uniform();
  }
  const double phase = 2.0 * std::numbers::pi * uniform();

  std::vector<Eigen::Index> degree(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> edge_idx;
  for (const auto& e : g.edges) {
    const Eigen::Index u = g.index_of(e.source);
    const Eigen::Index v = g.index_of(e.target);
    if (u < 0 || v < 0) throw ValidationError("edge references unknown node");
    ++degree[static_cast<std::size_t>(u)];
    ++degree[static_cast<std::size_t>(v)];
    edge_idx.emplace_back(u, v);
  }

  std::vector<Eigen::Index> linked, isolated;
  for (Eigen::Index i = 0; i < n; ++i) {
    (degree[static_cast<std::size_t>(i)] > 0 ? linked : isolated).push_back(i);
  }
  const double k = 1.0 / std::sqrt(static_cast<double>(n));

  Eigen::Matrix2Xd pos = start;
  if (!linked.empty()) {
    std::vector<Eigen::Index> local(static_cast<std::size_t>(n), -1);
    Eigen::Matrix2Xd sub(2, static_cast<Eigen::Index>(linked.size()));
    for (std::size_t i = 0; i < linked.size(); ++i) {
      local[static_cast<std::size_t>(linked[i])] = static_cast<Eigen::Index>(i);
      sub.col(static_cast<Eigen::Index>(i)) = start.col(linked[i]);
    }
    std::vector<std::pair<Eigen::Index, Eigen::Index>> sub_edges;
    for (const auto& [u, v] : edge_idx) {
      sub_edges.emplace_back(local[static_cast<std::size_t>(u)], local[static_cast<std::size_t>(v)]);
    }
    sub = fruchterman_reingold<double>(std::move(sub), sub_edges, k, cfg);
    for (std::size_t i = 0; i < linked.size(); ++i) pos.col(linked[i]) = sub.col(static_cast<Eigen::Index>(i));
  }

  if (!isolated.empty()) {
    Eigen::Vector2d center(0.5, 0.5);
    double radius = 0.5;
    if (!linked.empty()) {
      Eigen::Vector2d lo = pos.col(linked.front()), hi = lo;
      for (Eigen::Index i : linked) {
        lo = lo.cwiseMin(pos.col(i));
        hi = hi.cwiseMax(pos.col(i));
      }
      center = (lo + hi) / 2;
      radius = (hi - lo).norm() / 2 + k;
    }
    const double m = static_cast<double>(isolated.size());
    for (std::size_t j = 0; j < isolated.size(); ++j) {
      const double a = phase + 2.0 * std::numbers::pi * static_cast<double>(j) / m;
      pos.col(isolated[j]) = center + radius * Eigen::Vector2d(std::cos(a), std::sin(a));
    }
  }

  const Eigen::Vector2d lo = pos.rowwise().minCoeff();
  const Eigen::Vector2d hi = pos.rowwise().maxCoeff();
  const double extent = (hi - lo).maxCoeff();
  const Eigen::Vector2d mid = (lo + hi) / 2;
  if (extent < 1e-12) {
    out.positions.setConstant(0.5);
  } else {
    out.positions = ((pos.colwise() - mid) * (0.9 / extent)).array() + 0.5;
  }
  return out;
}

nlohmann::ordered_json graph_to_json(const LayoutedGraph& lg) {
  const auto& g = lg.graph;
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    doc["nodes"].push_back({{"id", g.nodes[i].word},
                            {"x", lg.positions(0, col)},
                            {"y", lg.positions(1, col)},
                            {"topic", g.nodes[i].topic}});
  }
  doc["edges"] = edges_to_json(g.edges);
  doc["threshold"] = g.threshold;
  return doc;
}

nlohmann::ordered_json edges_to_json(std::span<const GraphEdge> edges) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& e : edges) {
    arr.push_back({{"source", e.source}, {"target", e.target}, {"weight", e.weight}});
  }
  return arr;
}

void export_graph(const LayoutedGraph& lg, GraphFormat format, std::ostream& out) {
  const auto& g = lg.graph;
  switch (format) {
    case GraphFormat::Json:
      out << graph_to_json(lg).dump(2) << '\n';
      break;
    case GraphFormat::Dot: {
      out << "graph keywords {\n";
      out << "  // threshold " << fmt("%.17g", g.threshold) << '\n';
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        out << "  " << dot_quote(g.nodes[i].word) << " [topic=" << g.nodes[i].topic
            << ", pos=\"" << fmt("%.6f", lg.positions(0, col)) << ','
            << fmt("%.6f", lg.positions(1, col)) << "\"];\n";
      }
      for (const auto& e : g.edges) {
        out << "  " << dot_quote(e.source) << " -- " << dot_quote(e.target)
            << " [weight=" << fmt("%.17g", e.weight) << "];\n";
      }
      out << "}\n";
      break;
    }
    case GraphFormat::Svg: {
      constexpr double kSize = 1000.0;
      out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" "
             "viewBox=\"0 0 1000 1000\">\n";
      out << "  <rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
      out << "  <g stroke=\"#333333\" stroke-width=\"2\">\n";
      for (const auto& e : g.edges) {
        const Eigen::Vector2d a = lg.position(e.source) * kSize;
        const Eigen::Vector2d b = lg.position(e.target) * kSize;
        out << "    <line x1=\"" << fmt("%.2f", a.x()) << "\" y1=\"" << fmt("%.2f", a.y())
            << "\" x2=\"" << fmt("%.2f", b.x()) << "\" y2=\"" << fmt("%.2f", b.y())
            << "\" stroke-opacity=\"" << fmt("%.4f", std::clamp(e.weight, 0.0, 1.0)) << "\"/>\n";
      }
      out << "  </g>\n";
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const Eigen::Vector2d p = lg.positions.col(static_cast<Eigen::Index>(i)) * kSize;
        const int topic = std::max(g.nodes[i].topic, 1);
        out << "  <circle cx=\"" << fmt("%.2f", p.x()) << "\" cy=\"" << fmt("%.2f", p.y())
            << "\" r=\"12\" fill=\"" << kPalette[(topic - 1) % 10] << "\"/>\n";
        out << "  <text x=\"" << fmt("%.2f", p.x()) << "\" y=\"" << fmt("%.2f", p.y() - 16)
            << "\" font-family=\"sans-serif\" font-size=\"18\" text-anchor=\"middle\">"
            << xml_escape(g.nodes[i].word) << "</text>\n";
      }
      out << "</svg>\n";
      break;
    }
  }
  if (!out) throw IoError("failed writing graph");
}

LayoutedGraph import_graph_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
    LayoutedGraph lg;
    lg.graph.threshold = doc.at("threshold").get<double>();
    const auto& nodes = doc.at("nodes");
    lg.positions.resize(2, static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      lg.graph.nodes.push_back({n.at("id").get<std::string>(), n.at("topic").get<int>()});
      lg.positions(0, static_cast<Eigen::Index>(i)) = n.at("x").get<double>();
      lg.positions(1, static_cast<Eigen::Index>(i)) = n.at("y").get<double>();
    }
    for (const auto& e : doc.at("edges")) {
      lg.graph.edges.push_back({e.at("source").get<std::string>(),
                                e.at("target").get<std::string>(), e.at("weight").get<double>()});
    }
    return lg;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid graph JSON: ") + e.what());
  }
}

}  // namespace stratatopics
