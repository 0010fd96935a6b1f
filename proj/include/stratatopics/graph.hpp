#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "stratatopics/vectorize.hpp"

namespace stratatopics {

struct GraphNode {
  std::string word;
  int topic = 1;
  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  std::string source;
  std::string target;
  double weight = 0;
  bool operator==(const GraphEdge&) const = default;
};

/// Undirected keyword graph; every edge weight is strictly above `threshold`.
struct KeywordGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  double threshold = 0.5;

  /// Node position of `word`, or -1.
  Eigen::Index index_of(std::string_view word) const;
  bool operator==(const KeywordGraph&) const = default;
};

struct LayoutedGraph {
  KeywordGraph graph;
  Eigen::Matrix2Xd positions;  // column i is nodes[i], inside [0, 1]^2

  Eigen::Vector2d position(std::string_view word) const;
  bool operator==(const LayoutedGraph& o) const {
    return graph == o.graph && positions.cols() == o.positions.cols() &&
           positions == o.positions;
  }
};

inline constexpr double kDefaultThreshold = 0.5;

/// Nodes are `words` (deduplicated, first occurrence kept) tagged with
/// `topic`; an edge joins i < j iff sim(i, j) > threshold. Throws
/// ConfigError for a threshold outside [-1, 1] and ValidationError naming
/// any word that `sim` does not label.
KeywordGraph build_keyword_graph(std::span<const std::string> words,
                                 const SimilarityMatrix<double>& sim, double threshold,
                                 int topic = 1);

/// Union of several topics' words; a word keeps the first topic it appears in.
KeywordGraph build_merged_keyword_graph(std::span<const std::vector<std::string>> topics,
                                        const SimilarityMatrix<double>& sim, double threshold);

/// Every unordered pair of `words` with its similarity, in (i < j) order.
std::vector<GraphEdge> all_pairs(std::span<const std::string> words,
                                 const SimilarityMatrix<double>& sim);

struct LayoutConfig {
  std::uint64_t seed = 0;
  int iterations = 200;
  double initial_temperature = 0.1;  // cooled linearly to 0
  double step = 0.1;                 // force-to-displacement gain
};

/// Fruchterman-Reingold iterations on raw coordinates.
///
/// Repulsion k^2/d between every pair, attraction d^2/k along each edge;
/// a node moves by `step` times its net force, capped at the current
/// temperature. Two linked nodes therefore settle at distance exactly k.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, Eigen::Dynamic> fruchterman_reingold(
    Eigen::Matrix<Scalar, 2, Eigen::Dynamic> pos,
    std::span<const std::pair<Eigen::Index, Eigen::Index>> edges, Scalar k,
    const LayoutConfig& cfg) {
  using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
  const Eigen::Index n = pos.cols();
  const Scalar k2 = k * k;
  const Scalar eps = Scalar(1e-9);
  Eigen::Matrix<Scalar, 2, Eigen::Dynamic> disp(2, n);
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    const Scalar temperature =
        Scalar(cfg.initial_temperature) * (Scalar(1) - Scalar(iter) / Scalar(cfg.iterations));
    disp.setZero();
    for (Eigen::Index u = 0; u < n; ++u) {
      for (Eigen::Index v = u + 1; v < n; ++v) {
        Vec2 delta = pos.col(u) - pos.col(v);
        Scalar d = delta.norm();
        if (d < eps) {
          // coincident: push apart along a direction fixed by the indices
          const Scalar angle = Scalar(0.61803398875) * Scalar(u * n + v);
          delta = Vec2(std::cos(angle), std::sin(angle)) * eps;
          d = eps;
        }
        const Vec2 f = delta / d * (k2 / d);
        disp.col(u) += f;
        disp.col(v) -= f;
      }
    }
    for (const auto& [u, v] : edges) {
      const Vec2 delta = pos.col(u) - pos.col(v);
      const Scalar d = delta.norm();
      if (d < eps) continue;
      const Vec2 f = delta / d * (d * d / k);
      disp.col(u) -= f;
      disp.col(v) += f;
    }
    for (Eigen::Index u = 0; u < n; ++u) {
      Vec2 move = disp.col(u) * Scalar(cfg.step);
      const Scalar len = move.norm();
      if (len > temperature) move *= temperature / len;
      pos.col(u) += move;
    }
  }
  return pos;
}

/// Force-directed embedding into the unit square: seeded start, fixed
/// iteration count, k = 1/sqrt(n), isolated nodes on a seeded circle around
/// the linked ones, then a uniform rescale into [0.05, 0.95]^2. A lone node
/// sits at (0.5, 0.5).
LayoutedGraph layout(const KeywordGraph& g, const LayoutConfig& cfg = {});

enum class GraphFormat { Json, Dot, Svg };

void export_graph(const LayoutedGraph& lg, GraphFormat format, std::ostream& out);
/// The JSON export as a document: nodes, edges, threshold.
nlohmann::ordered_json graph_to_json(const LayoutedGraph& lg);
nlohmann::ordered_json edges_to_json(std::span<const GraphEdge> edges);
/// Inverse of the JSON export.
LayoutedGraph import_graph_json(std::istream& in);

}  // namespace stratatopics
