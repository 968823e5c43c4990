#include "gbfrft/graph.hpp"

#include "gbfrft/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace gbfrft {

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "path") return GraphKind::Path;
  if (name == "cycle") return GraphKind::Cycle;
  if (name == "fan") return GraphKind::Fan;
  if (name == "star") return GraphKind::Star;
  if (name == "complete") return GraphKind::Complete;
  fail(ErrorKind::InvalidArgument, "unknown graph kind '" + std::string(name) + "'");
}

std::string_view graph_kind_name(GraphKind kind) {
  switch (kind) {
    case GraphKind::Path: return "path";
    case GraphKind::Cycle: return "cycle";
    case GraphKind::Fan: return "fan";
    case GraphKind::Star: return "star";
    case GraphKind::Complete: return "complete";
  }
  return "path";
}

void validate(const Graph& g) {
  const auto& a = g.adjacency;
  if (g.n < 1 || a.rows() != g.n || a.cols() != g.n) {
    fail(ErrorKind::InvalidArgument, "graph adjacency must be n×n with n ≥ 1");
  }
  if (!a.allFinite()) fail(ErrorKind::InvalidArgument, "graph adjacency has non-finite entries");
  for (int i = 0; i < g.n; ++i) {
    if (a(i, i) != 0.0) fail(ErrorKind::InvalidArgument, "graph adjacency diagonal must be zero");
  }
  if (!g.directed && a != a.transpose()) {
    fail(ErrorKind::InvalidArgument, "undirected graph requires a symmetric adjacency");
  }
  if (!g.weighted) {
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      const double v = a.data()[k];
      if (v != 0.0 && v != 1.0) {
        fail(ErrorKind::InvalidArgument, "unweighted graph requires 0/1 entries");
      }
    }
  }
}

Graph make_graph(const MatrixXr& adjacency, std::string label) {
  Graph g;
  g.n = static_cast<int>(adjacency.rows());
  g.adjacency = adjacency;
  g.directed = adjacency.rows() == adjacency.cols() && adjacency != adjacency.transpose();
  g.weighted = (adjacency.array() != 0.0 && adjacency.array() != 1.0).any();
  g.label = std::move(label);
  validate(g);
  return g;
}

namespace {

std::vector<std::pair<int, int>> named_edges(GraphKind kind, int n) {
  std::vector<std::pair<int, int>> edges;
  switch (kind) {
    case GraphKind::Path:
      for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      break;
    case GraphKind::Cycle:
      for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      if (n > 2) edges.emplace_back(0, n - 1);
      break;
    case GraphKind::Star:
      for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
      break;
    case GraphKind::Complete:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
      break;
    case GraphKind::Fan:
      // hub 0 joined to every vertex of the path 1 – 2 – … – (n−1)
      for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
      for (int i = 1; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      break;
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

}  // namespace

Graph make_named_graph(GraphKind kind, int n, bool directed, bool weighted, std::uint64_t seed) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "named graphs need n ≥ 2");
  if (kind == GraphKind::Fan && n < 3) fail(ErrorKind::InvalidArgument, "fan graph needs n ≥ 3");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  Graph g;
  g.n = n;
  g.adjacency = MatrixXr::Zero(n, n);
  g.directed = directed;
  g.weighted = weighted;
  g.seed = seed;
  g.label = std::string(graph_kind_name(kind)) + std::to_string(n);

  for (auto [i, j] : named_edges(kind, n)) {
    // uniform on (0, 1]
    const double w = weighted ? 1.0 - unit(rng) : 1.0;
    if (!directed) {
      g.adjacency(i, j) = w;
      g.adjacency(j, i) = w;
    } else if (coin(rng)) {
      g.adjacency(j, i) = w;  // i → j
    } else {
      g.adjacency(i, j) = w;  // j → i
    }
  }
  validate(g);
  return g;
}

Graph make_knn_graph(const MatrixXr& coords, int k) {
  const int n = static_cast<int>(coords.rows());
  if (k < 1) fail(ErrorKind::InvalidArgument, "k must be positive");
  if (k >= n) fail(ErrorKind::InvalidArgument, "k-NN graph needs more than k points");
  if (!coords.allFinite()) fail(ErrorKind::InvalidArgument, "coordinates must be finite");

  MatrixXr a = MatrixXr::Zero(n, n);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) dist[j] = (coords.row(i) - coords.row(j)).squaredNorm();
    order.resize(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    order.erase(order.begin() + i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int p, int q) { return dist[p] < dist[q]; });
    for (int r = 0; r < k; ++r) {
      a(i, order[r]) = 1.0;
      a(order[r], i) = 1.0;
    }
  }
  Graph g;
  g.n = n;
  g.adjacency = std::move(a);
  g.label = "knn" + std::to_string(k);
  validate(g);
  return g;
}

ProductGraph cartesian_product(const Graph& g1, const Graph& g2) {
  validate(g1);
  validate(g2);
  ProductGraph pg;
  pg.factor1 = g1;
  pg.factor2 = g2;
  pg.adjacency = kronecker_sum(g2.adjacency, g1.adjacency);
  pg.directed = g1.directed || g2.directed;
  pg.weighted = g1.weighted || g2.weighted;
  return pg;
}

namespace {

long count_edges(const MatrixXr& a, bool directed) {
  long arcs = (a.array() != 0.0).count();
  return directed ? arcs : arcs / 2;
}

}  // namespace

long edge_count(const Graph& g) { return count_edges(g.adjacency, g.directed); }

long edge_count(const ProductGraph& pg) { return count_edges(pg.adjacency, pg.directed); }

}  // namespace gbfrft
