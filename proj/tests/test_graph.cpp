#include "gbfrft/error.hpp"
#include "gbfrft/graph.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>

using namespace gbfrft;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no gbfrft::Error thrown";
  return ErrorKind::IoError;
}

}  // namespace

TEST(NamedGraph, PathOfTwo) {
  const Graph g = make_named_graph(GraphKind::Path, 2);
  MatrixXr expected(2, 2);
  expected << 0, 1, 1, 0;
  EXPECT_EQ(g.adjacency, expected);
  EXPECT_FALSE(g.directed);
  EXPECT_FALSE(g.weighted);
}

TEST(NamedGraph, StarHubRow) {
  const Graph g = make_named_graph(GraphKind::Star, 5);
  EXPECT_EQ(g.adjacency.row(0).sum(), 4.0);
  for (int i = 1; i < 5; ++i) EXPECT_EQ(g.adjacency.row(i).sum(), 1.0);
  EXPECT_EQ(edge_count(g), 4);
}

TEST(NamedGraph, CycleDegrees) {
  const Graph g = make_named_graph(GraphKind::Cycle, 8);
  for (int i = 0; i < 8; ++i) EXPECT_EQ(g.adjacency.row(i).sum(), 2.0);
  EXPECT_EQ(edge_count(g), 8);
}

TEST(NamedGraph, FanAndComplete) {
  EXPECT_EQ(edge_count(make_named_graph(GraphKind::Fan, 5)), 4 + 3);
  EXPECT_EQ(edge_count(make_named_graph(GraphKind::Complete, 5)), 10);
}

TEST(NamedGraph, RejectsBadArguments) {
  EXPECT_EQ(kind_of([] { make_named_graph(GraphKind::Path, 1); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { make_named_graph(GraphKind::Fan, 2); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { parse_graph_kind("wheel"); }), ErrorKind::InvalidArgument);
}

TEST(NamedGraph, SeededVariants) {
  const Graph a = make_named_graph(GraphKind::Cycle, 8, true, true, 11);
  const Graph b = make_named_graph(GraphKind::Cycle, 8, true, true, 11);
  const Graph c = make_named_graph(GraphKind::Cycle, 8, true, true, 12);
  EXPECT_EQ(a.adjacency, b.adjacency);
  EXPECT_NE(a.adjacency, c.adjacency);
  // one orientation per edge, weights in (0, 1]
  const MatrixXr& w = a.adjacency;
  EXPECT_EQ(edge_count(a), 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      EXPECT_FALSE(w(i, j) != 0.0 && w(j, i) != 0.0);
      if (w(i, j) != 0.0) {
        EXPECT_GT(w(i, j), 0.0);
        EXPECT_LE(w(i, j), 1.0);
      }
    }
  const MatrixXr pattern = (w + w.transpose()).unaryExpr([](double v) { return v != 0.0 ? 1.0 : 0.0; });
  EXPECT_EQ(pattern, make_named_graph(GraphKind::Cycle, 8).adjacency);
}

TEST(Validate, RejectsMalformedAdjacency) {
  MatrixXr loop = MatrixXr::Zero(2, 2);
  loop(0, 0) = 1.0;
  EXPECT_EQ(kind_of([&] { make_graph(loop); }), ErrorKind::InvalidArgument);
  Graph g = make_named_graph(GraphKind::Path, 3);
  g.weighted = false;
  g.adjacency(0, 1) = g.adjacency(1, 0) = 0.5;
  EXPECT_EQ(kind_of([&] { validate(g); }), ErrorKind::InvalidArgument);
  g = make_named_graph(GraphKind::Path, 3);
  g.adjacency(0, 1) = 0.0;
  EXPECT_EQ(kind_of([&] { validate(g); }), ErrorKind::InvalidArgument);
}

TEST(Knn, CollinearPoints) {
  MatrixXr pts(3, 1);
  pts << 0, 1, 10;
  const Graph g = make_knn_graph(pts, 1);
  MatrixXr expected(3, 3);
  expected << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  EXPECT_EQ(g.adjacency, expected);
}

TEST(Knn, TwoPoints) {
  MatrixXr pts(2, 2);
  pts << 0, 0, 3, 4;
  EXPECT_EQ(edge_count(make_knn_graph(pts, 1)), 1);
}

TEST(Knn, UnitSquareHasNoDiagonals) {
  MatrixXr pts(4, 2);
  pts << 0, 0, 1, 0, 1, 1, 0, 1;
  const Graph g = make_knn_graph(pts, 2);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(g.adjacency.row(i).sum(), 2.0);
  EXPECT_EQ(g.adjacency(0, 2), 0.0);
  EXPECT_EQ(g.adjacency(1, 3), 0.0);
}

TEST(Knn, TooFewPoints) {
  MatrixXr pts(3, 1);
  pts << 0, 1, 2;
  EXPECT_EQ(kind_of([&] { make_knn_graph(pts, 3); }), ErrorKind::InvalidArgument);
}

TEST(Knn, DegreeAtLeastK) {
  std::mt19937_64 rng(5);
  const MatrixXr pts = oracle::random_real(30, 2, rng);
  const Graph g = make_knn_graph(pts, 4);
  for (int i = 0; i < 30; ++i) EXPECT_GE(g.adjacency.row(i).sum(), 4.0);
  EXPECT_EQ(g.adjacency, g.adjacency.transpose());
}

TEST(Product, TwoPathsMakeFourCycle) {
  const Graph p2 = make_named_graph(GraphKind::Path, 2);
  const ProductGraph pg = cartesian_product(p2, p2);
  MatrixXr expected = MatrixXr::Zero(4, 4);
  for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 3}, {2, 3}}) expected(i, j) = expected(j, i) = 1;
  EXPECT_EQ(pg.adjacency, expected);
}

TEST(Product, WithSingleVertex) {
  const Graph k1 = make_graph(MatrixXr::Zero(1, 1), "K1");
  const Graph c5 = make_named_graph(GraphKind::Cycle, 5);
  EXPECT_EQ(cartesian_product(c5, k1).adjacency, c5.adjacency);
  EXPECT_EQ(cartesian_product(k1, c5).adjacency, c5.adjacency);
}

TEST(Product, PathCycleCounts) {
  const ProductGraph pg =
      cartesian_product(make_named_graph(GraphKind::Path, 4), make_named_graph(GraphKind::Cycle, 8));
  EXPECT_EQ(pg.size(), 32);
  EXPECT_EQ((pg.adjacency.array() != 0.0).count(), 112);
  EXPECT_EQ(edge_count(pg), 56);
}

TEST(Product, MatchesEdgeRule) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const bool directed = seed % 2 == 1;
    const bool weighted = seed % 4 >= 2;
    const Graph g1 = make_named_graph(GraphKind::Fan, 5, directed, weighted, seed);
    const Graph g2 = make_named_graph(GraphKind::Cycle, 4, directed, weighted, seed + 100);
    const ProductGraph pg = cartesian_product(g1, g2);
    EXPECT_EQ(pg.adjacency, oracle::product_by_edge_rule(g1.adjacency, g2.adjacency));
    EXPECT_EQ(edge_count(pg), edge_count(g1) * g2.n + g1.n * edge_count(g2));
  }
}

TEST(Product, SpectrumIsPairwiseSums) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Graph g1 = oracle::random_undirected(4, 0.5, rng);
    const Graph g2 = oracle::random_undirected(5, 0.5, rng);
    const ProductGraph pg = cartesian_product(g1, g2);
    Eigen::SelfAdjointEigenSolver<MatrixXr> e1(g1.adjacency), e2(g2.adjacency), e(pg.adjacency);
    std::vector<double> sums;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 5; ++j) sums.push_back(e1.eigenvalues()(i) + e2.eigenvalues()(j));
    std::sort(sums.begin(), sums.end());
    for (int k = 0; k < 20; ++k) EXPECT_NEAR(e.eigenvalues()(k), sums[k], 1e-10);
    // swapping the factors permutes vertices but keeps the spectrum
    Eigen::SelfAdjointEigenSolver<MatrixXr> swapped(cartesian_product(g2, g1).adjacency);
    EXPECT_LT((swapped.eigenvalues() - e.eigenvalues()).norm(), 1e-10);
  }
}
