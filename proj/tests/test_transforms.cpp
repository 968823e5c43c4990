#include "gbfrft/error.hpp"
#include "gbfrft/transforms.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace gbfrft;

namespace {

const Graph p4 = make_named_graph(GraphKind::Path, 4);
const Graph c3 = make_named_graph(GraphKind::Cycle, 3);
const Graph p2 = make_named_graph(GraphKind::Path, 2);

MatrixXc eye(Eigen::Index n) { return MatrixXc::Identity(n, n); }

}  // namespace

TEST(Dft, MatchesDefinition) {
  for (int T : {1, 2, 3, 4, 7, 16}) EXPECT_LT((dft_matrix(T) - oracle::dft(T)).norm(), 1e-12);
}

TEST(Gfrft, OrderZeroAndOne) {
  EXPECT_LT((gfrft(p4, 0.0).matrix - eye(4)).norm(), 1e-15);
  const MatrixXc f1 = gfrft(p4, 1.0).matrix;
  EXPECT_LT((f1 - gft_matrix(p4)).norm(), 1e-12);
  // the GFT diagonalizes the adjacency
  const MatrixXc d = f1 * p4.adjacency.cast<Complex>() * f1.adjoint();
  EXPECT_LT((d - MatrixXc(d.diagonal().asDiagonal())).norm(), 1e-12);
}

TEST(Gfrft, HalfOrderSquaresToGft) {
  const MatrixXc h = gfrft(p4, 0.5).matrix;
  EXPECT_LT((h * h - gft_matrix(p4)).norm(), 1e-12);
}

TEST(Gfrft, ShiftPowerConvention) {
  const FractionalOperator f = gfrft(p4, 1.0, Convention::ShiftPower);
  EXPECT_LT((f.matrix - p4.adjacency.cast<Complex>()).norm(), 1e-12);
}

TEST(Dfrft, OrderZeroOneHalf) {
  EXPECT_LT((dfrft(3, 0.0).matrix - eye(3)).norm(), 1e-15);
  EXPECT_LT((dfrft(4, 1.0).matrix - oracle::dft(4)).norm(), 1e-12);
  const MatrixXc h = dfrft(4, 0.5).matrix;
  EXPECT_LT((h * h - oracle::dft(4)).norm(), 1e-12);
}

TEST(Transform2d, ZeroOrdersIsIdentity) {
  EXPECT_LT((transform_2d(p4, c3, 0.0, 0.0).vec_operator() - eye(12)).norm(), 1e-12);
}

TEST(Transform2d, EqualOrdersMatchSharedOrder) {
  const ProductTransform a = transform_2d(p4, c3, 0.35, 0.35);
  const ProductTransform b = gfrft_2d(p4, c3, 0.35);
  EXPECT_LT((a.vec_operator() - b.vec_operator()).norm(), 1e-14);
  EXPECT_EQ(b.kind, TransformKind::Gfrft2d);
}

TEST(Transform2d, OppositeOrdersCancel) {
  const MatrixXc k = transform_2d(p2, p2, 0.3, 0.4).vec_operator() *
                     transform_2d(p2, p2, -0.3, -0.4).vec_operator();
  EXPECT_LT((k - eye(4)).norm(), 1e-12);
}

TEST(Transform2d, VecOperatorIsKronecker) {
  const ProductTransform t = transform_2d(p4, c3, 0.2, 0.9);
  EXPECT_LT((t.vec_operator() - oracle::kron(t.op2.matrix, t.op1.matrix)).norm(), 1e-14);
  EXPECT_LT((t.vec_inverse() * t.vec_operator() - eye(12)).norm(), 1e-10);
}

TEST(Jfrft, EndpointsAndRoundTrip) {
  const Graph g = make_named_graph(GraphKind::Path, 4);
  EXPECT_LT((jfrft(g, 3, 0.0, 0.0).vec_operator() - eye(12)).norm(), 1e-12);
  const MatrixXc expected = oracle::kron(oracle::dft(3), gft_matrix(g));
  EXPECT_LT((jfrft(g, 3, 1.0, 1.0).vec_operator() - expected).norm(), 1e-12);
  std::mt19937_64 rng(1);
  const MatrixXc x = oracle::random_complex(4, 3, rng);
  const ProductTransform t = jfrft(g, 3, 0.4, 0.7);
  EXPECT_LT((gbfrft::apply(t, gbfrft::apply(t, x), Direction::Inverse) - x).norm(), 1e-10 * x.norm());
  // alpha is the time order, beta the vertex order
  EXPECT_LT((t.op2.matrix - dfrft(3, 0.4).matrix).norm(), 1e-14);
  EXPECT_LT((t.op1.matrix - gfrft(g, 0.7).matrix).norm(), 1e-14);
}

TEST(Hybrid, LambdaEndpoints) {
  const Graph g = make_named_graph(GraphKind::Cycle, 4);
  const Graph path = make_named_graph(GraphKind::Path, 5);
  const ProductTransform one = hybrid_transform(g, path, 5, 0.3, 0.6, 1.0);
  EXPECT_LT((one.op2.matrix - dfrft(5, 0.6).matrix).norm(), 1e-14);
  const ProductTransform zero = hybrid_transform(g, path, 5, 0.3, 0.6, 0.0);
  EXPECT_LT((zero.op2.matrix - gfrft(path, 0.6).matrix).norm(), 1e-14);
  // both parts are the identity at order 0, so any blend is too
  const ProductTransform mid = hybrid_transform(g, path, 5, 0.0, 0.0, 0.5);
  EXPECT_LT((mid.vec_operator() - eye(20)).norm(), 1e-12);
  const ProductTransform any = hybrid_transform(g, path, 5, 0.3, 0.6, 0.5);
  const MatrixXc blend = 0.5 * dfrft(5, 0.6).matrix + 0.5 * gfrft(path, 0.6).matrix;
  EXPECT_LT((any.op2.matrix - blend).norm(), 1e-14);
  EXPECT_LT((any.op2.inverse * any.op2.matrix - eye(5)).norm(), 1e-10);
}

TEST(Hybrid, RejectsBadArguments) {
  const Graph path = make_named_graph(GraphKind::Path, 5);
  EXPECT_THROW(hybrid_transform(c3, path, 5, 0.1, 0.1, 1.5), Error);
  EXPECT_THROW(hybrid_transform(c3, path, 4, 0.1, 0.1, 0.5), Error);
}

TEST(Blend, SingularBlendIsReported) {
  FractionalOperator a;
  a.matrix = eye(3);
  a.inverse = eye(3);
  a.derivative = MatrixXc::Zero(3, 3);
  a.inverse_derivative = MatrixXc::Zero(3, 3);
  FractionalOperator b = a;
  b.matrix = -eye(3);
  b.inverse = -eye(3);
  try {
    blend_operators(a, b, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularBlend);
  }
}

TEST(Apply, IdentityAndRoundTrip) {
  MatrixXc x(2, 2);
  x << 1, 2, 3, 4;
  EXPECT_LT((gbfrft::apply(transform_2d(p2, p2, 0.0, 0.0), x) - x).norm(), 1e-14);
  const ProductTransform t = transform_2d(p2, p2, 0.5, 0.5);
  EXPECT_LT((gbfrft::apply(t, gbfrft::apply(t, x), Direction::Inverse) - x).norm(), 1e-12);
}

TEST(Apply, MatrixFormMatchesVecForm) {
  std::mt19937_64 rng(2);
  const Graph g = make_named_graph(GraphKind::Cycle, 4);
  const ProductTransform t = transform_2d(make_named_graph(GraphKind::Path, 3), g, 0.61, -0.27);
  const MatrixXc x = oracle::random_complex(3, 4, rng);
  EXPECT_LT((oracle::vec(gbfrft::apply(t, x)) - t.vec_operator() * oracle::vec(x)).norm(), 1e-12);
  EXPECT_LT((oracle::vec(gbfrft::apply(t, x, Direction::Inverse)) - t.vec_inverse() * oracle::vec(x)).norm(),
            1e-12);
}

TEST(Apply, ShapeMismatch) {
  try {
    gbfrft::apply(transform_2d(p4, c3, 0.1, 0.1), MatrixXc::Zero(3, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ShapeMismatch);
  }
}

TEST(Properties, ParsevalLinearityAdditivity) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g1 = oracle::random_undirected(4, 0.6, rng);
    const Graph g2 = oracle::random_undirected(3, 0.6, rng);
    const double a1 = u(rng), a2 = u(rng), b1 = u(rng), b2 = u(rng);
    const ProductTransform t = transform_2d(g1, g2, a1, a2);
    const MatrixXc x = oracle::random_complex(4, 3, rng);
    const MatrixXc z = oracle::random_complex(4, 3, rng);
    EXPECT_NEAR(gbfrft::apply(t, x).norm(), x.norm(), 1e-10 * x.norm());
    const Complex c(0.3, -1.2);
    EXPECT_LT((gbfrft::apply(t, c * x + z) - (c * gbfrft::apply(t, x) + gbfrft::apply(t, z))).norm(), 1e-10 * x.norm());
    const MatrixXc lhs = transform_2d(g1, g2, b1, b2).vec_operator() * t.vec_operator();
    const MatrixXc rhs = transform_2d(g1, g2, a1 + b1, a2 + b2).vec_operator();
    EXPECT_LT((lhs - rhs).norm(), 1e-8 * 12);
  }
}

TEST(Cache, ReusesOperators) {
  OperatorCache cache;
  const BasisPtr basis = graph_fractional_basis(p4);
  const auto a = cache.get(basis, 0.3);
  const auto b = cache.get(basis, 0.3 + 1e-15);
  const auto c = cache.get(basis, 0.31);
  EXPECT_EQ(a.get(), b.get());
  EXPECT_NE(a.get(), c.get());
  EXPECT_EQ(cache.size(), 2u);
  EXPECT_LT((a->matrix - fractional_power(basis, 0.3).matrix).norm(), 1e-15);
}

TEST(Family, RealizeMatchesDirectConstruction) {
  const TransformFamily f = family_gbfrft(p4, c3);
  const ProductTransform t = f.realize(0.4, 0.8);
  EXPECT_LT((t.vec_operator() - transform_2d(p4, c3, 0.4, 0.8).vec_operator()).norm(), 1e-14);
  const TransformFamily tied = family_gfrft2d(p4, c3);
  EXPECT_EQ(tied.realize(0.4, 0.8).alpha2, 0.4);
}

TEST(Parse, Names) {
  EXPECT_EQ(parse_convention("shift-power"), Convention::ShiftPower);
  EXPECT_EQ(parse_transform_kind("hybrid"), TransformKind::Hybrid);
  EXPECT_EQ(transform_kind_name(parse_transform_kind("2d-gfrft")), "2d-gfrft");
  EXPECT_THROW(parse_convention("power"), Error);
}
