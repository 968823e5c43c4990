#include "gbfrft/error.hpp"
#include "gbfrft/spectral.hpp"
#include "gbfrft/transforms.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace gbfrft;

namespace {

const Complex j(0.0, 1.0);

double defect(const SpectralBasis& b, const MatrixXc& m) {
  return (b.reconstruct() - m).norm() + (b.V * b.V_inv - MatrixXc::Identity(m.rows(), m.cols())).norm();
}

MatrixXc random_diagonalizable(int n, std::mt19937_64& rng) {
  const MatrixXc P = oracle::random_complex(n, n, rng) + 3.0 * MatrixXc::Identity(n, n);
  const VectorXc d = oracle::random_complex(n, 1, rng);
  return P * d.asDiagonal() * P.inverse();
}

}  // namespace

TEST(Eig, IdentityMatrix) {
  const SpectralBasis b = eig_general(MatrixXc::Identity(3, 3));
  EXPECT_LT((b.lambda - VectorXc::Ones(3)).norm(), 1e-15);
  EXPECT_TRUE(b.orthonormal);
  EXPECT_LT(defect(b, MatrixXc::Identity(3, 3)), 1e-14);
}

TEST(Eig, PathOfTwoIsSortedDescending) {
  const MatrixXc a = make_named_graph(GraphKind::Path, 2).adjacency.cast<Complex>();
  const SpectralBasis b = eig_general(a);
  EXPECT_NEAR(b.lambda(0).real(), 1.0, 1e-15);
  EXPECT_NEAR(b.lambda(1).real(), -1.0, 1e-15);
  EXPECT_LT(defect(b, a), 1e-14);
}

TEST(Eig, CycleOfFourSpectrum) {
  const MatrixXc a = make_named_graph(GraphKind::Cycle, 4).adjacency.cast<Complex>();
  const SpectralBasis b = eig_general(a);
  const double expected[] = {2.0, 0.0, 0.0, -2.0};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(b.lambda(k).real(), expected[k], 1e-12);
  EXPECT_TRUE(b.orthonormal);
  EXPECT_LT(defect(b, a), 1e-12);
}

TEST(Eig, DirectedCycleIsNormal) {
  // a consistently oriented cycle is a permutation matrix: normal, not Hermitian
  MatrixXr perm = MatrixXr::Zero(6, 6);
  for (int i = 0; i < 6; ++i) perm((i + 1) % 6, i) = 1.0;
  const SpectralBasis b = eig_general(perm.cast<Complex>());
  EXPECT_TRUE(b.orthonormal);
  EXPECT_LT(defect(b, perm.cast<Complex>()), 1e-12);
  for (int k = 0; k < 6; ++k) EXPECT_NEAR(std::abs(b.lambda(k)), 1.0, 1e-12);
}

TEST(Eig, GeneralDiagonalizable) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixXc m = random_diagonalizable(5, rng);
    const SpectralBasis b = eig_general(m);
    EXPECT_LT(defect(b, m), 1e-9);
    for (int k = 0; k + 1 < 5; ++k) {
      const Complex p = b.lambda(k), q = b.lambda(k + 1);
      EXPECT_TRUE(p.real() > q.real() || (p.real() == q.real() && p.imag() >= q.imag()));
    }
  }
}

TEST(Eig, DefectiveThrows) {
  MatrixXc jordan = MatrixXc::Zero(2, 2);
  jordan(0, 1) = 1.0;
  try {
    eig_general(jordan);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DefectiveMatrix);
  }
}

TEST(PrincipalLog, NegativeAxisMapsToPlusPi) {
  EXPECT_EQ(principal_log(Complex(-1.0, 0.0)), Complex(0.0, std::numbers::pi));
  EXPECT_EQ(principal_power(Complex(-1.0, 0.0), 0.5).imag(), 1.0);
  EXPECT_NEAR(principal_power(Complex(-1.0, 0.0), 0.5).real(), 0.0, 1e-16);
  EXPECT_EQ(principal_power(Complex(0.0, 0.0), 0.3), Complex(0.0, 0.0));
}

TEST(PrincipalLog, SnapsNearBranchCut) {
  // −1 − tiny·j lies below the cut; after snapping it takes the +jπ branch
  MatrixXc m(1, 1);
  m(0, 0) = Complex(-1.0, -1e-14);
  const SpectralBasis b = eig_general(m);
  EXPECT_EQ(b.lambda(0).imag(), 0.0);
  EXPECT_NEAR(principal_log(b.lambda(0)).imag(), std::numbers::pi, 1e-15);
}

TEST(Power, EndpointsAndHalf) {
  const MatrixXc a = make_named_graph(GraphKind::Path, 2).adjacency.cast<Complex>();
  const SpectralBasis b = eig_general(a);
  EXPECT_LT((fractional_power(b, 0.0).matrix - MatrixXc::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LT((fractional_power(b, 1.0).matrix - a).norm(), 1e-14);
  const FractionalOperator half = fractional_power(b, 0.5);
  // eigenvalues 1 and (−1)^½ = j
  Eigen::ComplexEigenSolver<MatrixXc> es(half.matrix);
  std::vector<Complex> ev = {es.eigenvalues()(0), es.eigenvalues()(1)};
  std::sort(ev.begin(), ev.end(), [](Complex p, Complex q) { return p.real() > q.real(); });
  EXPECT_LT(std::abs(ev[0] - 1.0), 1e-14);
  EXPECT_LT(std::abs(ev[1] - j), 1e-14);
  EXPECT_LT((half.matrix * half.matrix - a).norm(), 1e-14);
}

TEST(Power, AdditivityAndInverse) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixXc m = random_diagonalizable(4, rng);
    const auto basis = std::make_shared<const SpectralBasis>(eig_general(m));
    const double a = u(rng), c = u(rng);
    const FractionalOperator fa = fractional_power(basis, a);
    const FractionalOperator fc = fractional_power(basis, c);
    const FractionalOperator fac = fractional_power(basis, a + c);
    EXPECT_LT((fa.matrix * fc.matrix - fac.matrix).norm(), 1e-8 * fac.matrix.norm());
    EXPECT_LT((fa.matrix * fa.inverse - MatrixXc::Identity(4, 4)).norm(), 1e-8);
    EXPECT_LT((fa.inverse - fractional_power(basis, -a).matrix).norm(), 1e-10 * fa.inverse.norm());
  }
}

TEST(Power, UnitaryForUnitaryBase) {
  const auto basis = graph_fractional_basis(make_named_graph(GraphKind::Fan, 5));
  for (double a : {-0.7, 0.25, 0.5, 1.3}) {
    const FractionalOperator f = fractional_power(basis, a);
    EXPECT_LT((f.matrix.adjoint() * f.matrix - MatrixXc::Identity(5, 5)).norm(), 1e-12);
  }
}

TEST(Power, DerivativeMatchesCentralDifference) {
  std::mt19937_64 rng(21);
  const MatrixXc m = random_diagonalizable(4, rng);
  const auto basis = std::make_shared<const SpectralBasis>(eig_general(m));
  const double a = 0.37, eps = 1e-6;
  const FractionalOperator f = fractional_power(basis, a);
  const MatrixXc fd = (fractional_power(basis, a + eps).matrix - fractional_power(basis, a - eps).matrix) / (2 * eps);
  const MatrixXc fdi = (fractional_power(basis, a + eps).inverse - fractional_power(basis, a - eps).inverse) / (2 * eps);
  EXPECT_LT((f.derivative - fd).norm(), 1e-6 * f.derivative.norm());
  EXPECT_LT((f.inverse_derivative - fdi).norm(), 1e-6 * f.inverse_derivative.norm());
}

TEST(Power, MatchesMatrixExponentialOfGenerator) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const MatrixXc m = random_diagonalizable(4, rng);
    const SpectralBasis b = eig_general(m);
    const MatrixXc G = generator(b);
    EXPECT_LT((G.exp() - m).norm(), 1e-8 * m.norm());
    for (double a : {-0.6, 0.3, 0.9}) {
      const MatrixXc expected = (a * G).exp();
      EXPECT_LT((fractional_power(b, a).matrix - expected).norm(), 1e-8 * expected.norm());
    }
  }
}

TEST(Power, DftGeneratorIsScaledHermitianWithIntegerSpectrum) {
  // G = −j(π/2)·K with K Hermitian and eigenvalues in {−2, −1, 0, 1}
  for (int T : {3, 4, 5, 8}) {
    const BasisPtr b = dft_basis(T);
    const MatrixXc K = generator(*b) / (-j * (std::numbers::pi / 2));
    EXPECT_LT(hermitian_defect(K), 1e-10);
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(0.5 * (K + K.adjoint()));
    for (int k = 0; k < T; ++k) {
      const double v = es.eigenvalues()(k);
      EXPECT_NEAR(v, std::round(v), 1e-10);
      EXPECT_GE(std::round(v), -2.0);
      EXPECT_LE(std::round(v), 1.0);
    }
    EXPECT_LT(((-j * (std::numbers::pi / 2) * K).exp() - oracle::dft(T)).norm(), 1e-10);
  }
}

TEST(Power, ZeroEigenvalue) {
  MatrixXc m = MatrixXc::Ones(2, 2);
  const SpectralBasis b = eig_general(m);
  EXPECT_LT((fractional_power(b, 0.0).matrix - MatrixXc::Identity(2, 2)).norm(), 1e-14);
  const FractionalOperator f = fractional_power(b, 0.5);
  EXPECT_TRUE(f.singular);
  // [[1,1],[1,1]] = 2·P with P the projector on (1,1)/√2, so F^½ = √2·P
  EXPECT_LT((f.matrix - m / std::sqrt(2.0)).norm(), 1e-14);
  try {
    fractional_power(b, -0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularPower);
  }
}

TEST(Power, NonFiniteOrderRejected) {
  const SpectralBasis b = eig_general(MatrixXc::Identity(2, 2));
  EXPECT_THROW(fractional_power(b, std::nan("")), Error);
}
