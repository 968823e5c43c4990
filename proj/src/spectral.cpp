#include "gbfrft/spectral.hpp"

#include "gbfrft/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace gbfrft {

MatrixXc SpectralBasis::reconstruct() const { return V * lambda.asDiagonal() * V_inv; }

namespace {

bool is_hermitian(const MatrixXc& m) {
  return hermitian_defect(m) <= 1e-13 * std::max(1.0, m.norm());
}

bool is_normal(const MatrixXc& m) {
  const double scale = std::max(1.0, m.squaredNorm());
  return (m * m.adjoint() - m.adjoint() * m).norm() <= 1e-12 * scale;
}

void snap_to_branch(VectorXc& lambda, double tol) {
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    const Complex z = lambda(k);
    if (z.real() < 0.0 && std::abs(z.imag()) <= tol * std::max(1.0, std::abs(z))) {
      lambda(k) = Complex(z.real(), 0.0);
    }
  }
}

void sort_eigenpairs(SpectralBasis& b) {
  const auto n = b.lambda.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index p, Eigen::Index q) {
    const Complex a = b.lambda(p);
    const Complex c = b.lambda(q);
    if (a.real() != c.real()) return a.real() > c.real();
    return a.imag() > c.imag();
  });
  SpectralBasis sorted;
  sorted.V.resize(n, n);
  sorted.V_inv.resize(n, n);
  sorted.lambda.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    sorted.V.col(k) = b.V.col(src);
    sorted.V_inv.row(k) = b.V_inv.row(src);
    sorted.lambda(k) = b.lambda(src);
  }
  sorted.orthonormal = b.orthonormal;
  b = std::move(sorted);
}

bool meets_invariants(const SpectralBasis& b, const MatrixXc& m, double tol) {
  const auto n = m.rows();
  const double rec = (b.reconstruct() - m).norm() / std::max(1.0, m.norm());
  const double ident = (b.V * b.V_inv - MatrixXc::Identity(n, n)).norm();
  return rec <= tol && ident <= tol;
}

SpectralBasis decompose_general(const MatrixXc& m, const SpectralTolerances& tol) {
  Eigen::ComplexEigenSolver<MatrixXc> solver(m, true);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::DefectiveMatrix, "complex eigensolver did not converge");
  }
  SpectralBasis b;
  b.V = solver.eigenvectors();
  b.lambda = solver.eigenvalues();
  const double cond = condition_number(b.V);
  if (!(cond <= tol.max_condition)) {
    fail(ErrorKind::DefectiveMatrix,
         "eigenvector matrix is numerically singular (condition " + std::to_string(cond) + ")");
  }
  b.V_inv = b.V.partialPivLu().inverse();
  b.orthonormal = false;
  return b;
}

}  // namespace

SpectralBasis eig_general(const MatrixXc& m, const SpectralTolerances& tol) {
  if (m.rows() != m.cols()) fail(ErrorKind::ShapeMismatch, "eig_general needs a square matrix");
  if (!m.allFinite()) fail(ErrorKind::NonFinite, "eig_general input has non-finite entries");
  const auto n = m.rows();

  SpectralBasis b;
  bool done = false;
  if (is_hermitian(m)) {
    const MatrixXc h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXc> solver(h);
    if (solver.info() == Eigen::Success) {
      b.V = solver.eigenvectors();
      b.lambda = solver.eigenvalues().cast<Complex>();
      b.V_inv = b.V.adjoint();
      b.orthonormal = true;
      done = meets_invariants(b, m, tol.reconstruction);
    }
  }
  if (!done && is_normal(m)) {
    Eigen::ComplexSchur<MatrixXc> schur(m);
    if (schur.info() == Eigen::Success) {
      b.V = schur.matrixU();
      b.lambda = schur.matrixT().diagonal();
      b.V_inv = b.V.adjoint();
      b.orthonormal = true;
      done = meets_invariants(b, m, tol.reconstruction);
    }
  }
  if (!done) b = decompose_general(m, tol);

  snap_to_branch(b.lambda, tol.branch_snap);
  sort_eigenpairs(b);

  if (!meets_invariants(b, m, tol.reconstruction)) {
    fail(ErrorKind::DefectiveMatrix,
         "eigendecomposition of a " + std::to_string(n) + "×" + std::to_string(n) +
             " matrix misses the reconstruction tolerance");
  }
  return b;
}

Complex principal_log(Complex z) {
  if (z.imag() == 0.0 && z.real() < 0.0) {
    return {std::log(-z.real()), std::numbers::pi};
  }
  return std::log(z);
}

Complex principal_power(Complex z, double alpha) {
  if (z == Complex(0.0, 0.0)) {
    if (alpha > 0.0) return {0.0, 0.0};
    if (alpha == 0.0) return {1.0, 0.0};
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
  return std::exp(alpha * principal_log(z));
}

MatrixXc generator(const SpectralBasis& basis) {
  VectorXc logs(basis.size());
  for (Eigen::Index k = 0; k < basis.size(); ++k) {
    if (basis.lambda(k) == Complex(0.0, 0.0)) {
      fail(ErrorKind::SingularPower, "generator is undefined for a zero eigenvalue");
    }
    logs(k) = principal_log(basis.lambda(k));
  }
  return basis.V * logs.asDiagonal() * basis.V_inv;
}

PowerDiagonals power_diagonals(const SpectralBasis& basis, double alpha,
                               const SpectralTolerances& tol) {
  if (!std::isfinite(alpha)) fail(ErrorKind::NonFinite, "fractional order must be finite");
  const auto n = basis.size();
  const double scale = std::max(1.0, basis.lambda.cwiseAbs().maxCoeff());

  PowerDiagonals d;
  d.power.resize(n);
  d.inverse_power.resize(n);
  d.log.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex z = basis.lambda(k);
    if (std::abs(z) <= tol.zero_eigenvalue * scale) {
      if (alpha < 0.0) {
        fail(ErrorKind::SingularPower, "negative power of a matrix with a zero eigenvalue");
      }
      // 0^α = 0 for α > 0 and 1 for α = 0; the inverse keeps a pseudo-inverse
      // entry and 0·Log 0 := 0.
      const bool at_zero_order = alpha == 0.0;
      d.power(k) = at_zero_order ? Complex(1.0) : Complex(0.0);
      d.inverse_power(k) = at_zero_order ? Complex(1.0) : Complex(0.0);
      d.log(k) = 0.0;
      d.singular = d.singular || !at_zero_order;
      continue;
    }
    const Complex lg = principal_log(z);
    d.log(k) = lg;
    d.power(k) = std::exp(alpha * lg);
    d.inverse_power(k) = std::exp(-alpha * lg);
  }
  if (!d.power.allFinite() || !d.inverse_power.allFinite()) {
    fail(ErrorKind::NonFinite, "fractional power overflowed");
  }
  return d;
}

FractionalOperator fractional_power(const BasisPtr& basis, double alpha,
                                    const SpectralTolerances& tol) {
  const PowerDiagonals d = power_diagonals(*basis, alpha, tol);
  const MatrixXc& V = basis->V;
  const MatrixXc& V_inv = basis->V_inv;

  FractionalOperator op;
  op.order = alpha;
  op.basis = basis;
  op.singular = d.singular;
  op.matrix = V * d.power.asDiagonal() * V_inv;
  op.inverse = V * d.inverse_power.asDiagonal() * V_inv;
  op.derivative = V * d.power.cwiseProduct(d.log).asDiagonal() * V_inv;
  op.inverse_derivative = -(V * d.inverse_power.cwiseProduct(d.log).asDiagonal() * V_inv);
  return op;
}

}  // namespace gbfrft
