#include "gbfrft/wiener.hpp"

#include "gbfrft/error.hpp"
#include "gbfrft/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gbfrft {

ObservationModel ObservationModel::denoising(Eigen::Index n1, Eigen::Index n2, const MatrixXc& Rxx,
                                             const MatrixXc& Rnn) {
  ObservationModel m;
  m.G1 = MatrixXc::Identity(n1, n1);
  m.G2 = MatrixXc::Identity(n2, n2);
  m.Rxx = Rxx;
  m.Rnn = Rnn;
  return m;
}

MatrixXc ObservationModel::degradation() const { return kron(G2.transpose(), G1); }

MatrixXc ObservationModel::observation_covariance() const {
  const MatrixXc g = degradation();
  MatrixXc ry = g * Rxx * g.adjoint() + Rnn;
  if (has_cross()) ry += g * Rxn + Rnx * g.adjoint();
  return ry;
}

MatrixXc ObservationModel::signal_observation_covariance() const {
  MatrixXc rxy = Rxx * degradation().adjoint();
  if (has_cross()) rxy += Rxn;
  return rxy;
}

namespace {

void check_square(const MatrixXc& m, Eigen::Index n, const char* name) {
  if (m.rows() != n || m.cols() != n) {
    fail(ErrorKind::ShapeMismatch, std::string(name) + " must be " + std::to_string(n) + "×" +
                                       std::to_string(n));
  }
}

void check_covariance(const MatrixXc& r, const char* name) {
  const double scale = std::max(1.0, r.norm());
  if (hermitian_defect(r) > 1e-9 * scale) {
    fail(ErrorKind::NonHermitianStatistics, std::string(name) + " is not Hermitian");
  }
  const MatrixXc h = 0.5 * (r + r.adjoint());
  const double min_eig = Eigen::SelfAdjointEigenSolver<MatrixXc>(h, Eigen::EigenvaluesOnly)
                             .eigenvalues()
                             .minCoeff();
  const double trace = h.trace().real();
  if (min_eig < -1e-9 * std::max(trace, 1e-300) / static_cast<double>(r.rows())) {
    fail(ErrorKind::NonHermitianStatistics, std::string(name) + " is not positive semidefinite");
  }
}

}  // namespace

void ObservationModel::validate() const {
  if (G1.rows() != G1.cols() || G2.rows() != G2.cols()) {
    fail(ErrorKind::ShapeMismatch, "graph filters must be square");
  }
  const auto n = size();
  check_square(Rxx, n, "Rxx");
  check_square(Rnn, n, "Rnn");
  check_covariance(Rxx, "Rxx");
  check_covariance(Rnn, "Rnn");
  if (has_cross() || Rnx.size() != 0) {
    check_square(Rxn, n, "Rxn");
    check_square(Rnx, n, "Rnx");
    if ((Rnx - Rxn.adjoint()).norm() > 1e-9 * std::max(1.0, Rxn.norm())) {
      fail(ErrorKind::NonHermitianStatistics, "Rnx must equal Rxnᴴ");
    }
  }
}

BasisMatrices::BasisMatrices(MatrixXc forward, MatrixXc inverse)
    : forward_(std::move(forward)), inverse_(std::move(inverse)) {}

MatrixXc BasisMatrices::operator()(Eigen::Index m) const {
  return inverse_.col(m) * forward_.row(m);
}

std::vector<MatrixXc> BasisMatrices::materialize() const {
  std::vector<MatrixXc> out;
  out.reserve(static_cast<std::size_t>(count()));
  for (Eigen::Index m = 0; m < count(); ++m) out.push_back((*this)(m));
  return out;
}

namespace {

void check_cap(Eigen::Index n, std::size_t cap) {
  if (static_cast<std::size_t>(n) > cap) {
    fail(ErrorKind::SizeCapExceeded, "product size " + std::to_string(n) + " exceeds the cap " +
                                         std::to_string(cap));
  }
}

}  // namespace

BasisMatrices basis_matrices(const ProductTransform& t, std::size_t cap) {
  check_cap(t.size(), cap);
  return BasisMatrices(t.vec_operator(), t.vec_inverse());
}

NormalEquations assemble_normal_equations(const ObservationModel& model, const ProductTransform& t,
                                          std::size_t cap) {
  check_cap(t.size(), cap);
  model.validate();
  if (model.rows() != t.rows() || model.cols() != t.cols()) {
    fail(ErrorKind::ShapeMismatch, "observation model and transform sizes differ");
  }
  const MatrixXc f = t.vec_operator();
  const MatrixXc finv = t.vec_inverse();
  const MatrixXc gram = finv.adjoint() * finv;
  const MatrixXc spectral_cov = f * model.observation_covariance() * f.adjoint();

  NormalEquations eq;
  eq.T = gram.cwiseProduct(spectral_cov.transpose());
  eq.q = (finv.adjoint() * model.signal_observation_covariance() * f.adjoint()).diagonal();
  eq.signal_energy = model.Rxx.trace().real();
  return eq;
}

FilterSolution solve_filter(const MatrixXc& T, const VectorXc& q, bool real_filter) {
  if (T.rows() != T.cols() || T.rows() != q.size()) {
    fail(ErrorKind::ShapeMismatch, "solve_filter needs square T matching q");
  }
  if (!T.allFinite() || !q.allFinite()) fail(ErrorKind::NonFinite, "normal equations not finite");

  FilterSolution sol;
  if (real_filter) {
    const MatrixXr tr = T.real();
    const VectorXr qr = q.real();
    if (condition_number(tr) <= 1e12) {
      sol.h = tr.partialPivLu().solve(qr).cast<Complex>();
    } else {
      Eigen::CompleteOrthogonalDecomposition<MatrixXr> cod(tr);
      cod.setThreshold(1e-12);
      sol.h = cod.solve(qr).cast<Complex>();
      sol.least_squares = true;
    }
  } else if (condition_number(T) <= 1e12) {
    sol.h = T.partialPivLu().solve(q);
  } else {
    Eigen::CompleteOrthogonalDecomposition<MatrixXc> cod(T);
    cod.setThreshold(1e-12);
    sol.h = cod.solve(q);
    sol.least_squares = true;
  }
  if (!sol.h.allFinite()) fail(ErrorKind::NonFinite, "filter solution is not finite");
  return sol;
}

double expected_mse(const NormalEquations& eq, const VectorXc& h) {
  const Complex quad = h.dot(eq.T * h);
  const Complex cross = h.dot(eq.q);
  const double value = quad.real() - 2.0 * cross.real() + eq.signal_energy;
  return std::max(value, 0.0);
}

double expected_mse(const ObservationModel& model, const ProductTransform& t, const VectorXc& h) {
  return expected_mse(assemble_normal_equations(model, t), h);
}

std::vector<double> grid_values(double lo, double hi, double step) {
  if (!(step > 0.0)) fail(ErrorKind::InvalidArgument, "grid step must be positive");
  if (!(lo <= hi)) fail(ErrorKind::InvalidArgument, "grid range must satisfy lo ≤ hi");
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(count + 1));
  for (long k = 0; k <= count; ++k) values.push_back(lo + static_cast<double>(k) * step);
  return values;
}

GridResult grid_search(const ObservationModel& model, const TransformFamily& family,
                       const GridOptions& options) {
  model.validate();
  const auto v1 = grid_values(options.lo1, options.hi1, options.step);
  const auto v2 = grid_values(options.lo2, options.hi2, options.step);

  std::vector<GridPoint> points;
  if (options.tied) {
    for (double a : v1) points.push_back({a, a, 0.0});
  } else {
    for (double a : v1)
      for (double b : v2) points.push_back({a, b, 0.0});
  }

  OperatorCache cache;
  std::vector<FilterSolution> solutions(points.size());
  parallel_for(points.size(), options.threads, [&](std::size_t i) {
    const ProductTransform t = family.realize(points[i].alpha1, points[i].alpha2, &cache);
    const NormalEquations eq = assemble_normal_equations(model, t, options.cap);
    solutions[i] = solve_filter(eq.T, eq.q, options.real_filter);
    points[i].mse = expected_mse(eq, solutions[i].h);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& p = points[i];
    const auto& b = points[best];
    if (p.mse < b.mse || (p.mse == b.mse && (p.alpha1 < b.alpha1 ||
                                             (p.alpha1 == b.alpha1 && p.alpha2 < b.alpha2)))) {
      best = i;
    }
  }

  GridResult result;
  result.best.alpha1 = points[best].alpha1;
  result.best.alpha2 = points[best].alpha2;
  result.best.lambda = family.lambda;
  result.best.h = solutions[best].h;
  result.best.mse = points[best].mse;
  result.best.least_squares = solutions[best].least_squares;
  result.points = std::move(points);
  return result;
}

GridResult grid_search(const ObservationModel& model, const Graph& g1, const Graph& g2,
                       const GridOptions& options, Convention convention) {
  const TransformFamily family = options.tied ? family_gfrft2d(g1, g2, convention)
                                              : family_gbfrft(g1, g2, convention);
  return grid_search(model, family, options);
}

}  // namespace gbfrft
