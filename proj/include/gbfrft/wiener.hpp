#pragma once

#include "gbfrft/transforms.hpp"

#include <cstddef>
#include <vector>

namespace gbfrft {

/// y = (G2ᵀ ⊗ G1)·x + n with known second-order statistics. Empty Rxn/Rnx
/// mean signal and noise are uncorrelated.
struct ObservationModel {
  MatrixXc G1;
  MatrixXc G2;
  MatrixXc Rxx;
  MatrixXc Rnn;
  MatrixXc Rxn;
  MatrixXc Rnx;

  /// G1 = I, G2 = I, no cross-covariance.
  static ObservationModel denoising(Eigen::Index n1, Eigen::Index n2, const MatrixXc& Rxx,
                                    const MatrixXc& Rnn);

  Eigen::Index rows() const { return G1.rows(); }
  Eigen::Index cols() const { return G2.rows(); }
  Eigen::Index size() const { return rows() * cols(); }
  bool has_cross() const { return Rxn.size() != 0; }

  /// G2ᵀ ⊗ G1
  MatrixXc degradation() const;
  /// E[y yᴴ]
  MatrixXc observation_covariance() const;
  /// E[x yᴴ]
  MatrixXc signal_observation_covariance() const;

  /// Throws ShapeMismatch or NonHermitianStatistics.
  void validate() const;
};

/// Diagonal spectral filter with the orders it was designed for.
struct FilterDesign {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double lambda = 1.0;
  VectorXc h;
  double mse = 0.0;
  /// Set when the normal equations were solved in the least-squares sense.
  bool least_squares = false;
};

/// Rank-1 matrices W_m = (column m of the vec-form inverse)·(row m of the
/// vec-form forward operator), built on demand.
class BasisMatrices {
 public:
  BasisMatrices(MatrixXc forward, MatrixXc inverse);

  Eigen::Index count() const { return forward_.rows(); }
  MatrixXc operator()(Eigen::Index m) const;
  std::vector<MatrixXc> materialize() const;

  const MatrixXc& forward() const { return forward_; }
  const MatrixXc& inverse() const { return inverse_; }

 private:
  MatrixXc forward_;
  MatrixXc inverse_;
};

inline constexpr std::size_t kDefaultSizeCap = 1024;

BasisMatrices basis_matrices(const ProductTransform& t, std::size_t cap = kDefaultSizeCap);

struct NormalEquations {
  MatrixXc T;
  VectorXc q;
  /// Tr(Rxx), the MSE of the zero estimator.
  double signal_energy = 0.0;
};

/// T[m, n] = Tr(W_mᴴ W_n E[yyᴴ]) and q[m] = Tr(W_mᴴ E[xyᴴ]), evaluated through
/// the rank-1 structure as T = (Finvᴴ Finv) ∘ (F·E[yyᴴ]·Fᴴ)ᵀ and
/// q = diag(Finvᴴ·E[xyᴴ]·Fᴴ) in O((N1N2)³).
NormalEquations assemble_normal_equations(const ObservationModel& model, const ProductTransform& t,
                                          std::size_t cap = kDefaultSizeCap);

struct FilterSolution {
  VectorXc h;
  bool least_squares = false;
};

/// Solves T h = q. Above condition 1e12 the minimum-norm least-squares
/// solution is returned instead and flagged. `real_filter` restricts h to
/// real values (solves Re(T) h = Re(q)).
FilterSolution solve_filter(const MatrixXc& T, const VectorXc& q, bool real_filter = false);

/// hᴴTh − hᴴq − qᴴh + Tr(Rxx), clamped at zero.
double expected_mse(const NormalEquations& eq, const VectorXc& h);
double expected_mse(const ObservationModel& model, const ProductTransform& t, const VectorXc& h);

/// Inclusive grid a, a + step, …, b computed as a + k·step.
std::vector<double> grid_values(double lo, double hi, double step);

struct GridOptions {
  double lo1 = 0.0, hi1 = 1.0;
  double lo2 = 0.0, hi2 = 1.0;
  double step = 0.1;
  /// Restrict to α1 = α2 over the first range (2D-GFRFT baseline).
  bool tied = false;
  bool real_filter = false;
  int threads = 1;
  std::size_t cap = kDefaultSizeCap;
};

struct GridPoint {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double mse = 0.0;
};

struct GridResult {
  FilterDesign best;
  std::vector<GridPoint> points;
};

/// Exhaustive order search; ties go to the smaller α1, then α2.
GridResult grid_search(const ObservationModel& model, const TransformFamily& family,
                       const GridOptions& options);

GridResult grid_search(const ObservationModel& model, const Graph& g1, const Graph& g2,
                       const GridOptions& options,
                       Convention convention = Convention::TransformPower);

}  // namespace gbfrft
