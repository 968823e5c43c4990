#pragma once

#include "gbfrft/linalg.hpp"

#include <memory>

namespace gbfrft {

/// Eigendecomposition M = V·diag(lambda)·V_inv of a diagonalizable matrix.
struct SpectralBasis {
  MatrixXc V;
  VectorXc lambda;
  MatrixXc V_inv;
  /// True when V is unitary (Hermitian or normal input), so V_inv = Vᴴ.
  bool orthonormal = false;

  Eigen::Index size() const { return lambda.size(); }
  MatrixXc reconstruct() const;
};

using BasisPtr = std::shared_ptr<const SpectralBasis>;

/// F^α realized from a basis, with its inverse and order-derivatives.
struct FractionalOperator {
  double order = 0.0;
  MatrixXc matrix;
  MatrixXc inverse;
  /// ∂ matrix / ∂ order
  MatrixXc derivative;
  /// ∂ inverse / ∂ order
  MatrixXc inverse_derivative;
  /// Null for operators that are not a plain power of one basis (blends).
  BasisPtr basis;
  /// Set when a zero eigenvalue made the power singular; `inverse` then holds
  /// the spectral pseudo-inverse.
  bool singular = false;

  Eigen::Index size() const { return matrix.rows(); }
};

/// Tolerances shared by the decomposition and the power.
struct SpectralTolerances {
  double reconstruction = 1e-9;
  double max_condition = 1e12;
  double branch_snap = 1e-12;
  double zero_eigenvalue = 1e-12;
};

/// Decomposes M. Hermitian input goes through a self-adjoint solver and normal
/// input through a complex Schur factorization, both yielding an orthonormal
/// V; everything else uses a general complex eigensolver. Eigenpairs are
/// sorted by real part descending, then imaginary part descending. Throws
/// DefectiveMatrix when V is numerically singular or the reconstruction
/// misses tolerance.
SpectralBasis eig_general(const MatrixXc& M, const SpectralTolerances& tol = {});

/// Principal logarithm; the negative real axis maps to +jπ.
Complex principal_log(Complex z);

/// λ^α = exp(α·Log λ), with 0^α = 0 for α > 0.
Complex principal_power(Complex z, double alpha);

/// G = V·diag(Log λ)·V_inv, so that F^α = exp(α·G).
MatrixXc generator(const SpectralBasis& basis);

/// Spectral data of F^α without forming any N×N product.
struct PowerDiagonals {
  VectorXc power;           // λ^α
  VectorXc inverse_power;   // λ^{−α}
  VectorXc log;             // Log λ, with Log 0 := 0
  bool singular = false;
};

PowerDiagonals power_diagonals(const SpectralBasis& basis, double alpha,
                               const SpectralTolerances& tol = {});

FractionalOperator fractional_power(const BasisPtr& basis, double alpha,
                                    const SpectralTolerances& tol = {});

inline FractionalOperator fractional_power(const SpectralBasis& basis, double alpha,
                                           const SpectralTolerances& tol = {}) {
  return fractional_power(std::make_shared<const SpectralBasis>(basis), alpha, tol);
}

}  // namespace gbfrft
