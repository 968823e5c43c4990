#pragma once

#include "gbfrft/graph.hpp"
#include "gbfrft/spectral.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string_view>
#include <utility>

namespace gbfrft {

/// Which matrix is fractionalized for a graph.
///   TransformPower: the graph Fourier transform F_G = V_A^{-1}, so F^1 is the GFT.
///   ShiftPower:     the adjacency A itself, so F^1 = A.
enum class Convention { TransformPower, ShiftPower };

enum class TransformKind { Gfrft2d, Gbfrft2d, Jfrft, Hybrid };

enum class Direction { Forward, Inverse };

Convention parse_convention(std::string_view name);
std::string_view convention_name(Convention c);
TransformKind parse_transform_kind(std::string_view name);
std::string_view transform_kind_name(TransformKind kind);

/// GFT matrix V_A^{-1} of the adjacency (V_Aᴴ for undirected graphs).
MatrixXc gft_matrix(const Graph& g);

/// Unitary DFT, W[m, n] = exp(−j2πmn/T)/√T.
MatrixXc dft_matrix(int T);

/// Basis of the matrix that `gfrft` fractionalizes under `convention`.
BasisPtr graph_fractional_basis(const Graph& g, Convention convention = Convention::TransformPower);

BasisPtr dft_basis(int T);

FractionalOperator gfrft(const Graph& g, double alpha,
                         Convention convention = Convention::TransformPower);

FractionalOperator dfrft(int T, double alpha);

/// weight·a + (1 − weight)·b with a directly inverted inverse. The endpoints
/// return `a` or `b` unchanged. Throws SingularBlend above condition 1e12.
FractionalOperator blend_operators(const FractionalOperator& a, const FractionalOperator& b,
                                   double weight);

/// Thread-safe memo of fractional powers, keyed by basis identity and the
/// order rounded to 1e-12.
class OperatorCache {
 public:
  std::shared_ptr<const FractionalOperator> get(const BasisPtr& basis, double alpha);
  std::size_t size() const;

 private:
  using Key = std::pair<const SpectralBasis*, long long>;
  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<const FractionalOperator>> entries_;
};

/// A separable transform X ↦ op1·X·op2ᵀ, equal to (op2 ⊗ op1)·vec(X) under
/// column-stacking.
struct ProductTransform {
  FractionalOperator op1;
  FractionalOperator op2;
  TransformKind kind = TransformKind::Gbfrft2d;
  double lambda = 1.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;

  Eigen::Index rows() const { return op1.size(); }
  Eigen::Index cols() const { return op2.size(); }
  Eigen::Index size() const { return rows() * cols(); }

  /// op2 ⊗ op1
  MatrixXc vec_operator() const;
  /// op2^{-1} ⊗ op1^{-1}
  MatrixXc vec_inverse() const;
};

ProductTransform transform_2d(const Graph& g1, const Graph& g2, double alpha1, double alpha2,
                              Convention convention = Convention::TransformPower);

/// Shared-order special case (kind = Gfrft2d).
ProductTransform gfrft_2d(const Graph& g1, const Graph& g2, double alpha,
                          Convention convention = Convention::TransformPower);

/// op1 = GFRFT of order beta on the vertices, op2 = DFRFT of order alpha in time.
ProductTransform jfrft(const Graph& g, int T, double alpha, double beta,
                       Convention convention = Convention::TransformPower);

/// op1 = GFRFT of g1 at alpha; op2 = lambda·DFRFT^beta + (1 − lambda)·GFRFT(g2_path)^beta.
ProductTransform hybrid_transform(const Graph& g1, const Graph& g2_path, int T, double alpha,
                                  double beta, double lambda,
                                  Convention convention = Convention::TransformPower);

/// Forward: op1·X·op2ᵀ. Inverse: op1^{-1}·X·(op2^{-1})ᵀ.
MatrixXc apply(const ProductTransform& t, const MatrixXc& X,
               Direction direction = Direction::Forward);

/// Produces one factor operator at a given order: a power of `primary`, or
/// when `secondary` is set, weight·primary^α + (1 − weight)·secondary^α.
struct FactorFamily {
  BasisPtr primary;
  BasisPtr secondary;
  double weight = 1.0;

  bool is_blend() const { return secondary && weight != 1.0; }
  /// Basis whose plain power this factor is, or null for a proper blend.
  BasisPtr power_basis() const;
  Eigen::Index size() const { return primary->size(); }
  FractionalOperator realize(double order, OperatorCache* cache = nullptr) const;
};

/// A transform kind with its factor bases fixed, parameterized by orders.
struct TransformFamily {
  TransformKind kind = TransformKind::Gbfrft2d;
  FactorFamily factor1;
  FactorFamily factor2;
  /// Gfrft2d: both factors share one order.
  bool tied = false;
  double lambda = 1.0;

  Eigen::Index rows() const { return factor1.size(); }
  Eigen::Index cols() const { return factor2.size(); }
  ProductTransform realize(double alpha1, double alpha2, OperatorCache* cache = nullptr) const;
};

TransformFamily family_gbfrft(const Graph& g1, const Graph& g2,
                              Convention convention = Convention::TransformPower);
TransformFamily family_gfrft2d(const Graph& g1, const Graph& g2,
                               Convention convention = Convention::TransformPower);
/// Orders are (vertex order, time order).
TransformFamily family_jfrft(const Graph& g, int T,
                             Convention convention = Convention::TransformPower);
/// Orders are (spatial α, temporal β).
TransformFamily family_hybrid(const Graph& g1, const Graph& g2_path, int T, double lambda,
                              Convention convention = Convention::TransformPower);

}  // namespace gbfrft
