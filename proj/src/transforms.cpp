#include "gbfrft/transforms.hpp"

#include "gbfrft/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace gbfrft {

Convention parse_convention(std::string_view name) {
  if (name == "transform-power") return Convention::TransformPower;
  if (name == "shift-power") return Convention::ShiftPower;
  fail(ErrorKind::InvalidArgument, "unknown convention '" + std::string(name) + "'");
}

std::string_view convention_name(Convention c) {
  return c == Convention::TransformPower ? "transform-power" : "shift-power";
}

TransformKind parse_transform_kind(std::string_view name) {
  if (name == "gfrft2d" || name == "2d-gfrft") return TransformKind::Gfrft2d;
  if (name == "gbfrft2d" || name == "2d-gbfrft") return TransformKind::Gbfrft2d;
  if (name == "jfrft") return TransformKind::Jfrft;
  if (name == "hybrid") return TransformKind::Hybrid;
  fail(ErrorKind::InvalidArgument, "unknown transform kind '" + std::string(name) + "'");
}

std::string_view transform_kind_name(TransformKind kind) {
  switch (kind) {
    case TransformKind::Gfrft2d: return "2d-gfrft";
    case TransformKind::Gbfrft2d: return "2d-gbfrft";
    case TransformKind::Jfrft: return "jfrft";
    case TransformKind::Hybrid: return "hybrid";
  }
  return "2d-gbfrft";
}

MatrixXc gft_matrix(const Graph& g) {
  validate(g);
  return eig_general(g.adjacency.cast<Complex>()).V_inv;
}

MatrixXc dft_matrix(int T) {
  if (T < 1) fail(ErrorKind::InvalidArgument, "DFT length must be positive");
  MatrixXc w(T, T);
  const double scale = 1.0 / std::sqrt(static_cast<double>(T));
  for (int m = 0; m < T; ++m) {
    for (int n = 0; n < T; ++n) {
      // reduce mn mod T first so the phase stays exact for large products
      const double phase = -2.0 * std::numbers::pi * static_cast<double>((m * n) % T) / T;
      w(m, n) = std::polar(scale, phase);
    }
  }
  return w;
}

BasisPtr graph_fractional_basis(const Graph& g, Convention convention) {
  validate(g);
  const MatrixXc a = g.adjacency.cast<Complex>();
  if (convention == Convention::ShiftPower) {
    return std::make_shared<const SpectralBasis>(eig_general(a));
  }
  const MatrixXc gft = eig_general(a).V_inv;
  return std::make_shared<const SpectralBasis>(eig_general(gft));
}

BasisPtr dft_basis(int T) { return std::make_shared<const SpectralBasis>(eig_general(dft_matrix(T))); }

FractionalOperator gfrft(const Graph& g, double alpha, Convention convention) {
  return fractional_power(graph_fractional_basis(g, convention), alpha);
}

FractionalOperator dfrft(int T, double alpha) { return fractional_power(dft_basis(T), alpha); }

FractionalOperator blend_operators(const FractionalOperator& a, const FractionalOperator& b,
                                   double weight) {
  if (!(weight >= 0.0 && weight <= 1.0)) {
    fail(ErrorKind::InvalidArgument, "blend weight must lie in [0, 1]");
  }
  if (a.size() != b.size()) fail(ErrorKind::ShapeMismatch, "blended operators differ in size");
  if (weight == 1.0) return a;
  if (weight == 0.0) return b;

  FractionalOperator out;
  out.order = a.order;
  out.matrix = weight * a.matrix + (1.0 - weight) * b.matrix;
  out.derivative = weight * a.derivative + (1.0 - weight) * b.derivative;
  const double cond = condition_number(out.matrix);
  if (!(cond <= 1e12)) {
    fail(ErrorKind::SingularBlend,
         "blended operator is numerically singular (condition " + std::to_string(cond) + ")");
  }
  out.inverse = out.matrix.partialPivLu().inverse();
  out.inverse_derivative = -(out.inverse * out.derivative * out.inverse);
  return out;
}

std::shared_ptr<const FractionalOperator> OperatorCache::get(const BasisPtr& basis, double alpha) {
  const Key key{basis.get(), std::llround(alpha * 1e12)};
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  auto op = std::make_shared<const FractionalOperator>(fractional_power(basis, alpha));
  std::lock_guard lock(mutex_);
  // a concurrent insert of the same key wins; both values are identical
  return entries_.emplace(key, std::move(op)).first->second;
}

std::size_t OperatorCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

MatrixXc ProductTransform::vec_operator() const { return kron(op2.matrix, op1.matrix); }

MatrixXc ProductTransform::vec_inverse() const { return kron(op2.inverse, op1.inverse); }

BasisPtr FactorFamily::power_basis() const {
  if (!secondary || weight == 1.0) return primary;
  if (weight == 0.0) return secondary;
  return nullptr;
}

FractionalOperator FactorFamily::realize(double order, OperatorCache* cache) const {
  auto power = [&](const BasisPtr& b) {
    return cache ? *cache->get(b, order) : fractional_power(b, order);
  };
  if (BasisPtr b = power_basis()) return power(b);
  return blend_operators(power(primary), power(secondary), weight);
}

ProductTransform TransformFamily::realize(double alpha1, double alpha2,
                                          OperatorCache* cache) const {
  if (tied) alpha2 = alpha1;
  ProductTransform t;
  t.kind = kind;
  t.lambda = lambda;
  t.alpha1 = alpha1;
  t.alpha2 = alpha2;
  t.op1 = factor1.realize(alpha1, cache);
  t.op2 = factor2.realize(alpha2, cache);
  return t;
}

TransformFamily family_gbfrft(const Graph& g1, const Graph& g2, Convention convention) {
  TransformFamily f;
  f.kind = TransformKind::Gbfrft2d;
  f.factor1.primary = graph_fractional_basis(g1, convention);
  f.factor2.primary = graph_fractional_basis(g2, convention);
  return f;
}

TransformFamily family_gfrft2d(const Graph& g1, const Graph& g2, Convention convention) {
  TransformFamily f = family_gbfrft(g1, g2, convention);
  f.kind = TransformKind::Gfrft2d;
  f.tied = true;
  return f;
}

TransformFamily family_jfrft(const Graph& g, int T, Convention convention) {
  TransformFamily f;
  f.kind = TransformKind::Jfrft;
  f.factor1.primary = graph_fractional_basis(g, convention);
  f.factor2.primary = dft_basis(T);
  return f;
}

TransformFamily family_hybrid(const Graph& g1, const Graph& g2_path, int T, double lambda,
                              Convention convention) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    fail(ErrorKind::InvalidArgument, "hybrid lambda must lie in [0, 1]");
  }
  if (g2_path.n != T) {
    fail(ErrorKind::ShapeMismatch, "temporal path graph must have T vertices");
  }
  TransformFamily f;
  f.kind = TransformKind::Hybrid;
  f.lambda = lambda;
  f.factor1.primary = graph_fractional_basis(g1, convention);
  f.factor2.primary = dft_basis(T);
  f.factor2.secondary = graph_fractional_basis(g2_path, convention);
  f.factor2.weight = lambda;
  return f;
}

ProductTransform transform_2d(const Graph& g1, const Graph& g2, double alpha1, double alpha2,
                              Convention convention) {
  return family_gbfrft(g1, g2, convention).realize(alpha1, alpha2);
}

ProductTransform gfrft_2d(const Graph& g1, const Graph& g2, double alpha, Convention convention) {
  return family_gfrft2d(g1, g2, convention).realize(alpha, alpha);
}

ProductTransform jfrft(const Graph& g, int T, double alpha, double beta, Convention convention) {
  return family_jfrft(g, T, convention).realize(beta, alpha);
}

ProductTransform hybrid_transform(const Graph& g1, const Graph& g2_path, int T, double alpha,
                                  double beta, double lambda, Convention convention) {
  return family_hybrid(g1, g2_path, T, lambda, convention).realize(alpha, beta);
}

MatrixXc apply(const ProductTransform& t, const MatrixXc& X, Direction direction) {
  if (X.rows() != t.rows() || X.cols() != t.cols()) {
    fail(ErrorKind::ShapeMismatch, "signal is " + std::to_string(X.rows()) + "×" +
                                       std::to_string(X.cols()) + ", transform expects " +
                                       std::to_string(t.rows()) + "×" + std::to_string(t.cols()));
  }
  if (direction == Direction::Forward) return t.op1.matrix * X * t.op2.matrix.transpose();
  return t.op1.inverse * X * t.op2.inverse.transpose();
}

}  // namespace gbfrft
