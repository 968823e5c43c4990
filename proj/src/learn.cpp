#include "gbfrft/learn.hpp"

#include "gbfrft/error.hpp"

#include <charconv>
#include <cmath>
#include <iostream>
#include <limits>
#include <random>
#include <string>

namespace gbfrft {

OrderInit parse_order_init(std::string_view text) {
  auto number = [&](std::string_view s) {
    double v = 0.0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      fail(ErrorKind::ParseError, "bad order initialization '" + std::string(text) + "'");
    }
    return v;
  };
  if (text.starts_with("uniform:")) {
    const std::string_view rest = text.substr(8);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      fail(ErrorKind::ParseError, "expected uniform:lo:hi, found '" + std::string(text) + "'");
    }
    return OrderInit::uniform(number(rest.substr(0, colon)), number(rest.substr(colon + 1)));
  }
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) {
    const double a = number(text);
    return OrderInit::fixed(a, a);
  }
  return OrderInit::fixed(number(text.substr(0, comma)), number(text.substr(comma + 1)));
}

Optimizer parse_optimizer(std::string_view name) {
  if (name == "adam") return Optimizer::Adam;
  if (name == "sgd") return Optimizer::Sgd;
  fail(ErrorKind::ParseError, "unknown optimizer '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  if (!(lr_orders > 0.0)) fail(ErrorKind::InvalidArgument, "learning rate must be positive");
  if (epochs < 1) fail(ErrorKind::InvalidArgument, "epochs must be at least 1");
  if (init.mode == OrderInit::Mode::Uniform && !(init.lo <= init.hi)) {
    fail(ErrorKind::InvalidArgument, "uniform order init needs lo ≤ hi");
  }
}

namespace {

/// Left action of one realized factor, its inverse and their order
/// derivatives. The spectral form applies V·diag(·)·V_inv as three thin
/// products and never forms the N×N operator.
class FactorAction {
 public:
  static FactorAction dense(const FractionalOperator& op) {
    FactorAction a;
    a.op_ = &op;
    return a;
  }

  static FactorAction spectral(BasisPtr basis, double order) {
    FactorAction a;
    a.diag_ = power_diagonals(*basis, order);
    a.dpow_ = a.diag_.power.cwiseProduct(a.diag_.log);
    a.dinv_ = -a.diag_.inverse_power.cwiseProduct(a.diag_.log);
    a.basis_ = std::move(basis);
    return a;
  }

  MatrixXc forward(const MatrixXc& m) const {
    return op_ ? MatrixXc(op_->matrix * m) : through(diag_.power, m);
  }
  MatrixXc inverse(const MatrixXc& m) const {
    return op_ ? MatrixXc(op_->inverse * m) : through(diag_.inverse_power, m);
  }
  MatrixXc d_forward(const MatrixXc& m) const {
    return op_ ? MatrixXc(op_->derivative * m) : through(dpow_, m);
  }
  MatrixXc d_inverse(const MatrixXc& m) const {
    return op_ ? MatrixXc(op_->inverse_derivative * m) : through(dinv_, m);
  }
  MatrixXc inverse_adjoint(const MatrixXc& m) const {
    if (op_) return op_->inverse.adjoint() * m;
    return basis_->V_inv.adjoint() *
           (diag_.inverse_power.conjugate().asDiagonal() * (basis_->V.adjoint() * m));
  }

 private:
  MatrixXc through(const VectorXc& d, const MatrixXc& m) const {
    return basis_->V * (d.asDiagonal() * (basis_->V_inv * m));
  }

  const FractionalOperator* op_ = nullptr;
  BasisPtr basis_;
  PowerDiagonals diag_;
  VectorXc dpow_;
  VectorXc dinv_;
};

// M·opᵀ expressed through the left action: (op·Mᵀ)ᵀ.
template <typename Fn>
MatrixXc right(Fn&& left, const MatrixXc& m) {
  return left(MatrixXc(m.transpose())).transpose();
}

Gradients evaluate(const FactorAction& f1, const FactorAction& f2, Eigen::Index rows,
                   Eigen::Index cols, const VectorXc& h, std::span<const Sample> batch,
                   bool with_gradients) {
  if (batch.empty()) fail(ErrorKind::InvalidArgument, "training batch is empty");
  if (h.size() != rows * cols) fail(ErrorKind::ShapeMismatch, "filter length does not match");
  const MatrixXc hm = unvec(h, rows, cols);

  Gradients g;
  if (with_gradients) g.d_h = VectorXc::Zero(h.size());
  MatrixXc dh = MatrixXc::Zero(rows, cols);

  auto f1_fwd = [&](const MatrixXc& m) { return f1.forward(m); };
  auto f2_fwd = [&](const MatrixXc& m) { return f2.forward(m); };
  auto f2_inv = [&](const MatrixXc& m) { return f2.inverse(m); };
  auto f2_dfwd = [&](const MatrixXc& m) { return f2.d_forward(m); };
  auto f2_dinv = [&](const MatrixXc& m) { return f2.d_inverse(m); };
  auto f2_inv_adj = [&](const MatrixXc& m) { return f2.inverse_adjoint(m); };

  for (const Sample& s : batch) {
    if (s.y.rows() != rows || s.y.cols() != cols || s.x.rows() != rows || s.x.cols() != cols) {
      fail(ErrorKind::ShapeMismatch, "sample shape does not match the transform");
    }
    const MatrixXc a = f1_fwd(s.y);
    const MatrixXc z = right(f2_fwd, a);
    const MatrixXc p = hm.cwiseProduct(z);
    const MatrixXc b = f1.inverse(p);
    const MatrixXc r = right(f2_inv, b) - s.x;
    g.loss += r.squaredNorm();
    if (!with_gradients) continue;

    const MatrixXc dz1 = right(f2_fwd, f1.d_forward(s.y));
    const MatrixXc dz2 = right(f2_dfwd, a);
    const MatrixXc dr1 = right(f2_inv, MatrixXc(f1.d_inverse(p) + f1.inverse(hm.cwiseProduct(dz1))));
    const MatrixXc dr2 = right(f2_dinv, b) + right(f2_inv, f1.inverse(hm.cwiseProduct(dz2)));
    g.d_alpha1 += 2.0 * r.conjugate().cwiseProduct(dr1).sum().real();
    g.d_alpha2 += 2.0 * r.conjugate().cwiseProduct(dr2).sum().real();

    const MatrixXc adj = right(f2_inv_adj, f1.inverse_adjoint(r));
    dh += 2.0 * z.conjugate().cwiseProduct(adj);
  }

  const double scale = 1.0 / static_cast<double>(batch.size());
  g.loss *= scale;
  if (with_gradients) {
    g.d_alpha1 *= scale;
    g.d_alpha2 *= scale;
    g.d_h = vec(dh) * scale;
  }
  return g;
}

FactorAction factor_action(const FactorFamily& factor, double order,
                           FractionalOperator& storage) {
  if (BasisPtr b = factor.power_basis()) return FactorAction::spectral(std::move(b), order);
  storage = factor.realize(order);
  return FactorAction::dense(storage);
}

}  // namespace

double loss(const ProductTransform& t, const VectorXc& h, std::span<const Sample> batch) {
  return evaluate(FactorAction::dense(t.op1), FactorAction::dense(t.op2), t.rows(), t.cols(), h,
                  batch, false)
      .loss;
}

Gradients gradients(const ProductTransform& t, const VectorXc& h, std::span<const Sample> batch) {
  return evaluate(FactorAction::dense(t.op1), FactorAction::dense(t.op2), t.rows(), t.cols(), h,
                  batch, true);
}

Gradients gradients(const TransformFamily& family, double alpha1, double alpha2,
                    const VectorXc& h, std::span<const Sample> batch) {
  if (family.tied) alpha2 = alpha1;
  FractionalOperator s1, s2;
  const FactorAction f1 = factor_action(family.factor1, alpha1, s1);
  const FactorAction f2 = factor_action(family.factor2, alpha2, s2);
  Gradients g = evaluate(f1, f2, family.rows(), family.cols(), h, batch, true);
  if (family.tied) {
    g.d_alpha1 += g.d_alpha2;
    g.d_alpha2 = 0.0;
  }
  return g;
}

MatrixXc estimate(const TransformFamily& family, double alpha1, double alpha2, const VectorXc& h,
                  const MatrixXc& y) {
  if (family.tied) alpha2 = alpha1;
  if (y.rows() != family.rows() || y.cols() != family.cols()) {
    fail(ErrorKind::ShapeMismatch, "signal shape does not match the transform");
  }
  if (h.size() != y.size()) fail(ErrorKind::ShapeMismatch, "filter length does not match");
  FractionalOperator s1, s2;
  const FactorAction f1 = factor_action(family.factor1, alpha1, s1);
  const FactorAction f2 = factor_action(family.factor2, alpha2, s2);
  auto f2_fwd = [&](const MatrixXc& m) { return f2.forward(m); };
  auto f2_inv = [&](const MatrixXc& m) { return f2.inverse(m); };
  const MatrixXc z = right(f2_fwd, f1.forward(y));
  return right(f2_inv, f1.inverse(unvec(h, y.rows(), y.cols()).cwiseProduct(z)));
}

namespace {

struct AdamState {
  VectorXr m;
  VectorXr v;
};

void step(VectorXr& theta, const VectorXr& grad, double lr, int t, const TrainConfig& cfg,
          AdamState& state) {
  if (cfg.optimizer == Optimizer::Sgd) {
    theta -= lr * grad;
    return;
  }
  if (state.m.size() != theta.size()) {
    state.m = VectorXr::Zero(theta.size());
    state.v = VectorXr::Zero(theta.size());
  }
  state.m = cfg.adam_beta1 * state.m + (1.0 - cfg.adam_beta1) * grad;
  state.v = cfg.adam_beta2 * state.v + (1.0 - cfg.adam_beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(cfg.adam_beta1, t);
  const double c2 = 1.0 - std::pow(cfg.adam_beta2, t);
  theta.array() -= lr * (state.m.array() / c1) / ((state.v.array() / c2).sqrt() + cfg.adam_eps);
}

}  // namespace

TrainResult train(const TransformFamily& family, std::span<const Sample> batch,
                  const TrainConfig& config) {
  config.validate();
  const Eigen::Index n = family.rows() * family.cols();

  double a1 = config.init.alpha1;
  double a2 = config.init.alpha2;
  if (config.init.mode == OrderInit::Mode::Uniform) {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> u(config.init.lo, config.init.hi);
    a1 = u(rng);
    a2 = u(rng);
  }
  if (family.tied) a2 = a1;

  VectorXc h = VectorXc::Ones(n);
  if (config.initial_filter.size() != 0) {
    if (config.initial_filter.size() != n) {
      fail(ErrorKind::ShapeMismatch, "initial filter length does not match");
    }
    h = config.initial_filter;
  }
  if (config.real_filter) h = h.real().cast<Complex>();

  const int order_count = family.tied ? 1 : 2;
  VectorXr orders(order_count);
  orders(0) = a1;
  if (order_count == 2) orders(1) = a2;
  VectorXr filter(config.real_filter ? n : 2 * n);
  AdamState order_state, filter_state;

  TrainResult result;
  result.trace.epochs.reserve(static_cast<std::size_t>(config.epochs));
  double best = std::numeric_limits<double>::infinity();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    a1 = orders(0);
    a2 = order_count == 2 ? orders(1) : a1;
    Gradients g;
    try {
      g = gradients(family, a1, a2, h, batch);
    } catch (const Error& e) {
      // runaway orders overflow λ^α before the loss itself goes non-finite
      if (e.kind() != ErrorKind::NonFinite) throw;
      fail(ErrorKind::DivergedLoss, "training diverged at epoch " + std::to_string(epoch) + ": " +
                                        e.what());
    }
    if (!std::isfinite(g.loss)) {
      fail(ErrorKind::DivergedLoss, "loss became non-finite at epoch " + std::to_string(epoch));
    }
    if (g.loss < best) {
      best = g.loss;
      result.design.alpha1 = a1;
      result.design.alpha2 = a2;
      result.design.h = h;
      result.design.mse = g.loss;
    }
    result.trace.epochs.push_back({epoch, a1, a2, g.loss, best});

    const int t = epoch + 1;
    if (config.train_orders) {
      VectorXr og(order_count);
      og(0) = g.d_alpha1;
      if (order_count == 2) og(1) = g.d_alpha2;
      step(orders, og, config.lr_orders, t, config, order_state);
    }
    VectorXr fg(filter.size());
    fg.head(n) = g.d_h.real();
    filter.head(n) = h.real();
    if (!config.real_filter) {
      fg.tail(n) = g.d_h.imag();
      filter.tail(n) = h.imag();
    }
    step(filter, fg, config.filter_rate(), t, config, filter_state);
    if (config.real_filter) {
      h = filter.cast<Complex>();
    } else {
      h.real() = filter.head(n);
      h.imag() = filter.tail(n);
    }
    if (!orders.allFinite() || !h.allFinite()) {
      fail(ErrorKind::DivergedLoss, "parameters became non-finite at epoch " + std::to_string(epoch));
    }
  }
  result.design.lambda = family.lambda;
  return result;
}

HybridResult train_hybrid(const Graph& g_spatial, int T, std::span<const Sample> batch,
                          const TrainConfig& config, const std::vector<double>& lambda_grid,
                          Convention convention) {
  if (lambda_grid.empty()) fail(ErrorKind::InvalidArgument, "lambda grid is empty");
  if (T < 2) fail(ErrorKind::InvalidArgument, "hybrid transform needs T ≥ 2");
  const Graph path = make_named_graph(GraphKind::Path, T);

  HybridResult out;
  bool have_best = false;
  for (double lambda : lambda_grid) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
      fail(ErrorKind::InvalidArgument, "lambda grid values must lie in [0, 1]");
    }
    try {
      const TransformFamily family = family_hybrid(g_spatial, path, T, lambda, convention);
      TrainResult r = train(family, batch, config);
      out.scores.push_back({lambda, r.design.mse, false});
      if (!have_best || r.design.mse < out.design.mse) {
        out.design = std::move(r.design);
        out.design.lambda = lambda;
        out.trace = std::move(r.trace);
        have_best = true;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularBlend) throw;
      std::cerr << "warning: SingularBlend: skipping lambda " << lambda << ": " << e.what() << '\n';
      out.scores.push_back({lambda, std::numeric_limits<double>::quiet_NaN(), true});
    }
  }
  if (!have_best) fail(ErrorKind::SingularBlend, "every lambda in the grid was singular");
  return out;
}

}  // namespace gbfrft
