#pragma once

#include "gbfrft/transforms.hpp"
#include "gbfrft/wiener.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace gbfrft {

/// One (observation, clean signal) pair in N1×N2 matrix form.
struct Sample {
  MatrixXc y;
  MatrixXc x;
};

enum class Optimizer { Adam, Sgd };

struct OrderInit {
  enum class Mode { Fixed, Uniform } mode = Mode::Fixed;
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  double lo = -1.0;
  double hi = 1.0;

  static OrderInit fixed(double a1, double a2) { return {Mode::Fixed, a1, a2, -1.0, 1.0}; }
  static OrderInit uniform(double lo, double hi) { return {Mode::Uniform, 0.5, 0.5, lo, hi}; }
};

/// "a1,a2" for fixed orders or "uniform:lo:hi".
OrderInit parse_order_init(std::string_view text);
Optimizer parse_optimizer(std::string_view name);

struct TrainConfig {
  double lr_orders = 0.03;
  /// Non-positive means "same as lr_orders".
  double lr_filter = 0.0;
  int epochs = 200;
  OrderInit init;
  std::uint64_t seed = 0;
  Optimizer optimizer = Optimizer::Adam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  bool real_filter = false;
  bool train_orders = true;
  /// Empty means the identity filter (all ones).
  VectorXc initial_filter;

  double filter_rate() const { return lr_filter > 0.0 ? lr_filter : lr_orders; }
  void validate() const;
};

struct TrainTrace {
  struct Epoch {
    int epoch = 0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double loss = 0.0;
    double best_loss = 0.0;
  };
  std::vector<Epoch> epochs;
};

struct TrainResult {
  FilterDesign design;
  TrainTrace trace;
};

/// Mean over the batch of ‖F^{-1}·diag(h)·F·y − x‖², with h in vec order.
double loss(const ProductTransform& t, const VectorXc& h, std::span<const Sample> batch);

/// Analytic gradients of `loss`. `d_h` is 2·∂L/∂conj(h), i.e.
/// ∂L/∂Re(h) + j·∂L/∂Im(h), the steepest-ascent direction for complex h.
struct Gradients {
  double loss = 0.0;
  double d_alpha1 = 0.0;
  double d_alpha2 = 0.0;
  VectorXc d_h;
};

Gradients gradients(const ProductTransform& t, const VectorXc& h, std::span<const Sample> batch);

/// Same quantities through the factored spectral form of the family's
/// factors (no N×N products for plain powers). For tied families d_alpha1
/// carries the total derivative and d_alpha2 is zero.
Gradients gradients(const TransformFamily& family, double alpha1, double alpha2,
                    const VectorXc& h, std::span<const Sample> batch);

/// F^{-1}·diag(h)·F·y through the factored form of the family.
MatrixXc estimate(const TransformFamily& family, double alpha1, double alpha2, const VectorXc& h,
                  const MatrixXc& y);

/// Joint descent on (α1, α2, h). Returns the best-loss iterate.
TrainResult train(const TransformFamily& family, std::span<const Sample> batch,
                  const TrainConfig& config);

struct HybridResult {
  FilterDesign design;
  TrainTrace trace;
  struct LambdaScore {
    double lambda = 0.0;
    double mse = 0.0;
    bool skipped = false;
  };
  std::vector<LambdaScore> scores;
};

/// Outer grid over λ, inner joint descent per λ on the hybrid transform.
/// λ values whose blend is singular are skipped.
HybridResult train_hybrid(const Graph& g_spatial, int T, std::span<const Sample> batch,
                          const TrainConfig& config, const std::vector<double>& lambda_grid,
                          Convention convention = Convention::TransformPower);

}  // namespace gbfrft
