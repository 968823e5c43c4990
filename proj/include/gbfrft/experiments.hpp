#pragma once

#include "gbfrft/graph.hpp"
#include "gbfrft/image.hpp"
#include "gbfrft/io.hpp"
#include "gbfrft/learn.hpp"
#include "gbfrft/transforms.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gbfrft {

/// Deterministic child seed: splitmix64 of the parent mixed with `stream`.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream);

// Synthetic product-graph signals ------------------------------------------

struct Autocorrelation {
  /// 2 on the diagonal, 1 between adjacent vertices.
  MatrixXr C;
  /// C / λmax(C)
  MatrixXr Rxx;
  double lambda_max = 0.0;
  /// 2·N / λmax(C), the expected ‖x‖² under Rxx.
  double signal_power = 0.0;
};

/// Adjacency of directed products is symmetrized before the pattern test.
Autocorrelation autocorrelation_matrix(const ProductGraph& pg);

/// Symmetric matrix with negative eigenvalues clipped to zero.
MatrixXr psd_repair(const MatrixXr& R);

/// `trials` zero-mean draws with covariance psd_repair(Rxx), one per column.
MatrixXr sample_gaussian(const MatrixXr& Rxx, std::uint64_t seed, int trials);

struct FactorSpec {
  GraphKind kind = GraphKind::Path;
  int n = 4;
};

struct Topology {
  std::string name;
  FactorSpec factor1;
  FactorSpec factor2;
};

/// path-cycle (P4, C8), path-fan (P4, F5), complete-star (K5, S5).
Topology parse_topology(const std::string& name);

struct Variant {
  std::string name;
  bool directed = false;
  bool weighted = false;
};

/// UU, UW, DU, DW: first letter undirected/directed, second unweighted/weighted.
Variant parse_variant(const std::string& name);

enum class SyntheticMethod { GridGfrft, GridGbfrft, GdGfrft, GdGbfrft };

SyntheticMethod parse_synthetic_method(const std::string& name);
std::string synthetic_method_name(SyntheticMethod m);

struct SyntheticSpec {
  std::vector<Topology> topologies;
  std::vector<Variant> variants;
  std::vector<double> sigma2;
  double lo = 0.0;
  double hi = 1.0;
  double step = 0.1;
  TrainConfig train;
  std::uint64_t seed = 0;
  int trials = 1;
  int threads = 1;
  Convention convention = Convention::TransformPower;

  /// Throws InvalidArgument.
  void validate() const;
};

struct SyntheticRow {
  std::string method;
  std::string topology;
  std::string variant;
  double sigma2 = 0.0;
  /// NaN when the cell could not be run.
  double mse = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  /// Error text for failed cells.
  std::string note;
};

/// The observation model of one synthetic cell: Rxx from the product graph,
/// Rnn = σ²·I, no degradation and no cross-covariance.
ObservationModel synthetic_model(const ProductGraph& pg, double sigma2);

/// Rows ordered by topology, variant, σ², then method. Every design is scored
/// by its expected squared error under the cell's model; gradient designs are
/// trained on `trials` sampled pairs first. Cells whose graphs cannot be
/// decomposed get NaN and a note.
std::vector<SyntheticRow> run_synthetic(const SyntheticSpec& spec,
                                        const std::vector<SyntheticMethod>& methods);

ResultTable synthetic_table(const std::vector<SyntheticRow>& rows);

// Time-vertex denoising -----------------------------------------------------

struct TimeVertexDataset {
  MatrixXr coords;
  /// N×T, standardized per node.
  MatrixXr values;
  VectorXr mean;
  VectorXr stddev;

  Eigen::Index nodes() const { return values.rows(); }
  Eigen::Index steps() const { return values.cols(); }
  MatrixXr destandardize(const MatrixXr& standardized) const;
};

inline constexpr double kStdFloor = 1e-12;

/// Per-node standardization with population standard deviation. Throws
/// ShapeMismatch or ConstantSeries.
TimeVertexDataset make_timevertex(const MatrixXr& raw_values, const MatrixXr& coords);
TimeVertexDataset ingest_timevertex(const std::filesystem::path& values,
                                    const std::filesystem::path& coords);

struct TimeVertexSpec {
  std::vector<int> ks{3, 4, 5};
  std::vector<double> sigma2{0.6, 0.9, 1.2};
  std::vector<TransformKind> methods{TransformKind::Gfrft2d, TransformKind::Gbfrft2d,
                                     TransformKind::Jfrft, TransformKind::Hybrid};
  TrainConfig train;
  double lambda_step = 0.1;
  std::uint64_t seed = 0;
  int trials = 1;
  int threads = 1;
  Convention convention = Convention::TransformPower;
};

struct TimeVertexRow {
  std::string method;
  int k = 0;
  double sigma2 = 0.0;
  /// Per-entry training MSE on the standardized signal.
  double mse = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double lambda = 1.0;
};

/// All methods of one (k, σ²) cell see the same noise realizations.
std::vector<TimeVertexRow> run_timevertex(const TimeVertexDataset& ds,
                                          const TimeVertexSpec& spec);

ResultTable timevertex_table(const std::vector<TimeVertexRow>& rows);

// Dynamic image deblurring --------------------------------------------------

struct DeblurConfig {
  TransformKind method = TransformKind::Gbfrft2d;
  TrainConfig train;
  int knn = 4;
  int threads = 1;
  Convention convention = Convention::TransformPower;

  DeblurConfig();
};

struct DeblurResult {
  FrameSequence restored;
  std::vector<QualityMetrics> blurred_metrics;
  std::vector<QualityMetrics> restored_metrics;
  QualityMetrics blurred_average;
  QualityMetrics restored_average;
};

/// Trains one filter per patch on (blurred, clean) and restores the frames.
/// The transform bases depend only on the patch geometry and are shared.
DeblurResult run_deblur(const FrameSequence& blurred, const FrameSequence& clean,
                        const DeblurConfig& config);

ResultTable deblur_table(const DeblurResult& result, const std::string& method);

/// Moving-shape test frames in [0, 255].
FrameSequence synthetic_sequence(int size, int frames, int patch, std::uint64_t seed);

FrameSequence blur_sequence(const FrameSequence& fs, int size = 5, double sigma = 1.0);

// Self test -----------------------------------------------------------------

struct SelfTestReport {
  std::vector<std::filesystem::path> files;
  ResultTable checks;
  bool passed = true;
};

/// Small deterministic runs of every pipeline, written under `out_dir`.
SelfTestReport run_selftest(std::uint64_t seed, const std::filesystem::path& out_dir);

}  // namespace gbfrft
