#include "gbfrft/experiments.hpp"

#include "gbfrft/error.hpp"
#include "gbfrft/parallel.hpp"
#include "gbfrft/wiener.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>

namespace gbfrft {

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) {
  std::uint64_t z = parent + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Autocorrelation autocorrelation_matrix(const ProductGraph& pg) {
  const MatrixXr& a = pg.adjacency;
  const Eigen::Index n = a.rows();
  Autocorrelation out;
  out.C = MatrixXr::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) {
        out.C(i, j) = 2.0;
      } else if (a(i, j) != 0.0 || a(j, i) != 0.0) {
        out.C(i, j) = 1.0;
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<MatrixXr> es(out.C, Eigen::EigenvaluesOnly);
  out.lambda_max = es.eigenvalues().maxCoeff();
  out.Rxx = out.C / out.lambda_max;
  out.signal_power = 2.0 * static_cast<double>(n) / out.lambda_max;
  return out;
}

MatrixXr psd_repair(const MatrixXr& R) {
  const MatrixXr sym = 0.5 * (R + R.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXr> es(sym);
  if (es.eigenvalues().minCoeff() >= 0.0) return sym;
  const VectorXr clipped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
}

MatrixXr sample_gaussian(const MatrixXr& Rxx, std::uint64_t seed, int trials) {
  if (trials < 1) fail(ErrorKind::InvalidArgument, "trials must be at least 1");
  if (Rxx.rows() != Rxx.cols()) fail(ErrorKind::ShapeMismatch, "covariance must be square");
  Eigen::SelfAdjointEigenSolver<MatrixXr> es(0.5 * (Rxx + Rxx.transpose()));
  const MatrixXr L = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  MatrixXr z(Rxx.rows(), trials);
  for (Eigen::Index c = 0; c < z.cols(); ++c)
    for (Eigen::Index r = 0; r < z.rows(); ++r) z(r, c) = normal(rng);
  return L * z;
}

Topology parse_topology(const std::string& name) {
  if (name == "path-cycle") return {name, {GraphKind::Path, 4}, {GraphKind::Cycle, 8}};
  if (name == "path-fan") return {name, {GraphKind::Path, 4}, {GraphKind::Fan, 5}};
  if (name == "complete-star") return {name, {GraphKind::Complete, 5}, {GraphKind::Star, 5}};
  fail(ErrorKind::ParseError, "unknown topology '" + name + "'");
}

Variant parse_variant(const std::string& name) {
  if (name.size() == 2 && (name[0] == 'U' || name[0] == 'D') && (name[1] == 'U' || name[1] == 'W')) {
    return {name, name[0] == 'D', name[1] == 'W'};
  }
  fail(ErrorKind::ParseError, "unknown variant '" + name + "' (expected UU, UW, DU or DW)");
}

SyntheticMethod parse_synthetic_method(const std::string& name) {
  if (name == "grid-gfrft") return SyntheticMethod::GridGfrft;
  if (name == "grid-gbfrft") return SyntheticMethod::GridGbfrft;
  if (name == "gd-gfrft") return SyntheticMethod::GdGfrft;
  if (name == "gd-gbfrft") return SyntheticMethod::GdGbfrft;
  fail(ErrorKind::ParseError, "unknown synthetic method '" + name + "'");
}

std::string synthetic_method_name(SyntheticMethod m) {
  switch (m) {
    case SyntheticMethod::GridGfrft: return "grid-gfrft";
    case SyntheticMethod::GridGbfrft: return "grid-gbfrft";
    case SyntheticMethod::GdGfrft: return "gd-gfrft";
    case SyntheticMethod::GdGbfrft: return "gd-gbfrft";
  }
  return "grid-gbfrft";
}

void SyntheticSpec::validate() const {
  if (topologies.empty() || variants.empty() || sigma2.empty()) {
    fail(ErrorKind::InvalidArgument, "synthetic spec needs topologies, variants and variances");
  }
  for (double s : sigma2)
    if (!(s > 0.0)) fail(ErrorKind::InvalidArgument, "noise variances must be positive");
  if (trials < 1) fail(ErrorKind::InvalidArgument, "trials must be at least 1");
  if (!(lo <= hi) || !(step > 0.0)) fail(ErrorKind::InvalidArgument, "bad grid range");
  train.validate();
}

ObservationModel synthetic_model(const ProductGraph& pg, double sigma2) {
  const Autocorrelation ac = autocorrelation_matrix(pg);
  const Eigen::Index n = pg.size();
  return ObservationModel::denoising(pg.factor1.n, pg.factor2.n,
                                     psd_repair(ac.Rxx).cast<Complex>(),
                                     MatrixXc::Identity(n, n) * sigma2);
}

namespace {

std::vector<Sample> noisy_samples(const MatrixXr& clean_columns, Eigen::Index rows,
                                  Eigen::Index cols, double sigma2, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const double sd = std::sqrt(sigma2);
  std::vector<Sample> out;
  for (Eigen::Index t = 0; t < clean_columns.cols(); ++t) {
    Sample s;
    s.x = unvec(VectorXc(clean_columns.col(t).cast<Complex>()), rows, cols);
    s.y = s.x;
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) s.y(r, c) += sd * normal(rng);
    out.push_back(std::move(s));
  }
  return out;
}

// Noise added to a fixed clean matrix, one realization per trial.
std::vector<Sample> noisy_copies(const MatrixXr& clean, int trials, double sigma2,
                                 std::uint64_t seed) {
  MatrixXr columns(clean.size(), trials);
  for (int t = 0; t < trials; ++t) columns.col(t) = clean.reshaped();
  return noisy_samples(columns, clean.rows(), clean.cols(), sigma2, seed);
}

}  // namespace

std::vector<SyntheticRow> run_synthetic(const SyntheticSpec& spec,
                                        const std::vector<SyntheticMethod>& methods) {
  spec.validate();
  const std::size_t nv = spec.variants.size();
  const std::size_t units = spec.topologies.size() * nv;
  std::vector<std::vector<SyntheticRow>> slots(units);

  parallel_for(units, spec.threads, [&](std::size_t u) {
    const Topology& topo = spec.topologies[u / nv];
    const Variant& var = spec.variants[u % nv];
    const std::uint64_t unit_seed = derive_seed(derive_seed(spec.seed, u / nv), u % nv);
    std::vector<SyntheticRow>& rows = slots[u];

    auto blank = [&](SyntheticMethod m, double s2) {
      SyntheticRow r;
      r.method = synthetic_method_name(m);
      r.topology = topo.name;
      r.variant = var.name;
      r.sigma2 = s2;
      return r;
    };
    auto failed = [&](const Error& e, double s2, std::size_t from) {
      for (std::size_t i = from; i < methods.size(); ++i) {
        SyntheticRow r = blank(methods[i], s2);
        r.mse = std::numeric_limits<double>::quiet_NaN();
        r.alpha1 = r.alpha2 = std::numeric_limits<double>::quiet_NaN();
        r.note = std::string(kind_name(e.kind())) + ": " + e.what();
        rows.push_back(std::move(r));
      }
    };

    const Graph g1 = make_named_graph(topo.factor1.kind, topo.factor1.n, var.directed,
                                      var.weighted, derive_seed(unit_seed, 1));
    const Graph g2 = make_named_graph(topo.factor2.kind, topo.factor2.n, var.directed,
                                      var.weighted, derive_seed(unit_seed, 2));
    const ProductGraph pg = cartesian_product(g1, g2);

    TransformFamily free_family, tied_family;
    try {
      free_family = family_gbfrft(g1, g2, spec.convention);
      tied_family = family_gfrft2d(g1, g2, spec.convention);
    } catch (const Error& e) {
      for (double s2 : spec.sigma2) failed(e, s2, 0);
      return;
    }

    for (std::size_t si = 0; si < spec.sigma2.size(); ++si) {
      const double s2 = spec.sigma2[si];
      const std::uint64_t cell_seed = derive_seed(unit_seed, 100 + si);
      const ObservationModel model = synthetic_model(pg, s2);
      const MatrixXr clean = sample_gaussian(model.Rxx.real(), derive_seed(cell_seed, 0),
                                             spec.trials);
      const std::vector<Sample> batch =
          noisy_samples(clean, g1.n, g2.n, s2, derive_seed(cell_seed, 1));

      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const SyntheticMethod m = methods[mi];
        SyntheticRow r = blank(m, s2);
        try {
          if (m == SyntheticMethod::GridGfrft || m == SyntheticMethod::GridGbfrft) {
            GridOptions opts;
            opts.lo1 = opts.lo2 = spec.lo;
            opts.hi1 = opts.hi2 = spec.hi;
            opts.step = spec.step;
            opts.tied = m == SyntheticMethod::GridGfrft;
            const GridResult g = grid_search(model, free_family, opts);
            r.mse = g.best.mse;
            r.alpha1 = g.best.alpha1;
            r.alpha2 = g.best.alpha2;
          } else {
            TrainConfig cfg = spec.train;
            cfg.seed = derive_seed(cell_seed, 2);
            const TransformFamily& family =
                m == SyntheticMethod::GdGfrft ? tied_family : free_family;
            const TrainResult t = train(family, batch, cfg);
            r.mse = expected_mse(model, family.realize(t.design.alpha1, t.design.alpha2),
                                 t.design.h);
            r.alpha1 = t.design.alpha1;
            r.alpha2 = t.design.alpha2;
          }
        } catch (const Error& e) {
          failed(e, s2, mi);
          break;
        }
        rows.push_back(std::move(r));
      }
    }
  });

  std::vector<SyntheticRow> out;
  for (auto& s : slots)
    for (auto& r : s) out.push_back(std::move(r));
  return out;
}

ResultTable synthetic_table(const std::vector<SyntheticRow>& rows) {
  ResultTable t = make_table(Layout::Synthetic);
  for (const SyntheticRow& r : rows) {
    t.add({r.method, r.topology, r.variant, format_real(r.sigma2), format_real(r.mse),
           format_real(r.alpha1), format_real(r.alpha2)});
  }
  return t;
}

MatrixXr TimeVertexDataset::destandardize(const MatrixXr& standardized) const {
  if (standardized.rows() != mean.size()) fail(ErrorKind::ShapeMismatch, "node count differs");
  return (standardized.array().colwise() * stddev.array()).colwise() + mean.array();
}

TimeVertexDataset make_timevertex(const MatrixXr& raw_values, const MatrixXr& coords) {
  if (raw_values.rows() != coords.rows()) {
    fail(ErrorKind::ShapeMismatch, "values have " + std::to_string(raw_values.rows()) +
                                       " nodes but coordinates have " +
                                       std::to_string(coords.rows()));
  }
  if (raw_values.cols() < 1 || raw_values.rows() < 2) {
    fail(ErrorKind::ShapeMismatch, "time-vertex data needs at least 2 nodes and 1 time step");
  }
  if (!raw_values.allFinite() || !coords.allFinite()) {
    fail(ErrorKind::NonFinite, "time-vertex data has non-finite entries");
  }
  TimeVertexDataset ds;
  ds.coords = coords;
  ds.mean = raw_values.rowwise().mean();
  const MatrixXr centered = raw_values.colwise() - ds.mean;
  ds.stddev = (centered.rowwise().squaredNorm() / static_cast<double>(raw_values.cols())).cwiseSqrt();
  for (Eigen::Index i = 0; i < ds.stddev.size(); ++i) {
    if (ds.stddev(i) < kStdFloor) {
      fail(ErrorKind::ConstantSeries, "node " + std::to_string(i) + " has a constant series");
    }
  }
  ds.values = centered.array().colwise() / ds.stddev.array();
  return ds;
}

TimeVertexDataset ingest_timevertex(const std::filesystem::path& values,
                                    const std::filesystem::path& coords) {
  return make_timevertex(read_real_matrix(values), read_real_matrix(coords));
}

std::vector<TimeVertexRow> run_timevertex(const TimeVertexDataset& ds,
                                          const TimeVertexSpec& spec) {
  spec.train.validate();
  if (spec.trials < 1) fail(ErrorKind::InvalidArgument, "trials must be at least 1");
  const int T = static_cast<int>(ds.steps());
  const double entries = static_cast<double>(ds.values.size());
  const std::size_t ns = spec.sigma2.size();
  const std::size_t cells = spec.ks.size() * ns;
  std::vector<std::vector<TimeVertexRow>> slots(cells);

  parallel_for(cells, spec.threads, [&](std::size_t c) {
    const int k = spec.ks[c / ns];
    const std::size_t si = c % ns;
    const double s2 = spec.sigma2[si];
    if (s2 < 0.0) fail(ErrorKind::InvalidArgument, "noise variances must be non-negative");
    const Graph spatial = make_knn_graph(ds.coords, k);
    const Graph path = make_named_graph(GraphKind::Path, T);
    // The noise depends only on σ² so every k and method sees the same draws.
    const std::vector<Sample> batch =
        noisy_copies(ds.values, spec.trials, s2, derive_seed(spec.seed, 100 + si));
    TrainConfig cfg = spec.train;
    cfg.seed = derive_seed(spec.seed, 200 + si);

    for (TransformKind kind : spec.methods) {
      TimeVertexRow r;
      r.method = std::string(transform_kind_name(kind));
      r.k = k;
      r.sigma2 = s2;
      if (kind == TransformKind::Hybrid) {
        const HybridResult h = train_hybrid(spatial, T, batch, cfg,
                                            grid_values(0.0, 1.0, spec.lambda_step),
                                            spec.convention);
        r.mse = h.design.mse / entries;
        r.alpha1 = h.design.alpha1;
        r.alpha2 = h.design.alpha2;
        r.lambda = h.design.lambda;
      } else {
        const TransformFamily family =
            kind == TransformKind::Gfrft2d   ? family_gfrft2d(spatial, path, spec.convention)
            : kind == TransformKind::Gbfrft2d ? family_gbfrft(spatial, path, spec.convention)
                                              : family_jfrft(spatial, T, spec.convention);
        const TrainResult t = train(family, batch, cfg);
        r.mse = t.design.mse / entries;
        r.alpha1 = t.design.alpha1;
        r.alpha2 = t.design.alpha2;
        r.lambda = kind == TransformKind::Jfrft ? 1.0 : 0.0;
      }
      slots[c].push_back(std::move(r));
    }
  });

  std::vector<TimeVertexRow> out;
  for (auto& s : slots)
    for (auto& r : s) out.push_back(std::move(r));
  return out;
}

ResultTable timevertex_table(const std::vector<TimeVertexRow>& rows) {
  ResultTable t = make_table(Layout::TimeVertex);
  for (const TimeVertexRow& r : rows) {
    t.add({r.method, std::to_string(r.k), format_real(r.sigma2), format_real(r.mse),
           format_real(r.alpha1), format_real(r.alpha2), format_real(r.lambda)});
  }
  return t;
}

DeblurConfig::DeblurConfig() {
  train.lr_orders = 7e-3;
  train.epochs = 120;
  train.init = OrderInit::fixed(0.8, 0.8);
}

namespace {

QualityMetrics average(const std::vector<QualityMetrics>& m) {
  QualityMetrics a;
  for (const QualityMetrics& q : m) {
    a.mse += q.mse;
    a.psnr += q.psnr;
    a.ssim += q.ssim;
  }
  const double n = static_cast<double>(m.size());
  a.mse /= n;
  a.psnr /= n;
  a.ssim /= n;
  return a;
}

}  // namespace

DeblurResult run_deblur(const FrameSequence& blurred, const FrameSequence& clean,
                        const DeblurConfig& config) {
  blurred.validate();
  clean.validate();
  if (blurred.length() != clean.length() || blurred.height() != clean.height() ||
      blurred.width() != clean.width() || blurred.patch != clean.patch) {
    fail(ErrorKind::ShapeMismatch, "blurred and clean sequences differ in shape");
  }
  config.train.validate();
  const int p = clean.patch;
  const int T = clean.length();
  const Graph spatial = make_knn_graph(patch_coordinates(p), config.knn);

  TransformFamily family;
  switch (config.method) {
    case TransformKind::Gfrft2d:
      family = family_gfrft2d(spatial, make_named_graph(GraphKind::Path, std::max(T, 2)),
                              config.convention);
      break;
    case TransformKind::Gbfrft2d:
      family = family_gbfrft(spatial, make_named_graph(GraphKind::Path, std::max(T, 2)),
                             config.convention);
      break;
    case TransformKind::Jfrft:
      family = family_jfrft(spatial, T, config.convention);
      break;
    case TransformKind::Hybrid:
      fail(ErrorKind::InvalidArgument, "deblurring supports 2d-gfrft, 2d-gbfrft and jfrft");
  }
  if (family.cols() != T) fail(ErrorKind::InvalidArgument, "deblurring needs at least 2 frames");

  const std::vector<MatrixXr> ys = patchify(blurred);
  const std::vector<MatrixXr> xs = patchify(clean);
  std::vector<MatrixXr> restored(ys.size());
  parallel_for(ys.size(), config.threads, [&](std::size_t i) {
    const Sample s{ys[i].cast<Complex>(), xs[i].cast<Complex>()};
    const TrainResult r = train(family, std::span<const Sample>(&s, 1), config.train);
    restored[i] = estimate(family, r.design.alpha1, r.design.alpha2, r.design.h, s.y).real();
  });

  DeblurResult out;
  out.restored = reassemble(restored, clean.height(), clean.width(), p);
  for (int t = 0; t < T; ++t) {
    out.blurred_metrics.push_back(metrics(clean.frames[t], blurred.frames[t]));
    out.restored_metrics.push_back(metrics(clean.frames[t], out.restored.frames[t]));
  }
  out.blurred_average = average(out.blurred_metrics);
  out.restored_average = average(out.restored_metrics);
  return out;
}

ResultTable deblur_table(const DeblurResult& result, const std::string& method) {
  ResultTable t = make_table(Layout::Deblur);
  auto add = [&](const std::string& name, const std::vector<QualityMetrics>& per_frame,
                 const QualityMetrics& avg) {
    for (std::size_t f = 0; f < per_frame.size(); ++f) {
      t.add({name, std::to_string(f + 1), format_real(per_frame[f].mse),
             format_real(per_frame[f].psnr), format_real(per_frame[f].ssim)});
    }
    t.add({name, "avg", format_real(avg.mse), format_real(avg.psnr), format_real(avg.ssim)});
  };
  add("blurred", result.blurred_metrics, result.blurred_average);
  add(method, result.restored_metrics, result.restored_average);
  return t;
}

FrameSequence synthetic_sequence(int size, int frames, int patch, std::uint64_t seed) {
  if (size < 8 || frames < 1) fail(ErrorKind::InvalidArgument, "synthetic sequence is too small");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double s = size;
  const double disc_r = 0.5 + s * (0.12 + 0.04 * u(rng));
  const double disc_y = s * (0.3 + 0.2 * u(rng));
  const double disc_x0 = s * (0.2 + 0.1 * u(rng));
  const double sq_half = s * (0.10 + 0.03 * u(rng));
  const double sq_y0 = s * (0.55 + 0.1 * u(rng));
  const double sq_x0 = s * (0.55 + 0.1 * u(rng));
  const double freq = 2.0 * 3.14159265358979323846 * (3.0 + 2.0 * u(rng)) / s;
  const double shift = s / 15.0;

  FrameSequence fs;
  fs.patch = patch;
  for (int t = 0; t < frames; ++t) {
    Image img(size, size);
    const double dx = disc_x0 + shift * t;
    const double qy = sq_y0 - 0.5 * shift * t;
    const double qx = sq_x0 - shift * t;
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) {
        double v = 60.0 + 90.0 * (r + c) / (2.0 * s) + 20.0 * std::sin(freq * c + 0.4 * t) *
                                                           std::cos(freq * r);
        if (std::hypot(r - disc_y, c - dx) <= disc_r) v = 225.0;
        if (std::abs(r - qy) <= sq_half && std::abs(c - qx) <= sq_half) v = 25.0;
        img(r, c) = std::clamp(v, 0.0, 255.0);
      }
    }
    fs.frames.push_back(std::move(img));
  }
  return fs;
}

FrameSequence blur_sequence(const FrameSequence& fs, int size, double sigma) {
  FrameSequence out;
  out.patch = fs.patch;
  for (const Image& f : fs.frames) out.frames.push_back(gaussian_blur(f, size, sigma));
  return out;
}

}  // namespace gbfrft
