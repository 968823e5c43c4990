#include "gbfrft/experiments.hpp"

#include "gbfrft/error.hpp"
#include "gbfrft/wiener.hpp"

#include <random>

namespace gbfrft {

namespace {

MatrixXc random_signal(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MatrixXc x(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) x(r, c) = {u(rng), u(rng)};
  return x;
}

}  // namespace

SelfTestReport run_selftest(std::uint64_t seed, const std::filesystem::path& out_dir) {
  SelfTestReport report;
  report.checks = make_table(Layout::SelfTest);
  auto check = [&](const std::string& name, double value, double threshold) {
    const bool pass = value <= threshold;
    report.passed = report.passed && pass;
    report.checks.add({name, format_real(value), format_real(threshold), pass ? "true" : "false"});
  };
  const nlohmann::json meta = {{"seed", seed}, {"subcommand", "selftest"}};
  auto keep = [&](const EmittedFiles& f) {
    report.files.push_back(f.csv);
    report.files.push_back(f.text);
    report.files.push_back(f.metadata);
  };

  const Graph p4 = make_named_graph(GraphKind::Path, 4);
  const Graph c3 = make_named_graph(GraphKind::Cycle, 3);

  // Transform properties on a fixed signal.
  const MatrixXc x = random_signal(4, 3, derive_seed(seed, 0));
  const ProductTransform t = transform_2d(p4, c3, 0.3, 0.7);
  const MatrixXc xf = apply(t, x);
  const auto transformed = out_dir / "selftest_transform.csv";
  write_matrix(transformed, xf);
  report.files.push_back(transformed);
  const double n = static_cast<double>(t.size());
  check("identity_at_zero",
        (transform_2d(p4, c3, 0.0, 0.0).vec_operator() - MatrixXc::Identity(12, 12)).norm(), 1e-12);
  check("unitarity",
        (t.vec_operator().adjoint() * t.vec_operator() - MatrixXc::Identity(12, 12)).norm(),
        1e-8 * n);
  check("roundtrip", (apply(t, xf, Direction::Inverse) - x).norm() / x.norm(), 1e-9);
  check("vec_form", (vec(xf) - t.vec_operator() * vec(x)).norm(), 1e-9 * n);
  const ProductTransform sum = transform_2d(p4, c3, 0.3 - 0.45, 0.7 + 0.2);
  check("additivity",
        (transform_2d(p4, c3, -0.45, 0.2).vec_operator() * t.vec_operator() - sum.vec_operator())
            .norm(),
        1e-8 * n);

  // Grid search on a small product, both order constraints.
  const ProductGraph pg = cartesian_product(make_named_graph(GraphKind::Path, 3),
                                            make_named_graph(GraphKind::Cycle, 4));
  const ObservationModel model = synthetic_model(pg, 0.5);
  const TransformFamily family = family_gbfrft(pg.factor1, pg.factor2);
  GridOptions opts;
  opts.step = 0.25;
  const GridResult free_grid = grid_search(model, family, opts);
  opts.tied = true;
  const GridResult tied_grid = grid_search(model, family, opts);
  check("grid_dominance", free_grid.best.mse - tied_grid.best.mse, 1e-12);
  ResultTable grid = make_table(Layout::GridMap);
  for (const GridPoint& p : free_grid.points) {
    grid.add({format_real(p.alpha1), format_real(p.alpha2), format_real(p.mse)});
  }
  keep(emit_results(grid, Layout::GridMap, out_dir, "selftest_gridmap", meta));

  // Short joint descent on one noisy realization.
  const MatrixXr clean = sample_gaussian(model.Rxx.real(), derive_seed(seed, 1), 1);
  Sample s;
  s.x = unvec(VectorXc(clean.col(0).cast<Complex>()), 3, 4);
  std::mt19937_64 rng(derive_seed(seed, 2));
  std::normal_distribution<double> normal;
  s.y = s.x;
  for (Eigen::Index c = 0; c < 4; ++c)
    for (Eigen::Index r = 0; r < 3; ++r) s.y(r, c) += std::sqrt(0.5) * normal(rng);
  TrainConfig cfg;
  cfg.epochs = 40;
  cfg.seed = derive_seed(seed, 3);
  const TrainResult tr = train(family, std::span<const Sample>(&s, 1), cfg);
  ResultTable trace = make_table(Layout::Trace);
  for (const auto& e : tr.trace.epochs) {
    trace.add({std::to_string(e.epoch), format_real(e.alpha1), format_real(e.alpha2),
               format_real(e.loss), format_real(e.best_loss)});
  }
  keep(emit_results(trace, Layout::Trace, out_dir, "selftest_trace", meta));
  check("trace_improves", tr.trace.epochs.back().best_loss - tr.trace.epochs.front().loss, 0.0);

  // One synthetic cell through every designer.
  SyntheticSpec spec;
  spec.topologies = {parse_topology("path-cycle")};
  spec.variants = {parse_variant("UU")};
  spec.sigma2 = {0.5};
  spec.step = 0.25;
  spec.train.epochs = 40;
  spec.train.init = OrderInit::uniform(-1.0, 1.0);
  spec.seed = seed;
  const auto rows = run_synthetic(spec, {SyntheticMethod::GridGfrft, SyntheticMethod::GridGbfrft,
                                         SyntheticMethod::GdGfrft, SyntheticMethod::GdGbfrft});
  keep(emit_results(synthetic_table(rows), Layout::Synthetic, out_dir, "selftest_synthetic", meta));
  check("synthetic_dominance", rows[1].mse - rows[0].mse, 1e-12);

  check("psnr_62.5371", std::abs(psnr_from_mse(62.5371) - 30.17), 0.005);
  check("psnr_7.9011", std::abs(psnr_from_mse(7.9011) - 39.15), 0.005);

  keep(emit_results(report.checks, Layout::SelfTest, out_dir, "selftest", meta));
  return report;
}

}  // namespace gbfrft
