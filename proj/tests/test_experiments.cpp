#include "gbfrft/error.hpp"
#include "gbfrft/experiments.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace gbfrft;

namespace {

const Graph k1 = make_graph(MatrixXr::Zero(1, 1), "K1");
const Graph p2 = make_named_graph(GraphKind::Path, 2);

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no gbfrft::Error thrown";
  return ErrorKind::IoError;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "gbfrft_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Seeds, DeriveIsStableAndSpreads) {
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
  EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 2));
}

TEST(Autocorrelation, PathOfTwo) {
  const Autocorrelation a = autocorrelation_matrix(cartesian_product(p2, k1));
  MatrixXr c(2, 2);
  c << 2, 1, 1, 2;
  EXPECT_EQ(a.C, c);
  EXPECT_NEAR(a.lambda_max, 3.0, 1e-14);
  EXPECT_NEAR(a.signal_power, 4.0 / 3.0, 1e-14);
  EXPECT_LT((a.Rxx - c / 3.0).norm(), 1e-15);
}

TEST(Autocorrelation, EdgelessAndFourCycle) {
  const Graph e3 = make_graph(MatrixXr::Zero(3, 3), "E3");
  const Autocorrelation e = autocorrelation_matrix(cartesian_product(e3, k1));
  EXPECT_LT((e.Rxx - MatrixXr::Identity(3, 3)).norm(), 1e-15);
  const Autocorrelation q = autocorrelation_matrix(cartesian_product(p2, p2));
  EXPECT_NEAR(q.lambda_max, 4.0, 1e-14);
  EXPECT_NEAR(q.signal_power, 2.0, 1e-14);
}

TEST(Autocorrelation, DirectedPatternIsSymmetrized) {
  const Graph d = make_named_graph(GraphKind::Path, 4, true, true, 3);
  const Autocorrelation a = autocorrelation_matrix(cartesian_product(d, k1));
  EXPECT_EQ(a.C, autocorrelation_matrix(cartesian_product(make_named_graph(GraphKind::Path, 4), k1)).C);
}

TEST(PsdRepair, ClipsOnlyNegativeDirections) {
  const ProductGraph pc =
      cartesian_product(make_named_graph(GraphKind::Path, 4), make_named_graph(GraphKind::Cycle, 8));
  const MatrixXr r = autocorrelation_matrix(pc).Rxx;
  Eigen::SelfAdjointEigenSolver<MatrixXr> before(r);
  ASSERT_LT(before.eigenvalues().minCoeff(), 0.0);
  const MatrixXr fixed = psd_repair(r);
  Eigen::SelfAdjointEigenSolver<MatrixXr> after(fixed);
  EXPECT_GE(after.eigenvalues().minCoeff(), -1e-12);
  EXPECT_NEAR(after.eigenvalues().maxCoeff(), before.eigenvalues().maxCoeff(), 1e-12);
  const MatrixXr definite = autocorrelation_matrix(cartesian_product(p2, k1)).Rxx;
  EXPECT_EQ(psd_repair(definite), definite);
  // singular but PSD: a round-off negative eigenvalue may be clipped
  const MatrixXr singular = autocorrelation_matrix(cartesian_product(p2, p2)).Rxx;
  EXPECT_LT((psd_repair(singular) - singular).norm(), 1e-14);
}

TEST(Sampling, CovarianceWithinSampleError) {
  const int trials = 20000;
  const MatrixXr zero = sample_gaussian(MatrixXr::Zero(3, 3), 1, 10);
  EXPECT_EQ(zero.norm(), 0.0);
  const MatrixXr draws = sample_gaussian(MatrixXr::Identity(3, 3), 2, trials);
  const MatrixXr cov = draws * draws.transpose() / trials;
  EXPECT_LT((cov - MatrixXr::Identity(3, 3)).cwiseAbs().maxCoeff(), 5.0 / std::sqrt(trials));
  // P2: unit-normalized correlation 1/2, SE of the sample correlation ≈ (1 − ρ²)/√n
  const MatrixXr c = autocorrelation_matrix(cartesian_product(p2, k1)).Rxx;
  const MatrixXr x = sample_gaussian(c, 3, trials);
  const MatrixXr s = x * x.transpose() / trials;
  const double rho = s(0, 1) / std::sqrt(s(0, 0) * s(1, 1));
  EXPECT_LT(std::abs(rho - 0.5), 3.0 * 0.75 / std::sqrt(trials));
  EXPECT_EQ(sample_gaussian(c, 3, 5), sample_gaussian(c, 3, 5));
}

TEST(Synthetic, ParsingAndValidation) {
  EXPECT_EQ(parse_topology("path-fan").factor2.kind, GraphKind::Fan);
  EXPECT_EQ(parse_topology("complete-star").factor1.n, 5);
  EXPECT_TRUE(parse_variant("DW").directed);
  EXPECT_TRUE(parse_variant("DW").weighted);
  EXPECT_EQ(kind_of([] { parse_variant("XX"); }), ErrorKind::ParseError);
  EXPECT_EQ(synthetic_method_name(parse_synthetic_method("gd-gfrft")), "gd-gfrft");
  SyntheticSpec spec;
  EXPECT_EQ(kind_of([&] { spec.validate(); }), ErrorKind::InvalidArgument);
}

TEST(Synthetic, FreeGridDominatesEveryCell) {
  SyntheticSpec spec;
  spec.topologies = {parse_topology("path-cycle"), parse_topology("path-fan"),
                     parse_topology("complete-star")};
  spec.variants = {parse_variant("UU"), parse_variant("UW")};
  spec.sigma2 = {0.5, 1.5};
  spec.step = 0.25;
  const auto rows =
      run_synthetic(spec, {SyntheticMethod::GridGfrft, SyntheticMethod::GridGbfrft});
  ASSERT_EQ(rows.size(), 3u * 2u * 2u * 2u);
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    ASSERT_EQ(rows[i].method, "grid-gfrft");
    ASSERT_EQ(rows[i + 1].method, "grid-gbfrft");
    EXPECT_TRUE(std::isfinite(rows[i].mse)) << rows[i].note;
    EXPECT_LE(rows[i + 1].mse, rows[i].mse + 1e-12);
    EXPECT_EQ(rows[i].alpha1, rows[i].alpha2);
  }
}

TEST(Synthetic, VanishingNoiseGivesVanishingError) {
  SyntheticSpec spec;
  spec.topologies = {parse_topology("path-cycle")};
  spec.variants = {parse_variant("UU")};
  spec.sigma2 = {1e-8};
  spec.step = 0.5;
  const auto rows = run_synthetic(spec, {SyntheticMethod::GridGbfrft});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_LT(rows[0].mse, 32 * 1e-8);
}

TEST(Synthetic, GradientRowsAreScoredAndSeeded) {
  SyntheticSpec spec;
  spec.topologies = {parse_topology("path-fan")};
  spec.variants = {parse_variant("UU")};
  spec.sigma2 = {1.0};
  spec.step = 0.5;
  spec.train.epochs = 20;
  spec.train.init = OrderInit::uniform(-1.0, 1.0);
  const std::vector<SyntheticMethod> m = {SyntheticMethod::GridGbfrft, SyntheticMethod::GdGbfrft};
  const auto a = run_synthetic(spec, m);
  const auto b = run_synthetic(spec, m);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[1].mse, b[1].mse);
  EXPECT_EQ(a[1].alpha1, b[1].alpha1);
  // a trained design can never beat the Wiener optimum at its own orders
  const ProductGraph pg = cartesian_product(make_named_graph(GraphKind::Path, 4),
                                            make_named_graph(GraphKind::Fan, 5));
  const ObservationModel model = synthetic_model(pg, 1.0);
  const ProductTransform t = family_gbfrft(pg.factor1, pg.factor2).realize(a[1].alpha1, a[1].alpha2);
  const NormalEquations eq = assemble_normal_equations(model, t);
  EXPECT_GE(a[1].mse, expected_mse(eq, solve_filter(eq.T, eq.q).h) - 1e-9);
}

TEST(Synthetic, DirectedDagCellsReportNaN) {
  SyntheticSpec spec;
  spec.topologies = {parse_topology("path-cycle")};
  spec.variants = {parse_variant("DU")};
  spec.sigma2 = {0.5};
  const auto rows = run_synthetic(spec, {SyntheticMethod::GridGbfrft});
  ASSERT_EQ(rows.size(), 1u);
  // any orientation of a path is nilpotent, so the product cannot be diagonalized
  EXPECT_TRUE(std::isnan(rows[0].mse));
  EXPECT_NE(rows[0].note.find("DefectiveMatrix"), std::string::npos) << rows[0].note;
  const ResultTable t = synthetic_table(rows);
  EXPECT_EQ(t.rows.size(), 1u);
}

TEST(TimeVertex, StandardizationExample) {
  MatrixXr raw(2, 2), coords(2, 1);
  raw << 1, 3, 2, 4;
  coords << 0, 1;
  const TimeVertexDataset ds = make_timevertex(raw, coords);
  MatrixXr expected(2, 2);
  expected << -1, 1, -1, 1;
  EXPECT_LT((ds.values - expected).norm(), 1e-15);
  EXPECT_LT((ds.destandardize(ds.values) - raw).norm(), 1e-14);
}

TEST(TimeVertex, IngestErrors) {
  MatrixXr raw(2, 3), coords(2, 1);
  raw << 1, 1, 1, 2, 3, 4;
  coords << 0, 1;
  EXPECT_EQ(kind_of([&] { make_timevertex(raw, coords); }), ErrorKind::ConstantSeries);
  EXPECT_EQ(kind_of([&] { make_timevertex(raw, MatrixXr::Zero(3, 1)); }), ErrorKind::ShapeMismatch);

  const auto dir = scratch("ingest");
  std::ofstream(dir / "values.csv") << "1,2,3\n4,,6\n";
  std::ofstream(dir / "coords.csv") << "0,0\n1,1\n";
  EXPECT_EQ(kind_of([&] { ingest_timevertex(dir / "values.csv", dir / "coords.csv"); }),
            ErrorKind::ParseError);
  std::ofstream(dir / "values.csv") << "1,2,3\n4,5,7\n";
  const TimeVertexDataset ds = ingest_timevertex(dir / "values.csv", dir / "coords.csv");
  EXPECT_EQ(ds.nodes(), 2);
  EXPECT_EQ(ds.steps(), 3);
}

TEST(TimeVertex, HybridNoWorseThanItsEndpointsAndNoiselessIsExact) {
  std::mt19937_64 rng(4);
  const MatrixXr coords = oracle::random_real(8, 2, rng);
  const MatrixXr raw = oracle::random_real(8, 4, rng);
  const TimeVertexDataset ds = make_timevertex(raw, coords);
  TimeVertexSpec spec;
  spec.ks = {3};
  spec.sigma2 = {0.6};
  spec.methods = {TransformKind::Jfrft, TransformKind::Gbfrft2d, TransformKind::Hybrid};
  spec.train.epochs = 30;
  spec.train.lr_orders = 0.1;
  spec.train.init = OrderInit::fixed(0.5, 0.5);
  spec.lambda_step = 0.5;
  const auto rows = run_timevertex(ds, spec);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[2].method, "hybrid");
  EXPECT_LE(rows[2].mse, std::min(rows[0].mse, rows[1].mse) + 1e-12);
  EXPECT_EQ(rows[0].lambda, 1.0);

  spec.sigma2 = {0.0};
  for (const auto& r : run_timevertex(ds, spec)) EXPECT_LT(r.mse, 1e-20) << r.method;
  EXPECT_EQ(timevertex_table(rows).rows.size(), 3u);
}

TEST(Patches, OrderAndRoundTrip) {
  FrameSequence fs;
  fs.patch = 2;
  Image f(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) f(r, c) = 10 * r + c;
  fs.frames = {f, 2 * f};
  const auto blocks = patchify(fs);
  ASSERT_EQ(blocks.size(), 4u);
  // patch 1 is the top-right 2×2 block, pixel (r, c) is vertex r·p + c
  EXPECT_EQ(blocks[1](0, 0), 2.0);
  EXPECT_EQ(blocks[1](1, 0), 3.0);
  EXPECT_EQ(blocks[1](2, 0), 12.0);
  EXPECT_EQ(blocks[2](0, 1), 40.0);
  const FrameSequence back = reassemble(blocks, 4, 4, 2);
  EXPECT_EQ(back.frames[0], f);
  EXPECT_EQ(back.frames[1], 2 * f);

  FrameSequence big = synthetic_sequence(200, 2, 20, 1);
  EXPECT_EQ(patchify(big).size(), 100u);
  big.patch = 30;
  EXPECT_EQ(kind_of([&] { patchify(big); }), ErrorKind::ShapeMismatch);
}

TEST(Metrics, KnownValues) {
  EXPECT_NEAR(psnr_from_mse(62.5371), 30.17, 0.005);
  EXPECT_NEAR(psnr_from_mse(7.9011), 39.15, 0.005);
  EXPECT_EQ(psnr_from_mse(0.0), kPsnrCap);
  double last = psnr_from_mse(1e-3);
  for (double m : {1e-2, 1.0, 10.0, 100.0, 1000.0}) {
    EXPECT_LT(psnr_from_mse(m), last);
    last = psnr_from_mse(m);
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  Image a(32, 32), b(32, 32);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a.data()[i] = u(rng);
    b.data()[i] = u(rng);
  }
  const QualityMetrics same = metrics(a, a);
  EXPECT_EQ(same.mse, 0.0);
  EXPECT_EQ(same.psnr, kPsnrCap);
  EXPECT_EQ(same.ssim, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double s = ssim(a, trial % 2 ? b : Image(255.0 - a.array()));
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = u(rng);
  }
  EXPECT_EQ(kind_of([&] { ssim(Image::Zero(8, 8), Image::Zero(8, 8)); }), ErrorKind::ShapeMismatch);
}

TEST(Metrics, BlurKeepsConstantsAndMass) {
  const Image flat = Image::Constant(12, 12, 80.0);
  EXPECT_LT((gaussian_blur(flat) - flat).cwiseAbs().maxCoeff(), 1e-12);
  const FrameSequence fs = synthetic_sequence(40, 2, 10, 3);
  const FrameSequence blurred = blur_sequence(fs);
  EXPECT_GT(image_mse(fs.frames[0], blurred.frames[0]), 0.0);
  EXPECT_EQ(blurred.patch, fs.patch);
}

TEST(Pgm, RoundTrip) {
  const auto dir = scratch("pgm");
  Image img(5, 7);
  for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] = static_cast<double>((i * 37) % 256);
  write_pgm(dir / "a.pgm", img);
  EXPECT_EQ(read_pgm(dir / "a.pgm"), img);
  std::ofstream(dir / "b.pgm") << "P2\n# comment\n2 2\n255\n0 10\n20 255\n";
  Image expected(2, 2);
  expected << 0, 10, 20, 255;
  EXPECT_EQ(read_pgm(dir / "b.pgm"), expected);
}

TEST(Deblur, CleanInputStaysClean) {
  const FrameSequence clean = synthetic_sequence(20, 2, 10, 7);
  DeblurConfig cfg;
  cfg.train.epochs = 5;
  const DeblurResult r = run_deblur(clean, clean, cfg);
  EXPECT_GE(r.restored_average.psnr, 60.0);
  EXPECT_EQ(deblur_table(r, "2d-gbfrft").rows.size(), 2u * 3u);
}

TEST(Deblur, PatchesAreIndependent) {
  const FrameSequence clean = synthetic_sequence(20, 2, 10, 8);
  const FrameSequence blurred = blur_sequence(clean);
  DeblurConfig cfg;
  cfg.train.epochs = 10;
  const DeblurResult serial = run_deblur(blurred, clean, cfg);
  cfg.threads = 3;
  const DeblurResult parallel = run_deblur(blurred, clean, cfg);
  for (int t = 0; t < 2; ++t) EXPECT_EQ(serial.restored.frames[t], parallel.restored.frames[t]);
}

TEST(SelfTest, PassesAndIsDeterministic) {
  const auto a = scratch("selftest_a");
  const auto b = scratch("selftest_b");
  const SelfTestReport ra = run_selftest(0, a);
  const SelfTestReport rb = run_selftest(0, b);
  EXPECT_TRUE(ra.passed);
  ASSERT_EQ(ra.files.size(), rb.files.size());
  for (std::size_t i = 0; i < ra.files.size(); ++i) {
    if (ra.files[i].extension() != ".csv") continue;
    EXPECT_EQ(read_text(ra.files[i]), read_text(rb.files[i])) << ra.files[i];
  }
}
