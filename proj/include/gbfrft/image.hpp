#pragma once

#include "gbfrft/linalg.hpp"

#include <filesystem>
#include <vector>

namespace gbfrft {

/// Grayscale image, H×W, nominal range [0, 255].
using Image = MatrixXr;

/// T frames of equal size split into p×p patches.
struct FrameSequence {
  std::vector<Image> frames;
  int patch = 20;

  int length() const { return static_cast<int>(frames.size()); }
  int height() const { return frames.empty() ? 0 : static_cast<int>(frames.front().rows()); }
  int width() const { return frames.empty() ? 0 : static_cast<int>(frames.front().cols()); }
  /// Throws ShapeMismatch if frames differ in size or p does not divide H and W.
  void validate() const;
};

/// One p²×T block per patch, in row-major patch order. Within a block,
/// pixel (r, c) of the patch is vertex r·p + c and column t is frame t.
std::vector<MatrixXr> patchify(const FrameSequence& fs);

FrameSequence reassemble(const std::vector<MatrixXr>& blocks, int height, int width, int patch);

/// Pixel coordinates (row, col) of a p×p patch in vertex order.
MatrixXr patch_coordinates(int patch);

struct SsimOptions {
  int window = 11;
  double sigma = 1.5;
  double max_value = 255.0;
  double k1 = 0.01;
  double k2 = 0.03;
};

inline constexpr double kPsnrCap = 99.0;

struct QualityMetrics {
  double mse = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
};

double image_mse(const Image& reference, const Image& estimate);

/// 10·log10(MAX²/MSE), reported as kPsnrCap for MSE = 0.
double psnr_from_mse(double mse, double max_value = 255.0);

/// Mean of the local SSIM map over the valid region of a normalized Gaussian
/// window. Constants are (k·MAX)².
double ssim(const Image& reference, const Image& estimate, const SsimOptions& options = {});

QualityMetrics metrics(const Image& reference, const Image& estimate,
                       const SsimOptions& options = {});

/// Normalized size×size Gaussian blur with replicated borders.
Image gaussian_blur(const Image& image, int size = 5, double sigma = 1.0);

/// |reference − estimate| scaled so the largest error maps to 255.
Image error_heatmap(const Image& reference, const Image& estimate);

/// Reads P2 or P5 (8-bit or 16-bit) PGM; values are returned in the file's range.
Image read_pgm(const std::filesystem::path& path);

/// Writes binary P5, clamping to [0, 255] and rounding.
void write_pgm(const std::filesystem::path& path, const Image& image);

}  // namespace gbfrft
