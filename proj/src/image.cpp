#include "gbfrft/image.hpp"

#include "gbfrft/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace gbfrft {

void FrameSequence::validate() const {
  if (frames.empty()) fail(ErrorKind::ShapeMismatch, "frame sequence is empty");
  if (patch < 1) fail(ErrorKind::ShapeMismatch, "patch size must be positive");
  for (const Image& f : frames) {
    if (f.rows() != height() || f.cols() != width()) {
      fail(ErrorKind::ShapeMismatch, "frames differ in size");
    }
  }
  if (height() % patch != 0 || width() % patch != 0) {
    fail(ErrorKind::ShapeMismatch, "patch size " + std::to_string(patch) + " does not divide " +
                                       std::to_string(height()) + "×" + std::to_string(width()));
  }
}

std::vector<MatrixXr> patchify(const FrameSequence& fs) {
  fs.validate();
  const int p = fs.patch;
  const int T = fs.length();
  std::vector<MatrixXr> blocks;
  blocks.reserve(static_cast<std::size_t>((fs.height() / p) * (fs.width() / p)));
  for (int pr = 0; pr < fs.height(); pr += p) {
    for (int pc = 0; pc < fs.width(); pc += p) {
      MatrixXr block(p * p, T);
      for (int t = 0; t < T; ++t) {
        for (int r = 0; r < p; ++r)
          for (int c = 0; c < p; ++c) block(r * p + c, t) = fs.frames[t](pr + r, pc + c);
      }
      blocks.push_back(std::move(block));
    }
  }
  return blocks;
}

FrameSequence reassemble(const std::vector<MatrixXr>& blocks, int height, int width, int patch) {
  if (patch < 1 || height % patch != 0 || width % patch != 0) {
    fail(ErrorKind::ShapeMismatch, "patch size does not divide the frame size");
  }
  const int per_row = width / patch;
  const auto expected = static_cast<std::size_t>((height / patch) * per_row);
  if (blocks.size() != expected) fail(ErrorKind::ShapeMismatch, "wrong number of patches");
  const auto T = blocks.empty() ? 0 : blocks.front().cols();

  FrameSequence fs;
  fs.patch = patch;
  fs.frames.assign(static_cast<std::size_t>(T), Image::Zero(height, width));
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const MatrixXr& block = blocks[b];
    if (block.rows() != patch * patch || block.cols() != T) {
      fail(ErrorKind::ShapeMismatch, "patch block has the wrong shape");
    }
    const int pr = static_cast<int>(b) / per_row * patch;
    const int pc = static_cast<int>(b) % per_row * patch;
    for (Eigen::Index t = 0; t < T; ++t) {
      for (int r = 0; r < patch; ++r)
        for (int c = 0; c < patch; ++c) fs.frames[t](pr + r, pc + c) = block(r * patch + c, t);
    }
  }
  return fs;
}

MatrixXr patch_coordinates(int patch) {
  MatrixXr coords(patch * patch, 2);
  for (int r = 0; r < patch; ++r) {
    for (int c = 0; c < patch; ++c) {
      coords(r * patch + c, 0) = r;
      coords(r * patch + c, 1) = c;
    }
  }
  return coords;
}

namespace {

void check_same_shape(const Image& a, const Image& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.size() == 0) {
    fail(ErrorKind::ShapeMismatch, "images must be non-empty and equally sized");
  }
}

VectorXr gaussian_kernel(int size, double sigma) {
  VectorXr g(size);
  const double center = (size - 1) / 2.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - center;
    g(i) = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return g / g.sum();
}

// Separable correlation with a normalized kernel over the valid region.
MatrixXr filter_valid(const MatrixXr& img, const VectorXr& k) {
  const auto w = k.size();
  const auto rows = img.rows() - w + 1;
  const auto cols = img.cols() - w + 1;
  MatrixXr horiz(img.rows(), cols);
  for (Eigen::Index c = 0; c < cols; ++c) horiz.col(c) = img.middleCols(c, w) * k;
  MatrixXr out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) out.row(r) = k.transpose() * horiz.middleRows(r, w);
  return out;
}

}  // namespace

double image_mse(const Image& reference, const Image& estimate) {
  check_same_shape(reference, estimate);
  return (reference - estimate).squaredNorm() / static_cast<double>(reference.size());
}

double psnr_from_mse(double mse, double max_value) {
  if (mse <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(max_value * max_value / mse));
}

double ssim(const Image& reference, const Image& estimate, const SsimOptions& options) {
  check_same_shape(reference, estimate);
  if (reference.rows() < options.window || reference.cols() < options.window) {
    fail(ErrorKind::ShapeMismatch, "image is smaller than the SSIM window");
  }
  const VectorXr k = gaussian_kernel(options.window, options.sigma);
  const double c1 = std::pow(options.k1 * options.max_value, 2);
  const double c2 = std::pow(options.k2 * options.max_value, 2);

  const MatrixXr mu1 = filter_valid(reference, k);
  const MatrixXr mu2 = filter_valid(estimate, k);
  const MatrixXr s11 = filter_valid(reference.cwiseProduct(reference), k) - mu1.cwiseProduct(mu1);
  const MatrixXr s22 = filter_valid(estimate.cwiseProduct(estimate), k) - mu2.cwiseProduct(mu2);
  const MatrixXr s12 = filter_valid(reference.cwiseProduct(estimate), k) - mu1.cwiseProduct(mu2);

  const auto num = (2.0 * mu1.array() * mu2.array() + c1) * (2.0 * s12.array() + c2);
  const auto den = (mu1.array().square() + mu2.array().square() + c1) *
                   (s11.array() + s22.array() + c2);
  return (num / den).mean();
}

QualityMetrics metrics(const Image& reference, const Image& estimate, const SsimOptions& options) {
  QualityMetrics m;
  m.mse = image_mse(reference, estimate);
  m.psnr = psnr_from_mse(m.mse, options.max_value);
  m.ssim = ssim(reference, estimate, options);
  return m;
}

Image gaussian_blur(const Image& image, int size, double sigma) {
  if (size < 1 || size % 2 == 0) fail(ErrorKind::InvalidArgument, "blur size must be odd");
  const int half = size / 2;
  MatrixXr padded(image.rows() + 2 * half, image.cols() + 2 * half);
  for (Eigen::Index r = 0; r < padded.rows(); ++r) {
    for (Eigen::Index c = 0; c < padded.cols(); ++c) {
      const auto sr = std::clamp<Eigen::Index>(r - half, 0, image.rows() - 1);
      const auto sc = std::clamp<Eigen::Index>(c - half, 0, image.cols() - 1);
      padded(r, c) = image(sr, sc);
    }
  }
  return filter_valid(padded, gaussian_kernel(size, sigma));
}

Image error_heatmap(const Image& reference, const Image& estimate) {
  check_same_shape(reference, estimate);
  const MatrixXr err = (reference - estimate).cwiseAbs();
  const double peak = err.maxCoeff();
  return peak > 0.0 ? MatrixXr(err * (255.0 / peak)) : err;
}

namespace {

std::string next_token(std::istream& in) {
  std::string tok;
  while (in) {
    const int ch = in.peek();
    if (ch == '#') {
      std::string comment;
      std::getline(in, comment);
    } else if (std::isspace(ch)) {
      in.get();
    } else {
      break;
    }
  }
  in >> tok;
  return tok;
}

int to_int(const std::string& tok, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used == tok.size() && v >= 0) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::ParseError, path.string() + ": bad PGM header token '" + tok + "'");
}

}  // namespace

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
  const std::string magic = next_token(in);
  if (magic != "P2" && magic != "P5") fail(ErrorKind::ParseError, path.string() + ": not a PGM");
  const int width = to_int(next_token(in), path);
  const int height = to_int(next_token(in), path);
  const int maxval = to_int(next_token(in), path);
  if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) {
    fail(ErrorKind::ParseError, path.string() + ": bad PGM dimensions");
  }
  Image img(height, width);
  if (magic == "P2") {
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c) img(r, c) = to_int(next_token(in), path);
  } else {
    in.get();  // single whitespace after maxval
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(static_cast<std::size_t>(width) * height * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
      fail(ErrorKind::ParseError, path.string() + ": truncated PGM data");
    }
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        const std::size_t i = (static_cast<std::size_t>(r) * width + c) * bytes;
        img(r, c) = bytes == 1 ? raw[i] : (raw[i] << 8) | raw[i + 1];
      }
    }
  }
  if (!in && magic == "P2") fail(ErrorKind::ParseError, path.string() + ": truncated PGM data");
  return img;
}

void write_pgm(const std::filesystem::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
  out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
  for (Eigen::Index r = 0; r < image.rows(); ++r) {
    for (Eigen::Index c = 0; c < image.cols(); ++c) {
      const double v = std::clamp(std::round(image(r, c)), 0.0, 255.0);
      out.put(static_cast<char>(static_cast<unsigned char>(v)));
    }
  }
}

}  // namespace gbfrft
