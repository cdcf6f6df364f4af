#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qimp {

/// 8-bit grayscale image, row-major.
class GrayImage {
 public:
  GrayImage() = default;
  /// Zero-filled image. Throws ShapeError unless rows, cols >= 1.
  GrayImage(int rows, int cols);
  /// Throws ShapeError when pixels.size() != rows * cols.
  GrayImage(int rows, int cols, std::vector<std::uint8_t> pixels);
  /// Checked construction from wider integers; ValidationError outside [0, 255].
  static GrayImage from_values(int rows, int cols, std::span<const int> values);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return pixels_.size(); }

  std::uint8_t at(int r, int c) const { return pixels_[static_cast<std::size_t>(r) * cols_ + c]; }
  std::uint8_t& at(int r, int c) { return pixels_[static_cast<std::size_t>(r) * cols_ + c]; }
  std::span<const std::uint8_t> pixels() const { return pixels_; }

  bool is_constant() const;
  GrayImage transposed() const;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Real-valued image plane (filter responses, smoothed images).
struct RealImage {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  RealImage() = default;
  RealImage(int r, int c, double fill = 0.0)
      : rows(r), cols(c), values(static_cast<std::size_t>(r) * c, fill) {}

  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
  double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
};

RealImage to_real(const GrayImage& img);

/// Non-negative gradient magnitudes with the shape of the source image.
struct GradientMap : RealImage {
  using RealImage::RealImage;
  double max() const;
};

/// Binary edge mask with the shape of the source image.
struct EdgeMap {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> bits;

  EdgeMap() = default;
  EdgeMap(int r, int c) : rows(r), cols(c), bits(static_cast<std::size_t>(r) * c, 0) {}

  std::uint8_t at(int r, int c) const { return bits[static_cast<std::size_t>(r) * cols + c]; }
  std::uint8_t& at(int r, int c) { return bits[static_cast<std::size_t>(r) * cols + c]; }
  std::size_t count() const;

  friend bool operator==(const EdgeMap&, const EdgeMap&) = default;
};

/// Bilinear resampling with half-pixel centers and clamped borders.
GrayImage resize_bilinear(const GrayImage& img, int rows, int cols);

}  // namespace qimp
