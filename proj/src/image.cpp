#include "qimp/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qimp/error.hpp"

namespace qimp {

namespace {

void check_shape(int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw ShapeError("image shape " + std::to_string(rows) + "x" + std::to_string(cols) + " is empty");
  }
}

}  // namespace

GrayImage::GrayImage(int rows, int cols) : GrayImage(rows, cols, {}) {}

GrayImage::GrayImage(int rows, int cols, std::vector<std::uint8_t> pixels)
    : rows_(rows), cols_(cols), pixels_(std::move(pixels)) {
  check_shape(rows, cols);
  const auto expected = static_cast<std::size_t>(rows) * cols;
  if (pixels_.empty()) pixels_.assign(expected, 0);
  if (pixels_.size() != expected) {
    throw ShapeError("pixel count " + std::to_string(pixels_.size()) + " != " + std::to_string(expected));
  }
}

GrayImage GrayImage::from_values(int rows, int cols, std::span<const int> values) {
  std::vector<std::uint8_t> px;
  px.reserve(values.size());
  for (int v : values) {
    if (v < 0 || v > 255) throw ValidationError("pixel value " + std::to_string(v) + " outside [0, 255]");
    px.push_back(static_cast<std::uint8_t>(v));
  }
  return GrayImage(rows, cols, std::move(px));
}

bool GrayImage::is_constant() const {
  return std::all_of(pixels_.begin(), pixels_.end(), [&](auto p) { return p == pixels_.front(); });
}

GrayImage GrayImage::transposed() const {
  GrayImage t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

RealImage to_real(const GrayImage& img) {
  RealImage out(img.rows(), img.cols());
  std::copy(img.pixels().begin(), img.pixels().end(), out.values.begin());
  return out;
}

double GradientMap::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

std::size_t EdgeMap::count() const { return std::accumulate(bits.begin(), bits.end(), std::size_t{0}); }

GrayImage resize_bilinear(const GrayImage& img, int rows, int cols) {
  check_shape(rows, cols);
  if (rows == img.rows() && cols == img.cols()) return img;
  GrayImage out(rows, cols);
  const double sy = static_cast<double>(img.rows()) / rows;
  const double sx = static_cast<double>(img.cols()) / cols;
  for (int r = 0; r < rows; ++r) {
    const double fy = std::clamp((r + 0.5) * sy - 0.5, 0.0, img.rows() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, img.rows() - 1);
    const double wy = fy - y0;
    for (int c = 0; c < cols; ++c) {
      const double fx = std::clamp((c + 0.5) * sx - 0.5, 0.0, img.cols() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, img.cols() - 1);
      const double wx = fx - x0;
      const double top = img.at(y0, x0) * (1 - wx) + img.at(y0, x1) * wx;
      const double bottom = img.at(y1, x0) * (1 - wx) + img.at(y1, x1) * wx;
      const double v = top * (1 - wy) + bottom * wy;
      out.at(r, c) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return out;
}

}  // namespace qimp
