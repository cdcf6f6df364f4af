#include "qimp/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include "qimp/error.hpp"

namespace qimp {

namespace {

int clampi(int v, int lo, int hi) { return std::min(std::max(v, lo), hi); }

void require_at_least_3x3(const GrayImage& img) {
  if (img.rows() < 3 || img.cols() < 3) throw ShapeError("gradient filters need an image of at least 3x3");
}

RealImage convolve_rows(const RealImage& img, const std::vector<double>& taps) {
  const int radius = static_cast<int>(taps.size() / 2);
  RealImage out(img.rows, img.cols);
  for (int r = 0; r < img.rows; ++r)
    for (int c = 0; c < img.cols; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) acc += taps[k + radius] * img.at(r, clampi(c + k, 0, img.cols - 1));
      out.at(r, c) = acc;
    }
  return out;
}

RealImage convolve_cols(const RealImage& img, const std::vector<double>& taps) {
  const int radius = static_cast<int>(taps.size() / 2);
  RealImage out(img.rows, img.cols);
  for (int r = 0; r < img.rows; ++r)
    for (int c = 0; c < img.cols; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) acc += taps[k + radius] * img.at(clampi(r + k, 0, img.rows - 1), c);
      out.at(r, c) = acc;
    }
  return out;
}

GradientMap magnitude(const RealImage& gx, const RealImage& gy) {
  GradientMap m(gx.rows, gx.cols);
  for (std::size_t i = 0; i < m.values.size(); ++i) m.values[i] = std::hypot(gx.values[i], gy.values[i]);
  return m;
}

}  // namespace

Kernel2D Kernel2D::make(int height, int width, std::vector<double> weights) {
  if (height < 1 || width < 1 || height % 2 == 0 || width % 2 == 0) {
    throw ValidationError("kernel dimensions must be odd");
  }
  if (weights.size() != static_cast<std::size_t>(height) * width) throw ValidationError("kernel size mismatch");
  if (!std::all_of(weights.begin(), weights.end(), [](double w) { return std::isfinite(w); })) {
    throw ValidationError("kernel weights must be finite");
  }
  return {height, width, std::move(weights)};
}

namespace kernels {
Kernel2D sobel_x() { return Kernel2D::make(3, 3, {-1, 0, 1, -2, 0, 2, -1, 0, 1}); }
Kernel2D sobel_y() { return Kernel2D::make(3, 3, {-1, -2, -1, 0, 0, 0, 1, 2, 1}); }
Kernel2D prewitt_x() { return Kernel2D::make(3, 3, {-1, 0, 1, -1, 0, 1, -1, 0, 1}); }
Kernel2D prewitt_y() { return Kernel2D::make(3, 3, {-1, -1, -1, 0, 0, 0, 1, 1, 1}); }
Kernel2D laplacian() { return Kernel2D::make(3, 3, {0, 1, 0, 1, -4, 1, 0, 1, 0}); }
}  // namespace kernels

RealImage convolve2d(const RealImage& img, const Kernel2D& k) {
  if (k.height > img.rows || k.width > img.cols) {
    throw ShapeError("kernel " + std::to_string(k.height) + "x" + std::to_string(k.width) + " larger than image");
  }
  const int ry = k.height / 2, rx = k.width / 2;
  RealImage out(img.rows, img.cols);
  for (int r = 0; r < img.rows; ++r)
    for (int c = 0; c < img.cols; ++c) {
      double acc = 0.0;
      for (int i = 0; i < k.height; ++i)
        for (int j = 0; j < k.width; ++j)
          acc += k.at(i, j) * img.at(clampi(r + i - ry, 0, img.rows - 1), clampi(c + j - rx, 0, img.cols - 1));
      out.at(r, c) = acc;
    }
  return out;
}

std::vector<double> gaussian_kernel1d(double sigma, int radius) {
  if (!(sigma > 0.0)) throw ArgumentError("gaussian sigma must be positive");
  if (radius < 0) radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) sum += taps[k + radius] = std::exp(-0.5 * k * k / (sigma * sigma));
  for (auto& t : taps) t /= sum;
  return taps;
}

RealImage gaussian_smooth(const RealImage& img, double sigma) {
  const auto taps = gaussian_kernel1d(sigma);
  return convolve_cols(convolve_rows(img, taps), taps);
}

Gradients sobel_gradients(const RealImage& img) {
  RealImage gx = convolve2d(img, kernels::sobel_x());
  RealImage gy = convolve2d(img, kernels::sobel_y());
  GradientMap mag = magnitude(gx, gy);
  return {std::move(gx), std::move(gy), std::move(mag)};
}

GradientMap sobel_edges(const GrayImage& img) {
  require_at_least_3x3(img);
  return sobel_gradients(to_real(img)).magnitude;
}

GradientMap prewitt_edges(const GrayImage& img) {
  require_at_least_3x3(img);
  const RealImage f = to_real(img);
  return magnitude(convolve2d(f, kernels::prewitt_x()), convolve2d(f, kernels::prewitt_y()));
}

RealImage laplacian_edges(const GrayImage& img) {
  require_at_least_3x3(img);
  return convolve2d(to_real(img), kernels::laplacian());
}

EdgeMap canny_edges(const GrayImage& img, double sigma, double t_low, double t_high) {
  if (!(t_low > 0.0 && t_low < t_high)) throw ArgumentError("canny thresholds need 0 < t_low < t_high");
  require_at_least_3x3(img);
  const Gradients g = sobel_gradients(gaussian_smooth(to_real(img), sigma));
  const int rows = img.rows(), cols = img.cols();

  // Non-maximum suppression. The forward neighbour must be strictly smaller so
  // a two-pixel plateau keeps exactly one pixel.
  RealImage thin(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double m = g.magnitude.at(r, c);
      if (m <= 0.0) continue;
      double angle = std::atan2(g.gy.at(r, c), g.gx.at(r, c)) * 180.0 / std::numbers::pi;
      if (angle < 0) angle += 180.0;
      int dr = 0, dc = 0;
      if (angle < 22.5 || angle >= 157.5) dc = 1;        // horizontal gradient
      else if (angle < 67.5) dr = 1, dc = 1;             // 45 degrees (rows grow downward)
      else if (angle < 112.5) dr = 1;                    // vertical gradient
      else dr = 1, dc = -1;                              // 135 degrees
      const double before = g.magnitude.at(clampi(r - dr, 0, rows - 1), clampi(c - dc, 0, cols - 1));
      const double after = g.magnitude.at(clampi(r + dr, 0, rows - 1), clampi(c + dc, 0, cols - 1));
      if (m > before && m >= after) thin.at(r, c) = m;
    }
  }

  // Hysteresis: grow strong pixels through 8-connected weak ones.
  EdgeMap edges(rows, cols);
  std::queue<std::pair<int, int>> frontier;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (thin.at(r, c) >= t_high) {
        edges.at(r, c) = 1;
        frontier.emplace(r, c);
      }
  while (!frontier.empty()) {
    const auto [r, c] = frontier.front();
    frontier.pop();
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        const int rr = r + dr, cc = c + dc;
        if (rr < 0 || rr >= rows || cc < 0 || cc >= cols || edges.at(rr, cc)) continue;
        if (thin.at(rr, cc) >= t_low) {
          edges.at(rr, cc) = 1;
          frontier.emplace(rr, cc);
        }
      }
  }
  return edges;
}

RealImage harris_response(const GrayImage& img, double k, int window) {
  if (window < 1 || window % 2 == 0) throw ArgumentError("harris window must be a positive odd integer");
  if (!(k > 0.0)) throw ArgumentError("harris k must be positive");
  require_at_least_3x3(img);
  const Gradients g = sobel_gradients(to_real(img));
  const int rows = img.rows(), cols = img.cols();
  RealImage ixx(rows, cols), iyy(rows, cols), ixy(rows, cols);
  for (std::size_t i = 0; i < ixx.values.size(); ++i) {
    ixx.values[i] = g.gx.values[i] * g.gx.values[i];
    iyy.values[i] = g.gy.values[i] * g.gy.values[i];
    ixy.values[i] = g.gx.values[i] * g.gy.values[i];
  }
  const int radius = window / 2;
  const auto taps = gaussian_kernel1d(radius > 0 ? radius / 2.0 : 0.5, radius);
  auto smooth = [&](const RealImage& m) { return convolve_cols(convolve_rows(m, taps), taps); };
  const RealImage sxx = smooth(ixx), syy = smooth(iyy), sxy = smooth(ixy);
  RealImage response(rows, cols);
  for (std::size_t i = 0; i < response.values.size(); ++i) {
    const double det = sxx.values[i] * syy.values[i] - sxy.values[i] * sxy.values[i];
    const double tr = sxx.values[i] + syy.values[i];
    response.values[i] = det - k * tr * tr;
  }
  return response;
}

std::vector<Corner> harris_corners(const GrayImage& img, double k, int window, double t_rel) {
  if (!(t_rel > 0.0 && t_rel <= 1.0)) throw ArgumentError("harris t_rel must lie in (0, 1]");
  const RealImage resp = harris_response(img, k, window);
  const double top = *std::max_element(resp.values.begin(), resp.values.end());
  std::vector<Corner> corners;
  if (top <= 0.0) return corners;
  const double cut = t_rel * top;
  const int radius = std::max(1, window / 2);
  for (int r = 0; r < resp.rows; ++r) {
    for (int c = 0; c < resp.cols; ++c) {
      const double v = resp.at(r, c);
      if (v < cut || v <= 0.0) continue;
      bool is_max = true;
      for (int dr = -radius; dr <= radius && is_max; ++dr)
        for (int dc = -radius; dc <= radius; ++dc) {
          const int rr = r + dr, cc = c + dc;
          if ((dr == 0 && dc == 0) || rr < 0 || rr >= resp.rows || cc < 0 || cc >= resp.cols) continue;
          const double n = resp.at(rr, cc);
          // plateau ties go to the first pixel in raster order
          const bool earlier = dr < 0 || (dr == 0 && dc < 0);
          if (n > v || (earlier && n == v)) {
            is_max = false;
            break;
          }
        }
      if (is_max) corners.push_back({r, c});
    }
  }
  return corners;
}

}  // namespace qimp
