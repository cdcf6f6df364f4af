#pragma once

// Classical edge / corner detectors. All filters correlate with
// replicate-border handling and keep the input shape.

#include <vector>

#include "qimp/image.hpp"

namespace qimp {

struct Kernel2D {
  int height = 1;
  int width = 1;
  std::vector<double> weights;  // row-major

  /// ValidationError for even dimensions, size mismatch or non-finite weights.
  static Kernel2D make(int height, int width, std::vector<double> weights);
  double at(int r, int c) const { return weights[static_cast<std::size_t>(r) * width + c]; }
};

namespace kernels {
Kernel2D sobel_x();
Kernel2D sobel_y();
Kernel2D prewitt_x();
Kernel2D prewitt_y();
Kernel2D laplacian();  // 4-neighbour, centre -4
}  // namespace kernels

/// ShapeError when the kernel is larger than the image in either dimension.
RealImage convolve2d(const RealImage& img, const Kernel2D& k);

/// Normalized 1-D Gaussian taps of the given radius (default ceil(3 sigma)).
std::vector<double> gaussian_kernel1d(double sigma, int radius = -1);

/// Separable Gaussian smoothing. ArgumentError when sigma <= 0.
RealImage gaussian_smooth(const RealImage& img, double sigma);

struct Gradients {
  RealImage gx;
  RealImage gy;
  GradientMap magnitude;
};

Gradients sobel_gradients(const RealImage& img);

/// sqrt(Gx^2 + Gy^2); ShapeError below 3x3.
GradientMap sobel_edges(const GrayImage& img);
GradientMap prewitt_edges(const GrayImage& img);
RealImage laplacian_edges(const GrayImage& img);

/// Gaussian smoothing, Sobel gradient, non-maximum suppression along the
/// gradient direction quantized to 4 bins, then double threshold with
/// 8-connected hysteresis. Thresholds are absolute gradient magnitudes.
/// ArgumentError unless 0 < t_low < t_high.
EdgeMap canny_edges(const GrayImage& img, double sigma, double t_low, double t_high);

struct Corner {
  int row;
  int col;
  friend bool operator==(const Corner&, const Corner&) = default;
};

/// Harris response map R = det(M) - k trace(M)^2, with M the structure tensor
/// smoothed by a Gaussian window of odd width `window`.
RealImage harris_response(const GrayImage& img, double k, int window);

/// Local maxima of R (within the window radius) above t_rel * max(R).
/// Returns nothing when max(R) <= 0.
std::vector<Corner> harris_corners(const GrayImage& img, double k = 0.04, int window = 5, double t_rel = 0.1);

}  // namespace qimp
