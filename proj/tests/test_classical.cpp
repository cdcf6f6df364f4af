#include <doctest.h>

#include "qimp/classical.hpp"
#include "qimp/error.hpp"
#include "support.hpp"

using namespace qimp;

namespace {

GrayImage vertical_step(int rows, int cols, int at, std::uint8_t lo, std::uint8_t hi) {
  GrayImage img(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) img.at(r, c) = c < at ? lo : hi;
  return img;
}

GrayImage square(int side, int top, int left, int size) {
  GrayImage img(side, side);
  for (int r = top; r < top + size; ++r)
    for (int c = left; c < left + size; ++c) img.at(r, c) = 255;
  return img;
}

// Direct correlation with clamped indices, written independently of convolve2d.
double correlate_at(const GrayImage& img, const Kernel2D& k, int r, int c) {
  double s = 0;
  for (int i = 0; i < k.height; ++i)
    for (int j = 0; j < k.width; ++j) {
      const int rr = std::clamp(r + i - k.height / 2, 0, img.rows() - 1);
      const int cc = std::clamp(c + j - k.width / 2, 0, img.cols() - 1);
      s += k.at(i, j) * img.at(rr, cc);
    }
  return s;
}

}  // namespace

TEST_CASE("kernel construction") {
  CHECK_THROWS_AS(Kernel2D::make(2, 3, std::vector<double>(6)), ValidationError);
  CHECK_THROWS_AS(Kernel2D::make(3, 3, std::vector<double>(8)), ValidationError);
  CHECK_THROWS_AS(Kernel2D::make(1, 1, {std::nan("")}), ValidationError);
}

TEST_CASE("convolve2d") {
  std::mt19937_64 rng(1);
  const auto img = qimp::testing::random_image(rng, 6, 7);
  const auto same = convolve2d(to_real(img), Kernel2D::make(1, 1, {1.0}));
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 7; ++c) CHECK(same.at(r, c) == img.at(r, c));

  const GrayImage flat(5, 5, std::vector<std::uint8_t>(25, 40));
  for (const auto& k : {kernels::sobel_x(), kernels::sobel_y(), kernels::prewitt_x(), kernels::laplacian()}) {
    const auto out = convolve2d(to_real(flat), k);
    for (double v : out.values) CHECK(v == 0.0);
  }

  for (const auto& k : {kernels::sobel_x(), kernels::prewitt_y(), kernels::laplacian()}) {
    const auto out = convolve2d(to_real(img), k);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 7; ++c) CHECK(out.at(r, c) == doctest::Approx(correlate_at(img, k, r, c)));
  }

  const auto step = vertical_step(5, 6, 3, 0, 255);
  const auto gx = convolve2d(to_real(step), kernels::sobel_x());
  for (int r = 0; r < 5; ++r) {
    CHECK(std::abs(gx.at(r, 2)) == 1020.0);
    CHECK(std::abs(gx.at(r, 3)) == 1020.0);
  }
  CHECK_THROWS_AS(convolve2d(to_real(GrayImage(2, 2)), kernels::sobel_x()), ShapeError);
}

TEST_CASE("gradient filters") {
  const GrayImage flat(4, 4, std::vector<std::uint8_t>(16, 9));
  CHECK(sobel_edges(flat).max() == 0.0);
  CHECK(prewitt_edges(flat).max() == 0.0);
  for (double v : laplacian_edges(flat).values) CHECK(v == 0.0);

  GrayImage dot(5, 5);
  dot.at(2, 2) = 10;
  const auto lap = laplacian_edges(dot);
  CHECK(lap.at(2, 2) == -40.0);
  CHECK(lap.at(1, 2) == 10.0);
  CHECK(lap.at(3, 2) == 10.0);
  CHECK(lap.at(2, 1) == 10.0);
  CHECK(lap.at(2, 3) == 10.0);
  CHECK(lap.at(1, 1) == 0.0);

  const auto step = vertical_step(6, 8, 4, 20, 120);
  const auto s = sobel_edges(step);
  for (int r = 0; r < 6; ++r) {
    CHECK(s.at(r, 3) == s.max());
    CHECK(s.at(r, 4) == s.max());
    CHECK(s.at(r, 0) == 0.0);
  }
  CHECK(s.max() == 400.0);
  CHECK(prewitt_edges(step).max() == 300.0);
  CHECK_THROWS_AS(sobel_edges(GrayImage(2, 5)), ShapeError);
}

TEST_CASE("gaussian smoothing") {
  CHECK_THROWS_AS(gaussian_smooth(to_real(GrayImage(3, 3)), 0.0), ArgumentError);
  const auto taps = gaussian_kernel1d(1.0);
  CHECK(taps.size() == 7);
  double sum = 0;
  for (double t : taps) sum += t;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));

  const GrayImage flat(9, 9, std::vector<std::uint8_t>(81, 77));
  for (double v : gaussian_smooth(to_real(flat), 1.5).values) CHECK(std::abs(v - 77) < 1e-9);

  GrayImage dot(9, 9);
  dot.at(4, 4) = 1;
  const auto g = gaussian_smooth(to_real(dot), 1.0);
  CHECK(g.at(4, 4) == doctest::Approx(taps[3] * taps[3]));
  CHECK(g.at(4, 5) == doctest::Approx(taps[3] * taps[4]));

  std::mt19937_64 rng(2);
  const auto img = qimp::testing::random_image(rng, 8, 8);
  const auto near = gaussian_smooth(to_real(img), 0.1);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) CHECK(std::abs(near.at(r, c) - img.at(r, c)) < 1e-3);
}

TEST_CASE("canny") {
  CHECK(canny_edges(GrayImage(8, 8, std::vector<std::uint8_t>(64, 50)), 1.0, 10, 30).count() == 0);
  CHECK_THROWS_AS(canny_edges(GrayImage(8, 8), 1.0, 30, 10), ArgumentError);
  CHECK_THROWS_AS(canny_edges(GrayImage(8, 8), 1.0, 0, 10), ArgumentError);

  const auto step = vertical_step(16, 16, 8, 0, 200);
  const auto e = canny_edges(step, 1.0, 20, 60);
  for (int r = 2; r < 14; ++r) {
    int width = 0;
    for (int c = 0; c < 16; ++c) width += e.at(r, c);
    CHECK(width == 1);
  }

  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto img = qimp::testing::random_image(rng, 12, 12);
    const auto edges = canny_edges(img, 0.8, 30, 90);
    const auto sobel = sobel_edges(img);
    for (int r = 0; r < 12; ++r)
      for (int c = 0; c < 12; ++c)
        if (edges.at(r, c)) CHECK(sobel.at(r, c) > 0);
  }
}

TEST_CASE("harris") {
  CHECK(harris_corners(GrayImage(16, 16, std::vector<std::uint8_t>(256, 60))).empty());
  CHECK(harris_corners(vertical_step(20, 20, 10, 0, 255)).empty());

  const auto corners = harris_corners(square(32, 10, 10, 12));
  REQUIRE(corners.size() == 4);
  const int vr[] = {10, 10, 21, 21}, vc[] = {10, 21, 10, 21};
  for (int v = 0; v < 4; ++v) {
    bool found = false;
    for (const auto& c : corners) found |= std::abs(c.row - vr[v]) <= 1 && std::abs(c.col - vc[v]) <= 1;
    CHECK(found);
  }
}
