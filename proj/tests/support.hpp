#pragma once

// Shared test helpers: seeded generators and brute-force oracles.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "qimp/image.hpp"
#include "qimp/simcore.hpp"

namespace qimp::testing {

using Matrix = std::vector<std::vector<Complex>>;

inline GrayImage random_image(std::mt19937_64& rng, int rows, int cols, int lo = 0, int hi = 255) {
  std::uniform_int_distribution<int> d(lo, hi);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(rows) * cols);
  for (auto& p : px) p = static_cast<std::uint8_t>(d(rng));
  return GrayImage(rows, cols, std::move(px));
}

inline StateVector random_state(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  std::vector<Complex> a(std::size_t{1} << n);
  double norm = 0;
  for (auto& v : a) {
    v = {g(rng), g(rng)};
    norm += std::norm(v);
  }
  for (auto& v : a) v /= std::sqrt(norm);
  return StateVector::from_amplitudes(std::move(a));
}

inline Matrix identity(std::size_t d) {
  Matrix m(d, std::vector<Complex>(d));
  for (std::size_t i = 0; i < d; ++i) m[i][i] = 1;
  return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size(), m = b.size();
  Matrix out(n * m, std::vector<Complex>(n * m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) out[i * m + k][j * m + l] = a[i][j] * b[k][l];
  return out;
}

inline std::vector<Complex> multiply(const Matrix& m, std::span<const Complex> v) {
  std::vector<Complex> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

/// Full 2^n x 2^n matrix of a gate, built column by column from basis states
/// with explicit bit manipulation (independent of the simulator's kernels).
inline Matrix full_matrix(const Gate& g, int n) {
  const std::size_t dim = std::size_t{1} << n;
  Matrix out(dim, std::vector<Complex>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t local_col = 0;
    for (std::size_t j = 0; j < g.targets.size(); ++j) local_col |= ((col >> g.targets[j]) & 1u) << j;
    for (std::size_t local_row = 0; local_row < g.dim(); ++local_row) {
      std::size_t row = col;
      for (std::size_t j = 0; j < g.targets.size(); ++j) {
        row &= ~(std::size_t{1} << g.targets[j]);
        row |= ((local_row >> j) & 1u) << g.targets[j];
      }
      out[row][col] += g.at(local_row, local_col);
    }
  }
  return out;
}

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace qimp::testing
