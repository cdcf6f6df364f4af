#include "qimp/qhed.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qimp/error.hpp"

namespace qimp {

namespace {

GradientMap transpose_back(const GradientMap& t) {
  GradientMap out(t.cols, t.rows);
  for (int r = 0; r < t.rows; ++r)
    for (int c = 0; c < t.cols; ++c) out.at(c, r) = t.at(r, c);
  return out;
}

void max_into(GradientMap& acc, const GradientMap& m) {
  for (std::size_t i = 0; i < acc.values.size(); ++i) acc.values[i] = std::max(acc.values[i], m.values[i]);
}

double pixel_norm(const GrayImage& img) {
  double s = 0.0;
  for (auto p : img.pixels()) s += static_cast<double>(p) * p;
  return std::sqrt(s);
}

const PairReadout& exact_readout() {
  static const PairReadout readout = [](const QpieImage& q, Parity parity, std::uint64_t) {
    return exact_pair_readout(q, parity);
  };
  return readout;
}

}  // namespace

std::vector<double> exact_pair_readout(const QpieImage& q, Parity parity) {
  StateVector s = q.state;
  if (parity == Parity::Odd) s = amplitude_permutation(std::move(s));
  s = hadamard_lsb(std::move(s));
  const std::size_t n = s.size();
  std::vector<double> pairs(n, 0.0);
  const std::size_t offset = parity == Parity::Even ? 0 : 1;
  for (std::size_t k = 0; k < n / 2; ++k) {
    const std::size_t start = 2 * k + offset;
    if (start + 1 >= n) continue;  // wraparound pair (N-1, 0)
    pairs[start] = std::abs(s[2 * k + 1]);
  }
  return pairs;
}

GradientMap pairs_to_map(std::span<const double> pairs, int rows, int cols) {
  GradientMap g(rows, cols);
  const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
  for (std::size_t i = 0; i + 1 < pixels && i < pairs.size(); ++i) {
    if (i % rows == static_cast<std::size_t>(rows) - 1) continue;
    const int r = static_cast<int>(i % rows), c = static_cast<int>(i / rows);
    g.at(r, c) = pairs[i];
  }
  return g;
}

GradientMap qhed_scan(const GrayImage& img, Parity parity, const PairReadout& readout, std::uint64_t stream) {
  const QpieImage q = qpie_encode(img);
  const auto pairs = readout(q, parity, stream);
  return pairs_to_map(pairs, img.rows(), img.cols());
}

GradientMap qhed_scan(const GrayImage& img, Parity parity) { return qhed_scan(img, parity, exact_readout()); }

GradientMap qhed_bidirectional(const GrayImage& img, const PairReadout& readout, std::uint64_t stream) {
  GradientMap out = qhed_scan(img, Parity::Even, readout, 4 * stream);
  max_into(out, qhed_scan(img, Parity::Odd, readout, 4 * stream + 1));
  const GrayImage t = img.transposed();
  max_into(out, transpose_back(qhed_scan(t, Parity::Even, readout, 4 * stream + 2)));
  max_into(out, transpose_back(qhed_scan(t, Parity::Odd, readout, 4 * stream + 3)));
  return out;
}

GradientMap qhed_bidirectional(const GrayImage& img) { return qhed_bidirectional(img, exact_readout()); }

EdgeMap threshold(const GradientMap& g, double t_rel) {
  if (!(t_rel > 0.0 && t_rel <= 1.0)) throw ArgumentError("threshold must lie in (0, 1]");
  EdgeMap e(g.rows, g.cols);
  const double top = g.max();
  if (top <= 0.0) return e;
  const double cut = t_rel * top;
  for (std::size_t i = 0; i < g.values.size(); ++i) e.bits[i] = g.values[i] >= cut ? 1 : 0;
  return e;
}

PatchGrid split_patches(const GrayImage& img, int patch_side) {
  if (patch_side < 2) throw ArgumentError("patch side must be >= 2, got " + std::to_string(patch_side));
  PatchGrid grid;
  grid.patch_rows = grid.patch_cols = patch_side;
  grid.rows = img.rows();
  grid.cols = img.cols();
  grid.padded_rows = (img.rows() + patch_side - 1) / patch_side * patch_side;
  grid.padded_cols = (img.cols() + patch_side - 1) / patch_side * patch_side;
  for (int r0 = 0; r0 < grid.padded_rows; r0 += patch_side) {
    for (int c0 = 0; c0 < grid.padded_cols; c0 += patch_side) {
      GrayImage tile(patch_side, patch_side);
      for (int r = 0; r < patch_side; ++r) {
        for (int c = 0; c < patch_side; ++c) {
          tile.at(r, c) = img.at(std::min(r0 + r, img.rows() - 1), std::min(c0 + c, img.cols() - 1));
        }
      }
      grid.patches.push_back({r0, c0, std::move(tile)});
    }
  }
  return grid;
}

GradientMap merge_patches(const PatchGrid& grid, std::span<const GradientMap> maps) {
  if (maps.size() != grid.patches.size()) {
    throw ShapeError("expected " + std::to_string(grid.patches.size()) + " patch maps, got " +
                     std::to_string(maps.size()));
  }
  GradientMap out(grid.rows, grid.cols);
  for (std::size_t p = 0; p < maps.size(); ++p) {
    const auto& patch = grid.patches[p];
    const auto& m = maps[p];
    if (m.rows != grid.patch_rows || m.cols != grid.patch_cols) throw ShapeError("patch map has the wrong shape");
    for (int r = 0; r < m.rows; ++r) {
      for (int c = 0; c < m.cols; ++c) {
        const int R = patch.row0 + r, C = patch.col0 + c;
        if (R < grid.rows && C < grid.cols) out.at(R, C) = m.at(r, c);
      }
    }
  }
  return out;
}

GradientMap qhed_large_gradients(const GrayImage& img, const QhedLargeOptions& opts, const PairReadout& readout) {
  const GrayImage scaled =
      opts.resize_side > 0 ? resize_bilinear(img, opts.resize_side, opts.resize_side) : img;
  const PatchGrid grid = split_patches(scaled, opts.patch_side);
  std::vector<GradientMap> maps;
  maps.reserve(grid.patches.size());
  for (std::size_t p = 0; p < grid.patches.size(); ++p) {
    const GrayImage& tile = grid.patches[p].image;
    if (tile.is_constant()) {
      maps.emplace_back(tile.rows(), tile.cols());
      continue;
    }
    GradientMap m = qhed_bidirectional(tile, readout, p);
    const double scale = pixel_norm(tile);
    for (auto& v : m.values) v *= scale;
    maps.push_back(std::move(m));
  }
  return merge_patches(grid, maps);
}

GradientMap qhed_large_gradients(const GrayImage& img, const QhedLargeOptions& opts) {
  return qhed_large_gradients(img, opts, exact_readout());
}

EdgeMap qhed_large(const GrayImage& img, int patch_side, double t_rel) {
  QhedLargeOptions opts;
  opts.patch_side = patch_side;
  opts.t_rel = t_rel;
  return threshold(qhed_large_gradients(img, opts), t_rel);
}

}  // namespace qimp
