#pragma once

// Quantum Hadamard edge detection over QPIE-encoded images.
//
// QPIE stores pixels column-major, so adjacent amplitudes are vertical
// neighbours; horizontal neighbours come from scanning the transpose. The
// even scan pairs amplitudes (2k, 2k+1), the odd scan pairs (2k+1, 2k+2) after
// a cyclic amplitude shift. In both cases the difference lands on the odd
// amplitude after a Hadamard on qubit 0.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qimp/encode.hpp"
#include "qimp/image.hpp"

namespace qimp {

enum class Parity { Even, Odd };

/// Reads pair magnitudes off a QPIE state. Slot i of the result holds
/// |c_i - c_{i+1}| / sqrt2 for every pair start i of the requested parity and
/// 0 elsewhere; the odd scan's wraparound pair (N-1, 0) is always 0.
/// `stream` identifies the call so stochastic readouts can derive a seed.
using PairReadout = std::function<std::vector<double>(const QpieImage&, Parity, std::uint64_t stream)>;

/// Readout from exact statevector amplitudes.
std::vector<double> exact_pair_readout(const QpieImage& q, Parity parity);

/// Places flat column-major pair slots at the first pixel of each pair.
/// Pairs that straddle a column boundary or touch zero padding are dropped.
GradientMap pairs_to_map(std::span<const double> pairs, int rows, int cols);

/// Single-parity scan in normalized amplitude units.
GradientMap qhed_scan(const GrayImage& img, Parity parity);
GradientMap qhed_scan(const GrayImage& img, Parity parity, const PairReadout& readout, std::uint64_t stream = 0);

/// Even and odd scans on the image and its transpose, combined by maximum.
GradientMap qhed_bidirectional(const GrayImage& img);
GradientMap qhed_bidirectional(const GrayImage& img, const PairReadout& readout, std::uint64_t stream = 0);

inline constexpr double kDefaultThreshold = 0.25;

/// bit = value >= t_rel * max(values); all zero when the map is all zero.
/// ArgumentError unless 0 < t_rel <= 1.
EdgeMap threshold(const GradientMap& g, double t_rel);

struct Patch {
  int row0;
  int col0;
  GrayImage image;
};

struct PatchGrid {
  int patch_rows = 0;
  int patch_cols = 0;
  int rows = 0;  // source shape before padding
  int cols = 0;
  int padded_rows = 0;
  int padded_cols = 0;
  std::vector<Patch> patches;  // row-major over the tile grid
};

/// Edge-replicates the image up to a multiple of `patch_side` and cuts it into
/// non-overlapping square tiles. ArgumentError when patch_side < 2.
PatchGrid split_patches(const GrayImage& img, int patch_side);

/// Reassembles per-tile maps (one per patch, same order) and crops padding.
GradientMap merge_patches(const PatchGrid& grid, std::span<const GradientMap> maps);

struct QhedLargeOptions {
  int patch_side = 4;
  double t_rel = kDefaultThreshold;
  int resize_side = 32;  // 0 keeps the input resolution
};

/// Resize, split, bidirectional scan per tile, merge. Tile maps are scaled by
/// the tile's QPIE norm so tiles share intensity units; constant tiles are
/// skipped (their map is zero).
GradientMap qhed_large_gradients(const GrayImage& img, const QhedLargeOptions& opts, const PairReadout& readout);
GradientMap qhed_large_gradients(const GrayImage& img, const QhedLargeOptions& opts);

EdgeMap qhed_large(const GrayImage& img, int patch_side = 4, double t_rel = kDefaultThreshold);

}  // namespace qimp
