#pragma once

// Classical <-> quantum image representations.

#include <vector>

#include "qimp/image.hpp"
#include "qimp/simcore.hpp"

namespace qimp {

/// Amplitude encoding: pixels in column-major order, normalized to unit norm,
/// zero-padded up to the next power of two.
struct QpieImage {
  StateVector state;
  int rows;
  int cols;
  double norm;  // ||I'|| in intensity units
};

/// Angle encoding on one color qubit entangled with 2n position qubits. The
/// color qubit is the most significant: index = (color << 2n) | (y << n) | x.
struct FrqiImage {
  StateVector state;
  int n;
};

/// Basis encoding: index = (gray << 2n) | (y << n) | x, each with amplitude 2^-n.
struct NeqrImage {
  StateVector state;
  int n;
};

/// One qubit per pixel, cos(theta/2)|0> + sin(theta/2)|1>.
struct LatticeImage {
  int rows = 0;
  int cols = 0;
  std::vector<double> angles;  // row-major, radians in [0, pi]

  double angle(int r, int c) const { return angles[static_cast<std::size_t>(r) * cols + c]; }
  /// The pixel's single-qubit state.
  StateVector qubit(int r, int c) const;
};

/// Number of qubits QPIE needs for an r x c image: ceil(log2(r c)), at least 1.
int qpie_qubits(int rows, int cols);

/// Throws ZeroNormError for an all-black image.
QpieImage qpie_encode(const GrayImage& img);
GrayImage qpie_decode(const QpieImage& q);

/// FRQI as written: sin(theta)|0> + cos(theta)|1>, theta = (pixel / 255) * pi/2.
/// Requires a 2^n x 2^n image (ShapeError otherwise).
FrqiImage frqi_encode(const GrayImage& img);
GrayImage frqi_decode(const FrqiImage& f);

/// Requires a 2^n x 2^n image with n <= 8 (ShapeError / CapacityError).
NeqrImage neqr_encode(const GrayImage& img);
/// ValidationError unless every position carries exactly one gray value.
GrayImage neqr_decode(const NeqrImage& m);

/// theta = (pixel / 255) * pi.
LatticeImage lattice_encode(const GrayImage& img);
GrayImage lattice_decode(const LatticeImage& l);

}  // namespace qimp
