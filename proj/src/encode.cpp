#include "qimp/encode.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "qimp/error.hpp"

namespace qimp {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

/// log2 of the side of a square power-of-two image.
int square_exponent(const GrayImage& img, const char* what) {
  if (img.rows() != img.cols() || !std::has_single_bit(static_cast<unsigned>(img.rows()))) {
    throw ShapeError(std::string(what) + " needs a 2^n x 2^n image, got " + std::to_string(img.rows()) + "x" +
                     std::to_string(img.cols()));
  }
  return std::countr_zero(static_cast<unsigned>(img.rows()));
}

std::uint8_t to_pixel(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

}  // namespace

int qpie_qubits(int rows, int cols) {
  const auto pixels = static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(cols);
  const int n = static_cast<int>(std::bit_width(pixels - 1));
  return std::max(n, 1);
}

QpieImage qpie_encode(const GrayImage& img) {
  double sum_sq = 0.0;
  for (auto p : img.pixels()) sum_sq += static_cast<double>(p) * p;
  if (sum_sq == 0.0) throw ZeroNormError("QPIE encoding of an all-zero image is undefined");
  const double norm = std::sqrt(sum_sq);

  const int n = qpie_qubits(img.rows(), img.cols());
  if (n > kMaxQubits) throw CapacityError("image needs " + std::to_string(n) + " qubits");
  std::vector<Complex> amps(std::size_t{1} << n, 0.0);
  for (int c = 0; c < img.cols(); ++c)
    for (int r = 0; r < img.rows(); ++r)
      amps[static_cast<std::size_t>(c) * img.rows() + r] = img.at(r, c) / norm;
  return {StateVector::from_amplitudes(std::move(amps)), img.rows(), img.cols(), norm};
}

GrayImage qpie_decode(const QpieImage& q) {
  GrayImage img(q.rows, q.cols);
  for (int c = 0; c < q.cols; ++c)
    for (int r = 0; r < q.rows; ++r)
      img.at(r, c) = to_pixel(q.state[static_cast<std::size_t>(c) * q.rows + r].real() * q.norm);
  return img;
}

FrqiImage frqi_encode(const GrayImage& img) {
  const int n = square_exponent(img, "FRQI");
  if (2 * n + 1 > kMaxQubits) throw CapacityError("FRQI image needs " + std::to_string(2 * n + 1) + " qubits");
  const std::size_t positions = std::size_t{1} << (2 * n);
  const double scale = std::ldexp(1.0, -n);
  std::vector<Complex> amps(2 * positions, 0.0);
  for (int y = 0; y < img.rows(); ++y) {
    for (int x = 0; x < img.cols(); ++x) {
      const std::size_t pos = (static_cast<std::size_t>(y) << n) | static_cast<std::size_t>(x);
      const double theta = img.at(y, x) / 255.0 * kHalfPi;
      amps[pos] = scale * std::sin(theta);
      amps[positions | pos] = scale * std::cos(theta);
    }
  }
  return {StateVector::from_amplitudes(std::move(amps)), n};
}

GrayImage frqi_decode(const FrqiImage& f) {
  const int side = 1 << f.n;
  const std::size_t positions = std::size_t{1} << (2 * f.n);
  GrayImage img(side, side);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const std::size_t pos = (static_cast<std::size_t>(y) << f.n) | static_cast<std::size_t>(x);
      const double theta = std::atan2(f.state[pos].real(), f.state[positions | pos].real());
      img.at(y, x) = to_pixel(255.0 * theta / kHalfPi);
    }
  }
  return img;
}

NeqrImage neqr_encode(const GrayImage& img) {
  const int n = square_exponent(img, "NEQR");
  if (n > 8) throw CapacityError("NEQR image needs " + std::to_string(2 * n + 8) + " qubits");
  std::vector<Complex> amps(std::size_t{1} << (2 * n + 8), 0.0);
  const double amplitude = std::ldexp(1.0, -n);
  for (int y = 0; y < img.rows(); ++y) {
    for (int x = 0; x < img.cols(); ++x) {
      const std::size_t index = (static_cast<std::size_t>(img.at(y, x)) << (2 * n)) |
                                (static_cast<std::size_t>(y) << n) | static_cast<std::size_t>(x);
      amps[index] = amplitude;
    }
  }
  return {StateVector::from_amplitudes(std::move(amps)), n};
}

GrayImage neqr_decode(const NeqrImage& m) {
  const int side = 1 << m.n;
  GrayImage img(side, side);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const std::size_t pos = (static_cast<std::size_t>(y) << m.n) | static_cast<std::size_t>(x);
      int found = -1;
      for (std::size_t gray = 0; gray < 256; ++gray) {
        if (std::abs(m.state[(gray << (2 * m.n)) | pos]) > 1e-9) {
          if (found >= 0) throw ValidationError("NEQR position holds more than one gray value");
          found = static_cast<int>(gray);
        }
      }
      if (found < 0) throw ValidationError("NEQR position holds no gray value");
      img.at(y, x) = static_cast<std::uint8_t>(found);
    }
  }
  return img;
}

StateVector LatticeImage::qubit(int r, int c) const {
  const double theta = angle(r, c);
  return StateVector::from_amplitudes({std::cos(theta / 2), std::sin(theta / 2)});
}

LatticeImage lattice_encode(const GrayImage& img) {
  LatticeImage l{img.rows(), img.cols(), {}};
  l.angles.reserve(img.size());
  for (auto p : img.pixels()) l.angles.push_back(p / 255.0 * std::numbers::pi);
  return l;
}

GrayImage lattice_decode(const LatticeImage& l) {
  GrayImage img(l.rows, l.cols);
  for (int r = 0; r < l.rows; ++r)
    for (int c = 0; c < l.cols; ++c) img.at(r, c) = to_pixel(255.0 * l.angle(r, c) / std::numbers::pi);
  return img;
}

}  // namespace qimp
