#include "qimp/simcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "qimp/error.hpp"
#include "qimp/rng.hpp"

namespace qimp {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_qubit_count(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw CapacityError("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                        std::to_string(kMaxQubits) + "]");
  }
}

Gate single(int q, Complex a, Complex b, Complex c, Complex d) {
  return Gate{{q}, {a, b, c, d}};
}

}  // namespace

StateVector::StateVector(int n_qubits) {
  check_qubit_count(n_qubits);
  n_qubits_ = n_qubits;
  amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
  amplitudes_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
  const std::size_t len = amplitudes.size();
  if (len < 2 || !std::has_single_bit(len)) {
    throw ValidationError("amplitude count " + std::to_string(len) + " is not a power of two >= 2");
  }
  const int n = std::countr_zero(len);
  check_qubit_count(n);
  double norm = 0.0;
  for (const auto& a : amplitudes) norm += std::norm(a);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-10) {
    throw ValidationError("state norm^2 " + std::to_string(norm) + " differs from 1");
  }
  StateVector s;
  s.n_qubits_ = n;
  s.amplitudes_ = std::move(amplitudes);
  return s;
}

double StateVector::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amplitudes_) total += std::norm(a);
  return total;
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amplitudes_.size());
  std::transform(amplitudes_.begin(), amplitudes_.end(), p.begin(),
                 [](const Complex& a) { return std::norm(a); });
  return p;
}

StateVector new_state(int n_qubits) { return StateVector(n_qubits); }

void validate_gate(const Gate& gate, int n_qubits) {
  const auto k = gate.targets.size();
  if (k == 0 || k > static_cast<std::size_t>(n_qubits)) {
    throw IndexError("gate arity " + std::to_string(k) + " invalid for " + std::to_string(n_qubits) +
                     " qubits");
  }
  unsigned seen = 0;
  for (int t : gate.targets) {
    if (t < 0 || t >= n_qubits) throw IndexError("target qubit " + std::to_string(t) + " out of range");
    if (seen & (1u << t)) throw IndexError("duplicate target qubit " + std::to_string(t));
    seen |= 1u << t;
  }
  const std::size_t d = gate.dim();
  if (gate.matrix.size() != d * d) throw ValidationError("gate matrix size does not match its arity");
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      Complex acc = 0.0;
      for (std::size_t m = 0; m < d; ++m) acc += std::conj(gate.at(m, r)) * gate.at(m, c);
      if (r == c) acc -= 1.0;
      if (!(std::abs(acc.real()) < 1e-12 && std::abs(acc.imag()) < 1e-12)) {
        throw ValidationError("gate matrix is not unitary");
      }
    }
  }
}

namespace gates {

Gate h(int q) { return single(q, kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2); }
Gate x(int q) { return single(q, 0.0, 1.0, 1.0, 0.0); }
Gate y(int q) { return single(q, 0.0, Complex{0, -1}, Complex{0, 1}, 0.0); }
Gate z(int q) { return single(q, 1.0, 0.0, 0.0, -1.0); }
Gate identity(int q) { return single(q, 1.0, 0.0, 0.0, 1.0); }
Gate phase(int q, double phi) { return single(q, 1.0, 0.0, 0.0, std::polar(1.0, phi)); }

Gate ry(int q, double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return single(q, c, -s, s, c);
}

Gate cnot(int control, int target) {
  // local bit 0 = target, bit 1 = control
  Gate g{{target, control}, std::vector<Complex>(16, 0.0)};
  const std::size_t perm[4] = {0, 1, 3, 2};
  for (std::size_t c = 0; c < 4; ++c) g.matrix[perm[c] * 4 + c] = 1.0;
  return g;
}

Gate zz_phase(int a, int b, double phi) {
  Gate g{{a, b}, std::vector<Complex>(16, 0.0)};
  const Complex e = std::polar(1.0, phi);
  g.matrix[0] = 1.0;
  g.matrix[5] = e;
  g.matrix[10] = e;
  g.matrix[15] = 1.0;
  return g;
}

Gate zero_controlled_x(int target, std::span<const int> controls) {
  Gate g;
  g.targets.push_back(target);
  g.targets.insert(g.targets.end(), controls.begin(), controls.end());
  const std::size_t d = g.dim();
  g.matrix.assign(d * d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    // local index 0b0...0t flips t; every other column is the identity
    const std::size_t r = (c >> 1) == 0 ? (c ^ 1) : c;
    g.matrix[r * d + c] = 1.0;
  }
  return g;
}

}  // namespace gates

void apply_gate_unchecked(StateVector& state, const Gate& gate) {
  auto amps = state.mutable_amplitudes();
  const std::size_t n = amps.size();

  if (gate.targets.size() == 1) {
    const std::size_t stride = std::size_t{1} << gate.targets[0];
    const Complex m00 = gate.matrix[0], m01 = gate.matrix[1], m10 = gate.matrix[2], m11 = gate.matrix[3];
    for (std::size_t base = 0; base < n; base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        const Complex a0 = amps[i], a1 = amps[i + stride];
        amps[i] = m00 * a0 + m01 * a1;
        amps[i + stride] = m10 * a0 + m11 * a1;
      }
    }
    return;
  }

  const std::size_t d = gate.dim();
  std::size_t mask = 0;
  std::vector<std::size_t> offset(d, 0);
  for (std::size_t j = 0; j < gate.targets.size(); ++j) {
    const std::size_t bit = std::size_t{1} << gate.targets[j];
    mask |= bit;
    for (std::size_t l = 0; l < d; ++l) {
      if (l & (std::size_t{1} << j)) offset[l] |= bit;
    }
  }
  std::vector<Complex> in(d), out(d);
  for (std::size_t base = 0; base < n; ++base) {
    if (base & mask) continue;
    for (std::size_t l = 0; l < d; ++l) in[l] = amps[base | offset[l]];
    for (std::size_t r = 0; r < d; ++r) {
      Complex acc = 0.0;
      const Complex* row = &gate.matrix[r * d];
      for (std::size_t c = 0; c < d; ++c) acc += row[c] * in[c];
      out[r] = acc;
    }
    for (std::size_t l = 0; l < d; ++l) amps[base | offset[l]] = out[l];
  }
}

StateVector apply_gate(StateVector state, const Gate& gate) {
  validate_gate(gate, state.n_qubits());
  apply_gate_unchecked(state, gate);
  return state;
}

StateVector hadamard_lsb(StateVector state) {
  auto amps = state.mutable_amplitudes();
  for (std::size_t i = 0; i < amps.size(); i += 2) {
    const Complex a = amps[i], b = amps[i + 1];
    amps[i] = (a + b) * kInvSqrt2;
    amps[i + 1] = (a - b) * kInvSqrt2;
  }
  return state;
}

StateVector amplitude_permutation(StateVector state) {
  auto amps = state.mutable_amplitudes();
  std::rotate(amps.begin(), amps.begin() + 1, amps.end());
  return state;
}

std::vector<Gate> amplitude_permutation_circuit(int n_qubits) {
  check_qubit_count(n_qubits);
  std::vector<Gate> circuit;
  std::vector<int> controls;
  for (int k = n_qubits - 1; k >= 1; --k) {
    controls.clear();
    for (int c = 0; c < k; ++c) controls.push_back(c);
    circuit.push_back(gates::zero_controlled_x(k, controls));
  }
  circuit.push_back(gates::x(0));
  return circuit;
}

MeasurementHistogram measure_all(const StateVector& state, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw ArgumentError("measure_all requires shots >= 1");
  std::vector<double> cumulative(state.size());
  double total = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    total += std::norm(state[i]);
    cumulative[i] = total;
  }
  Rng rng(seed);
  std::vector<std::uint64_t> counts(state.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    ++counts[static_cast<std::size_t>(it - cumulative.begin())];
  }
  MeasurementHistogram hist;
  hist.shots = shots;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i]) hist.counts.emplace(i, counts[i]);
  }
  return hist;
}

Postselection postselect_lsb(const StateVector& state, int bit) {
  if (bit != 0 && bit != 1) throw ArgumentError("postselection bit must be 0 or 1");
  if (state.n_qubits() < 2) throw ArgumentError("postselect_lsb needs at least 2 qubits");
  const std::size_t half = state.size() / 2;
  double prob = 0.0;
  for (std::size_t k = 0; k < half; ++k) prob += std::norm(state[2 * k + bit]);
  if (prob <= 1e-12) {
    throw DegeneratePostselectionError("postselected branch has probability " + std::to_string(prob));
  }
  const double scale = 1.0 / std::sqrt(prob);
  std::vector<Complex> amps(half);
  for (std::size_t k = 0; k < half; ++k) amps[k] = state[2 * k + bit] * scale;
  return {StateVector::from_amplitudes(std::move(amps)), prob};
}

}  // namespace qimp
