#include "qimp/noise.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>

#include "qimp/error.hpp"
#include "qimp/rng.hpp"

namespace qimp {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError(std::string(name) + " must lie in [0, 1]");
}

std::vector<Complex> full_unitary(const Gate& gate, int n) {
  const std::size_t d = std::size_t{1} << n;
  std::vector<Complex> u(d * d);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<Complex> e(d, 0.0);
    e[j] = 1.0;
    StateVector col = StateVector::from_amplitudes(std::move(e));
    apply_gate_unchecked(col, gate);
    for (std::size_t i = 0; i < d; ++i) u[i * d + j] = col[i];
  }
  return u;
}

// Pauli codes: bit 0 = X component, bit 1 = Z component (3 = Y up to phase).
using PauliDist = std::array<double, 4>;

PauliDist slot_distribution(double lambda, double bitflip, double phaseflip) {
  PauliDist d{1.0 - 0.75 * lambda, lambda / 4, lambda / 4, lambda / 4};
  PauliDist t;
  for (int k = 0; k < 4; ++k) t[k] = (1 - bitflip) * d[k] + bitflip * d[k ^ 1];
  for (int k = 0; k < 4; ++k) d[k] = (1 - phaseflip) * t[k] + phaseflip * t[k ^ 2];
  return d;
}

void apply_pauli_code(std::span<Complex> amps, int q, int code) {
  const std::size_t bit = std::size_t{1} << q;
  if (code & 2) {
    for (std::size_t i = 0; i < amps.size(); ++i)
      if (i & bit) amps[i] = -amps[i];
  }
  if (code & 1) {
    for (std::size_t i = 0; i < amps.size(); ++i)
      if (!(i & bit)) std::swap(amps[i], amps[i | bit]);
  }
}

int draw_code(Rng& rng, const PauliDist& d, int first, double mass) {
  double u = rng.uniform() * mass;
  for (int k = first; k < 3; ++k) {
    if (u < d[k]) return k;
    u -= d[k];
  }
  return 3;
}

void sample_outcomes(const StateVector& s, std::uint64_t count, Rng& rng, std::vector<std::uint64_t>& counts) {
  std::vector<double> cumulative(s.size());
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) cumulative[i] = total += std::norm(s[i]);
  for (std::uint64_t k = 0; k < count; ++k) {
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), rng.uniform() * total);
    if (it == cumulative.end()) --it;
    ++counts[static_cast<std::size_t>(it - cumulative.begin())];
  }
}

std::vector<Gate> qhed_circuit(int n_qubits, Parity parity) {
  std::vector<Gate> circuit;
  if (parity == Parity::Odd) circuit = amplitude_permutation_circuit(n_qubits);
  circuit.push_back(gates::h(0));
  return circuit;
}

}  // namespace

void NoiseModel::validate() const {
  check_probability(depol_1q, "depol_1q");
  check_probability(depol_2q, "depol_2q");
  check_probability(bitflip_p, "bitflip_p");
  check_probability(phaseflip_p, "phaseflip_p");
}

// ---------------------------------------------------------------------------
// Density-matrix oracle

DensityMatrix DensityMatrix::from_state(const StateVector& state) {
  if (state.n_qubits() > kMaxQubits) throw CapacityError("density oracle supports at most 6 qubits");
  const std::size_t d = state.size();
  std::vector<Complex> m(d * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) m[r * d + c] = state[r] * std::conj(state[c]);
  return DensityMatrix(state.n_qubits(), std::move(m));
}

DensityMatrix DensityMatrix::from_matrix(int n_qubits, std::vector<Complex> entries) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw CapacityError("density oracle supports 1..6 qubits");
  const std::size_t d = std::size_t{1} << n_qubits;
  if (entries.size() != d * d) throw ValidationError("density matrix has the wrong size");
  DensityMatrix rho(n_qubits, std::move(entries));
  if (rho.hermiticity_error() > 1e-10) throw ValidationError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex{1.0, 0.0}) > 1e-10) throw ValidationError("density matrix trace != 1");
  if (rho.min_eigenvalue() < -1e-9) throw ValidationError("density matrix has a negative eigenvalue");
  return rho;
}

Complex DensityMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += at(i, i);
  return t;
}

std::vector<double> DensityMatrix::probabilities() const {
  std::vector<double> p(dim());
  for (std::size_t i = 0; i < dim(); ++i) p[i] = at(i, i).real();
  return p;
}

double DensityMatrix::hermiticity_error() const {
  double err = 0.0;
  for (std::size_t r = 0; r < dim(); ++r)
    for (std::size_t c = 0; c < dim(); ++c) err = std::max(err, std::abs(at(r, c) - std::conj(at(c, r))));
  return err;
}

double DensityMatrix::min_eigenvalue() const {
  const auto d = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = at(r, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DensityMatrix apply_gate(const DensityMatrix& rho, const Gate& gate) {
  validate_gate(gate, rho.n_);
  const std::size_t d = rho.dim();
  const auto u = full_unitary(gate, rho.n_);
  std::vector<Complex> tmp(d * d, 0.0), out(d * d, 0.0);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t k = 0; k < d; ++k) {
      const Complex a = u[r * d + k];
      if (a == Complex{}) continue;
      for (std::size_t c = 0; c < d; ++c) tmp[r * d + c] += a * rho.m_[k * d + c];
    }
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += tmp[r * d + k] * std::conj(u[c * d + k]);
      out[r * d + c] = acc;
    }
  return DensityMatrix(rho.n_, std::move(out));
}

DensityMatrix depolarize_density(const DensityMatrix& rho, double lambda) {
  const double four_n = std::ldexp(1.0, 2 * rho.n_);
  if (!(lambda >= 0.0 && lambda <= four_n / (four_n - 1.0))) {
    throw ArgumentError("depolarizing lambda " + std::to_string(lambda) + " outside [0, 4^n/(4^n-1)]");
  }
  const std::size_t d = rho.dim();
  const Complex tr = rho.trace();
  std::vector<Complex> out(d * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      out[r * d + c] = (1.0 - lambda) * rho.m_[r * d + c];
      if (r == c) out[r * d + c] += lambda * tr / static_cast<double>(d);
    }
  return DensityMatrix(rho.n_, std::move(out));
}

DensityMatrix depolarize_qubit(const DensityMatrix& rho, int q, double lambda) {
  if (q < 0 || q >= rho.n_) throw IndexError("qubit " + std::to_string(q) + " out of range");
  if (!(lambda >= 0.0 && lambda <= 4.0 / 3.0)) throw ArgumentError("depolarizing lambda outside [0, 4/3]");
  const std::size_t d = rho.dim(), bit = std::size_t{1} << q;
  std::vector<Complex> out(d * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      Complex reduced = 0.0;
      if ((r & bit) == (c & bit)) {
        const std::size_t r0 = r & ~bit, c0 = c & ~bit;
        reduced = 0.5 * (rho.m_[r0 * d + c0] + rho.m_[(r0 | bit) * d + (c0 | bit)]);
      }
      out[r * d + c] = (1.0 - lambda) * rho.m_[r * d + c] + lambda * reduced;
    }
  return DensityMatrix(rho.n_, std::move(out));
}

DensityMatrix pauli_flip(const DensityMatrix& rho, int q, const Gate& pauli, double p) {
  check_probability(p, "flip probability");
  Gate g = pauli;
  g.targets = {q};
  const DensityMatrix flipped = apply_gate(rho, g);
  std::vector<Complex> out(rho.m_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - p) * rho.m_[i] + p * flipped.m_[i];
  return DensityMatrix(rho.n_, std::move(out));
}

DensityMatrix apply_noisy_gate(const DensityMatrix& rho, const Gate& gate, const NoiseModel& model) {
  model.validate();
  DensityMatrix out = apply_gate(rho, gate);
  const double lambda = model.depolarizing_for(gate);
  for (int q : gate.targets) {
    if (lambda > 0) out = depolarize_qubit(out, q, lambda);
    if (model.bitflip_p > 0) out = pauli_flip(out, q, gates::x(q), model.bitflip_p);
    if (model.phaseflip_p > 0) out = pauli_flip(out, q, gates::z(q), model.phaseflip_p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trajectories

StateVector apply_noisy_gate(StateVector state, const Gate& gate, const NoiseModel& model, std::uint64_t rng_seed) {
  model.validate();
  state = apply_gate(std::move(state), gate);
  Rng rng(rng_seed);
  const double lambda = model.depolarizing_for(gate);
  auto amps = state.mutable_amplitudes();
  for (int q : gate.targets) {
    const double u = rng.uniform();
    if (u < 0.75 * lambda) {
      constexpr int kCodes[3] = {1, 3, 2};  // X, Y, Z
      const int which = std::min(2, static_cast<int>(u / (0.25 * lambda)));
      apply_pauli_code(amps, q, kCodes[which]);
    }
    if (rng.uniform() < model.bitflip_p) apply_pauli_code(amps, q, 1);
    if (rng.uniform() < model.phaseflip_p) apply_pauli_code(amps, q, 2);
  }
  return state;
}

MeasurementHistogram sample_noisy_circuit(const StateVector& input, std::span<const Gate> circuit,
                                          const NoiseModel& model, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw ArgumentError("sample_noisy_circuit requires shots >= 1");
  model.validate();
  for (const auto& g : circuit) validate_gate(g, input.n_qubits());

  struct Slot {
    std::size_t gate;
    int qubit;
    PauliDist dist;
  };
  std::vector<Slot> slots;
  for (std::size_t g = 0; g < circuit.size(); ++g) {
    const double lambda = model.depolarizing_for(circuit[g]);
    for (int q : circuit[g].targets) {
      slots.push_back({g, q, slot_distribution(lambda, model.bitflip_p, model.phaseflip_p)});
    }
  }

  // Probability that the first error hits slot k, for conditioned sampling.
  std::vector<double> first_error(slots.size());
  double clean = 1.0;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    first_error[k] = clean * (1.0 - slots[k].dist[0]);
    clean *= slots[k].dist[0];
  }
  const double dirty = 1.0 - clean;

  Rng rng(seed);
  std::uint64_t clean_shots = 0;
  std::map<std::vector<std::uint8_t>, std::uint64_t> patterns;
  std::vector<std::uint8_t> pattern(slots.size());
  for (std::uint64_t s = 0; s < shots; ++s) {
    if (dirty <= 0.0 || rng.uniform() < clean) {
      ++clean_shots;
      continue;
    }
    double u = rng.uniform() * dirty;
    std::size_t first = 0;
    while (first + 1 < slots.size() && u >= first_error[first]) u -= first_error[first++];
    std::fill(pattern.begin(), pattern.begin() + static_cast<std::ptrdiff_t>(first), 0);
    pattern[first] = static_cast<std::uint8_t>(draw_code(rng, slots[first].dist, 1, 1.0 - slots[first].dist[0]));
    for (std::size_t k = first + 1; k < slots.size(); ++k) {
      pattern[k] = static_cast<std::uint8_t>(draw_code(rng, slots[k].dist, 0, 1.0));
    }
    ++patterns[pattern];
  }

  std::vector<std::uint64_t> counts(input.size(), 0);
  auto run = [&](const std::vector<std::uint8_t>* errors) {
    StateVector s = input;
    std::size_t slot = 0;
    for (std::size_t g = 0; g < circuit.size(); ++g) {
      apply_gate_unchecked(s, circuit[g]);
      for (int q : circuit[g].targets) {
        if (errors && (*errors)[slot]) apply_pauli_code(s.mutable_amplitudes(), q, (*errors)[slot]);
        ++slot;
      }
    }
    return s;
  };
  if (clean_shots) sample_outcomes(run(nullptr), clean_shots, rng, counts);
  for (const auto& [errors, count] : patterns) sample_outcomes(run(&errors), count, rng, counts);

  MeasurementHistogram hist;
  hist.shots = shots;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i]) hist.counts.emplace(i, counts[i]);
  return hist;
}

PairReadout noisy_pair_readout(const NoiseModel& model, std::uint64_t shots, std::uint64_t seed) {
  model.validate();
  if (shots == 0) {
    if (!model.noiseless()) throw ArgumentError("exact readout (shots = 0) requires a noiseless model");
    return [](const QpieImage& q, Parity parity, std::uint64_t) { return exact_pair_readout(q, parity); };
  }
  return [model, shots, seed](const QpieImage& q, Parity parity, std::uint64_t stream) {
    const auto circuit = qhed_circuit(q.state.n_qubits(), parity);
    const auto hist = sample_noisy_circuit(q.state, circuit, model, shots, derive_seed(seed, {stream}));
    const std::size_t n = q.state.size();
    const std::size_t offset = parity == Parity::Even ? 0 : 1;
    std::vector<double> pairs(n, 0.0);
    for (std::size_t k = 0; k < n / 2; ++k) {
      const std::size_t start = 2 * k + offset;
      if (start + 1 >= n) continue;
      pairs[start] = std::sqrt(static_cast<double>(hist.count(2 * k + 1)) / static_cast<double>(shots));
    }
    return pairs;
  };
}

GradientMap noisy_qhed(const GrayImage& img, const NoiseModel& model, std::uint64_t shots, std::uint64_t seed) {
  return qhed_bidirectional(img, noisy_pair_readout(model, shots, seed));
}

GradientMap noisy_qhed_large(const GrayImage& img, const QhedLargeOptions& opts, const NoiseModel& model,
                             std::uint64_t shots, std::uint64_t seed) {
  return qhed_large_gradients(img, opts, noisy_pair_readout(model, shots, seed));
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ShapeError("distributions differ in length");
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

std::vector<double> empirical_distribution(const MeasurementHistogram& hist, std::size_t outcomes) {
  std::vector<double> p(outcomes, 0.0);
  for (const auto& [outcome, count] : hist.counts) {
    if (outcome >= outcomes) throw IndexError("outcome beyond distribution length");
    p[outcome] = static_cast<double>(count) / static_cast<double>(hist.shots);
  }
  return p;
}

}  // namespace qimp
