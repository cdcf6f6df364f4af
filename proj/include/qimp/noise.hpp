#pragma once

// Gate-level noise: depolarizing and Pauli bit/phase flips.
//
// The main path is a trajectory (quantum-jump) unraveling on pure states: after
// each ideal gate every target qubit independently suffers X, Y or Z with
// probability 3*lambda/4 (one third each), then X with probability bitflip_p,
// then Z with probability phaseflip_p. DensityMatrix is a small exact oracle.

#include <cstdint>
#include <span>
#include <vector>

#include "qimp/image.hpp"
#include "qimp/qhed.hpp"
#include "qimp/simcore.hpp"

namespace qimp {

struct NoiseModel {
  double depol_1q = 0.0;  // lambda for single-qubit gates
  double depol_2q = 0.0;  // lambda for gates on two or more qubits
  double bitflip_p = 0.0;
  double phaseflip_p = 0.0;

  static NoiseModel pauli(double p) { return {0.0, 0.0, p, p}; }
  static NoiseModel depolarizing(double lambda_1q, double lambda_2q) { return {lambda_1q, lambda_2q, 0.0, 0.0}; }

  /// ArgumentError unless every parameter lies in [0, 1].
  void validate() const;
  bool noiseless() const { return depol_1q == 0 && depol_2q == 0 && bitflip_p == 0 && phaseflip_p == 0; }
  double depolarizing_for(const Gate& gate) const { return gate.targets.size() == 1 ? depol_1q : depol_2q; }
};

/// Dense density matrix for n <= 6 qubits.
class DensityMatrix {
 public:
  static constexpr int kMaxQubits = 6;

  static DensityMatrix from_state(const StateVector& state);
  /// ValidationError unless the matrix is Hermitian (1e-10), has unit trace
  /// (1e-10) and no eigenvalue below -1e-9.
  static DensityMatrix from_matrix(int n_qubits, std::vector<Complex> entries);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }
  const Complex& at(std::size_t r, std::size_t c) const { return m_[r * dim() + c]; }
  std::span<const Complex> entries() const { return m_; }

  Complex trace() const;
  std::vector<double> probabilities() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;

 private:
  DensityMatrix(int n, std::vector<Complex> m) : n_(n), m_(std::move(m)) {}
  friend DensityMatrix apply_gate(const DensityMatrix&, const Gate&);
  friend DensityMatrix depolarize_density(const DensityMatrix&, double);
  friend DensityMatrix depolarize_qubit(const DensityMatrix&, int, double);
  friend DensityMatrix pauli_flip(const DensityMatrix&, int, const Gate&, double);

  int n_;
  std::vector<Complex> m_;
};

/// U rho U^dagger.
DensityMatrix apply_gate(const DensityMatrix& rho, const Gate& gate);

/// E(rho) = (1 - lambda) rho + lambda Tr[rho] I / 2^n over the whole register.
/// ArgumentError unless 0 <= lambda <= 4^n / (4^n - 1).
DensityMatrix depolarize_density(const DensityMatrix& rho, double lambda);

/// The same channel acting on qubit q alone: (1 - lambda) rho + lambda Tr_q[rho] (x) I/2.
DensityMatrix depolarize_qubit(const DensityMatrix& rho, int q, double lambda);

/// (1 - p) rho + p P rho P for a single-qubit Pauli gate P.
DensityMatrix pauli_flip(const DensityMatrix& rho, int q, const Gate& pauli, double p);

/// Exact channel matching apply_noisy_gate's trajectory average.
DensityMatrix apply_noisy_gate(const DensityMatrix& rho, const Gate& gate, const NoiseModel& model);

/// One trajectory: the ideal gate followed by sampled Pauli errors.
StateVector apply_noisy_gate(StateVector state, const Gate& gate, const NoiseModel& model, std::uint64_t rng_seed);

/// Runs `circuit` on `input` for `shots` independent trajectories, measuring
/// every qubit once per trajectory. Error patterns are drawn per shot and
/// identical patterns are simulated once.
MeasurementHistogram sample_noisy_circuit(const StateVector& input, std::span<const Gate> circuit,
                                          const NoiseModel& model, std::uint64_t shots, std::uint64_t seed);

/// QHED readout estimated from measurement counts: slot magnitudes are
/// sqrt(count / shots) of the odd outcomes. shots == 0 requests exact
/// amplitudes and is only accepted for a noiseless model.
PairReadout noisy_pair_readout(const NoiseModel& model, std::uint64_t shots, std::uint64_t seed);

/// Bidirectional QHED with every gate replaced by its noisy version.
GradientMap noisy_qhed(const GrayImage& img, const NoiseModel& model, std::uint64_t shots, std::uint64_t seed);

/// Patch workflow with noisy circuits (see qhed_large_gradients).
GradientMap noisy_qhed_large(const GrayImage& img, const QhedLargeOptions& opts, const NoiseModel& model,
                             std::uint64_t shots, std::uint64_t seed);

/// Total-variation distance between two distributions of equal length.
double total_variation(std::span<const double> p, std::span<const double> q);

/// Empirical distribution over 2^n outcomes.
std::vector<double> empirical_distribution(const MeasurementHistogram& hist, std::size_t outcomes);

}  // namespace qimp
