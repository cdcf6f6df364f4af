#pragma once

// Dense statevector simulator.
//
// Qubit 0 is the least-significant bit of a basis-state index, so the state
// |b_{n-1} ... b_1 b_0> lives at index sum_k b_k 2^k.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace qimp {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 24;

class StateVector {
 public:
  /// |0...0> over `n_qubits` qubits. Throws CapacityError outside [1, 24].
  explicit StateVector(int n_qubits);

  /// Wraps explicit amplitudes. The length must be a power of two (>= 2) and
  /// the norm must be 1 within 1e-10; otherwise ValidationError.
  static StateVector from_amplitudes(std::vector<Complex> amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return amplitudes_.size(); }

  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }

  /// Mutable access for in-place kernels. Callers are responsible for keeping
  /// the state normalized.
  std::span<Complex> mutable_amplitudes() { return amplitudes_; }

  double norm_squared() const;
  std::vector<double> probabilities() const;

 private:
  StateVector() = default;

  int n_qubits_ = 0;
  std::vector<Complex> amplitudes_;
};

StateVector new_state(int n_qubits);

/// A unitary acting on `targets`. Bit j of the matrix's local row/column index
/// corresponds to qubit targets[j]; the matrix is stored row-major.
struct Gate {
  std::vector<int> targets;
  std::vector<Complex> matrix;

  std::size_t dim() const { return std::size_t{1} << targets.size(); }
  const Complex& at(std::size_t row, std::size_t col) const { return matrix[row * dim() + col]; }
};

/// Throws ValidationError when the matrix is malformed or not unitary
/// (max |U^dagger U - I| >= 1e-12), IndexError when targets are repeated or
/// out of range for an `n_qubits` register.
void validate_gate(const Gate& gate, int n_qubits);

namespace gates {

Gate h(int q);
Gate x(int q);
Gate y(int q);
Gate z(int q);
Gate identity(int q);
/// diag(1, e^{i phi})
Gate phase(int q, double phi);
/// exp(-i theta Y / 2)
Gate ry(int q, double theta);
Gate cnot(int control, int target);
/// diag(1, e^{i phi}, e^{i phi}, 1): phase on odd parity of (a, b).
Gate zz_phase(int a, int b, double phi);
/// X on `target` when every control reads 0. Acts on {target, controls...}.
Gate zero_controlled_x(int target, std::span<const int> controls);

}  // namespace gates

/// Applies `gate` (validated) to a copy of `state`.
StateVector apply_gate(StateVector state, const Gate& gate);

/// In-place application without unitarity validation; hot-path helper for
/// circuits whose gates were validated once up front.
void apply_gate_unchecked(StateVector& state, const Gate& gate);

/// Hadamard on qubit 0: (c_2k, c_2k+1) -> ((c_2k + c_2k+1)/sqrt2, (c_2k - c_2k+1)/sqrt2).
StateVector hadamard_lsb(StateVector state);

/// Cyclic downshift: out[i] = in[(i + 1) mod 2^n].
StateVector amplitude_permutation(StateVector state);

/// Gate sequence realising amplitude_permutation (a decrement |j> -> |j-1>):
/// zero-controlled X cascades from the most significant qubit down, then X
/// on qubit 0.
std::vector<Gate> amplitude_permutation_circuit(int n_qubits);

struct MeasurementHistogram {
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t shots = 0;

  std::uint64_t count(std::uint64_t outcome) const {
    auto it = counts.find(outcome);
    return it == counts.end() ? 0 : it->second;
  }
};

/// Draws `shots` i.i.d. computational-basis outcomes (Born rule). Reproducible
/// for a fixed seed. Throws ArgumentError for shots == 0.
MeasurementHistogram measure_all(const StateVector& state, std::uint64_t shots, std::uint64_t seed);

struct Postselection {
  StateVector state;
  double probability;
};

/// Keeps the branch where qubit 0 reads `bit`, drops that qubit and
/// renormalizes. Throws DegeneratePostselectionError when the branch has
/// probability <= 1e-12.
Postselection postselect_lsb(const StateVector& state, int bit);

}  // namespace qimp
