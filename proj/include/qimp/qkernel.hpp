#pragma once

// Fidelity quantum kernels and a one-vs-rest SVM over precomputed kernels.

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qimp/simcore.hpp"

namespace qimp {

enum class FeatureMapKind { Z, ZZ, Pauli };
enum class Entanglement { Linear, Circular, Full };

std::string to_string(FeatureMapKind kind);
std::string to_string(Entanglement ent);
FeatureMapKind parse_feature_map(const std::string& s);
Entanglement parse_entanglement(const std::string& s);

/// Each repetition applies: H on every qubit; P(x_i) on qubit i; for Pauli,
/// RY(x_i) on qubit i; for ZZ and Pauli, diag phase (pi - x_i)(pi - x_j) on
/// odd parity of each entangled pair (i, j).
struct FeatureMapSpec {
  FeatureMapKind kind = FeatureMapKind::ZZ;
  int reps = 2;
  Entanglement entanglement = Entanglement::Linear;
  int n_features = 1;
};

/// linear: (i, i+1); circular: linear plus (n-1, 0) unless already present;
/// full: every i < j. Empty for the Z map.
std::vector<std::pair<int, int>> entangling_pairs(const FeatureMapSpec& spec);

/// ArgumentError on dimension mismatch, non-finite entries or a bad spec.
StateVector feature_state(std::span<const double> x, const FeatureMapSpec& spec);

/// |<phi(y)|phi(x)>|^2
double kernel_entry(std::span<const double> x, std::span<const double> y, const FeatureMapSpec& spec);

/// Rows of `data` are samples.
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& data, const FeatureMapSpec& spec);
/// K[i][j] = k(test_i, train_j)
Eigen::MatrixXd kernel_cross(const Eigen::MatrixXd& test, const Eigen::MatrixXd& train, const FeatureMapSpec& spec);

struct KernelChecks {
  double symmetry_error;
  double diagonal_error;
  double min_eigenvalue;
};
KernelChecks check_kernel(const Eigen::MatrixXd& k);
/// ValidationError unless symmetric (1e-9), unit diagonal (1e-9), PSD (-1e-8).
void validate_kernel(const Eigen::MatrixXd& k);

struct BinarySvm {
  Eigen::VectorXd alpha;   // dual coefficients in [0, C]
  Eigen::VectorXd labels;  // +-1
  double bias = 0.0;
  double c = 1.0;
  int iterations = 0;

  /// f(x) = sum_i alpha_i y_i K(x, x_i) + b for a kernel row against the training set.
  double decision(const Eigen::Ref<const Eigen::RowVectorXd>& k_row) const;
  /// sum alpha - 1/2 sum alpha_i alpha_j y_i y_j K_ij
  double dual_objective(const Eigen::MatrixXd& k) const;
};

/// Soft-margin dual by SMO with second-order working-set selection, stopped
/// when the maximal KKT violation drops below `tolerance`.
/// DegenerateProblemError when only one class is present.
BinarySvm svm_train_binary(const Eigen::MatrixXd& k, std::span<const int> labels, double c = 1.0,
                           double tolerance = 1e-4);

struct OvrModel {
  std::vector<int> classes;  // ascending
  std::vector<BinarySvm> models;
};

struct OvrPrediction {
  std::vector<int> labels;
  Eigen::MatrixXd scores;  // logistic(decision), one column per class
};

/// ArgumentError with fewer than two classes.
OvrModel ovr_train(const Eigen::MatrixXd& k, std::span<const int> labels, double c = 1.0);
/// Argmax decision value per row; ties go to the lowest class.
OvrPrediction ovr_predict(const OvrModel& model, const Eigen::MatrixXd& k_cross);

}  // namespace qimp
