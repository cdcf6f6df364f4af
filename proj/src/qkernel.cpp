#include "qimp/qkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "qimp/error.hpp"

namespace qimp {

namespace {

constexpr double kTau = 1e-12;

std::vector<StateVector> feature_states(const Eigen::MatrixXd& data, const FeatureMapSpec& spec) {
  std::vector<StateVector> states;
  states.reserve(static_cast<std::size_t>(data.rows()));
  std::vector<double> row(static_cast<std::size_t>(data.cols()));
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) row[static_cast<std::size_t>(j)] = data(i, j);
    states.push_back(feature_state(row, spec));
  }
  return states;
}

double fidelity(const StateVector& a, const StateVector& b) {
  Complex overlap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(a[i]) * b[i];
  return std::norm(overlap);
}

}  // namespace

std::string to_string(FeatureMapKind kind) {
  switch (kind) {
    case FeatureMapKind::Z: return "Z";
    case FeatureMapKind::ZZ: return "ZZ";
    case FeatureMapKind::Pauli: return "Pauli";
  }
  return "?";
}

std::string to_string(Entanglement ent) {
  switch (ent) {
    case Entanglement::Linear: return "linear";
    case Entanglement::Circular: return "circular";
    case Entanglement::Full: return "full";
  }
  return "?";
}

FeatureMapKind parse_feature_map(const std::string& s) {
  if (s == "Z" || s == "z") return FeatureMapKind::Z;
  if (s == "ZZ" || s == "zz") return FeatureMapKind::ZZ;
  if (s == "Pauli" || s == "pauli") return FeatureMapKind::Pauli;
  throw ArgumentError("unknown feature map '" + s + "'");
}

Entanglement parse_entanglement(const std::string& s) {
  if (s == "linear") return Entanglement::Linear;
  if (s == "circular") return Entanglement::Circular;
  if (s == "full") return Entanglement::Full;
  throw ArgumentError("unknown entanglement '" + s + "'");
}

std::vector<std::pair<int, int>> entangling_pairs(const FeatureMapSpec& spec) {
  std::vector<std::pair<int, int>> pairs;
  if (spec.kind == FeatureMapKind::Z) return pairs;
  const int n = spec.n_features;
  if (spec.entanglement == Entanglement::Full) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    return pairs;
  }
  for (int i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
  // n == 2 would repeat (0, 1)
  if (spec.entanglement == Entanglement::Circular && n > 2) pairs.emplace_back(n - 1, 0);
  return pairs;
}

StateVector feature_state(std::span<const double> x, const FeatureMapSpec& spec) {
  if (spec.n_features < 1) throw ArgumentError("feature map needs at least one feature");
  if (spec.reps < 1) throw ArgumentError("feature map needs reps >= 1");
  if (x.size() != static_cast<std::size_t>(spec.n_features)) {
    throw ArgumentError("feature vector has " + std::to_string(x.size()) + " entries, map expects " +
                        std::to_string(spec.n_features));
  }
  if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) {
    throw ArgumentError("feature vector has non-finite entries");
  }
  const int n = spec.n_features;
  const auto pairs = entangling_pairs(spec);
  StateVector s(n);
  for (int rep = 0; rep < spec.reps; ++rep) {
    for (int q = 0; q < n; ++q) apply_gate_unchecked(s, gates::h(q));
    for (int q = 0; q < n; ++q) apply_gate_unchecked(s, gates::phase(q, x[q]));
    if (spec.kind == FeatureMapKind::Pauli) {
      for (int q = 0; q < n; ++q) apply_gate_unchecked(s, gates::ry(q, x[q]));
    }
    for (const auto& [i, j] : pairs) {
      const double phi = (std::numbers::pi - x[i]) * (std::numbers::pi - x[j]);
      apply_gate_unchecked(s, gates::zz_phase(i, j, phi));
    }
  }
  return s;
}

double kernel_entry(std::span<const double> x, std::span<const double> y, const FeatureMapSpec& spec) {
  if (x.size() != y.size()) throw ArgumentError("kernel_entry dimension mismatch");
  return std::clamp(fidelity(feature_state(y, spec), feature_state(x, spec)), 0.0, 1.0);
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& data, const FeatureMapSpec& spec) {
  if (data.rows() == 0) throw ArgumentError("kernel_matrix needs at least one sample");
  const auto states = feature_states(data, spec);
  const Eigen::Index n = data.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      k(i, j) = k(j, i) = std::clamp(fidelity(states[i], states[j]), 0.0, 1.0);
    }
  }
  return k;
}

Eigen::MatrixXd kernel_cross(const Eigen::MatrixXd& test, const Eigen::MatrixXd& train, const FeatureMapSpec& spec) {
  if (test.rows() == 0 || train.rows() == 0) throw ArgumentError("kernel_cross needs nonempty inputs");
  const auto a = feature_states(test, spec);
  const auto b = feature_states(train, spec);
  Eigen::MatrixXd k(test.rows(), train.rows());
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    for (Eigen::Index j = 0; j < k.cols(); ++j) k(i, j) = std::clamp(fidelity(a[i], b[j]), 0.0, 1.0);
  return k;
}

KernelChecks check_kernel(const Eigen::MatrixXd& k) {
  KernelChecks out{};
  out.symmetry_error = (k - k.transpose()).cwiseAbs().maxCoeff();
  out.diagonal_error = (k.diagonal().array() - 1.0).abs().maxCoeff();
  const Eigen::MatrixXd sym = 0.5 * (k + k.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = solver.eigenvalues().minCoeff();
  return out;
}

void validate_kernel(const Eigen::MatrixXd& k) {
  if (k.rows() != k.cols()) throw ValidationError("kernel matrix must be square");
  const auto c = check_kernel(k);
  if (c.symmetry_error > 1e-9) throw ValidationError("kernel matrix is not symmetric");
  if (c.diagonal_error > 1e-9) throw ValidationError("kernel matrix diagonal is not 1");
  if (c.min_eigenvalue < -1e-8) throw ValidationError("kernel matrix is not positive semidefinite");
}

double BinarySvm::decision(const Eigen::Ref<const Eigen::RowVectorXd>& k_row) const {
  return (k_row.transpose().array() * alpha.array() * labels.array()).sum() + bias;
}

double BinarySvm::dual_objective(const Eigen::MatrixXd& k) const {
  const Eigen::VectorXd ya = alpha.cwiseProduct(labels);
  return alpha.sum() - 0.5 * ya.dot(k * ya);
}

BinarySvm svm_train_binary(const Eigen::MatrixXd& k, std::span<const int> labels, double c, double tolerance) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (k.rows() != n || k.cols() != n) throw ArgumentError("kernel size does not match label count");
  if (!(c > 0.0)) throw ArgumentError("SVM C must be positive");
  bool pos = false, neg = false;
  for (int y : labels) {
    if (y == 1) pos = true;
    else if (y == -1) neg = true;
    else throw ArgumentError("binary SVM labels must be +1 or -1");
  }
  if (!pos || !neg) throw DegenerateProblemError("binary SVM needs both classes");

  Eigen::VectorXd y(n), alpha = Eigen::VectorXd::Zero(n), grad = Eigen::VectorXd::Constant(n, -1.0);
  for (Eigen::Index t = 0; t < n; ++t) y(t) = labels[static_cast<std::size_t>(t)];
  auto upper = [&](Eigen::Index t) { return alpha(t) >= c; };
  auto lower = [&](Eigen::Index t) { return alpha(t) <= 0.0; };
  auto q = [&](Eigen::Index a, Eigen::Index b) { return y(a) * y(b) * k(a, b); };

  const int max_iter = std::max<int>(10'000'000, static_cast<int>(100 * n));
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    // First index: maximal violation among I_up.
    double gmax = -std::numeric_limits<double>::infinity();
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (y(t) > 0 ? !upper(t) : !lower(t)) {
        const double v = -y(t) * grad(t);
        if (v >= gmax) gmax = v, i = t;
      }
    }
    if (i < 0) break;
    // Second index: largest objective decrease among I_low.
    double gmax2 = -std::numeric_limits<double>::infinity(), best = std::numeric_limits<double>::infinity();
    Eigen::Index j = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (y(t) > 0 ? lower(t) : upper(t)) continue;
      const double v = y(t) * grad(t);
      gmax2 = std::max(gmax2, v);
      const double diff = gmax + v;
      if (diff > 0) {
        double quad = k(i, i) + k(t, t) - 2.0 * k(i, t);
        if (quad <= 0) quad = kTau;
        const double obj = -diff * diff / quad;
        if (obj <= best) best = obj, j = t;
      }
    }
    if (gmax + gmax2 < tolerance || j < 0) break;

    const double ai = alpha(i), aj = alpha(j);
    if (y(i) != y(j)) {
      double quad = k(i, i) + k(j, j) + 2.0 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (-grad(i) - grad(j)) / quad;
      const double diff = ai - aj;
      alpha(i) += delta;
      alpha(j) += delta;
      if (diff > 0) {
        if (alpha(j) < 0) alpha(j) = 0, alpha(i) = diff;
      } else if (alpha(i) < 0) {
        alpha(i) = 0, alpha(j) = -diff;
      }
      if (diff > 0) {
        if (alpha(i) > c) alpha(i) = c, alpha(j) = c - diff;
      } else if (alpha(j) > c) {
        alpha(j) = c, alpha(i) = c + diff;
      }
    } else {
      double quad = k(i, i) + k(j, j) - 2.0 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (grad(i) - grad(j)) / quad;
      const double sum = ai + aj;
      alpha(i) -= delta;
      alpha(j) += delta;
      if (sum > c) {
        if (alpha(i) > c) alpha(i) = c, alpha(j) = sum - c;
      } else if (alpha(j) < 0) {
        alpha(j) = 0, alpha(i) = sum;
      }
      if (sum > c) {
        if (alpha(j) > c) alpha(j) = c, alpha(i) = sum - c;
      } else if (alpha(i) < 0) {
        alpha(i) = 0, alpha(j) = sum;
      }
    }
    const double di = alpha(i) - ai, dj = alpha(j) - aj;
    for (Eigen::Index t = 0; t < n; ++t) grad(t) += q(t, i) * di + q(t, j) * dj;
  }

  // Bias from free support vectors, else the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity(), lb = -ub, free_sum = 0.0;
  int free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y(t) * grad(t);
    if (upper(t)) {
      if (y(t) < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (y(t) > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  const double rho = free_count > 0 ? free_sum / free_count : 0.5 * (ub + lb);

  BinarySvm model;
  model.alpha = alpha;
  model.labels = y;
  model.bias = -rho;
  model.c = c;
  model.iterations = iter;
  return model;
}

OvrModel ovr_train(const Eigen::MatrixXd& k, std::span<const int> labels, double c) {
  const std::set<int> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) throw ArgumentError("one-vs-rest needs at least two classes");
  OvrModel model;
  model.classes.assign(distinct.begin(), distinct.end());
  std::vector<int> binary(labels.size());
  for (int cls : model.classes) {
    for (std::size_t i = 0; i < labels.size(); ++i) binary[i] = labels[i] == cls ? 1 : -1;
    model.models.push_back(svm_train_binary(k, binary, c));
  }
  return model;
}

OvrPrediction ovr_predict(const OvrModel& model, const Eigen::MatrixXd& k_cross) {
  const auto classes = static_cast<Eigen::Index>(model.classes.size());
  OvrPrediction out;
  out.scores.resize(k_cross.rows(), classes);
  out.labels.reserve(static_cast<std::size_t>(k_cross.rows()));
  for (Eigen::Index r = 0; r < k_cross.rows(); ++r) {
    Eigen::Index best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < classes; ++c) {
      const double f = model.models[static_cast<std::size_t>(c)].decision(k_cross.row(r));
      out.scores(r, c) = 1.0 / (1.0 + std::exp(-f));
      if (f > best_value) best_value = f, best = c;
    }
    out.labels.push_back(model.classes[static_cast<std::size_t>(best)]);
  }
  return out;
}

}  // namespace qimp
