#include <doctest.h>

#include <numbers>
#include <random>

#include "qimp/error.hpp"
#include "qimp/qkernel.hpp"
#include "support.hpp"

using namespace qimp;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd uniform_angles(std::mt19937_64& rng, int rows, int cols) {
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  Eigen::MatrixXd x(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) x(i, j) = u(rng);
  return x;
}


std::vector<double> as_vector(const Eigen::RowVectorXd& r) { return {r.data(), r.data() + r.size()}; }

double dual(const Eigen::MatrixXd& k, const std::vector<int>& y, const std::vector<double>& a) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i];
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) s -= 0.5 * a[i] * a[j] * y[i] * y[j] * k(i, j);
  return s;
}

// Brute-force maximum of the dual over a grid of feasible alphas (2 or 3 points,
// equality constraint eliminated through the last free coordinate).
double brute_dual(const Eigen::MatrixXd& k, const std::vector<int>& y, double c, int steps) {
  double best = -1e300;
  const int n = static_cast<int>(y.size());
  auto grid = [&](int i) { return c * i / steps; };
  if (n == 2) {
    for (int i = 0; i <= steps; ++i) {
      const double a0 = grid(i);
      const double a1 = -y[1] * (y[0] * a0);
      if (a1 < -1e-12 || a1 > c + 1e-12) continue;
      best = std::max(best, dual(k, y, {a0, a1}));
    }
  } else {
    for (int i = 0; i <= steps; ++i)
      for (int j = 0; j <= steps; ++j) {
        const double a0 = grid(i), a1 = grid(j);
        const double a2 = -y[2] * (y[0] * a0 + y[1] * a1);
        if (a2 < -1e-12 || a2 > c + 1e-12) continue;
        best = std::max(best, dual(k, y, {a0, a1, std::clamp(a2, 0.0, c)}));
      }
  }
  return best;
}

double accuracy_of(const std::vector<int>& a, const std::vector<int>& b) {
  int hit = 0;
  for (std::size_t i = 0; i < a.size(); ++i) hit += a[i] == b[i];
  return double(hit) / a.size();
}

}  // namespace

TEST_CASE("feature map states") {
  const std::vector<double> zeros(3, 0.0);
  const auto s = feature_state(zeros, {FeatureMapKind::Z, 1, Entanglement::Linear, 3});
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(s[i] - std::pow(2.0, -1.5)) < 1e-12);

  const std::vector<double> two{0.3, 1.9};
  const auto lin = feature_state(two, {FeatureMapKind::ZZ, 2, Entanglement::Linear, 2});
  const auto full = feature_state(two, {FeatureMapKind::ZZ, 2, Entanglement::Full, 2});
  const auto circ = feature_state(two, {FeatureMapKind::ZZ, 2, Entanglement::Circular, 2});
  CHECK(qimp::testing::max_abs_diff(lin.amplitudes(), full.amplitudes()) < 1e-15);
  CHECK(qimp::testing::max_abs_diff(lin.amplitudes(), circ.amplitudes()) < 1e-15);

  const std::vector<double> x{1, 2, 3};
  const FeatureMapSpec l3{FeatureMapKind::ZZ, 2, Entanglement::Linear, 3};
  const FeatureMapSpec f3{FeatureMapKind::ZZ, 2, Entanglement::Full, 3};
  const auto a = feature_state(x, l3), b = feature_state(x, f3);
  Complex overlap = 0;
  for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(a[i]) * b[i];
  CHECK(std::norm(overlap) < 1 - 1e-6);

  CHECK(entangling_pairs({FeatureMapKind::ZZ, 1, Entanglement::Circular, 2}).size() == 1);
  CHECK(entangling_pairs({FeatureMapKind::ZZ, 1, Entanglement::Circular, 4}).size() == 4);
  CHECK(entangling_pairs({FeatureMapKind::ZZ, 1, Entanglement::Full, 5}).size() == 10);
  CHECK(entangling_pairs({FeatureMapKind::Z, 1, Entanglement::Full, 5}).empty());

  CHECK_THROWS_AS(feature_state(x, {FeatureMapKind::ZZ, 2, Entanglement::Linear, 4}), ArgumentError);
  CHECK_THROWS_AS(feature_state(std::vector<double>{1, std::nan("")}, {FeatureMapKind::Z, 1, Entanglement::Linear, 2}),
                  ArgumentError);
}

TEST_CASE("kernel entries") {
  const FeatureMapSpec z1{FeatureMapKind::Z, 1, Entanglement::Linear, 1};
  CHECK(kernel_entry(std::vector<double>{0.0}, std::vector<double>{kPi}, z1) < 1e-15);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  for (int t = 0; t < 30; ++t) {
    const double a = u(rng), b = u(rng);
    const double expected = std::pow(std::cos((a - b) / 2), 2);
    CHECK(kernel_entry(std::vector<double>{a}, std::vector<double>{b}, z1) == doctest::Approx(expected).epsilon(1e-12));
  }
  for (auto kind : {FeatureMapKind::Z, FeatureMapKind::ZZ, FeatureMapKind::Pauli}) {
    for (auto ent : {Entanglement::Linear, Entanglement::Circular, Entanglement::Full}) {
      const FeatureMapSpec spec{kind, 2, ent, 4};
      const auto x = uniform_angles(rng, 2, 4);
      const auto p = as_vector(x.row(0)), q = as_vector(x.row(1));
      CHECK(std::abs(kernel_entry(p, p, spec) - 1.0) < 1e-10);
      CHECK(std::abs(kernel_entry(p, q, spec) - kernel_entry(q, p, spec)) < 1e-10);
      CHECK(std::abs(feature_state(p, spec).norm_squared() - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("kernel matrices") {
  std::mt19937_64 rng(2);
  for (auto kind : {FeatureMapKind::Z, FeatureMapKind::ZZ, FeatureMapKind::Pauli}) {
    for (auto ent : {Entanglement::Linear, Entanglement::Circular, Entanglement::Full}) {
      const FeatureMapSpec spec{kind, 2, ent, 5};
      auto x = uniform_angles(rng, 20, 5);
      x.row(7) = x.row(3);
      const auto k = kernel_matrix(x, spec);
      const auto checks = check_kernel(k);
      CHECK(checks.symmetry_error < 1e-9);
      CHECK(checks.diagonal_error < 1e-9);
      CHECK(checks.min_eigenvalue >= -1e-8);
      CHECK(std::abs(k(3, 7) - 1.0) < 1e-10);
      CHECK_NOTHROW(validate_kernel(k));

      const auto cross = kernel_cross(x.topRows(4), x, spec);
      CHECK(cross.rows() == 4);
      CHECK(cross.cols() == 20);
      CHECK((cross - k.topRows(4)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  bad(0, 1) = 0.5;
  CHECK_THROWS_AS(validate_kernel(bad), ValidationError);
}

TEST_CASE("binary SVM") {
  const std::vector<int> y{1, -1, 1, -1};
  const auto m = svm_train_binary(Eigen::MatrixXd::Identity(4, 4), y, 1.0);
  for (int i = 0; i < 4; ++i) {
    CHECK(m.alpha(i) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK((m.decision(Eigen::MatrixXd::Identity(4, 4).row(i)) > 0) == (y[i] > 0));
  }

  // same point with both labels: irreducible error
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(2, 2);
  const std::vector<int> contradictory{1, -1};
  const auto c = svm_train_binary(ones, contradictory, 1.0);
  int correct = 0;
  for (int i = 0; i < 2; ++i) correct += (c.decision(ones.row(i)) > 0 ? 1 : -1) == contradictory[i];
  CHECK(correct == 1);

  CHECK_THROWS_AS(svm_train_binary(ones, std::vector<int>{1, 1}, 1.0), DegenerateProblemError);
  CHECK_THROWS_AS(svm_train_binary(ones, std::vector<int>{1, 0}, 1.0), ArgumentError);
}

TEST_CASE("SMO matches a brute-force dual search on small problems") {
  std::mt19937_64 rng(3);
  const std::vector<std::vector<int>> label_sets{{1, -1}, {-1, 1}, {1, 1, -1}, {1, -1, -1}, {-1, 1, 1}};
  for (const auto& labels : label_sets) {
    for (int trial = 0; trial < 4; ++trial) {
      const int n = static_cast<int>(labels.size());
      const auto x = uniform_angles(rng, n, 2);
      const auto k = kernel_matrix(x, {FeatureMapKind::ZZ, 1, Entanglement::Linear, 2});
      for (double c : {0.5, 1.0, 4.0}) {
        const auto m = svm_train_binary(k, labels, c);
        CHECK(m.dual_objective(k) == doctest::Approx(brute_dual(k, labels, c, n == 2 ? 20000 : 1500)).epsilon(1e-3));
        for (int i = 0; i < n; ++i) {
          CHECK(m.alpha(i) >= -1e-12);
          CHECK(m.alpha(i) <= c + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("one-vs-rest") {
  // three well separated clusters under a Z kernel on 2 features
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 0.08);
  const double centres[3][2] = {{0.5, 0.5}, {2.5, 2.5}, {4.5, 0.8}};
  Eigen::MatrixXd x(30, 2);
  std::vector<int> labels;
  for (int i = 0; i < 30; ++i) {
    const int cls = i % 3;
    x(i, 0) = centres[cls][0] + g(rng);
    x(i, 1) = centres[cls][1] + g(rng);
    labels.push_back(cls);
  }
  const FeatureMapSpec spec{FeatureMapKind::Z, 1, Entanglement::Linear, 2};
  const auto k = kernel_matrix(x, spec);
  const auto model = ovr_train(k, labels, 100.0);
  const auto pred = ovr_predict(model, k);
  CHECK(accuracy_of(pred.labels, labels) >= 0.9);
  CHECK(pred.scores.rows() == 30);
  CHECK(pred.scores.cols() == 3);
  CHECK((pred.scores.array() > 0).all());
  CHECK((pred.scores.array() < 1).all());

  const auto single = ovr_predict(model, kernel_cross(x.row(2), x, spec));
  CHECK(single.labels[0] == 2);

  // identical decision values everywhere: the lowest class wins
  OvrModel flat = model;
  for (auto& m : flat.models) {
    m.alpha.setZero();
    m.bias = 0.0;
  }
  CHECK(ovr_predict(flat, k.topRows(1)).labels[0] == 0);

  CHECK_THROWS_AS(ovr_train(k, std::vector<int>(30, 1), 1.0), ArgumentError);
}
