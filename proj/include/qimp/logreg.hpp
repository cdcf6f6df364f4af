#pragma once

// Multinomial logistic regression with an L1 penalty on the weights
// (intercepts unpenalized), trained by full-batch proximal gradient descent.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

namespace qimp {

struct LogRegOptions {
  double l1_strength = 1e-3;
  int epochs = 300;
  double lr = 0.5;
  std::uint64_t seed = 0;
};

struct LogRegModel {
  std::vector<int> classes;    // ascending
  Eigen::MatrixXd weights;     // classes x features
  Eigen::VectorXd intercepts;  // classes
  double l1_strength = 0.0;
  std::vector<double> loss_history;  // penalized objective after each epoch
};

/// Mean cross-entropy plus l1 * ||W||_1.
double logreg_objective(const LogRegModel& model, const Eigen::MatrixXd& x, std::span<const int> labels);

/// Each epoch takes one proximal step (gradient step then soft-threshold).
/// The step size is halved until the objective does not increase, so
/// loss_history is non-increasing. DegenerateProblemError with one class,
/// ArgumentError for negative l1 or shape mismatch.
LogRegModel logreg_train(const Eigen::MatrixXd& x, std::span<const int> labels, const LogRegOptions& opts);

Eigen::MatrixXd logreg_decision(const LogRegModel& model, const Eigen::MatrixXd& x);
/// Argmax class per row, ties to the lowest class.
std::vector<int> logreg_predict(const LogRegModel& model, const Eigen::MatrixXd& x);

double accuracy(std::span<const int> truth, std::span<const int> predicted);

}  // namespace qimp
