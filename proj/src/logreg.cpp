#include "qimp/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qimp/error.hpp"

namespace qimp {

namespace {

// Row-wise softmax of logits, numerically stabilized.
Eigen::MatrixXd softmax(Eigen::MatrixXd z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double m = z.row(i).maxCoeff();
    z.row(i) = (z.row(i).array() - m).exp().matrix();
    z.row(i) /= z.row(i).sum();
  }
  return z;
}

std::vector<int> class_indices(const LogRegModel& model, std::span<const int> labels) {
  std::vector<int> idx(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = std::lower_bound(model.classes.begin(), model.classes.end(), labels[i]);
    if (it == model.classes.end() || *it != labels[i]) throw ArgumentError("label not seen during training");
    idx[i] = static_cast<int>(it - model.classes.begin());
  }
  return idx;
}

double objective(const LogRegModel& model, const Eigen::MatrixXd& x, const std::vector<int>& idx) {
  const Eigen::MatrixXd z = logreg_decision(model, x);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double m = z.row(i).maxCoeff();
    const double lse = m + std::log((z.row(i).array() - m).exp().sum());
    loss += lse - z(i, idx[static_cast<std::size_t>(i)]);
  }
  return loss / static_cast<double>(z.rows()) + model.l1_strength * model.weights.cwiseAbs().sum();
}

Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& w, double t) {
  return w.unaryExpr([t](double v) { return std::copysign(std::max(std::abs(v) - t, 0.0), v); });
}

}  // namespace

double logreg_objective(const LogRegModel& model, const Eigen::MatrixXd& x, std::span<const int> labels) {
  if (static_cast<std::size_t>(x.rows()) != labels.size()) throw ArgumentError("row count does not match label count");
  return objective(model, x, class_indices(model, labels));
}

LogRegModel logreg_train(const Eigen::MatrixXd& x, std::span<const int> labels, const LogRegOptions& opts) {
  if (static_cast<std::size_t>(x.rows()) != labels.size()) throw ArgumentError("row count does not match label count");
  if (x.rows() == 0) throw ArgumentError("empty training set");
  if (!(opts.l1_strength >= 0.0)) throw ArgumentError("l1 strength must be non-negative");
  if (!(opts.lr > 0.0)) throw ArgumentError("learning rate must be positive");
  if (opts.epochs < 0) throw ArgumentError("epochs must be non-negative");

  LogRegModel model;
  model.classes.assign(labels.begin(), labels.end());
  std::sort(model.classes.begin(), model.classes.end());
  model.classes.erase(std::unique(model.classes.begin(), model.classes.end()), model.classes.end());
  if (model.classes.size() < 2) throw DegenerateProblemError("training labels contain a single class");

  const auto n = x.rows(), d = x.cols();
  const auto c = static_cast<Eigen::Index>(model.classes.size());
  model.l1_strength = opts.l1_strength;
  model.weights = Eigen::MatrixXd::Zero(c, d);
  model.intercepts = Eigen::VectorXd::Zero(c);

  const std::vector<int> idx = class_indices(model, labels);
  Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(n, c);
  for (Eigen::Index i = 0; i < n; ++i) onehot(i, idx[static_cast<std::size_t>(i)]) = 1.0;

  double lr = opts.lr;
  double current = objective(model, x, idx);
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    const Eigen::MatrixXd resid = (softmax(logreg_decision(model, x)) - onehot) / static_cast<double>(n);
    const Eigen::MatrixXd grad_w = resid.transpose() * x;
    const Eigen::VectorXd grad_b = resid.colwise().sum().transpose();

    LogRegModel trial = model;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      trial.weights = soft_threshold(model.weights - lr * grad_w, lr * opts.l1_strength);
      trial.intercepts = model.intercepts - lr * grad_b;
      const double next = objective(trial, x, idx);
      if (next <= current) {
        model.weights = trial.weights;
        model.intercepts = trial.intercepts;
        current = next;
        accepted = true;
        break;
      }
      lr *= 0.5;
    }
    model.loss_history.push_back(current);
    if (!accepted) break;  // no descent step exists at machine precision
  }
  return model;
}

Eigen::MatrixXd logreg_decision(const LogRegModel& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.weights.cols()) throw ArgumentError("feature count does not match the model");
  return (x * model.weights.transpose()).rowwise() + model.intercepts.transpose();
}

std::vector<int> logreg_predict(const LogRegModel& model, const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd z = logreg_decision(model, x);
  std::vector<int> out(static_cast<std::size_t>(z.rows()));
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < z.cols(); ++j) {
      if (z(i, j) > z(i, best)) best = j;
    }
    out[static_cast<std::size_t>(i)] = model.classes[static_cast<std::size_t>(best)];
  }
  return out;
}

double accuracy(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw ArgumentError("accuracy needs equal-length label vectors");
  if (truth.empty()) throw ArgumentError("accuracy of an empty set");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace qimp
