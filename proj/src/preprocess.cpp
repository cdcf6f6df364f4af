#include "qimp/preprocess.hpp"

#include <string>

#include "qimp/error.hpp"

namespace qimp {

Eigen::MatrixXd PcaTransform::standardize(const Eigen::MatrixXd& x) const {
  if (x.cols() != mean.size()) throw ArgumentError("feature count does not match the fitted transform");
  return (x.rowwise() - mean).array().rowwise() / scale.array();
}

Eigen::MatrixXd PcaTransform::project(const Eigen::MatrixXd& x) const { return standardize(x) * components.transpose(); }

Eigen::MatrixXd PcaTransform::reconstruct(const Eigen::MatrixXd& projected) const { return projected * components; }

Eigen::VectorXd PcaTransform::explained_variance_ratio() const {
  return total_variance > 0 ? Eigen::VectorXd(explained_variance / total_variance)
                            : Eigen::VectorXd::Zero(explained_variance.size());
}

PcaTransform fit_preprocess(const Eigen::MatrixXd& train, int k, double range) {
  const auto n = train.rows(), d = train.cols();
  if (k < 1 || k > d) throw ArgumentError("PCA dimension " + std::to_string(k) + " outside [1, " + std::to_string(d) + "]");
  if (n < k + 1) throw ArgumentError("PCA needs at least k + 1 training rows");

  PcaTransform t;
  t.range = range;
  t.mean = train.colwise().mean();
  const Eigen::MatrixXd centered = train.rowwise() - t.mean;
  t.scale = (centered.array().square().colwise().sum() / static_cast<double>(n - 1)).sqrt();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (!(t.scale(j) > 1e-12)) t.scale(j) = 1.0;
  }
  const Eigen::MatrixXd z = centered.array().rowwise() / t.scale.array();
  const Eigen::MatrixXd cov = (z.transpose() * z) / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw ArgumentError("covariance eigendecomposition failed");
  // Eigen returns ascending eigenvalues; take the top k in descending order.
  t.components.resize(k, d);
  t.explained_variance.resize(k);
  for (int i = 0; i < k; ++i) {
    const Eigen::Index col = d - 1 - i;
    Eigen::VectorXd v = solver.eigenvectors().col(col);
    // Fix the sign so the largest-magnitude loading is positive.
    Eigen::Index arg;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    t.components.row(i) = v.transpose();
    t.explained_variance(i) = std::max(0.0, solver.eigenvalues()(col));
  }
  t.total_variance = std::max(0.0, solver.eigenvalues().sum());

  const Eigen::MatrixXd projected = z * t.components.transpose();
  t.lo = projected.colwise().minCoeff();
  t.hi = projected.colwise().maxCoeff();
  return t;
}

Eigen::MatrixXd apply_preprocess(const PcaTransform& t, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd p = t.project(x);
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    const double span = t.hi(j) - t.lo(j);
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      const double u = span > 0 ? (p(i, j) - t.lo(j)) / span : 0.5;
      p(i, j) = std::clamp(u, 0.0, 1.0) * t.range;
    }
  }
  return p;
}

}  // namespace qimp
