#pragma once

// Standardize -> PCA -> per-component rescale to [0, 2 pi].

#include <Eigen/Dense>

namespace qimp {

struct PcaTransform {
  Eigen::RowVectorXd mean;      // per input feature
  Eigen::RowVectorXd scale;     // per input feature std (1 for constant features)
  Eigen::MatrixXd components;   // k x d, orthonormal rows, descending variance
  Eigen::VectorXd explained_variance;  // k eigenvalues of the standardized covariance
  double total_variance = 0.0;
  Eigen::RowVectorXd lo;        // train-split min per component
  Eigen::RowVectorXd hi;        // train-split max per component
  double range = 0.0;           // rescale target [0, range]

  int k() const { return static_cast<int>(components.rows()); }
  int d() const { return static_cast<int>(components.cols()); }

  Eigen::MatrixXd standardize(const Eigen::MatrixXd& x) const;
  /// Standardize then project onto the components (n x k).
  Eigen::MatrixXd project(const Eigen::MatrixXd& x) const;
  /// Back to standardized feature space (n x d).
  Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& projected) const;
  Eigen::VectorXd explained_variance_ratio() const;
};

/// Fits on training rows. ArgumentError when k < 1, k > d or there are fewer
/// than k + 1 rows. Components come from a self-adjoint eigendecomposition of
/// the covariance of the standardized data.
PcaTransform fit_preprocess(const Eigen::MatrixXd& train, int k, double range = 6.283185307179586);

/// Project and rescale with the training min/max; values are clamped to the range.
Eigen::MatrixXd apply_preprocess(const PcaTransform& t, const Eigen::MatrixXd& x);

}  // namespace qimp
