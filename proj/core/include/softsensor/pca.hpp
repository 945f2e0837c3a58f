#pragma once

#include <Eigen/Dense>

namespace softsensor {

struct PcaModel {
  Eigen::MatrixXd loadings;                  // m x k, orthonormal columns
  Eigen::VectorXd eigenvalues;               // k leading covariance eigenvalues
  Eigen::VectorXd explained_variance_ratio;  // eigenvalue / total variance
  Eigen::VectorXd center;
  Eigen::VectorXd scale;                     // ones when fitted unstandardized
};

/// Principal components from the eigendecomposition of the sample
/// covariance. Each loading column is signed so that its largest-magnitude
/// entry is positive. Requires 1 <= k <= min(m, n - 1).
PcaModel pca_fit(const Eigen::MatrixXd& X, int k, bool standardize = true);

Eigen::MatrixXd pca_project(const PcaModel& model, const Eigen::MatrixXd& X);

/// Maps scores back to the original (unstandardized) units.
Eigen::MatrixXd pca_reconstruct(const PcaModel& model, const Eigen::MatrixXd& scores);

/// Flips each column so its largest-magnitude entry is positive; ties go
/// to the lowest row index.
void canonicalize_signs(Eigen::MatrixXd& columns);

}  // namespace softsensor
