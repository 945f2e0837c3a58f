#include "softsensor/pca.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "softsensor/error.hpp"
#include "softsensor/preprocess.hpp"

namespace softsensor {

void canonicalize_signs(Eigen::MatrixXd& columns) {
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < columns.rows(); ++r) {
      const double a = std::abs(columns(r, c));
      if (a > best) {
        best = a;
        arg = r;
      }
    }
    if (columns(arg, c) < 0.0) columns.col(c) *= -1.0;
  }
}

PcaModel pca_fit(const Eigen::MatrixXd& X, int k, bool standardize) {
  const auto n = X.rows();
  const auto m = X.cols();
  if (n < 2) throw InvalidArgument("pca: need at least two rows");
  if (k < 1 || k > std::min<Eigen::Index>(m, n - 1)) {
    throw InvalidArgument("pca: k=" + std::to_string(k) + " outside [1, min(m, n-1)]");
  }

  PcaModel model;
  Eigen::MatrixXd Z;
  if (standardize) {
    const auto s = Standardizer::fit(X);
    model.center = s.mean;
    model.scale = s.std;
    Z = s.apply(X);
  } else {
    model.center = X.colwise().mean().transpose();
    model.scale = Eigen::VectorXd::Ones(m);
    Z = X.rowwise() - model.center.transpose();
  }

  const Eigen::MatrixXd cov = (Z.transpose() * Z) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw Error("pca: eigendecomposition failed");

  // Eigen returns ascending order.
  const Eigen::VectorXd values = eig.eigenvalues().reverse().cwiseMax(0.0);
  const double total = values.sum();
  model.loadings = eig.eigenvectors().rowwise().reverse().leftCols(k);
  canonicalize_signs(model.loadings);
  model.eigenvalues = values.head(k);
  model.explained_variance_ratio =
      total > 0.0 ? Eigen::VectorXd(model.eigenvalues / total) : Eigen::VectorXd::Zero(k);
  return model;
}

Eigen::MatrixXd pca_project(const PcaModel& model, const Eigen::MatrixXd& X) {
  if (X.cols() != model.center.size()) throw InvalidArgument("pca_project: dimension mismatch");
  const Eigen::MatrixXd Z =
      (X.rowwise() - model.center.transpose()).array().rowwise() / model.scale.transpose().array();
  return Z * model.loadings;
}

Eigen::MatrixXd pca_reconstruct(const PcaModel& model, const Eigen::MatrixXd& scores) {
  if (scores.cols() != model.loadings.cols()) {
    throw InvalidArgument("pca_reconstruct: dimension mismatch");
  }
  const Eigen::MatrixXd Z = scores * model.loadings.transpose();
  return (Z.array().rowwise() * model.scale.transpose().array()).matrix().rowwise() +
         model.center.transpose();
}

}  // namespace softsensor
