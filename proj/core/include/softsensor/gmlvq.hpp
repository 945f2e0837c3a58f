#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace softsensor {

/// Generalized matrix LVQ with one prototype per class and a global
/// relevance matrix Lambda = Omega^T Omega.
struct GmlvqConfig {
  double prototype_learning_rate = 0.01;
  double omega_learning_rate = 0.001;
  int max_epochs = 300;
  int patience = 20;  // epochs without validation AUC improvement
  double jitter = 1e-3;  // prototype init noise, relative to the mean feature std
  std::uint64_t seed = 0;
};

struct GmlvqEpoch {
  int epoch = 0;
  double cost = 0.0;  // sum of (d+ - d-) / (d+ + d-) over the training set
  std::optional<double> validation_auc;
  double relevance_trace = 0.0;
  double relevance_min_eigenvalue = 0.0;
};

struct GmlvqModel {
  Eigen::MatrixXd prototypes;         // one row per prototype
  std::vector<int> prototype_labels;  // sorted class labels
  Eigen::MatrixXd omega;              // m x m
  std::vector<GmlvqEpoch> trace;      // epoch 0 is the initial state
  int best_epoch = 0;

  Eigen::MatrixXd relevance() const { return omega.transpose() * omega; }

  /// (x - w)^T Lambda (x - w) for prototype `j`.
  double distance(const Eigen::VectorXd& x, std::size_t j) const;

  int classify(const Eigen::VectorXd& x) const;

  /// For binary labels {0, 1}: d(x, w_0) - d(x, w_1); larger means more
  /// likely class 1.
  double score(const Eigen::VectorXd& x) const;
};

/// GLVQ cost summed over samples, for explicit parameters.
double gmlvq_cost(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                  const Eigen::MatrixXd& prototypes, const std::vector<int>& prototype_labels,
                  const Eigen::MatrixXd& omega);

struct GmlvqGradient {
  Eigen::MatrixXd prototypes;
  Eigen::MatrixXd omega;
};

/// Analytic gradient of gmlvq_cost with respect to prototypes and Omega.
GmlvqGradient gmlvq_gradient(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                             const Eigen::MatrixXd& prototypes,
                             const std::vector<int>& prototype_labels,
                             const Eigen::MatrixXd& omega);

struct ValidationSet {
  const Eigen::MatrixXd* X = nullptr;
  const std::vector<int>* labels = nullptr;  // binary {0, 1}
};

/// Batch gradient descent; Omega is rescaled to unit trace(Omega^T Omega)
/// after every step. With a validation set, training stops once the
/// validation AUC has not improved for `patience` epochs and the best
/// epoch's parameters are returned.
GmlvqModel gmlvq_fit(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                     const GmlvqConfig& config, const ValidationSet& validation = {});

double gmlvq_distance(const GmlvqModel& model, const Eigen::VectorXd& x, std::size_t prototype);

struct SplitEvalConfig {
  int n_splits = 100;
  int validation_size = 8;
  GmlvqConfig gmlvq;
  std::uint64_t seed = 0;
};

struct SplitAucResult {
  double mean_auc = 0.0;
  std::vector<double> split_auc;
};

/// Repeated stratified random splits; each split is z-scored on its
/// training part, fitted with early stopping on its validation part and
/// scored by validation AUC. Labels must be binary {0, 1}.
SplitAucResult repeated_split_auc(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                                  const SplitEvalConfig& config);

}  // namespace softsensor
