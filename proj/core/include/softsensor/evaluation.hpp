#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "softsensor/data_model.hpp"
#include "softsensor/pls.hpp"

namespace softsensor {

double rmse(std::span<const double> predictions, std::span<const double> targets);

using Regressor = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;
/// Fits a model on a training set and returns its prediction function.
using Fitter = std::function<Regressor(const LabeledDataset&)>;

Fitter pls_fitter(int k, const PlsOptions& options = {});
Fitter ols_fitter(std::size_t predictor_index);

struct CvFold {
  std::string coil_id;
  std::vector<std::size_t> rows;  // indices into the input dataset
  Eigen::MatrixXd predictions;
  Eigen::MatrixXd targets;
  Eigen::VectorXd rmse;  // per target
};

struct CvResult {
  std::vector<CvFold> folds;       // evaluated folds, sorted by coil id
  Eigen::MatrixXd predictions;     // n x o aligned with input rows; NaN where skipped
  Eigen::VectorXd mean_rmse;       // mean over evaluated folds, per target
  std::vector<std::string> skipped_coils;
  std::vector<std::string> warnings;

  /// Mean of mean_rmse over targets.
  double overall_rmse() const { return mean_rmse.mean(); }
};

/// One fold per distinct coil id. Each model sees only its own training
/// rows, so standardization statistics never leak from the held-out coil.
/// Folds whose training set loses the variance of a column are skipped.
CvResult leave_one_coil_out_cv(const LabeledDataset& data, const Fitter& fitter);
CvResult leave_one_coil_out_cv(const LabeledDataset& data, int k);

struct KSelectionRow {
  int k = 0;
  Eigen::VectorXd mean_rmse;  // per target
  double overall = 0.0;       // mean over targets
  double standard_error = 0.0;  // of `overall` across folds
};

struct KSelection {
  std::vector<KSelectionRow> rows;
  int argmin_k = 0;
  /// Smallest k whose overall RMSE is within one standard error of the minimum.
  int selected_k = 0;
};

KSelection select_k(const LabeledDataset& data, int k_max, const PlsOptions& options = {});

/// CSV columns: property,target,prediction,coil_id,fold
void write_cv_scatter(std::ostream& out, const CvResult& cv, const LabeledDataset& data);

}  // namespace softsensor
