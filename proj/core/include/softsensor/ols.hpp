#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "softsensor/data_model.hpp"

namespace softsensor {

/// Straight-line fit of every target on a single sensor variable.
struct OlsModel {
  std::size_t predictor_index = 0;
  Eigen::VectorXd slope;      // one per target
  Eigen::VectorXd intercept;  // one per target
};

OlsModel ols_fit_univariate(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                            std::size_t predictor_index);
OlsModel ols_fit_univariate(const LabeledDataset& data, std::size_t predictor_index);

Eigen::MatrixXd ols_predict(const OlsModel& model, const Eigen::MatrixXd& X);

}  // namespace softsensor
