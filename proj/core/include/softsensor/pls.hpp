#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "softsensor/data_model.hpp"
#include "softsensor/preprocess.hpp"

namespace softsensor {

struct PlsOptions {
  double tolerance = 1e-10;  // on the change of the weight vector
  int max_iterations = 500;
};

/// Latent-variable regressor fitted by NIPALS (regression-mode PLS2).
///
/// X and Y are z-scored with training statistics. Component a has weights
/// W.col(a), X-loadings P.col(a) and Y-loadings Q.col(a); both blocks are
/// deflated with the X scores. `B` and `intercept` act on raw inputs so
/// that prediction is the single affine map X * B + intercept.
struct PlsModel {
  int k = 0;
  Eigen::MatrixXd W;  // m x k
  Eigen::MatrixXd P;  // m x k
  Eigen::MatrixXd Q;  // o x k
  Eigen::MatrixXd B;  // m x o, raw units
  Eigen::VectorXd intercept;
  Standardizer x_standardizer;
  Standardizer y_standardizer;
  std::vector<int> iterations;  // inner NIPALS iterations per component

  Eigen::Index n_features() const noexcept { return W.rows(); }
  Eigen::Index n_targets() const noexcept { return Q.rows(); }
};

PlsModel pls_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, int k,
                 const PlsOptions& options = {});
PlsModel pls_fit(const LabeledDataset& data, int k, const PlsOptions& options = {});

Eigen::MatrixXd pls_predict(const PlsModel& model, const Eigen::MatrixXd& X);

/// X scores T = Z W (P^T W)^-1 where Z is the standardized input.
Eigen::MatrixXd pls_scores(const PlsModel& model, const Eigen::MatrixXd& X);

/// Versioned JSON document carrying every field above.
std::string serialize_pls(const PlsModel& model);
PlsModel deserialize_pls(std::string_view text);
void save_pls(const PlsModel& model, const std::filesystem::path& path);
PlsModel load_pls(const std::filesystem::path& path);

inline constexpr std::string_view kPlsFormatTag = "softsensor-pls";
inline constexpr int kPlsFormatVersion = 1;

}  // namespace softsensor
