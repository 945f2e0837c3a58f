#include "softsensor/ols.hpp"

#include <cmath>

#include "softsensor/error.hpp"

namespace softsensor {

OlsModel ols_fit_univariate(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                            std::size_t predictor_index) {
  const auto j = static_cast<Eigen::Index>(predictor_index);
  if (j < 0 || j >= X.cols()) throw InvalidArgument("ols: predictor index out of range");
  if (X.rows() != Y.rows() || X.rows() < 2) throw InvalidArgument("ols: need matching rows, at least two");

  const Eigen::VectorXd x = X.col(j);
  const double xm = x.mean();
  const Eigen::VectorXd dx = x.array() - xm;
  const double sxx = dx.squaredNorm();
  if (!(sxx > 1e-24 * std::max(1.0, xm * xm) * static_cast<double>(x.size()))) {
    throw DegenerateColumn(predictor_index, "ols: constant predictor");
  }

  OlsModel model;
  model.predictor_index = predictor_index;
  model.slope.resize(Y.cols());
  model.intercept.resize(Y.cols());
  for (Eigen::Index t = 0; t < Y.cols(); ++t) {
    const double ym = Y.col(t).mean();
    const double sxy = dx.dot((Y.col(t).array() - ym).matrix());
    model.slope[t] = sxy / sxx;
    model.intercept[t] = ym - model.slope[t] * xm;
  }
  return model;
}

OlsModel ols_fit_univariate(const LabeledDataset& data, std::size_t predictor_index) {
  data.validate();
  return ols_fit_univariate(data.X, data.Y, predictor_index);
}

Eigen::MatrixXd ols_predict(const OlsModel& model, const Eigen::MatrixXd& X) {
  const auto j = static_cast<Eigen::Index>(model.predictor_index);
  if (j >= X.cols()) throw InvalidArgument("ols_predict: dimension mismatch");
  return (X.col(j) * model.slope.transpose()).rowwise() + model.intercept.transpose();
}

}  // namespace softsensor
