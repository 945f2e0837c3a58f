#include "softsensor/pls.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "softsensor/error.hpp"
#include "softsensor/pca.hpp"

namespace softsensor {

namespace {

// Relative size below which a residual block counts as exhausted.
constexpr double kRankTolerance = 1e-10;

}  // namespace

PlsModel pls_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, int k,
                 const PlsOptions& options) {
  const auto n = X.rows();
  const auto m = X.cols();
  const auto o = Y.cols();
  if (Y.rows() != n) throw InvalidArgument("pls: X and Y row counts differ");
  if (n < 2) throw InvalidArgument("pls: need at least two rows");
  if (o < 1) throw InvalidArgument("pls: need at least one target");
  if (k < 1 || k > std::min<Eigen::Index>(m, n - 1)) {
    throw InvalidArgument("pls: k=" + std::to_string(k) + " outside [1, min(m, n-1)]");
  }

  PlsModel model;
  model.k = k;
  model.x_standardizer = Standardizer::fit(X);
  model.y_standardizer = Standardizer::fit(Y);
  Eigen::MatrixXd Xr = model.x_standardizer.apply(X);
  Eigen::MatrixXd Yr = model.y_standardizer.apply(Y);
  const double x0 = Xr.norm();
  const double y0 = Yr.norm();

  model.W.resize(m, k);
  model.P.resize(m, k);
  model.Q.resize(o, k);

  for (int a = 0; a < k; ++a) {
    if (Xr.norm() <= kRankTolerance * x0 || Yr.norm() <= kRankTolerance * y0) {
      throw InvalidArgument("pls: k=" + std::to_string(k) + " exceeds the effective rank (" +
                            std::to_string(a) + ")");
    }
    Eigen::Index start = 0;
    Yr.colwise().squaredNorm().maxCoeff(&start);
    Eigen::VectorXd u = Yr.col(start);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd t;
    int it = 0;
    bool converged = false;
    while (it < options.max_iterations) {
      ++it;
      Eigen::VectorXd w_new = Xr.transpose() * u;
      const double wn = w_new.norm();
      if (wn <= kRankTolerance * x0 * y0) {
        throw InvalidArgument("pls: k=" + std::to_string(k) +
                              " exceeds the effective rank (residual Y is uncorrelated with X)");
      }
      w_new /= wn;
      t = Xr * w_new;
      const Eigen::VectorXd c = Yr.transpose() * t / t.squaredNorm();
      u = Yr * c / c.squaredNorm();
      const double change = std::min((w_new - w).norm(), (w_new + w).norm());
      w = w_new;
      if (change < options.tolerance) {
        converged = true;
        break;
      }
    }
    if (!converged) throw ConvergenceError(it, "pls: NIPALS inner loop did not converge");

    Eigen::MatrixXd wcol = w;
    canonicalize_signs(wcol);
    w = wcol.col(0);
    t = Xr * w;
    const double tt = t.squaredNorm();
    const Eigen::VectorXd p = Xr.transpose() * t / tt;
    const Eigen::VectorXd q = Yr.transpose() * t / tt;
    Xr -= t * p.transpose();
    Yr -= t * q.transpose();
    model.W.col(a) = w;
    model.P.col(a) = p;
    model.Q.col(a) = q;
    model.iterations.push_back(it);
  }

  const Eigen::MatrixXd PtW = model.P.transpose() * model.W;
  const Eigen::MatrixXd rotations =
      model.W * PtW.fullPivLu().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd B_std = rotations * model.Q.transpose();
  const auto& xs = model.x_standardizer;
  const auto& ys = model.y_standardizer;
  model.B = (B_std.array().colwise() / xs.std.array()).rowwise() * ys.std.transpose().array();
  model.intercept = ys.mean - model.B.transpose() * xs.mean;
  return model;
}

PlsModel pls_fit(const LabeledDataset& data, int k, const PlsOptions& options) {
  data.validate();
  return pls_fit(data.X, data.Y, k, options);
}

Eigen::MatrixXd pls_predict(const PlsModel& model, const Eigen::MatrixXd& X) {
  if (X.cols() != model.B.rows()) throw InvalidArgument("pls_predict: dimension mismatch");
  return (X * model.B).rowwise() + model.intercept.transpose();
}

Eigen::MatrixXd pls_scores(const PlsModel& model, const Eigen::MatrixXd& X) {
  if (X.cols() != model.W.rows()) throw InvalidArgument("pls_scores: dimension mismatch");
  const Eigen::MatrixXd Z = model.x_standardizer.apply(X);
  const Eigen::MatrixXd PtW = model.P.transpose() * model.W;
  return Z * model.W * PtW.fullPivLu().solve(Eigen::MatrixXd::Identity(model.k, model.k));
}

namespace {

using nlohmann::json;

json matrix_json(const Eigen::MatrixXd& M) {
  json data = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) data.push_back(M(i, j));
  }
  return {{"rows", M.rows()}, {"cols", M.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols)) {
    throw InvalidArgument("pls model: matrix shape does not match its data");
  }
  Eigen::MatrixXd M(rows, cols);
  std::size_t idx = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index jj = 0; jj < cols; ++jj) M(i, jj) = data[idx++].get<double>();
  }
  return M;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json standardizer_json(const Standardizer& s) {
  return {{"mean", vector_json(s.mean)}, {"std", vector_json(s.std)}, {"fitted_on", s.fitted_on}};
}

Standardizer standardizer_from(const json& j) {
  Standardizer s;
  s.mean = vector_from(j.at("mean"));
  s.std = vector_from(j.at("std"));
  s.fitted_on = j.at("fitted_on").get<std::size_t>();
  return s;
}

}  // namespace

std::string serialize_pls(const PlsModel& model) {
  json doc = {
      {"format", kPlsFormatTag},
      {"version", kPlsFormatVersion},
      {"k", model.k},
      {"n_features", model.n_features()},
      {"n_targets", model.n_targets()},
      {"x_standardizer", standardizer_json(model.x_standardizer)},
      {"y_standardizer", standardizer_json(model.y_standardizer)},
      {"W", matrix_json(model.W)},
      {"P", matrix_json(model.P)},
      {"Q", matrix_json(model.Q)},
      {"B", matrix_json(model.B)},
      {"intercept", vector_json(model.intercept)},
      {"iterations", model.iterations},
  };
  return doc.dump(2) + "\n";
}

PlsModel deserialize_pls(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("pls model: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kPlsFormatTag) {
      throw InvalidArgument("pls model: unexpected format tag");
    }
    if (doc.at("version").get<int>() != kPlsFormatVersion) {
      throw InvalidArgument("pls model: unsupported version");
    }
    PlsModel model;
    model.k = doc.at("k").get<int>();
    model.x_standardizer = standardizer_from(doc.at("x_standardizer"));
    model.y_standardizer = standardizer_from(doc.at("y_standardizer"));
    model.W = matrix_from(doc.at("W"));
    model.P = matrix_from(doc.at("P"));
    model.Q = matrix_from(doc.at("Q"));
    model.B = matrix_from(doc.at("B"));
    model.intercept = vector_from(doc.at("intercept"));
    model.iterations = doc.at("iterations").get<std::vector<int>>();
    const auto m = model.W.rows();
    const auto o = model.Q.rows();
    if (model.W.cols() != model.k || model.P.rows() != m || model.P.cols() != model.k ||
        model.Q.cols() != model.k || model.B.rows() != m || model.B.cols() != o ||
        model.intercept.size() != o || model.x_standardizer.mean.size() != m ||
        model.y_standardizer.mean.size() != o) {
      throw InvalidArgument("pls model: inconsistent dimensions");
    }
    return model;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("pls model: ") + e.what());
  }
}

void save_pls(const PlsModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize_pls(model);
}

PlsModel load_pls(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_pls(ss.str());
}

}  // namespace softsensor
