#include "softsensor/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>

#include "softsensor/error.hpp"
#include "softsensor/io.hpp"
#include "softsensor/ols.hpp"
#include "softsensor/parallel.hpp"

namespace softsensor {

double rmse(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size()) throw InvalidArgument("rmse: length mismatch");
  if (predictions.empty()) throw InvalidArgument("rmse: empty input");
  double ss = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double r = predictions[i] - targets[i];
    ss += r * r;
  }
  return std::sqrt(ss / static_cast<double>(predictions.size()));
}

Fitter pls_fitter(int k, const PlsOptions& options) {
  return [k, options](const LabeledDataset& train) -> Regressor {
    auto model = std::make_shared<const PlsModel>(pls_fit(train, k, options));
    return [model](const Eigen::MatrixXd& X) { return pls_predict(*model, X); };
  };
}

Fitter ols_fitter(std::size_t predictor_index) {
  return [predictor_index](const LabeledDataset& train) -> Regressor {
    auto model = ols_fit_univariate(train, predictor_index);
    return [model](const Eigen::MatrixXd& X) { return ols_predict(model, X); };
  };
}

CvResult leave_one_coil_out_cv(const LabeledDataset& data, const Fitter& fitter) {
  data.validate();
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < data.rows(); ++i) groups[data.row_coil[i]].push_back(i);
  if (groups.size() < 2) throw InvalidArgument("cv: need at least two distinct coils");

  std::vector<std::pair<std::string, std::vector<std::size_t>>> folds(groups.begin(), groups.end());
  struct Outcome {
    std::optional<CvFold> fold;
    std::string warning;
  };
  std::vector<Outcome> outcomes(folds.size());

  parallel_for(folds.size(), [&](std::size_t f) {
    const auto& [coil, rows] = folds[f];
    std::vector<std::size_t> train;
    train.reserve(data.rows() - rows.size());
    for (std::size_t i = 0; i < data.rows(); ++i) {
      if (data.row_coil[i] != coil) train.push_back(i);
    }
    Regressor predict;
    try {
      predict = fitter(data.select(train));
    } catch (const DegenerateColumn& e) {
      outcomes[f].warning = "fold " + coil + " skipped: " + e.what();
      return;
    }
    const auto held = data.select(rows);
    CvFold fold;
    fold.coil_id = coil;
    fold.rows = rows;
    fold.predictions = predict(held.X);
    fold.targets = held.Y;
    fold.rmse.resize(held.Y.cols());
    for (Eigen::Index t = 0; t < held.Y.cols(); ++t) {
      const Eigen::VectorXd p = fold.predictions.col(t);
      const Eigen::VectorXd y = fold.targets.col(t);
      fold.rmse[t] = rmse(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())),
                          std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
    }
    outcomes[f].fold = std::move(fold);
  });

  CvResult result;
  result.predictions = Eigen::MatrixXd::Constant(data.Y.rows(), data.Y.cols(),
                                                 std::numeric_limits<double>::quiet_NaN());
  result.mean_rmse = Eigen::VectorXd::Zero(data.Y.cols());
  for (std::size_t f = 0; f < outcomes.size(); ++f) {
    auto& o = outcomes[f];
    if (!o.fold) {
      result.skipped_coils.push_back(folds[f].first);
      result.warnings.push_back(std::move(o.warning));
      continue;
    }
    for (std::size_t r = 0; r < o.fold->rows.size(); ++r) {
      result.predictions.row(static_cast<Eigen::Index>(o.fold->rows[r])) =
          o.fold->predictions.row(static_cast<Eigen::Index>(r));
    }
    result.mean_rmse += o.fold->rmse;
    result.folds.push_back(std::move(*o.fold));
  }
  if (result.folds.empty()) throw Error("cv: every fold was skipped");
  result.mean_rmse /= static_cast<double>(result.folds.size());
  return result;
}

CvResult leave_one_coil_out_cv(const LabeledDataset& data, int k) {
  return leave_one_coil_out_cv(data, pls_fitter(k));
}

KSelection select_k(const LabeledDataset& data, int k_max, const PlsOptions& options) {
  data.validate();
  if (k_max < 1) throw InvalidArgument("select_k: k_max must be at least 1");
  std::map<std::string, std::size_t> counts;
  for (const auto& c : data.row_coil) ++counts[c];
  std::size_t largest_fold = 0;
  for (const auto& [_, c] : counts) largest_fold = std::max(largest_fold, c);
  const auto min_train = data.rows() - largest_fold;
  const auto limit = std::min<std::size_t>(static_cast<std::size_t>(data.X.cols()),
                                           min_train > 0 ? min_train - 1 : 0);
  if (static_cast<std::size_t>(k_max) > limit) {
    throw InvalidArgument("select_k: k_max=" + std::to_string(k_max) + " exceeds " +
                          std::to_string(limit) + " (min(m, smallest training fold - 1))");
  }

  KSelection sel;
  for (int k = 1; k <= k_max; ++k) {
    const auto cv = leave_one_coil_out_cv(data, pls_fitter(k, options));
    KSelectionRow row;
    row.k = k;
    row.mean_rmse = cv.mean_rmse;
    row.overall = cv.overall_rmse();
    const auto nf = static_cast<double>(cv.folds.size());
    double ss = 0.0;
    for (const auto& f : cv.folds) ss += std::pow(f.rmse.mean() - row.overall, 2);
    row.standard_error = nf > 1 ? std::sqrt(ss / (nf - 1.0)) / std::sqrt(nf) : 0.0;
    sel.rows.push_back(std::move(row));
  }
  const auto best = std::min_element(sel.rows.begin(), sel.rows.end(),
                                     [](const auto& a, const auto& b) { return a.overall < b.overall; });
  sel.argmin_k = best->k;
  const double cutoff = best->overall + best->standard_error;
  for (const auto& r : sel.rows) {
    if (r.overall <= cutoff) {
      sel.selected_k = r.k;
      break;
    }
  }
  return sel;
}

void write_cv_scatter(std::ostream& out, const CvResult& cv, const LabeledDataset& data) {
  static constexpr const char* kNames[] = {"t1", "t2"};
  out << "property,target,prediction,coil_id,fold\n";
  for (std::size_t f = 0; f < cv.folds.size(); ++f) {
    const auto& fold = cv.folds[f];
    for (Eigen::Index t = 0; t < fold.targets.cols(); ++t) {
      const std::string name = t < 2 ? kNames[t] : "y" + std::to_string(t + 1);
      for (std::size_t r = 0; r < fold.rows.size(); ++r) {
        const auto ri = static_cast<Eigen::Index>(r);
        out << name << ',' << io::format_double(fold.targets(ri, t)) << ','
            << io::format_double(fold.predictions(ri, t)) << ',' << data.row_coil[fold.rows[r]]
            << ',' << f << '\n';
      }
    }
  }
}

}  // namespace softsensor
