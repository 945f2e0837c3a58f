#include "softsensor/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "softsensor/error.hpp"
#include "softsensor/stats.hpp"

namespace softsensor {

double percentile(std::span<const double> samples, double p) {
  if (samples.empty()) throw InvalidArgument("percentile of empty input");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("percentile fraction outside [0, 1]");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double rank = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace {

Eigen::VectorXd column_percentiles(const Eigen::MatrixXd& M, double p) {
  Eigen::VectorXd out(M.cols());
  std::vector<double> col(static_cast<std::size_t>(M.rows()));
  for (Eigen::Index j = 0; j < M.cols(); ++j) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) col[static_cast<std::size_t>(i)] = M(i, j);
    out[j] = percentile(col, p);
  }
  return out;
}

}  // namespace

Eigen::VectorXd ReferenceNormalization::apply(const Eigen::VectorXd& x) const {
  if (x.size() != p10_hard.size()) throw InvalidArgument("reference normalization: dimension mismatch");
  return ((x - p10_hard).array() / (p90_soft - p10_hard).array()).matrix() - mu_ref;
}

Eigen::MatrixXd ReferenceNormalization::apply_rows(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd out(X.rows(), X.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i) out.row(i) = apply(X.row(i).transpose()).transpose();
  return out;
}

ReferenceNormalization fit_reference_normalization(const Eigen::MatrixXd& hard,
                                                   const Eigen::MatrixXd& soft,
                                                   const Eigen::MatrixXd& reference) {
  if (hard.rows() == 0 || soft.rows() == 0 || reference.rows() == 0) {
    throw InvalidArgument("reference normalization: every group needs at least one row");
  }
  if (hard.cols() != soft.cols() || hard.cols() != reference.cols()) {
    throw InvalidArgument("reference normalization: groups differ in column count");
  }
  ReferenceNormalization norm;
  norm.p10_hard = column_percentiles(hard, 0.10);
  norm.p90_soft = column_percentiles(soft, 0.90);
  for (Eigen::Index j = 0; j < hard.cols(); ++j) {
    if (norm.p90_soft[j] == norm.p10_hard[j]) {
      throw DegenerateColumn(static_cast<std::size_t>(j),
                             "reference normalization: P90(soft) equals P10(hard)");
    }
  }
  norm.mu_ref = Eigen::VectorXd::Zero(hard.cols());
  const Eigen::ArrayXd span = (norm.p90_soft - norm.p10_hard).array();
  for (Eigen::Index i = 0; i < reference.rows(); ++i) {
    norm.mu_ref += ((reference.row(i).transpose() - norm.p10_hard).array() / span).matrix();
  }
  norm.mu_ref /= static_cast<double>(reference.rows());
  return norm;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& X) {
  if (X.rows() < 2) throw InvalidArgument("standardizer needs at least two rows");
  Standardizer s;
  s.fitted_on = static_cast<std::size_t>(X.rows());
  s.mean = X.colwise().mean().transpose();
  s.std.resize(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double ss = (X.col(j).array() - s.mean[j]).square().sum();
    s.std[j] = std::sqrt(ss / static_cast<double>(X.rows() - 1));
    // Relative test so that round-off spread on a constant column still counts.
    const double scale = std::max(1.0, std::abs(s.mean[j]));
    if (!(s.std[j] > 1e-12 * scale)) {
      throw DegenerateColumn(static_cast<std::size_t>(j), "standardizer: constant column");
    }
  }
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& X) const {
  if (X.cols() != mean.size()) throw InvalidArgument("standardizer: dimension mismatch");
  return (X.rowwise() - mean.transpose()).array().rowwise() / std.transpose().array();
}

Eigen::MatrixXd Standardizer::invert(const Eigen::MatrixXd& Z) const {
  if (Z.cols() != mean.size()) throw InvalidArgument("standardizer: dimension mismatch");
  return (Z.array().rowwise() * std.transpose().array()).matrix().rowwise() + mean.transpose();
}

TrailingMean::TrailingMean(std::size_t window) {
  if (window == 0) throw InvalidArgument("moving average window must be at least 1");
  ring_.assign(window, 0.0);
}

double TrailingMean::push(double value) {
  ring_[next_] = value;
  next_ = (next_ + 1) % ring_.size();
  count_ = std::min(count_ + 1, ring_.size());
  // Summed afresh each step: no drift from running add/subtract.
  double s = 0.0;
  for (std::size_t i = 0; i < count_; ++i) s += ring_[i];
  current_ = s / static_cast<double>(count_);
  return current_;
}

std::vector<double> moving_average(std::span<const double> series, std::size_t window) {
  TrailingMean avg(window);
  std::vector<double> out;
  out.reserve(series.size());
  for (double v : series) out.push_back(avg.push(v));
  return out;
}

std::vector<std::size_t> NoiseRanking::order() const {
  std::vector<std::size_t> idx(kSensorVariables);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return fraction[a] > fraction[b]; });
  return idx;
}

NoiseRanking noise_ranking(const Coil& coil, const PlateauRange& plateau, std::size_t window,
                           double significance_z) {
  const auto n = coil.measurements.size();
  if (plateau.end <= plateau.begin + 1) throw InvalidArgument("noise ranking: plateau too short");
  if (n < plateau.end) throw InvalidArgument("noise ranking: coil shorter than plateau range");
  if (window == 0 || n < window) throw InvalidArgument("noise ranking: coil shorter than window");

  NoiseRanking out;
  std::vector<double> series(n);
  for (std::size_t j = 0; j < kSensorVariables; ++j) {
    for (std::size_t i = 0; i < n; ++i) series[i] = coil.measurements[i].values[j];
    const auto smooth = moving_average(series, window);
    const double sd = sample_std(std::span<const double>(series).subspan(
        plateau.begin, plateau.end - plateau.begin));
    const double delta = std::abs(smooth.back() - smooth[window - 1]);
    const double threshold =
        significance_z * sd * std::sqrt(2.0 / static_cast<double>(window));
    out.plateau_std[j] = sd;
    out.transition[j] = delta;
    if (delta <= threshold) {
      out.fraction[j] = std::numeric_limits<double>::infinity();
      out.warnings.push_back("sv" + std::to_string(j + 1) + ": no transition on coil " +
                             coil.coil_id);
    } else {
      out.fraction[j] = sd / delta;
    }
  }
  return out;
}

}  // namespace softsensor
