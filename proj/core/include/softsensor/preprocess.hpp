#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "softsensor/data_model.hpp"

namespace softsensor {

/// Linear-interpolation percentile on the fractional rank p * (n - 1).
/// p = 0 gives the minimum, p = 1 the maximum.
double percentile(std::span<const double> samples, double p);

/// Two-step map fitted on the hard, soft and reference material groups:
/// scale each variable onto [P10(hard), P90(soft)], then subtract the mean
/// of the scaled reference group. After the map, hard material reads
/// negative and soft material positive.
struct ReferenceNormalization {
  Eigen::VectorXd p10_hard;
  Eigen::VectorXd p90_soft;
  Eigen::VectorXd mu_ref;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& X) const;
};

ReferenceNormalization fit_reference_normalization(const Eigen::MatrixXd& hard,
                                                   const Eigen::MatrixXd& soft,
                                                   const Eigen::MatrixXd& reference);

inline Eigen::VectorXd apply_reference_normalization(const ReferenceNormalization& norm,
                                                     const Eigen::VectorXd& x) {
  return norm.apply(x);
}

/// Column-wise z-scoring with sample (n - 1) standard deviations.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
  std::size_t fitted_on = 0;

  /// Throws DegenerateColumn for a constant column, InvalidArgument for
  /// fewer than two rows.
  static Standardizer fit(const Eigen::MatrixXd& X);

  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
  Eigen::MatrixXd invert(const Eigen::MatrixXd& Z) const;
};

/// Trailing mean over the last `window` pushed values; during warm-up the
/// mean covers everything pushed so far. Constant memory.
class TrailingMean {
 public:
  explicit TrailingMean(std::size_t window);

  double push(double value);
  double value() const noexcept { return current_; }
  std::size_t count() const noexcept { return count_; }

 private:
  std::vector<double> ring_;
  std::size_t next_ = 0;
  std::size_t count_ = 0;
  double current_ = 0.0;
};

std::vector<double> moving_average(std::span<const double> series, std::size_t window);

struct PlateauRange {
  std::size_t begin = 2000;
  std::size_t end = 4000;  // exclusive
};

struct NoiseRanking {
  /// Per variable: plateau std / |transition|; +inf when the transition is
  /// not distinguishable from noise.
  std::array<double, kSensorVariables> fraction{};
  std::array<double, kSensorVariables> plateau_std{};
  std::array<double, kSensorVariables> transition{};
  std::vector<std::string> warnings;

  /// Variable indices (0-based), noisiest first.
  std::vector<std::size_t> order() const;
};

/// Estimates measurement noise per sensor variable. The transition is the
/// difference between the last smoothed value and the first full-window
/// smoothed value; it counts as absent when its magnitude is at most
/// `significance_z` standard errors of a difference of two window means.
NoiseRanking noise_ranking(const Coil& coil, const PlateauRange& plateau = {},
                           std::size_t window = 50, double significance_z = 3.0);

}  // namespace softsensor
