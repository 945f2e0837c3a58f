#pragma once

// Independent reference computations used only by the test suites.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

struct Eigen_ {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns match values
};

// Cyclic Jacobi rotations on a symmetric matrix.
inline Eigen_ jacobi_eigen(Eigen::MatrixXd a, double tol = 1e-15, int max_sweeps = 100) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < tol * tol) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return a(i, i) > a(j, j); });
  Eigen_ out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = a(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(i)]);
    out.vectors.col(i) = v.col(idx[static_cast<std::size_t>(i)]);
  }
  return out;
}

inline Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& X) {
  const Eigen::RowVectorXd mu = X.colwise().mean();
  const Eigen::MatrixXd C = X.rowwise() - mu;
  return C.transpose() * C / static_cast<double>(X.rows() - 1);
}

inline Eigen::MatrixXd zscore(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd Z = X;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double m = X.col(j).mean();
    const double s = std::sqrt((X.col(j).array() - m).square().sum() / static_cast<double>(X.rows() - 1));
    Z.col(j) = (X.col(j).array() - m) / s;
  }
  return Z;
}

// Dominant eigenvector by repeated multiplication.
inline Eigen::VectorXd power_iteration(const Eigen::MatrixXd& M, int iters = 20000) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(M.rows()).normalized();
  for (int i = 0; i < iters; ++i) {
    Eigen::VectorXd next = (M * v).normalized();
    if ((next - v).norm() < 1e-15) return next;
    v = next;
  }
  return v;
}

// y = a + b x by the 2x2 normal equations.
inline std::pair<double, double> ols_line(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double n = static_cast<double>(x.size());
  Eigen::Matrix2d A;
  A << n, x.sum(), x.sum(), x.squaredNorm();
  const Eigen::Vector2d b(y.sum(), x.dot(y));
  const Eigen::Vector2d s = A.fullPivLu().solve(b);
  return {s[0], s[1]};
}

// Pair counting over all positive/negative pairs.
inline double auc_pairs(const std::vector<double>& s, const std::vector<bool>& y) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (y[i] && !y[j]) {
        pairs += 1.0;
        wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
  return wins / pairs;
}

// Aligns the sign of b to a and returns the max absolute difference.
inline double max_diff_up_to_sign(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::min((a - b).cwiseAbs().maxCoeff(), (a + b).cwiseAbs().maxCoeff());
}

}  // namespace oracle
