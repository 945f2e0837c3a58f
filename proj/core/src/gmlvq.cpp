#include "softsensor/gmlvq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "softsensor/error.hpp"
#include "softsensor/metrics.hpp"
#include "softsensor/parallel.hpp"

namespace softsensor {

namespace {

struct Nearest {
  Eigen::Index plus = -1;   // closest prototype with the sample's label
  Eigen::Index minus = -1;  // closest prototype with another label
  double d_plus = std::numeric_limits<double>::infinity();
  double d_minus = std::numeric_limits<double>::infinity();
};

Nearest nearest(const Eigen::VectorXd& x, int label, const Eigen::MatrixXd& prototypes,
                const std::vector<int>& prototype_labels, const Eigen::MatrixXd& omega) {
  Nearest n;
  for (Eigen::Index j = 0; j < prototypes.rows(); ++j) {
    const double d = (omega * (x - prototypes.row(j).transpose())).squaredNorm();
    if (prototype_labels[static_cast<std::size_t>(j)] == label) {
      if (d < n.d_plus) {
        n.d_plus = d;
        n.plus = j;
      }
    } else if (d < n.d_minus) {
      n.d_minus = d;
      n.minus = j;
    }
  }
  return n;
}

void check_inputs(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                  const Eigen::MatrixXd& prototypes, const std::vector<int>& prototype_labels,
                  const Eigen::MatrixXd& omega) {
  if (static_cast<std::size_t>(X.rows()) != labels.size()) {
    throw InvalidArgument("gmlvq: one label per row required");
  }
  if (prototypes.cols() != X.cols() || omega.cols() != X.cols() ||
      static_cast<std::size_t>(prototypes.rows()) != prototype_labels.size()) {
    throw InvalidArgument("gmlvq: dimension mismatch");
  }
}

std::vector<int> sorted_classes(const std::vector<int>& labels) {
  std::set<int> s(labels.begin(), labels.end());
  return {s.begin(), s.end()};
}

}  // namespace

double GmlvqModel::distance(const Eigen::VectorXd& x, std::size_t j) const {
  if (x.size() != prototypes.cols()) throw InvalidArgument("gmlvq distance: dimension mismatch");
  if (j >= static_cast<std::size_t>(prototypes.rows())) throw InvalidArgument("gmlvq distance: no such prototype");
  return (omega * (x - prototypes.row(static_cast<Eigen::Index>(j)).transpose())).squaredNorm();
}

double gmlvq_distance(const GmlvqModel& model, const Eigen::VectorXd& x, std::size_t prototype) {
  return model.distance(x, prototype);
}

int GmlvqModel::classify(const Eigen::VectorXd& x) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < prototype_labels.size(); ++j) {
    const double d = distance(x, j);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return prototype_labels[best];
}

double GmlvqModel::score(const Eigen::VectorXd& x) const {
  std::optional<std::size_t> neg, pos;
  for (std::size_t j = 0; j < prototype_labels.size(); ++j) {
    if (prototype_labels[j] == 0) neg = j;
    if (prototype_labels[j] == 1) pos = j;
  }
  if (!neg || !pos) throw InvalidArgument("gmlvq score: binary {0, 1} prototypes required");
  return distance(x, *neg) - distance(x, *pos);
}

double gmlvq_cost(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                  const Eigen::MatrixXd& prototypes, const std::vector<int>& prototype_labels,
                  const Eigen::MatrixXd& omega) {
  check_inputs(X, labels, prototypes, prototype_labels, omega);
  double total = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const auto n = nearest(X.row(i).transpose(), labels[static_cast<std::size_t>(i)], prototypes,
                           prototype_labels, omega);
    const double denom = n.d_plus + n.d_minus;
    if (denom > 0.0) total += (n.d_plus - n.d_minus) / denom;
  }
  return total;
}

GmlvqGradient gmlvq_gradient(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                             const Eigen::MatrixXd& prototypes,
                             const std::vector<int>& prototype_labels,
                             const Eigen::MatrixXd& omega) {
  check_inputs(X, labels, prototypes, prototype_labels, omega);
  GmlvqGradient g{Eigen::MatrixXd::Zero(prototypes.rows(), prototypes.cols()),
                  Eigen::MatrixXd::Zero(omega.rows(), omega.cols())};
  const Eigen::MatrixXd lambda = omega.transpose() * omega;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const Eigen::VectorXd x = X.row(i).transpose();
    const auto n = nearest(x, labels[static_cast<std::size_t>(i)], prototypes, prototype_labels, omega);
    const double denom = n.d_plus + n.d_minus;
    if (!(denom > 0.0) || n.plus < 0 || n.minus < 0) continue;
    const double dmu_dplus = 2.0 * n.d_minus / (denom * denom);
    const double dmu_dminus = -2.0 * n.d_plus / (denom * denom);
    const Eigen::VectorXd diff_p = x - prototypes.row(n.plus).transpose();
    const Eigen::VectorXd diff_m = x - prototypes.row(n.minus).transpose();
    g.prototypes.row(n.plus) += (dmu_dplus * -2.0 * (lambda * diff_p)).transpose();
    g.prototypes.row(n.minus) += (dmu_dminus * -2.0 * (lambda * diff_m)).transpose();
    g.omega += dmu_dplus * 2.0 * (omega * diff_p) * diff_p.transpose() +
               dmu_dminus * 2.0 * (omega * diff_m) * diff_m.transpose();
  }
  return g;
}

namespace {

void normalize_omega(Eigen::MatrixXd& omega) {
  const double tr = omega.squaredNorm();  // trace(Omega^T Omega)
  if (tr > 0.0) omega /= std::sqrt(tr);
}

double validation_auc(const GmlvqModel& model, const ValidationSet& v) {
  std::vector<double> scores(static_cast<std::size_t>(v.X->rows()));
  std::vector<bool> truth(scores.size());
  for (Eigen::Index i = 0; i < v.X->rows(); ++i) {
    scores[static_cast<std::size_t>(i)] = model.score(v.X->row(i).transpose());
    truth[static_cast<std::size_t>(i)] = (*v.labels)[static_cast<std::size_t>(i)] == 1;
  }
  return roc_auc(scores, truth);
}

void record(GmlvqModel& model, int epoch, const Eigen::MatrixXd& X, const std::vector<int>& labels,
            const ValidationSet& validation) {
  GmlvqEpoch e;
  e.epoch = epoch;
  e.cost = gmlvq_cost(X, labels, model.prototypes, model.prototype_labels, model.omega);
  if (validation.X) e.validation_auc = validation_auc(model, validation);
  const Eigen::MatrixXd lambda = model.relevance();
  e.relevance_trace = lambda.trace();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lambda, Eigen::EigenvaluesOnly);
  e.relevance_min_eigenvalue = eig.eigenvalues().minCoeff();
  model.trace.push_back(e);
}

}  // namespace

GmlvqModel gmlvq_fit(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                     const GmlvqConfig& config, const ValidationSet& validation) {
  if (static_cast<std::size_t>(X.rows()) != labels.size() || X.rows() == 0) {
    throw InvalidArgument("gmlvq: one label per row required");
  }
  const auto classes = sorted_classes(labels);
  if (classes.size() < 2) throw InvalidArgument("gmlvq: at least two classes required");
  if ((validation.X == nullptr) != (validation.labels == nullptr) ||
      (validation.X && (validation.X->cols() != X.cols() ||
                        static_cast<std::size_t>(validation.X->rows()) != validation.labels->size()))) {
    throw InvalidArgument("gmlvq: malformed validation set");
  }
  const auto m = X.cols();

  GmlvqModel model;
  model.prototype_labels = classes;
  model.prototypes = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(classes.size()), m);
  std::vector<std::size_t> counts(classes.size(), 0);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const auto c = static_cast<std::size_t>(
        std::lower_bound(classes.begin(), classes.end(), labels[static_cast<std::size_t>(i)]) -
        classes.begin());
    model.prototypes.row(static_cast<Eigen::Index>(c)) += X.row(i);
    ++counts[c];
  }
  for (std::size_t c = 0; c < classes.size(); ++c) {
    model.prototypes.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
  }
  double spread = 0.0;
  if (X.rows() > 1) {
    const Eigen::RowVectorXd mu = X.colwise().mean();
    spread = std::sqrt((X.rowwise() - mu).squaredNorm() / static_cast<double>((X.rows() - 1) * m));
  }
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (Eigen::Index r = 0; r < model.prototypes.rows(); ++r) {
    for (Eigen::Index c = 0; c < m; ++c) model.prototypes(r, c) += config.jitter * spread * noise(rng);
  }
  model.omega = Eigen::MatrixXd::Identity(m, m) / std::sqrt(static_cast<double>(m));

  record(model, 0, X, labels, validation);
  auto best = model;
  double best_auc = model.trace.back().validation_auc.value_or(0.0);
  int since_best = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto g = gmlvq_gradient(X, labels, model.prototypes, model.prototype_labels, model.omega);
    model.prototypes -= config.prototype_learning_rate * g.prototypes;
    model.omega -= config.omega_learning_rate * g.omega;
    normalize_omega(model.omega);
    record(model, epoch, X, labels, validation);

    if (validation.X) {
      const double auc = *model.trace.back().validation_auc;
      if (auc > best_auc) {
        best_auc = auc;
        best.prototypes = model.prototypes;
        best.omega = model.omega;
        best.best_epoch = epoch;
        since_best = 0;
      } else if (++since_best >= config.patience) {
        break;
      }
    } else {
      const auto& t = model.trace;
      if (std::abs(t[t.size() - 2].cost - t.back().cost) < 1e-12) break;
    }
  }

  if (validation.X) {
    best.trace = std::move(model.trace);
    return best;
  }
  model.best_epoch = static_cast<int>(model.trace.size()) - 1;
  return model;
}

SplitAucResult repeated_split_auc(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                                  const SplitEvalConfig& config) {
  if (static_cast<std::size_t>(X.rows()) != labels.size()) {
    throw InvalidArgument("repeated_split_auc: one label per row required");
  }
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) pos.push_back(i);
    else if (labels[i] == 0) neg.push_back(i);
    else throw InvalidArgument("repeated_split_auc: labels must be 0 or 1");
  }
  const auto n = static_cast<int>(labels.size());
  if (config.n_splits < 1) throw InvalidArgument("repeated_split_auc: n_splits must be positive");
  if (config.validation_size < 2 || config.validation_size >= n - 1) {
    throw InvalidArgument("repeated_split_auc: validation size must be in [2, n - 2]");
  }
  if (pos.size() < 2 || neg.size() < 2) {
    throw InvalidArgument("repeated_split_auc: each class needs at least two samples");
  }
  // Stratified: every validation part holds both classes.
  auto val_pos = static_cast<int>(std::lround(config.validation_size * static_cast<double>(pos.size()) / n));
  val_pos = std::clamp(val_pos, 1, std::min(config.validation_size - 1, static_cast<int>(pos.size()) - 1));
  const int val_neg = config.validation_size - val_pos;
  if (val_neg > static_cast<int>(neg.size()) - 1) {
    throw InvalidArgument("repeated_split_auc: validation part would exhaust the negative class");
  }

  SplitAucResult result;
  result.split_auc.assign(static_cast<std::size_t>(config.n_splits), 0.0);
  parallel_for(static_cast<std::size_t>(config.n_splits), [&](std::size_t s) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(seq);
    auto p = pos;
    auto q = neg;
    std::shuffle(p.begin(), p.end(), rng);
    std::shuffle(q.begin(), q.end(), rng);
    std::vector<std::size_t> val(p.begin(), p.begin() + val_pos);
    val.insert(val.end(), q.begin(), q.begin() + val_neg);
    std::vector<std::size_t> train(p.begin() + val_pos, p.end());
    train.insert(train.end(), q.begin() + val_neg, q.end());
    std::sort(val.begin(), val.end());
    std::sort(train.begin(), train.end());

    auto gather = [&](const std::vector<std::size_t>& idx, Eigen::MatrixXd& M, std::vector<int>& y) {
      M.resize(static_cast<Eigen::Index>(idx.size()), X.cols());
      y.resize(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) {
        M.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(idx[i]));
        y[i] = labels[idx[i]];
      }
    };
    Eigen::MatrixXd Xt, Xv;
    std::vector<int> yt, yv;
    gather(train, Xt, yt);
    gather(val, Xv, yv);

    const Eigen::RowVectorXd mu = Xt.colwise().mean();
    Eigen::RowVectorXd sd = ((Xt.rowwise() - mu).colwise().squaredNorm() /
                             static_cast<double>(Xt.rows() - 1)).cwiseSqrt();
    for (Eigen::Index j = 0; j < sd.size(); ++j) {
      if (!(sd[j] > 0.0)) sd[j] = 1.0;
    }
    Xt = (Xt.rowwise() - mu).array().rowwise() / sd.array();
    Xv = (Xv.rowwise() - mu).array().rowwise() / sd.array();

    auto cfg = config.gmlvq;
    cfg.seed = rng();
    const auto model = gmlvq_fit(Xt, yt, cfg, ValidationSet{&Xv, &yv});
    result.split_auc[s] = *model.trace[static_cast<std::size_t>(model.best_epoch)].validation_auc;
  });
  result.mean_auc = std::accumulate(result.split_auc.begin(), result.split_auc.end(), 0.0) /
                    static_cast<double>(result.split_auc.size());
  return result;
}

}  // namespace softsensor
