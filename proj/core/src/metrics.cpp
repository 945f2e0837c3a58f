#include "softsensor/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "softsensor/error.hpp"

namespace softsensor {

ConfusionCounts confusion(const std::vector<bool>& predicted, const std::vector<bool>& truth) {
  if (predicted.size() != truth.size()) throw InvalidArgument("confusion: length mismatch");
  ConfusionCounts c;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (truth[i]) {
      predicted[i] ? ++c.tp : ++c.fn;
    } else {
      predicted[i] ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

ClassificationScores precision_recall_fbeta(const ConfusionCounts& c, double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("f-beta: beta must be positive");
  ClassificationScores s;
  if (c.tp + c.fp > 0) s.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) s.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (s.precision && s.recall) {
    const double b2 = beta * beta;
    const double denom = b2 * *s.precision + *s.recall;
    s.f_beta = denom > 0.0 ? (1.0 + b2) * *s.precision * *s.recall / denom : 0.0;
  }
  return s;
}

double roc_auc(std::span<const double> scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("roc_auc: length mismatch");
  const auto n_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  const auto n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw InvalidArgument("roc_auc: both classes must be present");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of 1-based mid-ranks of the positives.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t r = i; r <= j; ++r) {
      if (labels[order[r]]) rank_sum += mid;
    }
    i = j + 1;
  }
  const double np = static_cast<double>(n_pos);
  const double u = rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

std::string format_metric(const std::optional<double>& v, int decimals) {
  if (!v) return "undefined";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, *v);
  return buf;
}

}  // namespace softsensor
