#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace softsensor {

/// 2x2 counts where "positive" means out of specification.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fn + fp + tn; }
  bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion(const std::vector<bool>& predicted, const std::vector<bool>& truth);

/// nullopt marks an undefined value (zero denominator).
struct ClassificationScores {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f_beta;
};

ClassificationScores precision_recall_fbeta(const ConfusionCounts& c, double beta);

/// Mann-Whitney estimate of P(score of a positive > score of a negative),
/// ties counted one half. Throws if either class is absent.
double roc_auc(std::span<const double> scores, const std::vector<bool>& labels);

/// Fixed-point text with `decimals` digits, or "undefined".
std::string format_metric(const std::optional<double>& v, int decimals = 2);

}  // namespace softsensor
