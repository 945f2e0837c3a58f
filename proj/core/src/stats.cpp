#include "softsensor/stats.hpp"

#include <algorithm>
#include <cmath>

#include "softsensor/error.hpp"

namespace softsensor {

double mean(std::span<const double> v) {
  if (v.empty()) throw InvalidArgument("mean of empty input");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v) {
  if (v.size() < 2) throw InvalidArgument("standard deviation needs at least two values");
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("pearson: length mismatch");
  if (a.size() < 2) throw InvalidArgument("pearson: need at least two values");
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0) throw DegenerateColumn(0, "pearson: constant input");
  if (sbb == 0.0) throw DegenerateColumn(1, "pearson: constant input");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace softsensor
