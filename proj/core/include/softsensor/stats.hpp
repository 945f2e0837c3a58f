#pragma once

#include <span>

namespace softsensor {

double mean(std::span<const double> v);

/// Sample standard deviation (n - 1 denominator). Requires at least two values.
double sample_std(std::span<const double> v);

/// Sample Pearson correlation. Throws DegenerateColumn if either input is constant.
double pearson_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace softsensor
