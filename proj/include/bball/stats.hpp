#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bball/domain.hpp"

namespace bball {

/// Quantile by linear interpolation between order statistics (the inclusive
/// definition): position (n-1)*q, interpolated between neighbours.
/// Input must be sorted ascending.
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error("quantile of an empty sample");
  if (sorted.size() == 1) return sorted[0];
  double pos = (static_cast<double>(sorted.size()) - 1.0) * q;
  size_t lo = static_cast<size_t>(pos);
  if (lo >= sorted.size() - 1) return sorted.back();
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, q);
}

inline double mean(std::span<const double> v) {
  if (v.empty()) throw Error("mean of an empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Least-squares slope of y against x.
inline double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("slope: length mismatch");
  if (x.size() < 2) throw Error("slope needs at least two points");
  double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw Error("slope undefined: x values are constant");
  return sxy / sxx;
}

}  // namespace bball
