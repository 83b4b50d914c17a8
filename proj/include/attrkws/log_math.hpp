#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace attrkws {

// log(0). Every routine below treats it explicitly instead of relying on
// inf - inf arithmetic.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline bool is_log_zero(double x) { return x == kLogZero; }

// log(exp(a) + exp(b))
inline double log_add(double a, double b) {
  if (is_log_zero(a)) return b;
  if (is_log_zero(b)) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

inline double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return kLogZero;
  const double top = *std::max_element(xs.begin(), xs.end());
  if (is_log_zero(top)) return kLogZero;
  if (std::isinf(top)) return top;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - top);
  return top + std::log(sum);
}

inline void log_softmax_inplace(std::span<double> row) {
  const double norm = log_sum_exp(row);
  for (double& x : row) x -= norm;
}

inline void softmax_inplace(std::span<double> row) {
  log_softmax_inplace(row);
  for (double& x : row) x = std::exp(x);
}

inline double safe_log(double p) { return p > 0.0 ? std::log(p) : kLogZero; }

}  // namespace attrkws
