#pragma once

/**
 * Small statistics kit for the Monte Carlo harness: central-moment
 * summaries, a Kolmogorov-Smirnov statistic against a fitted normal,
 * chi-square screening thresholds and a least-squares line fit.
 */

#include "census/common.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace census {

struct MomentSummary {
  size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased (n-1)
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double min = 0.0, max = 0.0;
};

inline MomentSummary summarize(std::span<const double> xs) {
  MomentSummary s;
  s.n = xs.size();
  if (xs.empty()) return s;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  double mn = xs[0], mx = xs[0];
  for (double x : xs) {
    double d = x - mean;
    double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
    mn = std::min(mn, x);
    mx = std::max(mx, x);
  }
  double nd = static_cast<double>(xs.size());
  m2 /= nd;
  m3 /= nd;
  m4 /= nd;
  s.mean = mean;
  s.variance = xs.size() > 1 ? m2 * nd / (nd - 1.0) : 0.0;
  s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  s.excess_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
  s.min = mn;
  s.max = mx;
  return s;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// sup |F_emp - Normal(mean, sd^2)| over the sample.
inline double ks_statistic_normal(std::vector<double> xs, double mean, double sd) {
  if (xs.empty() || sd <= 0.0) return 1.0;
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double f = normal_cdf((xs[i] - mean) / sd);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

/**
 * Chi-square upper critical value at p = 0.001. Exact table entries for
 * the small dfs the sampler tests use, Wilson-Hilferty elsewhere.
 */
inline double chi_square_critical_999(int df) {
  switch (df) {
    case 1: return 10.828;
    case 2: return 13.816;
    case 3: return 16.266;
    case 4: return 18.467;
    case 13: return 34.528;
    default: {
      const double z = 3.090232;  // Phi^{-1}(0.999)
      double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
      return df * t * t * t;
    }
  }
}

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  LineFit f;
  const size_t n = x.size();
  if (n < 2 || y.size() != n) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double nd = static_cast<double>(n);
  double denom = nd * sxx - sx * sx;
  if (denom == 0.0) return f;
  f.slope = (nd * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / nd;
  return f;
}

}  // namespace census
