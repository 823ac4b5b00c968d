#pragma once

/**
 * Exact samplers for simply generated / conditioned Galton-Watson trees.
 *
 * Conditioned sampler: tilt the weights to a probability law
 * p_k ~ w_k b^k (the conditioned law is invariant under the tilt), draw
 * n i.i.d. out-degrees conditioned on sum = n-1 by plain rejection, then
 * rotate the sequence to the unique valid preorder order via the cycle
 * lemma. Unconditioned sampler: depth-first branching process with the
 * critical (mean-1) tilt, censored at a size cap.
 */

#include "census/common.hpp"
#include "census/models.hpp"
#include "census/rng.hpp"
#include "census/tree.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace census {

/**
 * Offspring probability law p_k = w_k b^k / Phi(b), with the cumulative
 * table truncated where the tail drops below 1e-16 of total mass.
 */
struct TiltedLaw {
  double b = 0.0;
  std::vector<double> pmf;
  std::vector<double> cdf;
  double mean = 0.0;
  double variance = 0.0;
  bool critical = false;  // mean == 1 up to solver tolerance

  int sample(RngStream& rng) const {
    double u = rng.next_double();
    // binary search in the cumulative table
    size_t lo = 0, hi = cdf.size() - 1;
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (u < cdf[mid]) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return static_cast<int>(lo);
  }
};

namespace detail {

inline TiltedLaw build_tilt(const OffspringModel& model, double b, bool critical) {
  TiltedLaw law;
  law.b = b;
  law.critical = critical;
  const double phib = phi_eval(model, b);
  const int max_deg = model.max_degree();
  double bk = 1.0, mass = 0.0;
  for (int k = 0;; ++k) {
    double p = model.weight_d(k) * bk / phib;
    law.pmf.push_back(p);
    mass += p;
    bk *= b;
    if (max_deg >= 0 ? k >= max_deg : (k > 8 && 1.0 - mass < 1e-16)) break;
    if (k > 4096) break;  // hard stop for pathological parameters
  }
  // exact unit total for the sampler's inversion table
  law.cdf.resize(law.pmf.size());
  double acc = 0.0;
  for (size_t k = 0; k < law.pmf.size(); ++k) {
    acc += law.pmf[k] / mass;
    law.cdf[k] = acc;
  }
  law.cdf.back() = 1.0;
  for (size_t k = 0; k < law.pmf.size(); ++k) {
    double kd = static_cast<double>(k);
    law.mean += kd * law.pmf[k] / mass;
    law.variance += kd * kd * law.pmf[k] / mass;
  }
  law.variance -= law.mean * law.mean;
  return law;
}

}  // namespace detail

/**
 * Solves b Phi'(b)/Phi(b) = 1 on (0, R) by bisection. Empty when no
 * critical tilt exists (the mean stays below 1 up to the radius, as for
 * zeta4 with a >= a_0).
 */
inline std::optional<TiltedLaw> try_critical_tilt(const OffspringModel& model) {
  const double R = model.radius();
  auto mean_at = [&](double b) {
    return b * phi_eval(model, b, 1) / phi_eval(model, b);
  };
  double lo = 0.0, hi;
  if (std::isfinite(R)) {
    hi = R;
    double top = model.kind == ModelKind::GeometricAllOnes
                     ? mean_at(1.0 - 1e-9)
                     : mean_at(R);
    if (top < 1.0) return std::nullopt;
    if (model.kind == ModelKind::GeometricAllOnes) hi = 1.0 - 1e-9;
  } else {
    hi = 1.0;
    int guard = 0;
    while (mean_at(hi) < 1.0) {
      hi *= 2.0;
      if (++guard > 200) return std::nullopt;
    }
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (mean_at(mid) < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return detail::build_tilt(model, 0.5 * (lo + hi), /*critical=*/true);
}

inline TiltedLaw critical_tilt(const OffspringModel& model) {
  auto law = try_critical_tilt(model);
  if (!law) throw NumericError("no critical tilt exists for this model");
  return *law;
}

namespace detail {

/**
 * Cycle lemma: among the n rotations of a degree sequence with
 * sum = n-1, exactly one is a valid preorder sequence; it starts just
 * after the first position attaining the minimal prefix sum of d_i - 1.
 */
inline void rotate_to_valid(std::vector<uint32_t>& deg) {
  long long walk = 0, min_walk = 0;
  size_t min_pos = deg.size();  // position of first minimum
  for (size_t i = 0; i < deg.size(); ++i) {
    walk += static_cast<long long>(deg[i]) - 1;
    if (walk < min_walk) {
      min_walk = walk;
      min_pos = i;
    }
  }
  size_t start = (min_pos + 1) % deg.size();
  if (start != 0) {
    std::rotate(deg.begin(), deg.begin() + static_cast<long>(start), deg.end());
  }
}

}  // namespace detail

/**
 * One conditioned tree of exactly n nodes. Throws DomainError when n is
 * off the span lattice (no such trees exist).
 */
inline OrderedTree sample_conditioned(const OffspringModel& model, int n,
                                      RngStream& rng) {
  if (n < 1) throw DomainError("sample_conditioned: n must be >= 1");
  if ((n - 1) % model.span != 0) {
    throw DomainError("no trees of size " + std::to_string(n) +
                      " exist (span " + std::to_string(model.span) + ")");
  }
  if (n == 1) return OrderedTree::from_degrees({0});
  // conditioning cancels the tilt, so any finite-mean b works; the
  // critical one maximizes the rejection acceptance rate
  TiltedLaw law;
  if (auto crit = try_critical_tilt(model)) {
    law = *crit;
  } else {
    law = detail::build_tilt(model, 0.9 * model.radius(), /*critical=*/false);
  }
  const long long target = n - 1;
  std::vector<uint32_t> deg(static_cast<size_t>(n));
  for (;;) {
    long long sum = 0;
    bool overshoot = false;
    for (int i = 0; i < n; ++i) {
      int d = law.sample(rng);
      sum += d;
      if (sum > target) {
        overshoot = true;
        break;
      }
      deg[static_cast<size_t>(i)] = static_cast<uint32_t>(d);
    }
    if (!overshoot && sum == target) break;
  }
  detail::rotate_to_valid(deg);
  OrderedTree t;
  t.degrees = std::move(deg);  // cycle lemma guarantees validity
  return t;
}

/**
 * One unconditioned critical Galton-Watson tree in preorder, or nothing
 * if it grows past size_cap (the caller treats that as censored).
 */
inline std::optional<OrderedTree> sample_unconditioned(
    const OffspringModel& model, RngStream& rng, size_t size_cap,
    const TiltedLaw* law = nullptr) {
  TiltedLaw local;
  if (law == nullptr) {
    local = critical_tilt(model);
    law = &local;
  }
  std::vector<uint32_t> deg;
  long long open = 1;
  while (open > 0) {
    if (deg.size() >= size_cap) return std::nullopt;
    int d = law->sample(rng);
    deg.push_back(static_cast<uint32_t>(d));
    open += d - 1;
  }
  OrderedTree t;
  t.degrees = std::move(deg);
  return t;
}

}  // namespace census
