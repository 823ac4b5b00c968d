#pragma once

/**
 * Monte Carlo verification of the log-normal limit law for subtree counts
 * and numerical estimation of the constants mu = E f(T), sigma^2.
 *
 * Every sample index owns its own counter-based RNG stream, so results
 * are bitwise reproducible and independent of the worker count.
 */

#include "census/common.hpp"
#include "census/enumerate.hpp"
#include "census/models.hpp"
#include "census/rng.hpp"
#include "census/sampler.hpp"
#include "census/stats.hpp"
#include "census/tree.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace census {

namespace detail {

inline int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, count) across workers; fn must only touch slot i.
/// The first worker exception is rethrown on the calling thread.
template <typename Fn>
void parallel_samples(int64_t count, int threads, Fn&& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || count < 64) {
    for (int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    constexpr int64_t kBlock = 64;
    try {
      for (;;) {
        int64_t start = next.fetch_add(kBlock);
        if (start >= count || failed.load(std::memory_order_relaxed)) return;
        int64_t stop = std::min(start + kBlock, count);
        for (int64_t i = start; i < stop; ++i) fn(i);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

// ============================================================================
// CLT experiment
// ============================================================================

struct CltReport {
  int n = 0;
  int64_t samples = 0;
  double mean_logR = 0.0, var_logR = 0.0;
  double mean_logS = 0.0, var_logS = 0.0;
  double mu_hat = 0.0;      // mean_logR / n
  double sigma2_hat = 0.0;  // var_logR / n
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double ks_statistic = 0.0;
  int64_t bound_violations = 0;  // samples breaking 0 <= logS - logR <= log n
  bool pass = false;

  // screen thresholds (loose by design: the law converges at CLT rate)
  static constexpr double kSkewThreshold = 0.1;
  static constexpr double kKurtThreshold = 0.2;
  static constexpr double kKsFactor = 3.0 * 1.63;  // 3x the 1% KS critical value
};

/**
 * Draws conditioned trees of size n, accumulates log R and log S, and
 * screens standardized log R against normality: |skewness| < 0.1,
 * |excess kurtosis| < 0.2, KS < 3 * 1.63 / sqrt(samples).
 */
inline CltReport run_clt_experiment(const OffspringModel& model, int n,
                                    int64_t samples, uint64_t seed,
                                    int threads = 0) {
  if (n < 1 || (n - 1) % model.span != 0) {
    throw DomainError("no trees of size " + std::to_string(n) + " exist (span " +
                      std::to_string(model.span) + ")");
  }
  CltReport rep;
  rep.n = n;
  rep.samples = samples;
  std::vector<double> lr(static_cast<size_t>(samples));
  std::vector<double> ls(static_cast<size_t>(samples));
  detail::parallel_samples(samples, threads, [&](int64_t i) {
    RngStream rng(seed, static_cast<uint64_t>(i));
    OrderedTree t = sample_conditioned(model, n, rng);
    LogCounts lc = log_counts(t);
    lr[static_cast<size_t>(i)] = lc.log_r;
    ls[static_cast<size_t>(i)] = lc.log_s;
  });
  const double logn = std::log(static_cast<double>(n));
  for (int64_t i = 0; i < samples; ++i) {
    double d = ls[static_cast<size_t>(i)] - lr[static_cast<size_t>(i)];
    if (d < -1e-9 || d > logn + 1e-9) ++rep.bound_violations;
  }
  MomentSummary mr = summarize(lr);
  MomentSummary ms = summarize(ls);
  rep.mean_logR = mr.mean;
  rep.var_logR = mr.variance;
  rep.mean_logS = ms.mean;
  rep.var_logS = ms.variance;
  rep.mu_hat = mr.mean / n;
  rep.sigma2_hat = mr.variance / n;
  rep.skewness = mr.skewness;
  rep.excess_kurtosis = mr.excess_kurtosis;
  rep.ks_statistic = ks_statistic_normal(lr, mr.mean, std::sqrt(mr.variance));
  rep.pass = std::abs(rep.skewness) < CltReport::kSkewThreshold &&
             std::abs(rep.excess_kurtosis) < CltReport::kKurtThreshold &&
             rep.ks_statistic <
                 CltReport::kKsFactor / std::sqrt(static_cast<double>(samples));
  return rep;
}

// ============================================================================
// mu and sigma^2 estimation
// ============================================================================

struct MuEstimate {
  double mu_exact_part = 0.0;  // exact sum over trees of size <= enum_cutoff
  double mu_mc_part = 0.0;     // Monte Carlo over sampled trees above the cutoff
  double mu_total = 0.0;
  double sigma2_estimate = 0.0;
  double std_error = 0.0;  // of the MC part
  int enum_cutoff = 0;
  int64_t mc_samples = 0;
  size_t size_cap = 0;
  int64_t censored_count = 0;
  double censored_tail_bound = 0.0;  // bound on the dropped mass sum_{n>cap} P(n)/n
};

/**
 * mu = E f(T) with f(T) = log(1 + 1/R(T)), T the unconditioned critical
 * tree. Exact enumeration head (all trees up to enum_cutoff nodes with
 * probabilities from the critical tilt) plus a Monte Carlo tail over
 * sampled trees larger than the cutoff. Trees past size_cap are censored
 * and reported, never silently dropped: f <= 1/|T| bounds their mass by
 * (empirical censor share + 3 SE) / (size_cap + 1).
 *
 * sigma^2 comes from the additive-functional variance formula
 *   sigma^2 = 2 E[f (F - |T| mu)] - Var f - mu^2 / Var(xi),
 * estimated over the same samples with F(T) = log(R(T) + 1).
 */
inline MuEstimate estimate_mu(const OffspringModel& model, int enum_cutoff,
                              int64_t mc_samples, size_t size_cap,
                              uint64_t seed, int threads = 0) {
  MuEstimate est;
  est.enum_cutoff = enum_cutoff;
  est.mc_samples = mc_samples;
  est.size_cap = size_cap;
  TiltedLaw law = critical_tilt(model);

  // exact head
  std::vector<double> logp(law.pmf.size());
  {
    double total = 0.0;
    for (double p : law.pmf) total += p;
    for (size_t k = 0; k < law.pmf.size(); ++k) {
      logp[k] = law.pmf[k] > 0.0 ? std::log(law.pmf[k] / total)
                                 : -std::numeric_limits<double>::infinity();
    }
  }
  for (int n = 1; n <= enum_cutoff; n += model.span) {
    for_each_tree(model, n, [&](const std::vector<uint32_t>& deg) {
      double lp = 0.0;
      for (uint32_t d : deg) {
        lp += d < logp.size() ? logp[d] : -std::numeric_limits<double>::infinity();
      }
      OrderedTree t;
      t.degrees = deg;
      double log_r = log_counts(t).log_r;
      est.mu_exact_part += std::exp(lp) * std::log1p(std::exp(-log_r));
    });
  }

  // Monte Carlo tail + material for the sigma^2 formula
  struct Draw {
    double f = 0.0;      // toll of the whole tree
    double F = 0.0;      // log(R + 1)
    double size = 0.0;
    bool censored = false;
    bool above_cutoff = false;
  };
  std::vector<Draw> draws(static_cast<size_t>(mc_samples));
  detail::parallel_samples(mc_samples, threads, [&](int64_t i) {
    RngStream rng(seed, static_cast<uint64_t>(i));
    auto t = sample_unconditioned(model, rng, size_cap, &law);
    Draw& d = draws[static_cast<size_t>(i)];
    if (!t) {
      d.censored = true;
      return;
    }
    double log_r = log_counts(*t).log_r;
    d.f = std::log1p(std::exp(-log_r));
    d.F = log_r + d.f;  // log(R + 1)
    d.size = static_cast<double>(t->size());
    d.above_cutoff = static_cast<int>(t->size()) > enum_cutoff;
  });

  double sum_tail = 0.0, sum_tail2 = 0.0;
  int64_t uncensored = 0;
  for (const Draw& d : draws) {
    if (d.censored) {
      ++est.censored_count;
      continue;
    }
    ++uncensored;
    double v = d.above_cutoff ? d.f : 0.0;
    sum_tail += v;
    sum_tail2 += v * v;
  }
  const double nd = static_cast<double>(mc_samples);
  est.mu_mc_part = sum_tail / nd;
  double var_tail = sum_tail2 / nd - est.mu_mc_part * est.mu_mc_part;
  est.std_error = std::sqrt(std::max(var_tail, 0.0) / nd);
  est.mu_total = est.mu_exact_part + est.mu_mc_part;

  double censor_share = static_cast<double>(est.censored_count) / nd;
  double censor_se = std::sqrt(std::max(censor_share * (1.0 - censor_share), 0.0) / nd);
  est.censored_tail_bound =
      (censor_share + 3.0 * censor_se) / static_cast<double>(size_cap + 1);

  // sigma^2 over the uncensored draws
  if (uncensored > 0 && law.variance > 0.0) {
    const double mu = est.mu_total;
    double sum_cross = 0.0, sum_f = 0.0, sum_f2 = 0.0;
    for (const Draw& d : draws) {
      if (d.censored) continue;
      sum_cross += d.f * (d.F - d.size * mu);
      sum_f += d.f;
      sum_f2 += d.f * d.f;
    }
    double un = static_cast<double>(uncensored);
    double mean_f = sum_f / un;
    double var_f = sum_f2 / un - mean_f * mean_f;
    est.sigma2_estimate =
        2.0 * (sum_cross / un) - var_f - mu * mu / law.variance;
  }
  return est;
}

}  // namespace census
