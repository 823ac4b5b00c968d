#include "doctest.h"

#include "census/montecarlo.hpp"

#include <cmath>

using namespace census;

TEST_CASE("mc_harness: summarize and KS basics") {
  std::vector<double> xs;
  RngStream rng(5, 0);
  for (int i = 0; i < 20000; ++i) {
    // sum of 12 uniforms - 6: near-normal with mean 0, variance 1
    double s = 0.0;
    for (int j = 0; j < 12; ++j) s += rng.next_double();
    xs.push_back(s - 6.0);
  }
  MomentSummary m = summarize(xs);
  CHECK(m.mean == doctest::Approx(0.0).epsilon(0.05));
  CHECK(m.variance == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(m.skewness) < 0.05);
  CHECK(std::abs(m.excess_kurtosis) < 0.05);
  CHECK(ks_statistic_normal(xs, m.mean, std::sqrt(m.variance)) < 0.02);
}

TEST_CASE("mc_harness: clt report at moderate size (binary-full)") {
  OffspringModel bin = parse_model("binary-full");
  CltReport rep = run_clt_experiment(bin, 501, 4000, 99, 0);
  CHECK(rep.bound_violations == 0);
  CHECK(rep.mu_hat > 0.0);
  CHECK(rep.sigma2_hat > 0.0);
  CHECK(rep.mean_logS >= rep.mean_logR);
  CHECK(rep.mean_logS - rep.mean_logR <= std::log(501.0));
  // mu_hat approx 0.383 for this model (frozen from long reference runs)
  CHECK(rep.mu_hat == doctest::Approx(0.3839).epsilon(0.01));
}

TEST_CASE("mc_harness: clt reports are reproducible and thread-invariant") {
  OffspringModel cat = parse_model("catalan");
  CltReport a = run_clt_experiment(cat, 101, 500, 7, 1);
  CltReport b = run_clt_experiment(cat, 101, 500, 7, 4);
  CHECK(a.mean_logR == b.mean_logR);
  CHECK(a.var_logR == b.var_logR);
  CHECK(a.ks_statistic == b.ks_statistic);
  CltReport c = run_clt_experiment(cat, 101, 500, 8, 1);
  CHECK(a.mean_logR != c.mean_logR);  // seed matters
}

TEST_CASE("mc_harness: estimate_mu exact head converges in the cutoff") {
  OffspringModel bin = parse_model("binary-full");
  MuEstimate e13 = estimate_mu(bin, 13, 20000, 4096, 21, 0);
  MuEstimate e17 = estimate_mu(bin, 17, 20000, 4096, 21, 0);
  CHECK(e13.mu_total > 0.0);
  // exact head dominates: cutoff 13 vs 17 moves the total by < 1e-3
  CHECK(std::abs(e17.mu_total - e13.mu_total) < 1e-3);
  // positivity lower bound: mu >= p(leaf) * log 2
  TiltedLaw law = critical_tilt(bin);
  CHECK(e17.mu_total >= law.pmf[0] * std::log(2.0) - 1e-12);
  // censored mass is reported with a bound
  CHECK(e17.censored_tail_bound >= 0.0);
  CHECK(e17.censored_tail_bound < 1e-4);
  // sigma^2 from the variance formula stays positive
  CHECK(e17.sigma2_estimate > 0.0);
}

TEST_CASE("mc_harness: estimate_mu is deterministic") {
  OffspringModel cat = parse_model("catalan");
  MuEstimate a = estimate_mu(cat, 9, 5000, 2048, 3, 2);
  MuEstimate b = estimate_mu(cat, 9, 5000, 2048, 3, 1);
  CHECK(a.mu_total == b.mu_total);
  CHECK(a.sigma2_estimate == b.sigma2_estimate);
  CHECK(a.censored_count == b.censored_count);
}

TEST_CASE("mc_harness: estimate_mu refuses models without a critical tilt") {
  CHECK_THROWS_AS(estimate_mu(parse_model("zeta4:a=0.2"), 7, 100, 512, 1, 1),
                  NumericError);
}

TEST_CASE("mc_harness: samplewise log bound holds at n = 501") {
  OffspringModel cat = parse_model("catalan");
  CltReport rep = run_clt_experiment(cat, 501, 2000, 1234, 0);
  CHECK(rep.bound_violations == 0);
  CHECK(rep.pass);  // normality screens are loose at this n; they should hold
}
