#pragma once

/**
 * Simply-generated-tree weight models.
 *
 * A model is a weight sequence (w_k) with generator Phi(z) = sum w_k z^k.
 * Four kinds are supported:
 *   finite weights   w_0..w_K given explicitly          (R = inf)
 *   geometric-all-ones  w_k = 1, Phi = 1/(1-z)          (R = 1)
 *   exponential         w_k = 1/k!, Phi = e^z           (R = inf)
 *   zeta4(a)            w_0 = a, w_k = (1-a)/(zeta(4) k^4)  (R = 1)
 *
 * The zeta4 family is the admissibility counterexample: Phi'(1) is finite,
 * so the moment asymptotics lose their square-root branch at m = 1.
 */

#include "census/common.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace census {

enum class ModelKind { FiniteWeights, GeometricAllOnes, Exponential, Zeta4 };

struct OffspringModel {
  ModelKind kind = ModelKind::FiniteWeights;
  std::vector<Rational> weights;   // finite-weights only, w_0..w_K
  std::vector<double> weights_d;   // double mirror of `weights`
  double zeta_a = 0.0;             // zeta4 only, a in (0,1)
  int span = 1;                    // gcd{ k >= 1 : w_k > 0 }
  std::string spec_text;           // the spec string this was parsed from

  /// Radius of convergence of Phi.
  double radius() const {
    switch (kind) {
      case ModelKind::FiniteWeights:
      case ModelKind::Exponential:
        return std::numeric_limits<double>::infinity();
      case ModelKind::GeometricAllOnes:
      case ModelKind::Zeta4:
        return 1.0;
    }
    return 0.0;
  }

  /// Largest degree with positive weight, or -1 when unbounded.
  int max_degree() const {
    if (kind != ModelKind::FiniteWeights) return -1;
    for (int k = static_cast<int>(weights.size()) - 1; k >= 0; --k) {
      if (weights[k] != 0) return k;
    }
    return -1;
  }

  bool has_weight(int k) const {
    switch (kind) {
      case ModelKind::FiniteWeights:
        return k >= 0 && k < static_cast<int>(weights.size()) &&
               weights[k] != 0;
      case ModelKind::GeometricAllOnes:
      case ModelKind::Zeta4:
        return k >= 0;
      case ModelKind::Exponential:
        return k >= 0;
    }
    return false;
  }

  /// w_k as a double; zeta4's (1-a)/zeta(4) prefactor is irrational.
  double weight_d(int k) const {
    switch (kind) {
      case ModelKind::FiniteWeights:
        return k < static_cast<int>(weights_d.size()) ? weights_d[k] : 0.0;
      case ModelKind::GeometricAllOnes:
        return 1.0;
      case ModelKind::Exponential:
        return 1.0 / static_cast<double>(factorial_u64(std::min(k, 20))) /
               [&] {  // factorials past 20! overflow u64; extend by division
                 double extra = 1.0;
                 for (int i = 21; i <= k; ++i) extra *= static_cast<double>(i);
                 return extra;
               }();
      case ModelKind::Zeta4:
        if (k == 0) return zeta_a;
        return (1.0 - zeta_a) / zeta4() / (static_cast<double>(k) * k * k * k);
    }
    return 0.0;
  }

  /// Exact w_k; throws for zeta4 (weights are irrational).
  Rational weight_q(int k) const {
    switch (kind) {
      case ModelKind::FiniteWeights:
        return k < static_cast<int>(weights.size()) ? weights[k] : Rational(0);
      case ModelKind::GeometricAllOnes:
        return Rational(1);
      case ModelKind::Exponential: {
        BigInt f = 1;
        for (int i = 2; i <= k; ++i) f *= i;
        return Rational(BigInt(1), f);
      }
      case ModelKind::Zeta4:
        throw DomainError("zeta4 weights are irrational; no exact form");
    }
    return Rational(0);
  }
};

/**
 * Admissibility diagnostics per the moment-theorem conditions:
 * nu = lim_{z->R} z Phi'(z)/Phi(z); the branch-point machinery needs
 * nu > 1 and Phi'(R) = inf.
 */
struct AdmissibilityReport {
  double radius = 0.0;
  double nu = 0.0;          // may be +inf
  bool philm_holds = false;   // nu > 1
  bool philmx_holds = false;  // Phi'(R) = inf
  int span = 1;
};

// ============================================================================
// Generator evaluation
// ============================================================================

namespace detail {

/// Falling factorial k (k-1) ... (k-p+1).
inline double falling(double k, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= k - i;
  return r;
}

/// Termwise sum of the zeta4 series derivative: sum_{k>=max(1,p)} (k)_p x^{k-p} / k^4.
inline double zeta4_series_deriv(double x, int p) {
  double acc = 0.0;
  double xp = 1.0;  // x^{k-p}
  const int k0 = std::max(1, p);
  for (int i = 0; i < k0 - p; ++i) xp *= x;  // x^{k0-p}
  for (long k = k0; k < 4000000; ++k) {
    double kd = static_cast<double>(k);
    double term = falling(kd, p) / (kd * kd * kd * kd) * xp;
    acc += term;
    if (term < 1e-18 * acc && k > p + 8) break;
    xp *= x;
  }
  return acc;
}

}  // namespace detail

/**
 * Phi^{(p)}(x). Exact closed forms for all kinds except zeta4, which is
 * summed termwise (and uses zeta closed forms at x = R = 1, where the
 * series for p <= 2 still converges).
 */
inline double phi_eval(const OffspringModel& model, double x, int p = 0) {
  if (x < 0.0 || p < 0) throw DomainError("phi_eval: x must be >= 0, p >= 0");
  const double R = model.radius();
  if (x > R) throw DomainError("phi_eval: x beyond radius of convergence");
  switch (model.kind) {
    case ModelKind::FiniteWeights: {
      // Horner over k >= p with coefficients (k)_p w_k.
      double r = 0.0;
      for (int k = static_cast<int>(model.weights_d.size()) - 1; k >= p; --k) {
        r = r * x + detail::falling(static_cast<double>(k), p) *
                        model.weights_d[static_cast<size_t>(k)];
      }
      return r;
    }
    case ModelKind::GeometricAllOnes: {
      if (x >= 1.0) throw DomainError("phi_eval: geometric generator diverges at x >= 1");
      return static_cast<double>(factorial_u64(p)) /
             std::pow(1.0 - x, static_cast<double>(p + 1));
    }
    case ModelKind::Exponential:
      return std::exp(x);
    case ModelKind::Zeta4: {
      const double c = (1.0 - model.zeta_a) / zeta4();
      if (x == 1.0) {
        // sum (k)_p / k^4 in zeta closed form; diverges for p >= 3.
        switch (p) {
          case 0: return model.zeta_a + c * zeta4();
          case 1: return c * zeta3();
          case 2: return c * (zeta2() - zeta3());
          default:
            throw DomainError("phi_eval: zeta4 derivative of order >= 3 diverges at x = 1");
        }
      }
      double s = c * detail::zeta4_series_deriv(x, p);
      if (p == 0) s += model.zeta_a;
      return s;
    }
  }
  throw DomainError("phi_eval: unknown model kind");
}

// ============================================================================
// Parsing and validation
// ============================================================================

namespace detail {

inline void finish_finite(OffspringModel& m) {
  m.weights_d.clear();
  m.weights_d.reserve(m.weights.size());
  for (const auto& w : m.weights) {
    if (w < 0) throw DomainError("negative weight");
    m.weights_d.push_back(static_cast<double>(w));
  }
  if (m.weights.empty() || m.weights[0] == 0) {
    throw DomainError("model requires w_0 > 0");
  }
  bool some_branching = false;
  int g = 0;
  for (size_t k = 1; k < m.weights.size(); ++k) {
    if (m.weights[k] != 0) {
      g = std::gcd(g, static_cast<int>(k));
      if (k >= 2) some_branching = true;
    }
  }
  if (!some_branching) {
    throw DomainError("model requires w_k > 0 for some k >= 2");
  }
  m.span = g == 0 ? 1 : g;
}

}  // namespace detail

/**
 * Model spec grammar (exact):
 *   binary-full | catalan | poisson | zeta4:a=<decimal> | weights:<w0>,<w1>,...
 */
inline OffspringModel parse_model(const std::string& spec) {
  OffspringModel m;
  m.spec_text = spec;
  if (spec == "binary-full") {
    m.kind = ModelKind::FiniteWeights;
    m.weights = {Rational(1), Rational(0), Rational(1)};
    detail::finish_finite(m);
    return m;
  }
  if (spec == "catalan") {
    m.kind = ModelKind::GeometricAllOnes;
    m.span = 1;
    return m;
  }
  if (spec == "poisson") {
    m.kind = ModelKind::Exponential;
    m.span = 1;
    return m;
  }
  if (spec.rfind("zeta4:a=", 0) == 0) {
    m.kind = ModelKind::Zeta4;
    Rational a = parse_decimal(spec.substr(8));
    if (a <= 0 || a >= 1) {
      throw DomainError("zeta4 parameter a must lie in (0,1)");
    }
    m.zeta_a = static_cast<double>(a);
    m.span = 1;
    return m;
  }
  if (spec.rfind("weights:", 0) == 0) {
    m.kind = ModelKind::FiniteWeights;
    std::stringstream ss(spec.substr(8));
    std::string item;
    while (std::getline(ss, item, ',')) {
      m.weights.push_back(parse_decimal(item));
    }
    if (m.weights.empty()) throw ParseError("weights: list is empty");
    detail::finish_finite(m);
    return m;
  }
  throw ParseError("unrecognized model spec: '" + spec + "'");
}

/**
 * Computes nu = lim_{z->R} z Phi'(z)/Phi(z) and the two admissibility flags.
 * For finite weights the limit is the top degree K; for geometric and
 * exponential kinds it is +inf; for zeta4 it is (1-a) zeta(3)/zeta(4).
 */
inline AdmissibilityReport validate_admissibility(const OffspringModel& model) {
  AdmissibilityReport rep;
  rep.radius = model.radius();
  rep.span = model.span;
  switch (model.kind) {
    case ModelKind::FiniteWeights:
      rep.nu = static_cast<double>(model.max_degree());
      rep.philmx_holds = true;  // R = inf
      break;
    case ModelKind::GeometricAllOnes:
      rep.nu = std::numeric_limits<double>::infinity();
      rep.philmx_holds = true;  // Phi(R) = inf
      break;
    case ModelKind::Exponential:
      rep.nu = std::numeric_limits<double>::infinity();
      rep.philmx_holds = true;  // R = inf
      break;
    case ModelKind::Zeta4:
      rep.nu = (1.0 - model.zeta_a) * zeta3() / zeta4();
      rep.philmx_holds = false;  // Phi'(1) = nu Phi(1) < inf
      break;
  }
  rep.philm_holds = rep.nu > 1.0;
  return rep;
}

/// a_0 = 1 - zeta(4)/zeta(3); zeta4(a) satisfies nu > 1 exactly when a < a_0.
inline double zeta4_critical_a() { return 1.0 - zeta4() / zeta3(); }

}  // namespace census
