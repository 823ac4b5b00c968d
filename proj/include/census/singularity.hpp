#pragma once

/**
 * Characteristic-system solver for the dominant square-root singularities
 * of the weighted families F_m.
 *
 * With Psi_m(z,w) = z Phi(w + H_m(z)) and H_m = sum_{k<m} C(m,k) F_k, the
 * branch point (rho_m, s_m) solves
 *
 *   Psi_m(rho, s) = s,      dPsi_m/dw (rho, s) = 1.
 *
 * Pointwise values F_k(z) come from monotone fixed-point iteration of
 * w -> z Phi(w + H_k(z)) with a Newton polish; derivatives follow the
 * analytic recurrence F_k' = Psi_z / (1 - Psi_w), never finite differences.
 *
 * Coefficient asymptotics: [z^n] F_m ~ lambda_m n^{-3/2} rho_m^{-n} with
 * lambda_m = span * g_m / (2 sqrt(pi)), g_m = sqrt(2 rho Psi_z / Psi_ww);
 * the span factor accounts for the d equally-contributing dominant
 * singularities in the periodic case.
 *
 * Models whose generator has a finite derivative at its radius (the zeta4
 * family) can lose the branch point at m = 1: the constraint
 * FF_m(rho) = R activates first. That outcome is reported, not thrown.
 */

#include "census/common.hpp"
#include "census/models.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace census {

struct SingularityReport {
  enum class Branch { SquareRoot, NoBranchPoint };

  int m = 0;
  double rho = 0.0;
  double s = 0.0;       // F_m(rho_m)
  double tau = 0.0;     // rho_0 / rho_m
  double lambda = 0.0;  // coefficient constant
  double gamma = 0.0;   // lambda_m / lambda_0
  Branch branch = Branch::NoBranchPoint;
  std::string reason;   // populated for NoBranchPoint
  double ff_at_rho = 0.0;  // FF_m(rho_m) = s + H_m(rho_m)
  double residual1 = 0.0, residual2 = 0.0;
  int newton_iterations = 0;
  int restarts = 0;

  bool square_root() const { return branch == Branch::SquareRoot; }
};

namespace detail {

constexpr double kResidualTol = 1e-12;
constexpr double kRadiusGuard = 1e-12;

struct FixpointResult {
  double w = 0.0;
  bool converged = false;
};

/**
 * Smallest fixed point of w -> z Phi(w + H), monotone iteration from 0
 * with Newton polish. When z exceeds the branch radius the increments
 * pass through a positive minimum; best-effort mode returns the iterate
 * at that bottleneck (used only to seed Newton).
 */
inline FixpointResult phi_fixpoint(const OffspringModel& model, double z,
                                   double H, double R) {
  FixpointResult res;
  if (z <= 0.0) {
    res.w = 0.0;
    res.converged = z == 0.0;
    return res;
  }
  double w = 0.0;
  double prev_gap = std::numeric_limits<double>::infinity();
  double best_w = 0.0, best_gap = std::numeric_limits<double>::infinity();
  bool in_basin = false;
  const int monotone_cap = 1200;
  for (int it = 0; it < monotone_cap; ++it) {
    double x = w + H;
    if (x >= R - kRadiusGuard && std::isfinite(R)) break;  // left the disc
    double wn = z * phi_eval(model, x);
    double gap = wn - w;
    if (!(gap >= 0.0) || !std::isfinite(wn)) break;
    if (gap <= 1e-7 * std::max(1.0, wn)) {
      w = wn;
      in_basin = true;
      break;
    }
    if (gap < best_gap) {
      best_gap = gap;
      best_w = wn;
    } else if (it > 3 && gap > 1.5 * best_gap) {
      break;  // increments growing again: no fixed point at this z
    }
    prev_gap = gap;
    w = wn;
  }
  (void)prev_gap;
  if (!in_basin && best_gap > 1e-4 * std::max(1.0, best_w)) {
    res.w = best_w;
    res.converged = false;
    return res;
  }
  if (!in_basin) w = best_w;
  // Newton polish on g(w) = z Phi(w+H) - w; from below the smallest root
  // g > 0 and g' < 0, so steps move up toward it.
  bool ok = false;
  for (int it = 0; it < 200; ++it) {
    double x = w + H;
    if (std::isfinite(R) && x >= R - kRadiusGuard) break;
    double g = z * phi_eval(model, x) - w;
    if (std::abs(g) <= 1e-15 * std::max(1.0, std::abs(w))) {
      ok = true;
      break;
    }
    double gp = z * phi_eval(model, x, 1) - 1.0;
    if (gp >= 0.0) break;
    double step = -g / gp;
    w += step;
    if (w < 0.0) {
      w = 0.0;
      break;
    }
    if (std::abs(step) <= 1e-16 * std::max(1.0, w)) {
      ok = true;
      break;
    }
  }
  res.w = w;
  res.converged = ok;
  return res;
}

struct ChainPoint {
  std::vector<double> F;   // F_k(z), k = 0..m
  std::vector<double> dF;  // F_k'(z)
  std::vector<double> H;   // H_k(z)
  std::vector<double> dH;  // H_k'(z)
  bool converged = true;
  int first_failed = -1;
};

/**
 * Evaluates F_0..F_m (and derivatives) at one point, lowest order first;
 * each level's H_k is assembled from the levels below it.
 */
inline ChainPoint eval_chain(const OffspringModel& model, int m, double z,
                             bool best_effort = false) {
  ChainPoint cp;
  const double R = model.radius();
  for (int k = 0; k <= m; ++k) {
    double Hk = 0.0, dHk = 0.0;
    for (int j = 0; j < k; ++j) {
      double c = static_cast<double>(binom(k, j));
      Hk += c * cp.F[static_cast<size_t>(j)];
      dHk += c * cp.dF[static_cast<size_t>(j)];
    }
    FixpointResult fx = phi_fixpoint(model, z, Hk, R);
    if (!fx.converged) {
      cp.converged = false;
      if (cp.first_failed < 0) cp.first_failed = k;
      if (!best_effort) {
        throw NumericError("F_" + std::to_string(k) +
                           " evaluation did not converge at z = " +
                           std::to_string(z));
      }
    }
    double x = fx.w + Hk;
    double denom = 1.0 - z * phi_eval(model, std::min(x, R), 1);
    double dFk = denom > 0.0
                     ? (phi_eval(model, std::min(x, R)) +
                        z * phi_eval(model, std::min(x, R), 1) * dHk) /
                           denom
                     : std::numeric_limits<double>::infinity();
    cp.F.push_back(fx.w);
    cp.dF.push_back(dFk);
    cp.H.push_back(Hk);
    cp.dH.push_back(dHk);
  }
  return cp;
}

}  // namespace detail

/**
 * F_m(z) for 0 < z < rho_m, as the smallest fixed point of
 * w -> z Phi(w + H_m(z)). Throws NumericError when the iteration does not
 * converge (z at or beyond the branch point).
 */
inline double eval_F_point(const OffspringModel& model, int m, double z) {
  if (z < 0.0) throw DomainError("eval_F_point: z must be nonnegative");
  return detail::eval_chain(model, m, z).F[static_cast<size_t>(m)];
}

namespace detail {

struct NewtonOutcome {
  bool ok = false;
  bool hit_radius = false;  // the FF_m <= R constraint kept activating
  double rho = 0.0, s = 0.0;
  double r1 = 0.0, r2 = 0.0;
  int iterations = 0;
};

/**
 * Damped Newton on E1 = rho Phi(s + H_m(rho)) - s, E2 = rho Phi'(...) - 1,
 * with analytic Jacobian (H_m' from the derivative recurrence). rho is
 * clamped below rho_{m-1}; for finite R the trial s is clamped so the
 * generator argument stays inside the disc, and persistent clamping is
 * reported as a radius hit.
 */
inline NewtonOutcome newton_characteristic(const OffspringModel& model, int m,
                                           double rho0, double s0,
                                           double rho_cap) {
  const double R = model.radius();
  NewtonOutcome out;
  double rho = std::min(rho0, 0.999 * rho_cap);
  double s = std::max(s0, 0.0);
  int radius_hits = 0;

  auto residuals = [&](double r, double& sv, double& E1, double& E2,
                       ChainPoint& cp) -> bool {
    cp = eval_chain(model, m - 1, r, /*best_effort=*/false);
    double Hm = 0.0;
    for (int j = 0; j < m; ++j) {
      Hm += static_cast<double>(binom(m, j)) * cp.F[static_cast<size_t>(j)];
    }
    if (std::isfinite(R) && sv + Hm > R - 10 * kRadiusGuard) {
      sv = R - 10 * kRadiusGuard - Hm;
      ++radius_hits;
      if (sv < 0.0) return false;
    }
    double x = sv + Hm;
    E1 = r * phi_eval(model, x) - sv;
    E2 = r * phi_eval(model, x, 1) - 1.0;
    return true;
  };

  double E1, E2;
  ChainPoint cp;
  if (!residuals(rho, s, E1, E2, cp)) {
    out.hit_radius = true;
    return out;
  }
  for (int it = 0; it < 80; ++it) {
    out.iterations = it;
    double norm = std::hypot(E1, E2);
    if (std::abs(E1) <= kResidualTol * std::max(1.0, std::abs(s)) &&
        std::abs(E2) <= kResidualTol) {
      out.ok = true;
      out.rho = rho;
      out.s = s;
      out.r1 = E1;
      out.r2 = E2;
      return out;
    }
    double Hm = 0.0, dHm = 0.0;
    for (int j = 0; j < m; ++j) {
      double c = static_cast<double>(binom(m, j));
      Hm += c * cp.F[static_cast<size_t>(j)];
      dHm += c * cp.dF[static_cast<size_t>(j)];
    }
    double x = s + Hm;
    double p0 = phi_eval(model, x);
    double p1 = phi_eval(model, x, 1);
    double p2 = phi_eval(model, x, 2);
    // J = [ dE1/drho  dE1/ds ; dE2/drho  dE2/ds ]
    double a = p0 + rho * p1 * dHm;
    double b = rho * p1 - 1.0;
    double c2 = p1 + rho * p2 * dHm;
    double d = rho * p2;
    double det = a * d - b * c2;
    if (det == 0.0 || !std::isfinite(det)) break;
    double drho = (-E1 * d + E2 * b) / det;
    double ds = (-a * E2 + c2 * E1) / det;

    bool accepted = false;
    for (double t = 1.0; t >= 1.0 / (1 << 24); t *= 0.5) {
      double rho_t = rho + t * drho;
      double s_t = s + t * ds;
      rho_t = std::min(std::max(rho_t, 1e-12), 0.9999999 * rho_cap);
      if (s_t < 0.0) s_t = 0.0;
      double E1t, E2t;
      ChainPoint cpt;
      bool feasible;
      try {
        feasible = residuals(rho_t, s_t, E1t, E2t, cpt);
      } catch (const NumericError&) {
        feasible = false;
      }
      if (!feasible) continue;
      if (std::hypot(E1t, E2t) < norm) {
        rho = rho_t;
        s = s_t;
        E1 = E1t;
        E2 = E2t;
        cp = std::move(cpt);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    if (radius_hits > 6) {
      out.hit_radius = true;
      return out;
    }
  }
  out.hit_radius = out.hit_radius || radius_hits > 2;
  out.rho = rho;
  out.s = s;
  out.r1 = E1;
  out.r2 = E2;
  return out;
}

/**
 * The 1-D slice of the characteristic system: parametrize by the generator
 * argument x = s + H_m(rho). The second equation pins rho = 1/Phi'(x) and
 * the first becomes h(x) = x - Phi(x)/Phi'(x) - H_m(1/Phi'(x)) = 0.
 * x must exceed the previous level's FF_{m-1}(rho_{m-1}) so that
 * 1/Phi'(x) < rho_{m-1} and the chain below converges.
 */
inline double char_slice(const OffspringModel& model, int m, double x) {
  double rho = 1.0 / phi_eval(model, x, 1);
  double Hm = 0.0;
  if (m > 0) {
    ChainPoint cp = eval_chain(model, m - 1, rho);
    for (int j = 0; j < m; ++j) {
      Hm += static_cast<double>(binom(m, j)) * cp.F[static_cast<size_t>(j)];
    }
  }
  return x - phi_eval(model, x) / phi_eval(model, x, 1) - Hm;
}

}  // namespace detail

/**
 * Locates (rho_m, s_m). Newton starts from the previous branch point
 * (rho^0 = 0.72 rho_{m-1}, s^0 = best-effort evaluation there) with up to
 * 8 jittered restarts; if that fails, a bracketing scan of the 1-D slice
 * localizes the root before a final Newton polish. For generators with a
 * finite radius the scan reaching R without a sign change is the detected
 * no-branch-point outcome.
 */
inline SingularityReport find_singularity(
    const OffspringModel& model, int m,
    const std::vector<SingularityReport>& lower) {
  if (static_cast<int>(lower.size()) < m) {
    throw DomainError("find_singularity: missing lower-order reports");
  }
  for (int k = 0; k < m; ++k) {
    if (!lower[static_cast<size_t>(k)].square_root()) {
      throw DomainError("find_singularity: lower order has no branch point");
    }
  }
  SingularityReport rep;
  rep.m = m;
  const double R = model.radius();
  const double rho_cap =
      m == 0 ? std::numeric_limits<double>::infinity() : lower[static_cast<size_t>(m - 1)].rho;

  // --- Newton with the standard initialization (m >= 1) ---
  if (m >= 1) {
    const double rho_prev = lower[static_cast<size_t>(m - 1)].rho;
    for (int attempt = 0; attempt < 8; ++attempt) {
      double jit = 1.0 + 0.05 * attempt * (attempt % 2 == 0 ? 1.0 : -1.0);
      double rho0 = 0.72 * rho_prev * jit;
      rho0 = std::min(rho0, 0.97 * rho_prev);
      detail::ChainPoint probe =
          detail::eval_chain(model, m, rho0, /*best_effort=*/true);
      double s0 = probe.F[static_cast<size_t>(m)] * (1.0 + 0.03 * attempt);
      detail::NewtonOutcome nw =
          detail::newton_characteristic(model, m, rho0, s0, rho_cap);
      if (nw.ok) {
        rep.rho = nw.rho;
        rep.s = nw.s;
        rep.residual1 = nw.r1;
        rep.residual2 = nw.r2;
        rep.newton_iterations = nw.iterations;
        rep.restarts = attempt;
        rep.branch = SingularityReport::Branch::SquareRoot;
        break;
      }
      rep.restarts = attempt + 1;
    }
  }

  // --- bracketing scan of the 1-D slice (primary path for m = 0) ---
  if (!rep.square_root()) {
    double x_lo = m == 0 ? 1e-9 : lower[static_cast<size_t>(m - 1)].ff_at_rho;
    double x_hi;
    bool finite_R = std::isfinite(R);
    if (finite_R) {
      // geometric generators blow up at R; zeta4 stays evaluable there
      x_hi = model.kind == ModelKind::Zeta4 ? R : R - 1e-9;
    } else {
      x_hi = std::max(2.0 * std::max(x_lo, 1.0), 1.0);
      bool bracketed = false;
      for (int i = 0; i < 200; ++i) {
        if (detail::char_slice(model, m, x_hi) > 0.0) {
          bracketed = true;
          break;
        }
        x_hi *= 1.6;
      }
      if (!bracketed) {
        throw NumericError("find_singularity: could not bracket the branch point");
      }
    }
    // scan for the first sign change
    const int grid = 256;
    double span_x = x_hi - x_lo;
    double prev_x = x_lo + span_x * 1e-7;
    double prev_h = detail::char_slice(model, m, prev_x);
    double best_h = prev_h, best_x = prev_x;
    bool found = prev_h >= 0.0;
    double lo = prev_x, hi = x_hi;
    for (int i = 1; i <= grid && !found; ++i) {
      double x = x_lo + span_x * (static_cast<double>(i) / grid);
      if (x > x_hi) x = x_hi;
      double h = detail::char_slice(model, m, x);
      if (h > best_h) {
        best_h = h;
        best_x = x;
      }
      if (h >= 0.0) {
        lo = prev_x;
        hi = x;
        found = true;
        break;
      }
      prev_x = x;
      prev_h = h;
    }
    if (!found) {
      rep.branch = SingularityReport::Branch::NoBranchPoint;
      rep.reason =
          "FF_m(rho) reaches the generator radius before the branch equations "
          "hold (case (xb)); max slice residual " +
          std::to_string(best_h) + " at x = " + std::to_string(best_x);
      // diagnostics: the radius-constrained point
      rep.rho = 1.0 / phi_eval(model, x_hi, 1);
      rep.ff_at_rho = x_hi;
      return rep;
    }
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      if (detail::char_slice(model, m, mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    double x_star = 0.5 * (lo + hi);
    double rho0 = 1.0 / phi_eval(model, x_star, 1);
    double s0 = rho0 * phi_eval(model, x_star);
    detail::NewtonOutcome nw =
        detail::newton_characteristic(model, m, rho0, s0, rho_cap);
    if (!nw.ok) {
      throw NumericError("find_singularity: Newton polish failed at m = " +
                         std::to_string(m));
    }
    rep.rho = nw.rho;
    rep.s = nw.s;
    rep.residual1 = nw.r1;
    rep.residual2 = nw.r2;
    rep.newton_iterations = nw.iterations;
    rep.branch = SingularityReport::Branch::SquareRoot;
  }

  // --- validity checks ---
  double Hm = 0.0;
  if (m > 0) {
    detail::ChainPoint cp = detail::eval_chain(model, m - 1, rep.rho);
    for (int j = 0; j < m; ++j) {
      Hm += static_cast<double>(binom(m, j)) * cp.F[static_cast<size_t>(j)];
    }
  }
  rep.ff_at_rho = rep.s + Hm;
  if (m >= 1 && rep.rho >= lower[static_cast<size_t>(m - 1)].rho) {
    rep.branch = SingularityReport::Branch::NoBranchPoint;
    rep.reason = "monotonicity violated: rho_m >= rho_{m-1}";
    return rep;
  }
  if (std::isfinite(R) && rep.ff_at_rho >= R - detail::kRadiusGuard) {
    rep.branch = SingularityReport::Branch::NoBranchPoint;
    rep.reason = "FF_m(rho_m) = R (case (xb))";
    return rep;
  }
  return rep;
}

/**
 * lambda_m = span * g_m / (2 sqrt(pi)), g_m = sqrt(2 rho Psi_z / Psi_ww),
 * the smooth implicit-function constants at the branch point.
 */
inline double lambda_constant(const OffspringModel& model,
                              const SingularityReport& rep) {
  if (!rep.square_root()) {
    throw NumericError("lambda_constant: no square-root branch at m = " +
                       std::to_string(rep.m));
  }
  const int m = rep.m;
  double Hm = 0.0, dHm = 0.0;
  if (m > 0) {
    detail::ChainPoint cp = detail::eval_chain(model, m - 1, rep.rho);
    for (int j = 0; j < m; ++j) {
      double c = static_cast<double>(binom(m, j));
      Hm += c * cp.F[static_cast<size_t>(j)];
      dHm += c * cp.dF[static_cast<size_t>(j)];
    }
  }
  double x = rep.s + Hm;
  double psi_z = phi_eval(model, x) + rep.rho * phi_eval(model, x, 1) * dHm;
  double psi_ww = rep.rho * phi_eval(model, x, 2);
  if (!(psi_ww > 0.0)) {
    throw NumericError("lambda_constant: degenerate Psi_ww at the branch point");
  }
  double g = std::sqrt(2.0 * rep.rho * psi_z / psi_ww);
  return static_cast<double>(model.span) * g /
         (2.0 * std::sqrt(4.0 * std::atan(1.0)));
}

/**
 * Reports for m = 0..M with tau, lambda, gamma filled. Stops early (and
 * keeps the diagnostic report) if some order has no branch point.
 */
inline std::vector<SingularityReport> analyze_singularities(
    const OffspringModel& model, int M) {
  std::vector<SingularityReport> reports;
  for (int m = 0; m <= M; ++m) {
    SingularityReport rep = find_singularity(model, m, reports);
    if (rep.square_root()) {
      rep.tau = reports.empty() ? 1.0 : reports[0].rho / rep.rho;
      rep.lambda = lambda_constant(model, rep);
      rep.gamma = reports.empty() ? 1.0 : rep.lambda / reports[0].lambda;
    }
    bool stop = !rep.square_root();
    reports.push_back(std::move(rep));
    if (stop) break;
  }
  return reports;
}

// ============================================================================
// Mixed constants (general subtrees)
// ============================================================================

/**
 * alpha_{m,l} recursion: alpha_{0,l} = 1 and, with t = m + l,
 *
 *   alpha_{m,l} = (1 + rho_t sum_{k=1}^{m-1} C(m,k) alpha_{k,t-k}
 *                        Phi'(FF_{t-k}(rho_t)))
 *                 / (1 - rho_t Phi'(FF_l(rho_t))).
 *
 * First index m counts general-subtree marks, second root marks. The
 * source tabulation displays the m = 1, l = 0 constant under the swapped
 * label alpha_{0,1}, and likewise shows the (l,m) = (0,2) entry of
 * gamma'_{l,m} = alpha_{m,l} gamma_{l+m} under the label (2,0); accessors
 * for both index orders are provided so the discrepancy stays visible
 * instead of silently guessed away.
 */
struct MixedConstants {
  int M = 0;
  std::vector<double> alpha_table;        // [m][l], m + l <= M
  std::vector<double> gamma_prime_table;  // [l][m] = alpha_{m,l} gamma_{l+m}
  double correlation = 0.0;               // alpha_{1,1} / sqrt(alpha_{2,0})
  double subtree_majority_ratio = 0.0;    // 1/alpha_{1,0} = lim E R / E S

  double alpha(int m, int l) const {
    return alpha_table[static_cast<size_t>(m * (M + 1) + l)];
  }
  /// The swapped-index view matching the display convention noted above.
  double alpha_swapped(int l, int m) const { return alpha(m, l); }
  double gamma_prime(int l, int m) const {
    return gamma_prime_table[static_cast<size_t>(l * (M + 1) + m)];
  }
  double gamma_prime_swapped(int m, int l) const { return gamma_prime(l, m); }
};

inline MixedConstants mixed_constants(
    const OffspringModel& model,
    const std::vector<SingularityReport>& reports) {
  int M = 0;
  while (M + 1 < static_cast<int>(reports.size()) &&
         reports[static_cast<size_t>(M + 1)].square_root()) {
    ++M;
  }
  if (M < 1) throw DomainError("mixed_constants: need reports through m = 1");
  MixedConstants mc;
  mc.M = M;
  mc.alpha_table.assign(static_cast<size_t>((M + 1) * (M + 1)), 0.0);
  mc.gamma_prime_table.assign(static_cast<size_t>((M + 1) * (M + 1)), 0.0);
  auto alpha_at = [&](int m, int l) -> double& {
    return mc.alpha_table[static_cast<size_t>(m * (M + 1) + l)];
  };

  for (int t = 0; t <= M; ++t) {
    const double rho_t = reports[static_cast<size_t>(t)].rho;
    // FF_j(rho_t) for j < t (and j = t is never needed: Phi' uses lower orders)
    detail::ChainPoint cp =
        detail::eval_chain(model, std::max(t - 1, 0), rho_t);
    auto FF_at = [&](int j) {
      return cp.F[static_cast<size_t>(j)] + cp.H[static_cast<size_t>(j)];
    };
    for (int m = 0; m <= t; ++m) {
      const int l = t - m;
      if (m == 0) {
        alpha_at(0, l) = 1.0;
        continue;
      }
      double denom = 1.0 - rho_t * phi_eval(model, FF_at(l), 1);
      if (!(denom > 0.0)) {
        throw NumericError("mixed_constants: nonpositive denominator at (m,l) = (" +
                           std::to_string(m) + "," + std::to_string(l) + ")");
      }
      double num = 1.0;
      for (int k = 1; k < m; ++k) {
        num += rho_t * static_cast<double>(binom(m, k)) * alpha_at(k, t - k) *
               phi_eval(model, FF_at(t - k), 1);
      }
      alpha_at(m, l) = num / denom;
    }
  }
  for (int l = 0; l <= M; ++l) {
    for (int m = 0; m + l <= M; ++m) {
      mc.gamma_prime_table[static_cast<size_t>(l * (M + 1) + m)] =
          mc.alpha(m, l) * reports[static_cast<size_t>(l + m)].gamma;
    }
  }
  mc.subtree_majority_ratio = 1.0 / mc.alpha(1, 0);
  if (M >= 2) {
    mc.correlation = mc.alpha(1, 1) / std::sqrt(mc.alpha(2, 0));
  }
  return mc;
}

// ============================================================================
// Size law for root subtrees
// ============================================================================

/**
 * Constants of the root-subtree size CLT: with d1 = F_0'(rho_1),
 * d2 = F_0''(rho_1), d3 = Phi''(s_1 + F_0(rho_1)),
 *
 *   mu_X     = s_1 / (s_1 + rho_1 d1)
 *   sigma2_X = rho_1 (d2 d3 rho_1 s_1^2 + d1^2 d3 rho_1 s_1 + d1 d3 s_1^2
 *              - d1^2) / ((d1 rho_1 + s_1)^3 d3).
 */
struct SizeLaw {
  double d1 = 0.0, d2 = 0.0, d3 = 0.0;
  double mu_x = 0.0;
  double sigma2_x = 0.0;
};

inline SizeLaw size_law(const OffspringModel& model,
                        const SingularityReport& report_1) {
  if (report_1.m != 1 || !report_1.square_root()) {
    throw DomainError("size_law: needs the m = 1 square-root report");
  }
  const double rho1 = report_1.rho;
  const double s1 = report_1.s;
  detail::ChainPoint cp = detail::eval_chain(model, 0, rho1);
  const double F0 = cp.F[0];
  const double d1 = cp.dF[0];
  // F_0'' from differentiating F_0' = Phi(F_0) / (1 - z Phi'(F_0)) once more
  const double p0 = phi_eval(model, F0);
  const double p1 = phi_eval(model, F0, 1);
  const double p2 = phi_eval(model, F0, 2);
  const double D = 1.0 - rho1 * p1;
  const double d2 = (p1 * d1 * D + p0 * (p1 + rho1 * p2 * d1)) / (D * D);
  const double d3 = phi_eval(model, s1 + F0, 2);
  SizeLaw law;
  law.d1 = d1;
  law.d2 = d2;
  law.d3 = d3;
  law.mu_x = s1 / (s1 + rho1 * d1);
  law.sigma2_x = rho1 *
                 (d2 * d3 * rho1 * s1 * s1 + d1 * d1 * d3 * rho1 * s1 +
                  d1 * d3 * s1 * s1 - d1 * d1) /
                 (std::pow(d1 * rho1 + s1, 3) * d3);
  if (!(law.mu_x > 0.0 && law.mu_x < 1.0)) {
    throw NumericError("size_law: mu_x outside (0,1)");
  }
  return law;
}

// ============================================================================
// Polynomial residuals (binary-full)
// ============================================================================

/**
 * Residuals of the resultant polynomials satisfied by rho_1, rho_2, rho_3
 * of the full-binary model. P1 and P2 are reported as absolute values;
 * the degree-16 P3 is scaled by its largest monomial.
 */
struct PolyResiduals {
  double p1_abs = 0.0;
  double p2_abs = 0.0;
  double p3_abs = 0.0;
  double p3_rel = 0.0;
};

inline PolyResiduals verify_polynomials(const SingularityReport& r1,
                                        const SingularityReport& r2,
                                        const SingularityReport& r3) {
  PolyResiduals res;
  const double a = r1.rho, b = r2.rho, c = r3.rho;
  res.p1_abs = std::abs(16.0 * std::pow(a, 4) + 24.0 * a * a - 3.0);
  res.p2_abs = std::abs(256.0 * std::pow(b, 8) + 2816.0 * std::pow(b, 6) -
                        32.0 * std::pow(b, 4) + 6384.0 * b * b - 343.0);
  const double coef[] = {65536.0,        5111808.0,     70434816.0,
                         -785866752.0,   206968320.0,   10195628544.0,
                         -16526908224.0, 7520519520.0,  -176201487.0};
  const int expo[] = {16, 14, 12, 10, 8, 6, 4, 2, 0};
  double acc = 0.0, scale = 0.0;
  for (int i = 0; i < 9; ++i) {
    double mono = coef[i] * std::pow(c, expo[i]);
    acc += mono;
    scale = std::max(scale, std::abs(mono));
  }
  res.p3_abs = std::abs(acc);
  res.p3_rel = res.p3_abs / scale;
  return res;
}

}  // namespace census
