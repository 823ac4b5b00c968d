#pragma once

/**
 * Truncated-power-series solver for the weighted generating functions
 *
 *   F_m(z)    = z Phi(FF_m(z)),   FF_m = sum_{k<=m} C(m,k) F_k
 *   G_{m,l}   = mixed families for S(T)^m R(T)^l
 *   F_1(z,u)  = z u Phi(F_1(z,u) + F_0(z))   (u-derivatives at u = 1)
 *
 * solved coefficientwise: every right-hand side carries a z prefactor, so
 * coefficient n of the unknown depends only on coefficients < n, and a
 * progressive fixed-point pass (or a linear forward solve, where the
 * unknown enters linearly) is exact after N sweeps.
 *
 * Scalar kinds: exact rationals for oracle runs, doubles up to N ~ 600,
 * log-domain doubles beyond (coefficients grow like rho_m^-n).
 */

#include "census/common.hpp"
#include "census/models.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

namespace census {

template <typename S>
struct TruncatedSeries {
  std::vector<S> c;  // coefficients 0..N

  TruncatedSeries() = default;
  explicit TruncatedSeries(int order)
      : c(static_cast<size_t>(order) + 1, ScalarOps<S>::zero()) {}

  int order() const { return static_cast<int>(c.size()) - 1; }
  const S& operator[](int n) const { return c[static_cast<size_t>(n)]; }
  S& operator[](int n) { return c[static_cast<size_t>(n)]; }

  static constexpr ScalarKind scalar_kind = ScalarOps<S>::kind;
};

// ============================================================================
// Elementary series operations
// ============================================================================

namespace series_ops {

template <typename S>
TruncatedSeries<S> add(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b,
                       int N) {
  TruncatedSeries<S> r(N);
  for (int n = 0; n <= N; ++n) {
    if (n <= a.order()) r[n] += a[n];
    if (n <= b.order()) r[n] = r[n] + b[n];
  }
  return r;
}

template <typename S>
void add_scaled_inplace(TruncatedSeries<S>& a, const TruncatedSeries<S>& b,
                        const S& coef) {
  const int N = std::min(a.order(), b.order());
  for (int n = 0; n <= N; ++n) a[n] = a[n] + coef * b[n];
}

template <typename S>
TruncatedSeries<S> mul(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b,
                       int N) {
  TruncatedSeries<S> r(N);
  const int na = std::min(a.order(), N);
  for (int i = 0; i <= na; ++i) {
    if (ScalarOps<S>::is_zero(a[i])) continue;
    const int nb = std::min(b.order(), N - i);
    for (int j = 0; j <= nb; ++j) {
      r[i + j] = r[i + j] + a[i] * b[j];
    }
  }
  return r;
}

/// z * a, truncated to N.
template <typename S>
TruncatedSeries<S> shift_z(const TruncatedSeries<S>& a, int N) {
  TruncatedSeries<S> r(N);
  for (int n = 1; n <= N; ++n) {
    if (n - 1 <= a.order()) r[n] = a[n - 1];
  }
  return r;
}

template <typename S>
TruncatedSeries<S> scale(const TruncatedSeries<S>& a, const S& coef) {
  TruncatedSeries<S> r = a;
  for (auto& x : r.c) x = x * coef;
  return r;
}

/**
 * Solves G = known + P * G coefficientwise; requires P[0] = 0 so that
 * coefficient n of P*G only involves G[0..n-1].
 */
template <typename S>
TruncatedSeries<S> forward_solve(const TruncatedSeries<S>& known,
                                 const TruncatedSeries<S>& P, int N) {
  if (P.order() >= 0 && !ScalarOps<S>::is_zero(P[0])) {
    throw NumericError("forward_solve: kernel must vanish at z = 0");
  }
  TruncatedSeries<S> G(N);
  for (int n = 0; n <= N; ++n) {
    S acc = n <= known.order() ? known[n] : ScalarOps<S>::zero();
    const int jmax = std::min(n, P.order());
    for (int j = 1; j <= jmax; ++j) {
      if (!ScalarOps<S>::is_zero(P[j])) acc = acc + P[j] * G[n - j];
    }
    G[n] = acc;
  }
  return G;
}

/// Partial-sum evaluation at a double point (diagnostics and closed-form checks).
template <typename S>
double eval_double(const TruncatedSeries<S>& a, double z) {
  double r = 0.0;
  for (int n = a.order(); n >= 0; --n) r = r * z + ScalarOps<S>::to_double(a[n]);
  return r;
}

}  // namespace series_ops

// ============================================================================
// Generator composition
// ============================================================================

namespace detail {

/// 1/(1 - W) via B = 1 + W B; needs W[0] = 0.
template <typename S>
TruncatedSeries<S> geometric_inverse(const TruncatedSeries<S>& W, int N) {
  TruncatedSeries<S> B(N);
  B[0] = ScalarOps<S>::one();
  for (int n = 1; n <= N; ++n) {
    S acc = ScalarOps<S>::zero();
    const int jmax = std::min(n, W.order());
    for (int j = 1; j <= jmax; ++j) {
      if (!ScalarOps<S>::is_zero(W[j])) acc = acc + W[j] * B[n - j];
    }
    B[n] = acc;
  }
  return B;
}

/// exp(W) via the first-order recurrence n E_n = sum j W_j E_{n-j}; W[0] = 0.
template <typename S>
TruncatedSeries<S> exp_series(const TruncatedSeries<S>& W, int N) {
  TruncatedSeries<S> E(N);
  E[0] = ScalarOps<S>::one();
  for (int n = 1; n <= N; ++n) {
    S acc = ScalarOps<S>::zero();
    const int jmax = std::min(n, W.order());
    for (int j = 1; j <= jmax; ++j) {
      if (!ScalarOps<S>::is_zero(W[j])) {
        acc = acc + ScalarOps<S>::from_rational(Rational(j)) * W[j] * E[n - j];
      }
    }
    E[n] = ScalarOps<S>::div_int(acc, n);
  }
  return E;
}

}  // namespace detail

/**
 * Phi^{(p)}(W(z)) truncated to order N, for a series argument with
 * W(0) = 0 (true of every FF_m). Polynomial generators use Horner;
 * geometric and exponential kinds use their first-order recurrences;
 * zeta4 accumulates truncated powers of W term by term.
 */
template <typename S>
TruncatedSeries<S> compose_phi(const OffspringModel& model,
                               const TruncatedSeries<S>& W, int p, int N) {
  if (W.order() >= 0 && !ScalarOps<S>::is_zero(W[0])) {
    throw NumericError("compose_phi: argument must vanish at z = 0");
  }
  switch (model.kind) {
    case ModelKind::FiniteWeights: {
      TruncatedSeries<S> r(N);
      const int K = static_cast<int>(model.weights.size()) - 1;
      for (int k = K; k >= p; --k) {
        r = series_ops::mul(r, W, N);
        Rational coef = model.weights[static_cast<size_t>(k)];
        for (int i = 0; i < p; ++i) coef *= k - i;
        if (coef != 0) r[0] += ScalarOps<S>::from_rational(coef);
      }
      return r;
    }
    case ModelKind::GeometricAllOnes: {
      // Phi^{(p)} = p! / (1-W)^{p+1}
      TruncatedSeries<S> B = detail::geometric_inverse(W, N);
      TruncatedSeries<S> r = B;
      for (int i = 0; i < p; ++i) r = series_ops::mul(r, B, N);
      return series_ops::scale(
          r, ScalarOps<S>::from_rational(Rational(factorial_u64(p))));
    }
    case ModelKind::Exponential:
      return detail::exp_series(W, N);
    case ModelKind::Zeta4: {
      if (ScalarOps<S>::kind == ScalarKind::ExactRational) {
        throw DomainError("zeta4 generator has irrational weights; use a floating scalar");
      }
      const double c = (1.0 - model.zeta_a) / zeta4();
      TruncatedSeries<S> r(N);
      if (p == 0) r[0] = ScalarOps<S>::from_double(model.zeta_a);
      // term k: c (k)_p / k^4 * W^{k-p}; W^{k-p} has valuation >= k-p.
      TruncatedSeries<S> pw(N);
      pw[0] = ScalarOps<S>::one();
      const int k0 = std::max(1, p);
      for (int i = 0; i < k0 - p; ++i) pw = series_ops::mul(pw, W, N);
      for (int k = k0; k - p <= N; ++k) {
        const double kd = static_cast<double>(k);
        double coef = c / (kd * kd * kd * kd);
        for (int i = 0; i < p; ++i) coef *= kd - i;
        series_ops::add_scaled_inplace(r, pw, ScalarOps<S>::from_double(coef));
        pw = series_ops::mul(pw, W, N);
      }
      return r;
    }
  }
  throw DomainError("compose_phi: unknown model kind");
}

// ============================================================================
// The F family
// ============================================================================

template <typename S>
struct SeriesFamily {
  OffspringModel model;
  int M = 0;
  int N = 0;
  std::vector<TruncatedSeries<S>> F;   // F_0..F_M
  std::vector<TruncatedSeries<S>> FF;  // FF_m = sum_{k<=m} C(m,k) F_k
  std::vector<TruncatedSeries<S>> H;   // H_m = FF_m - F_m (built as a sum)
};

namespace detail {

/**
 * Solves F = z Phi(F + H) by progressive fixed-point sweeps; after sweep
 * u all coefficients up to u are final (the z prefactor fixes one more
 * coefficient per sweep), so truncating sweep u at order u costs
 * O(N^3 / 3) scalar multiplies overall instead of O(N^3).
 */
template <typename S>
TruncatedSeries<S> solve_generator_fixpoint(const OffspringModel& model,
                                            const TruncatedSeries<S>& H, int N) {
  TruncatedSeries<S> F(N);
  for (int u = 1; u <= N; ++u) {
    TruncatedSeries<S> W = series_ops::add(F, H, u - 1);
    TruncatedSeries<S> comp = compose_phi(model, W, 0, u - 1);
    for (int n = u; n >= 1; --n) F[n] = comp[n - 1];
  }
  return F;
}

}  // namespace detail

template <typename S>
SeriesFamily<S> compute_F_family(const OffspringModel& model, int M, int N) {
  if (M < 0 || N < 1) throw DomainError("compute_F_family: need M >= 0, N >= 1");
  SeriesFamily<S> fam;
  fam.model = model;
  fam.M = M;
  fam.N = N;
  for (int m = 0; m <= M; ++m) {
    TruncatedSeries<S> Hm(N);
    for (int k = 0; k < m; ++k) {
      series_ops::add_scaled_inplace(
          Hm, fam.F[static_cast<size_t>(k)],
          ScalarOps<S>::from_rational(Rational(binom(m, k))));
    }
    TruncatedSeries<S> Fm = detail::solve_generator_fixpoint(model, Hm, N);
    TruncatedSeries<S> FFm = series_ops::add(Fm, Hm, N);
    fam.F.push_back(std::move(Fm));
    fam.FF.push_back(std::move(FFm));
    fam.H.push_back(std::move(Hm));
  }
  return fam;
}

/// E R(T_n)^m = F_m[n] / F_0[n]; exact in rational mode.
template <typename S>
S exact_moment(const SeriesFamily<S>& fam, int m, int n) {
  if (m < 0 || m > fam.M || n < 0 || n > fam.N) {
    throw DomainError("exact_moment: order out of range");
  }
  const S& denom = fam.F[0][n];
  if (ScalarOps<S>::is_zero(denom)) {
    throw DomainError("exact_moment: no tree of size " + std::to_string(n));
  }
  return ScalarOps<S>::div(fam.F[static_cast<size_t>(m)][n], denom);
}

// ============================================================================
// The mixed family G_{m,l}
// ============================================================================

template <typename S>
struct MixedFamily {
  int M_total = 0;
  int N = 0;
  std::vector<TruncatedSeries<S>> table;  // indexed by m*(M_total+1)+l, m+l <= M_total

  const TruncatedSeries<S>& at(int m, int l) const {
    if (m < 0 || l < 0 || m + l > M_total) {
      throw DomainError("MixedFamily: index out of range");
    }
    return table[static_cast<size_t>(m * (M_total + 1) + l)];
  }
  TruncatedSeries<S>& at_mut(int m, int l) {
    return table[static_cast<size_t>(m * (M_total + 1) + l)];
  }
};

/**
 * Fills G_{m,l} for all m+l <= M_total by the full combinatorial recursion:
 * distributing the k non-root marks over p child subtrees contributes
 *
 *   z / p! * multinomial(k; k_1..k_p)
 *     * prod_j [ sum_i C(m+l-k, i) G_{k_j, i} ] * Phi^{(p)}(FF_{m+l-k}),
 *
 * summed over k = 1..m (times C(m,k)) and all compositions; the k = 0 term
 * is F_{m+l}. The single self-referential term (k = m, p = 1, i = l) enters
 * linearly with kernel z Phi'(FF_l), so a forward solve closes each G.
 */
template <typename S>
MixedFamily<S> compute_G_family(const SeriesFamily<S>& fam, int M_total, int N) {
  if (M_total > fam.M) {
    throw DomainError("compute_G_family: family order too small");
  }
  if (N > fam.N) throw DomainError("compute_G_family: N exceeds family order");
  MixedFamily<S> mix;
  mix.M_total = M_total;
  mix.N = N;
  mix.table.assign(static_cast<size_t>((M_total + 1) * (M_total + 1)),
                   TruncatedSeries<S>(N));

  // cache of Phi^{(p)}(FF_j)
  std::map<std::pair<int, int>, TruncatedSeries<S>> deriv_cache;
  auto phi_deriv = [&](int j, int p) -> const TruncatedSeries<S>& {
    auto key = std::make_pair(j, p);
    auto it = deriv_cache.find(key);
    if (it == deriv_cache.end()) {
      it = deriv_cache
               .emplace(key, compose_phi(fam.model, fam.FF[static_cast<size_t>(j)], p, N))
               .first;
    }
    return it->second;
  };

  for (int t = 0; t <= M_total; ++t) {
    for (int m = 0; m <= t; ++m) {
      const int l = t - m;
      if (m == 0) {
        for (int n = 0; n <= N; ++n) {
          mix.at_mut(0, l)[n] = fam.F[static_cast<size_t>(l)][n];
        }
        continue;
      }
      TruncatedSeries<S> known(N);
      for (int n = 0; n <= N; ++n) known[n] = fam.F[static_cast<size_t>(t)][n];

      for (int k = 1; k <= m; ++k) {
        const int TK = t - k;  // root marks available to the children
        for (int p = 1; p <= k; ++p) {
          const auto& phi_p = phi_deriv(TK, p);
          for (const auto& parts : compositions(k, p)) {
            Rational coef(BigInt(binom(m, k) * multinomial(k, parts)),
                          BigInt(factorial_u64(p)));
            TruncatedSeries<S> prod(N);
            prod[0] = ScalarOps<S>::one();
            for (int part : parts) {
              TruncatedSeries<S> inner(N);
              for (int i = 0; i <= TK; ++i) {
                if (part == m && i == l) {
                  // the unique self-referential term; handled by the kernel
                  continue;
                }
                series_ops::add_scaled_inplace(
                    inner, mix.at(part, i),
                    ScalarOps<S>::from_rational(Rational(binom(TK, i))));
              }
              prod = series_ops::mul(prod, inner, N);
            }
            TruncatedSeries<S> term =
                series_ops::shift_z(series_ops::mul(prod, phi_p, N), N);
            series_ops::add_scaled_inplace(known, term,
                                           ScalarOps<S>::from_rational(coef));
          }
        }
      }
      TruncatedSeries<S> kernel = series_ops::shift_z(phi_deriv(l, 1), N);
      mix.at_mut(m, l) = series_ops::forward_solve(known, kernel, N);
    }
  }
  return mix;
}

/// E[ S(T_n)^m R(T_n)^l ] = G_{m,l}[n] / F_0[n].
template <typename S>
S exact_mixed_moment(const MixedFamily<S>& mix, const SeriesFamily<S>& fam,
                     int m, int l, int n) {
  if (n < 0 || n > mix.N) throw DomainError("exact_mixed_moment: n out of range");
  const S& denom = fam.F[0][n];
  if (ScalarOps<S>::is_zero(denom)) {
    throw DomainError("exact_mixed_moment: no tree of size " + std::to_string(n));
  }
  return ScalarOps<S>::div(mix.at(m, l)[n], denom);
}

// ============================================================================
// Bivariate u-derivatives for the root-subtree size law
// ============================================================================

/**
 * F_1(z,u) = z u Phi(F_1(z,u) + F_0(z)); at u = 1 the derivatives
 * A = dF1/du and B = d2F1/du2 satisfy the linear forward systems
 *   A = F_1 + z Phi'(FF_1) A
 *   B = 2 z Phi'(FF_1) A + z Phi''(FF_1) A^2 + z Phi'(FF_1) B
 * (differentiate the defining equation once and twice, using
 * z Phi(FF_1) = F_1). Both are subtraction-free.
 */
template <typename S>
struct BivariateDerivatives {
  TruncatedSeries<S> F1;
  TruncatedSeries<S> dF1_du;
  TruncatedSeries<S> d2F1_du2;
};

template <typename S>
BivariateDerivatives<S> compute_bivariate(const SeriesFamily<S>& fam, int N) {
  if (fam.M < 1) throw DomainError("compute_bivariate: family needs F_0 and F_1");
  if (N > fam.N) throw DomainError("compute_bivariate: N exceeds family order");
  BivariateDerivatives<S> biv;
  biv.F1 = TruncatedSeries<S>(N);
  for (int n = 0; n <= N; ++n) biv.F1[n] = fam.F[1][n];

  TruncatedSeries<S> P =
      series_ops::shift_z(compose_phi(fam.model, fam.FF[1], 1, N), N);
  TruncatedSeries<S> Q =
      series_ops::shift_z(compose_phi(fam.model, fam.FF[1], 2, N), N);

  biv.dF1_du = series_ops::forward_solve(biv.F1, P, N);

  TruncatedSeries<S> PA = series_ops::mul(P, biv.dF1_du, N);
  TruncatedSeries<S> A2 = series_ops::mul(biv.dF1_du, biv.dF1_du, N);
  TruncatedSeries<S> knownB = series_ops::mul(Q, A2, N);
  series_ops::add_scaled_inplace(knownB, PA,
                                 ScalarOps<S>::from_rational(Rational(2)));
  biv.d2F1_du2 = series_ops::forward_solve(knownB, P, N);
  return biv;
}

/// E X_n (mean size of a uniform root subtree of a size-n tree).
template <typename S>
double mean_root_subtree_size(const BivariateDerivatives<S>& biv, int n) {
  if (ScalarOps<S>::is_zero(biv.F1[n])) {
    throw DomainError("mean_root_subtree_size: no tree of size " + std::to_string(n));
  }
  return ScalarOps<S>::to_double(ScalarOps<S>::div(biv.dF1_du[n], biv.F1[n]));
}

/// Second factorial moment E X_n (X_n - 1).
template <typename S>
double second_factorial_root_subtree_size(const BivariateDerivatives<S>& biv, int n) {
  if (ScalarOps<S>::is_zero(biv.F1[n])) {
    throw DomainError("second_factorial_root_subtree_size: no tree of size " +
                      std::to_string(n));
  }
  return ScalarOps<S>::to_double(ScalarOps<S>::div(biv.d2F1_du2[n], biv.F1[n]));
}

}  // namespace census
