#include "doctest.h"

#include "census/enumerate.hpp"
#include "census/series.hpp"
#include "census/tree.hpp"

#include <cmath>

using namespace census;

namespace {

// exhaustive sums sum_T w(T) S(T)^m R(T)^l for all m + l <= top, one pass per n
struct OracleSums {
  int top;
  std::vector<Rational> table;  // [m][l]
  Rational& at(int m, int l) { return table[static_cast<size_t>(m * (top + 1) + l)]; }
};

OracleSums oracle_mixed_sums(const OffspringModel& model, int n, int top) {
  OracleSums out{top, std::vector<Rational>(
                          static_cast<size_t>((top + 1) * (top + 1)), Rational(0))};
  for_each_tree(model, n, [&](const std::vector<uint32_t>& deg) {
    Rational w = 1;
    for (uint32_t d : deg) w *= model.weight_q(static_cast<int>(d));
    OrderedTree t;
    t.degrees = deg;
    BigInt r = count_root_subtrees(t);
    BigInt s = count_subtrees(t);
    std::vector<BigInt> rp(static_cast<size_t>(top) + 1, BigInt(1));
    std::vector<BigInt> sp(static_cast<size_t>(top) + 1, BigInt(1));
    for (int i = 1; i <= top; ++i) {
      rp[static_cast<size_t>(i)] = rp[static_cast<size_t>(i - 1)] * r;
      sp[static_cast<size_t>(i)] = sp[static_cast<size_t>(i - 1)] * s;
    }
    for (int m = 0; m <= top; ++m) {
      for (int l = 0; m + l <= top; ++l) {
        out.at(m, l) += w * Rational(sp[static_cast<size_t>(m)] *
                                     rp[static_cast<size_t>(l)]);
      }
    }
  });
  return out;
}

}  // namespace

TEST_CASE("series_engine: binary-full F_0 gives the Catalan numbers") {
  auto fam = compute_F_family<Rational>(parse_model("binary-full"), 0, 13);
  CHECK(fam.F[0][1] == 1);
  CHECK(fam.F[0][3] == 1);
  CHECK(fam.F[0][5] == 2);
  CHECK(fam.F[0][7] == 5);
  CHECK(fam.F[0][9] == 14);
  CHECK(fam.F[0][11] == 42);
  CHECK(fam.F[0][13] == 132);
  // off-lattice coefficients vanish
  for (int n = 0; n <= 13; n += 2) CHECK(fam.F[0][n] == 0);
}

TEST_CASE("series_engine: binary-full F_1 matches the brute-force sums") {
  auto fam = compute_F_family<Rational>(parse_model("binary-full"), 1, 5);
  CHECK(fam.F[1][1] == 1);
  CHECK(fam.F[1][3] == 4);
  CHECK(fam.F[1][5] == 20);
}

TEST_CASE("series_engine: F_m[1] = w_0 for all m") {
  for (const char* spec : {"binary-full", "catalan", "poisson", "weights:3,0,1"}) {
    auto fam = compute_F_family<double>(parse_model(spec), 3, 4);
    for (int m = 0; m <= 3; ++m) {
      CHECK(fam.F[static_cast<size_t>(m)][1] ==
            doctest::Approx(parse_model(spec).weight_d(0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("series_engine: oracle equivalence for F and G families (n <= 13)") {
  for (const char* spec : {"binary-full", "catalan"}) {
    OffspringModel model = parse_model(spec);
    const int N = 13;
    auto fam = compute_F_family<Rational>(model, 3, N);
    auto mix = compute_G_family<Rational>(fam, 3, N);
    for (int n = 1; n <= N; n += model.span) {
      OracleSums oracle = oracle_mixed_sums(model, n, 3);
      for (int m = 0; m <= 3; ++m) {
        CHECK(fam.F[static_cast<size_t>(m)][n] == oracle.at(0, m));
      }
      for (int m = 0; m <= 3; ++m) {
        for (int l = 0; m + l <= 3; ++l) {
          CHECK(mix.at(m, l)[n] == oracle.at(m, l));
        }
      }
    }
  }
}

TEST_CASE("series_engine: frozen mixed-family values (binary-full)") {
  // values fixed from the brute-force oracle
  auto fam = compute_F_family<Rational>(parse_model("binary-full"), 2, 5);
  auto mix = compute_G_family<Rational>(fam, 2, 5);
  CHECK(mix.at(1, 0)[1] == 1);
  CHECK(mix.at(1, 0)[3] == 6);    // S(cherry) = 6
  CHECK(mix.at(1, 0)[5] == 34);   // two trees, S = 17 each
  CHECK(mix.at(1, 1)[3] == 24);   // S * R of the cherry
  CHECK(mix.at(2, 0)[5] == 578);  // 2 * 17^2
  CHECK(exact_mixed_moment(mix, fam, 1, 0, 3) == Rational(6));
  CHECK(exact_mixed_moment(mix, fam, 2, 0, 5) == Rational(289));
}

TEST_CASE("series_engine: exact moments (binary-full)") {
  auto fam = compute_F_family<Rational>(parse_model("binary-full"), 2, 5);
  CHECK(exact_moment(fam, 1, 3) == Rational(4));    // unique tree, the cherry
  CHECK(exact_moment(fam, 2, 5) == Rational(100));  // two trees, R = 10 each
  CHECK_THROWS_AS(exact_moment(fam, 1, 4), DomainError);  // no tree of size 4
}

TEST_CASE("series_engine: mixed moment reduces to the pure moment at m = 0") {
  auto fam = compute_F_family<Rational>(parse_model("catalan"), 3, 9);
  auto mix = compute_G_family<Rational>(fam, 3, 9);
  for (int n = 1; n <= 9; ++n) {
    for (int l = 0; l <= 3; ++l) {
      CHECK(exact_mixed_moment(mix, fam, 0, l, n) == exact_moment(fam, l, n));
    }
  }
}

TEST_CASE("series_engine: family invariants") {
  for (const char* spec : {"binary-full", "catalan", "poisson"}) {
    OffspringModel model = parse_model(spec);
    auto fam = compute_F_family<Rational>(model, 3, 12);
    auto mix = compute_G_family<Rational>(fam, 2, 12);
    for (int n = 0; n <= 12; ++n) {
      // nonnegative everywhere, zero off the span lattice
      for (int m = 0; m <= 3; ++m) {
        CHECK(fam.F[static_cast<size_t>(m)][n] >= 0);
        if (n > 0 && (n - 1) % model.span != 0) {
          CHECK(fam.F[static_cast<size_t>(m)][n] == 0);
        }
        // F_m >= F_{m-1} coefficientwise (R >= 1)
        if (m > 0) {
          CHECK(fam.F[static_cast<size_t>(m)][n] >=
                fam.F[static_cast<size_t>(m - 1)][n]);
        }
        // FF_m = sum_k C(m,k) F_k
        Rational ff = 0;
        for (int k = 0; k <= m; ++k) {
          ff += Rational(binom(m, k)) * fam.F[static_cast<size_t>(k)][n];
        }
        CHECK(fam.FF[static_cast<size_t>(m)][n] == ff);
      }
      // G_{0,l} = F_l ; G_{1,0} >= F_1 (S >= R) ; G_{1,0} <= n F_1 (S <= nR)
      CHECK(mix.at(0, 2)[n] == fam.F[2][n]);
      CHECK(mix.at(1, 0)[n] >= fam.F[1][n]);
      CHECK(mix.at(1, 0)[n] <= Rational(n) * fam.F[1][n]);
    }
  }
}

TEST_CASE("series_engine: closed-form evaluation check at N = 200 (binary-full)") {
  // F_0 = (1 - sqrt(1-4z^2))/(2z); F_1, F_2 from the nested radicals.
  // F_2 only converges up to rho_2 ~ 0.2317, so its check stops at z = 0.2.
  auto fam = compute_F_family<double>(parse_model("binary-full"), 2, 200);
  for (double z : {0.1, 0.2, 0.3}) {
    double disc = std::sqrt(1.0 - 4.0 * z * z);
    double f0 = (1.0 - disc) / (2.0 * z);
    double inner = std::sqrt(2.0 * disc - 1.0 - 4.0 * z * z);
    double f1 = (1.0 - inner) / (2.0 * z) - f0;
    CHECK(series_ops::eval_double(fam.F[0], z) == doctest::Approx(f0).epsilon(1e-10));
    CHECK(series_ops::eval_double(fam.F[1], z) == doctest::Approx(f1).epsilon(1e-10));
    if (z < 0.21) {
      double f2 = (2.0 * inner - disc -
                   std::sqrt(4.0 * inner - 2.0 * disc - 1.0 - 4.0 * z * z)) /
                  (2.0 * z);
      CHECK(series_ops::eval_double(fam.F[2], z) ==
            doctest::Approx(f2).epsilon(1e-10));
    }
  }
}

TEST_CASE("series_engine: scalar kinds agree (double vs rational vs log-domain)") {
  OffspringModel model = parse_model("catalan");
  auto fq = compute_F_family<Rational>(model, 2, 30);
  auto fd = compute_F_family<double>(model, 2, 30);
  auto fl = compute_F_family<LogDouble>(model, 2, 30);
  for (int m = 0; m <= 2; ++m) {
    for (int n = 1; n <= 30; ++n) {
      double exact = static_cast<double>(fq.F[static_cast<size_t>(m)][n]);
      CHECK(fd.F[static_cast<size_t>(m)][n] == doctest::Approx(exact).epsilon(1e-11));
      if (exact > 0) {
        CHECK(fl.F[static_cast<size_t>(m)][n].log_value() ==
              doctest::Approx(std::log(exact)).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("series_engine: log-domain handles orders far beyond double range") {
  // F_2 coefficients near n = 1500 are ~ 10^{950}; log-domain stays finite
  auto fam = compute_F_family<LogDouble>(parse_model("binary-full"), 2, 1501);
  double lg = fam.F[2][1501].log_value();
  CHECK(std::isfinite(lg));
  CHECK(lg > 2000.0);  // ~ 1501 * log(1/rho_2) - 1.5 log 1501
  CHECK(lg < 2300.0);
  // moment ratio still finite and sensible: E R^2 per tree grows like tau_2^n
  LogDouble ratio = exact_moment(fam, 2, 1501);
  CHECK(ratio.log_value() == doctest::Approx(1501 * std::log(2.158182) +
                                             std::log(2.3605) )
                                 .epsilon(2e-3));
}

TEST_CASE("series_engine: bivariate derivatives against the subtree enumeration") {
  // verify the two differentiated recurrences against exhaustive root-subtree
  // size sums for n <= 9 before trusting them at large N
  for (const char* spec : {"binary-full", "catalan"}) {
    OffspringModel model = parse_model(spec);
    auto fam = compute_F_family<Rational>(model, 1, 9);
    auto biv = compute_bivariate<Rational>(fam, 9);
    for (int n = 1; n <= 9; n += model.span) {
      // enumerate (T, T') pairs: sum |T'| and |T'|(|T'|-1) over root subtrees
      Rational sum1 = 0, sum2 = 0;
      for_each_tree(model, n, [&](const std::vector<uint32_t>& deg) {
        Rational w = 1;
        for (uint32_t d : deg) w *= model.weight_q(static_cast<int>(d));
        OrderedTree t;
        t.degrees = deg;
        const size_t nn = t.size();
        // parent array for subset connectivity
        std::vector<int> parent(nn, -1);
        {
          std::vector<int> stack_nodes;
          std::vector<uint32_t> remaining(nn);
          for (size_t i = 0; i < nn; ++i) {
            if (i > 0) {
              parent[i] = stack_nodes.back();
              if (--remaining[static_cast<size_t>(stack_nodes.back())] == 0) {
                stack_nodes.pop_back();
              }
            }
            remaining[i] = t.degrees[i];
            if (remaining[i] > 0) stack_nodes.push_back(static_cast<int>(i));
          }
        }
        for (uint32_t mask = 1; mask < (1u << nn); mask += 2) {  // root always in
          bool root_subtree = true;
          int size = 0;
          for (size_t i = 0; i < nn; ++i) {
            if (!(mask >> i & 1u)) continue;
            ++size;
            if (parent[i] >= 0 && !(mask >> parent[i] & 1u)) {
              root_subtree = false;
              break;
            }
          }
          if (root_subtree) {
            sum1 += w * size;
            sum2 += w * size * (size - 1);
          }
        }
      });
      CHECK(biv.dF1_du[n] == sum1);
      CHECK(biv.d2F1_du2[n] == sum2);
    }
  }
}

TEST_CASE("series_engine: E X_n examples") {
  auto fam = compute_F_family<Rational>(parse_model("binary-full"), 1, 5);
  auto biv = compute_bivariate<Rational>(fam, 5);
  CHECK(mean_root_subtree_size(biv, 1) == doctest::Approx(1.0));
  // cherry: root subtree sizes 1,2,2,3
  CHECK(mean_root_subtree_size(biv, 3) == doctest::Approx(2.0));
  CHECK(second_factorial_root_subtree_size(biv, 3) == doctest::Approx(2.5));
}

TEST_CASE("series_engine: E X_n nondecreasing and bounded by n") {
  auto fam = compute_F_family<double>(parse_model("binary-full"), 1, 101);
  auto biv = compute_bivariate<double>(fam, 101);
  double prev = 0.0;
  for (int n = 1; n <= 101; n += 2) {
    double ex = mean_root_subtree_size(biv, n);
    CHECK(ex >= prev - 1e-12);
    CHECK(ex <= static_cast<double>(n) + 1e-9);
    prev = ex;
  }
}

TEST_CASE("series_engine: G_{1,0}/F_1 ratio approaches 1/(sqrt(3)-1)") {
  auto fam = compute_F_family<double>(parse_model("binary-full"), 1, 401);
  auto mix = compute_G_family<double>(fam, 1, 401);
  double r201 = mix.at(1, 0)[201] / fam.F[1][201];
  double r401 = mix.at(1, 0)[401] / fam.F[1][401];
  const double limit = 1.0 / (std::sqrt(3.0) - 1.0);
  CHECK(std::abs(r401 - limit) < std::abs(r201 - limit));  // converging
  // two-point Richardson in 1/n lands close to the limit
  double extrap = (401.0 * r401 - 201.0 * r201) / 200.0;
  CHECK(extrap == doctest::Approx(limit).epsilon(2e-4));
}
