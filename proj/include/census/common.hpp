#pragma once

/**
 * Shared numeric foundation: error types, arbitrary-precision aliases,
 * the log-domain scalar, binomial helpers and zeta constants.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace census {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// ============================================================================
// Errors
// ============================================================================

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (model specs, tree strings, CLI values).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Structurally valid input outside an operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numeric failure at runtime (divergence, missing branch point, overflow).
class NumericError : public Error {
 public:
  using Error::Error;
};

// ============================================================================
// Log-domain nonnegative scalar
// ============================================================================

/**
 * Nonnegative real stored as its natural log. Addition is log-sum-exp,
 * multiplication is addition of logs. Zero is encoded as -inf.
 *
 * Intended for series whose coefficients overflow double range
 * (tree-counting coefficients grow like rho^-n).
 */
struct LogDouble {
  double lg = -std::numeric_limits<double>::infinity();

  LogDouble() = default;

  static LogDouble from_log(double l) {
    LogDouble x;
    x.lg = l;
    return x;
  }

  static LogDouble from_double(double v) {
    if (v < 0.0) throw DomainError("LogDouble: negative value");
    return from_log(v == 0.0 ? -std::numeric_limits<double>::infinity()
                             : std::log(v));
  }

  bool is_zero() const { return lg == -std::numeric_limits<double>::infinity(); }
  double log_value() const { return lg; }
  double value() const { return std::exp(lg); }  // may overflow to +inf

  LogDouble& operator+=(LogDouble o) {
    if (o.is_zero()) return *this;
    if (is_zero()) {
      lg = o.lg;
      return *this;
    }
    double hi = lg, lo = o.lg;
    if (lo > hi) std::swap(hi, lo);
    lg = hi + std::log1p(std::exp(lo - hi));
    return *this;
  }

  LogDouble& operator*=(LogDouble o) {
    lg = (is_zero() || o.is_zero())
             ? -std::numeric_limits<double>::infinity()
             : lg + o.lg;
    return *this;
  }

  friend LogDouble operator+(LogDouble a, LogDouble b) { return a += b; }
  friend LogDouble operator*(LogDouble a, LogDouble b) { return a *= b; }
  friend bool operator==(LogDouble a, LogDouble b) { return a.lg == b.lg; }
  friend bool operator<(LogDouble a, LogDouble b) { return a.lg < b.lg; }
};

/// x / y in log space; y must be nonzero.
inline LogDouble div(LogDouble a, LogDouble b) {
  if (b.is_zero()) throw NumericError("LogDouble: division by zero");
  if (a.is_zero()) return LogDouble{};
  return LogDouble::from_log(a.lg - b.lg);
}

// ============================================================================
// Scalar adapters
// ============================================================================

/// Names matching the TruncatedSeries scalar kinds.
enum class ScalarKind { ExactRational, DoublePrecision, LogDomainDouble };

template <typename S>
struct ScalarOps;

template <>
struct ScalarOps<double> {
  static constexpr ScalarKind kind = ScalarKind::DoublePrecision;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_rational(const Rational& q) {
    return static_cast<double>(q);
  }
  static double from_double(double v) { return v; }
  static double to_double(double v) { return v; }
  static bool is_zero(double v) { return v == 0.0; }
  static double div_int(double v, long n) { return v / static_cast<double>(n); }
  static double div(double a, double b) { return a / b; }
};

template <>
struct ScalarOps<Rational> {
  static constexpr ScalarKind kind = ScalarKind::ExactRational;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_rational(const Rational& q) { return q; }
  static Rational from_double(double v) { return Rational(v); }
  static double to_double(const Rational& v) { return static_cast<double>(v); }
  static bool is_zero(const Rational& v) { return v == 0; }
  static Rational div_int(const Rational& v, long n) {
    return v / Rational(n);
  }
  static Rational div(const Rational& a, const Rational& b) { return a / b; }
};

template <>
struct ScalarOps<LogDouble> {
  static constexpr ScalarKind kind = ScalarKind::LogDomainDouble;
  static LogDouble zero() { return LogDouble{}; }
  static LogDouble one() { return LogDouble::from_log(0.0); }
  static LogDouble from_rational(const Rational& q) {
    if (q < 0) throw DomainError("LogDouble scalar: negative weight");
    return LogDouble::from_double(static_cast<double>(q));
  }
  static LogDouble from_double(double v) { return LogDouble::from_double(v); }
  static double to_double(LogDouble v) { return v.value(); }
  static bool is_zero(LogDouble v) { return v.is_zero(); }
  static LogDouble div_int(LogDouble v, long n) {
    return census::div(v, LogDouble::from_double(static_cast<double>(n)));
  }
  static LogDouble div(LogDouble a, LogDouble b) { return census::div(a, b); }
};

inline const char* scalar_kind_name(ScalarKind k) {
  switch (k) {
    case ScalarKind::ExactRational: return "exact-rational";
    case ScalarKind::DoublePrecision: return "double-precision";
    case ScalarKind::LogDomainDouble: return "log-domain-double";
  }
  return "?";
}

// ============================================================================
// Small combinatorics
// ============================================================================

/// Binomial coefficient for the small orders used by the moment systems.
inline unsigned long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned long long>(n - k + i) /
        static_cast<unsigned long long>(i);
  }
  return r;
}

inline unsigned long long factorial_u64(int n) {
  unsigned long long r = 1;
  for (int i = 2; i <= n; ++i) r *= static_cast<unsigned long long>(i);
  return r;
}

/// multinomial(k; k_1..k_p) = k! / (k_1! ... k_p!)
inline unsigned long long multinomial(int k, const std::vector<int>& parts) {
  unsigned long long r = factorial_u64(k);
  for (int p : parts) r /= factorial_u64(p);
  return r;
}

/// All ordered compositions of k into exactly p parts, each part >= 1.
inline std::vector<std::vector<int>> compositions(int k, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(p);
  auto rec = [&](auto&& self, int pos, int rem) -> void {
    if (pos == p - 1) {
      cur[pos] = rem;
      out.push_back(cur);
      return;
    }
    for (int v = 1; v <= rem - (p - 1 - pos); ++v) {
      cur[pos] = v;
      self(self, pos + 1, rem - v);
    }
  };
  if (k >= p && p >= 1) rec(rec, 0, k);
  return out;
}

// ============================================================================
// Zeta constants
// ============================================================================

/**
 * zeta(3) by direct summation with an Euler-Maclaurin tail; truncation
 * error below 1e-18 at K = 2000.
 */
inline double zeta3() {
  static const double value = [] {
    const int K = 2000;
    double s = 0.0;
    for (int k = K - 1; k >= 1; --k) s += 1.0 / (static_cast<double>(k) * k * k);
    const double Kd = K;
    // sum_{k>=K} k^-3 = 1/(2K^2) + 1/(2K^3) + 1/(4K^4) - 1/(12K^6) + ...
    s += 0.5 / (Kd * Kd) + 0.5 / (Kd * Kd * Kd) + 0.25 / (Kd * Kd * Kd * Kd);
    return s;
  }();
  return value;
}

/// zeta(4) = pi^4 / 90.
inline double zeta4() {
  static const double value = std::pow(4.0 * std::atan(1.0), 4) / 90.0;
  return value;
}

/// zeta(2) = pi^2 / 6 (needed for the second derivative of the zeta4 generator).
inline double zeta2() {
  static const double value = std::pow(4.0 * std::atan(1.0), 2) / 6.0;
  return value;
}

// ============================================================================
// Decimal parsing
// ============================================================================

/// Parse a plain decimal like "1", "0.25", "12.5" into an exact Rational.
inline Rational parse_decimal(const std::string& text) {
  if (text.empty()) throw ParseError("empty decimal");
  size_t pos = 0;
  bool neg = false;
  if (text[pos] == '+' || text[pos] == '-') {
    neg = text[pos] == '-';
    ++pos;
  }
  BigInt num = 0;
  BigInt den = 1;
  bool saw_digit = false, saw_dot = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c == '.') {
      if (saw_dot) throw ParseError("malformed decimal: " + text);
      saw_dot = true;
    } else if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      if (saw_dot) den *= 10;
      saw_digit = true;
    } else {
      throw ParseError("malformed decimal: " + text);
    }
  }
  if (!saw_digit) throw ParseError("malformed decimal: " + text);
  Rational q(num, den);
  return neg ? -q : q;
}

}  // namespace census
