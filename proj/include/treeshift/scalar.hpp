#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <mpfr.h>

#include <stdexcept>
#include <string>
#include <variant>

namespace treeshift {

using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;  // dynamic precision

enum class Regime { exact, floating };

struct regime_mismatch : std::logic_error {
  regime_mismatch() : std::logic_error("scalar regime mismatch") {}
};

/// A number in one of two regimes: an exact rational, or a floating value at
/// the configured MPFR precision. Arithmetic never mixes regimes; comparisons
/// across regimes are exact (mpfr_cmp_q, no rounding).
class Scalar {
 public:
  Scalar() : v_(Rational(0)) {}
  Scalar(const Rational& r) : v_(r) {}
  Scalar(Rational&& r) : v_(std::move(r)) {}
  Scalar(const Real& x) : v_(x) {}
  Scalar(long n) : v_(Rational(n)) {}
  Scalar(int n) : v_(Rational(n)) {}

  static Scalar rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Scalar(Rational(num, den));
  }
  static Scalar floating_of(const Scalar& s) {
    if (s.regime() == Regime::floating) return s;
    return Scalar(Real(s.rat()));
  }

  /// Sets the floating regime's working precision. `bits` is a lower bound;
  /// the MPFR precision actually used is at least that.
  static void set_float_precision(unsigned bits);
  static unsigned float_precision_bits();
  /// 2^{-(p-64)}: relative rounding allowance used by float-regime
  /// certifications (64 guard bits cover the op counts in this codebase).
  static Scalar float_guard();

  Regime regime() const {
    return std::holds_alternative<Rational>(v_) ? Regime::exact : Regime::floating;
  }
  bool is_exact() const { return regime() == Regime::exact; }

  const Rational& rat() const {
    if (!is_exact()) throw regime_mismatch();
    return std::get<Rational>(v_);
  }
  const Real& real() const {
    if (is_exact()) throw regime_mismatch();
    return std::get<Real>(v_);
  }

  Scalar operator-() const;
  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  /// Integer power, negative exponents allowed (base must be nonzero then).
  Scalar pow(long e) const;
  Scalar abs() const;
  bool is_zero() const;
  /// -1, 0, +1. Exact in both regimes (a floating value has a definite sign).
  int sign() const;

  /// Three-way compare; exact across regimes.
  int compare(const Scalar& o) const;
  bool operator==(const Scalar& o) const { return compare(o) == 0; }
  bool operator!=(const Scalar& o) const { return compare(o) != 0; }
  bool operator<(const Scalar& o) const { return compare(o) < 0; }
  bool operator<=(const Scalar& o) const { return compare(o) <= 0; }
  bool operator>(const Scalar& o) const { return compare(o) > 0; }
  bool operator>=(const Scalar& o) const { return compare(o) >= 0; }

  std::string str() const;
  double to_double() const;

  /// Parses "p/q" or a plain integer into the exact regime, or a decimal
  /// literal into the requested regime.
  static Scalar parse(const std::string& s, Regime regime);

 private:
  std::variant<Rational, Real> v_;
};

// Float-regime elementary functions (throw regime_mismatch on exact input).
Scalar exp(const Scalar& x);
Scalar log(const Scalar& x);
Scalar sin(const Scalar& x);
Scalar sqrt(const Scalar& x);
Scalar pi_value();

inline Scalar operator*(long n, const Scalar& s) { return Scalar(n) * s; }

}  // namespace treeshift
