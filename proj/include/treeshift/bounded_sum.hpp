#pragma once

#include <functional>

#include "treeshift/scalar.hpp"

namespace treeshift {

enum class Cmp { certified_less, certified_greater, certified_equal, inconclusive };

/// A certified enclosure of a nonnegative-term series (or any derived
/// quantity): the true value lies in [partial, partial + tail_bound].
class BoundedSum {
 public:
  BoundedSum() : partial_(0), tail_(0) {}
  explicit BoundedSum(Scalar exact) : partial_(std::move(exact)), tail_(zero_like(partial_)) {}
  BoundedSum(Scalar partial, Scalar tail_bound)
      : partial_(std::move(partial)), tail_(std::move(tail_bound)) {
    if (tail_.sign() < 0) throw std::invalid_argument("negative tail bound");
  }
  static BoundedSum from_interval(const Scalar& lo, const Scalar& hi) {
    return BoundedSum(lo, hi - lo);
  }

  const Scalar& partial() const { return partial_; }
  const Scalar& tail_bound() const { return tail_; }
  const Scalar& lower() const { return partial_; }
  Scalar upper() const { return partial_ + tail_; }
  Scalar width() const { return tail_; }
  Scalar midpoint() const { return partial_ + tail_ / two_like(partial_); }
  bool is_point() const { return tail_.is_zero(); }

  BoundedSum operator+(const BoundedSum& o) const {
    return BoundedSum(partial_ + o.partial_, tail_ + o.tail_);
  }
  BoundedSum operator-(const BoundedSum& o) const {
    return from_interval(lower() - o.upper(), upper() - o.lower());
  }
  /// Product, both factors certified nonnegative.
  BoundedSum operator*(const BoundedSum& o) const {
    if (lower().sign() < 0 || o.lower().sign() < 0)
      throw std::domain_error("interval product needs nonnegative operands");
    return from_interval(lower() * o.lower(), upper() * o.upper());
  }
  BoundedSum operator/(const BoundedSum& o) const {
    if (lower().sign() < 0 || o.lower().sign() <= 0)
      throw std::domain_error("interval quotient needs positive divisor");
    return from_interval(lower() / o.upper(), upper() / o.lower());
  }
  BoundedSum scaled(const Scalar& c) const {  // c may be negative
    if (c.sign() >= 0) return from_interval(lower() * c, upper() * c);
    return from_interval(upper() * c, lower() * c);
  }

  bool contains(const Scalar& x) const { return lower() <= x && x <= upper(); }

  Cmp compare(const Scalar& threshold) const {
    if (upper() < threshold) return Cmp::certified_less;
    if (lower() > threshold) return Cmp::certified_greater;
    if (is_point() && partial_ == threshold) return Cmp::certified_equal;
    return Cmp::inconclusive;
  }
  bool certified_le(const Scalar& t) const { return upper() <= t; }
  bool certified_ge(const Scalar& t) const { return lower() >= t; }
  bool certified_lt(const Scalar& t) const { return upper() < t; }
  bool certified_gt(const Scalar& t) const { return lower() > t; }
  /// a <= b certified: upper(a) <= lower(b).
  static bool certified_le(const BoundedSum& a, const BoundedSum& b) {
    return a.upper() <= b.lower();
  }

 private:
  static Scalar zero_like(const Scalar& s) {
    return s.is_exact() ? Scalar(0) : Scalar(Real(0));
  }
  static Scalar two_like(const Scalar& s) {
    return s.is_exact() ? Scalar(2) : Scalar(Real(2));
  }
  Scalar partial_;
  Scalar tail_;
};

/// Certified truncation of a nonnegative series with eventually
/// superexponential decay. Terms are enumerated by `term(k)` for k = 0..K;
/// the caller warrants that successive term ratios stay <= 1/2 from index
/// `ratio_bound_from` on. Ratios are verified term-by-term on [K0, K+2];
/// the returned tail bound is 2 * term(K+1), valid by geometric domination.
BoundedSum sum_superexp(const std::function<Scalar(long)>& term, long ratio_bound_from,
                        long truncation);

struct decay_certificate_error : std::runtime_error {
  explicit decay_certificate_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace treeshift
