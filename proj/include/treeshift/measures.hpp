#pragma once

#include <functional>
#include <string>
#include <vector>

#include "treeshift/bounded_sum.hpp"

namespace treeshift {

struct infinite_moment : std::domain_error {
  infinite_moment() : std::domain_error("negative moment of a measure with mass at 0") {}
};
struct inconclusive_comparison : std::runtime_error {
  explicit inconclusive_comparison(const std::string& what) : std::runtime_error(what) {}
};

struct Atom {
  Scalar x;  // position, > 0
  Scalar w;  // weight before normalization, > 0
};

/// A finitely materialized positive atomic measure
///   (1/divisor) * (sum_i w_i delta_{x_i} + mass_at_zero * delta_0),
/// optionally the truncation of an infinite one: `numerator_tail(n)` then
/// bounds the un-normalized mass sum_omitted w x^n of the dropped atoms.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<Atom> atoms, Scalar mass_at_zero = Scalar(0),
                  BoundedSum divisor = BoundedSum(Scalar(1)),
                  std::function<Scalar(long)> numerator_tail = {});

  const std::vector<Atom>& atoms() const { return atoms_; }
  const Scalar& mass_at_zero() const { return mass0_; }
  const BoundedSum& divisor() const { return divisor_; }
  bool is_truncated() const { return static_cast<bool>(tail_); }

  /// n-th moment, n of either sign; n = 0 includes the mass at zero.
  BoundedSum moment(long n) const;
  BoundedSum total_mass() const { return moment(0); }

  std::string to_json() const;

 private:
  std::vector<Atom> atoms_;
  Scalar mass0_;
  BoundedSum divisor_;
  std::function<Scalar(long)> tail_;
};

/// nu_mu of the backward-extension bijection: atom (x, w) -> (x, w/x) with the
/// leftover gamma_{-1} - int(1/x)dmu placed at zero. Finite measures only;
/// requires moment(mu, -1) <= gamma_minus1 (certified).
DiscreteMeasure backward_transform_nu(const DiscreteMeasure& mu, const Scalar& gamma_minus1);

/// The inverse map mu_nu(sigma) = int_sigma x dnu: atom (x, w) -> (x, w*x),
/// mass at zero discarded.
DiscreteMeasure backward_transform_mu(const DiscreteMeasure& nu);

/// The q-family of Stieltjes-indeterminate data: zeta_n = q^{-n^2/2} and the
/// discrete representing measures lambda_a with atoms a q^k, k in Z. Held via
/// s = sqrt(q) so every atom and weight is rational in the exact regime.
class QStieltjesFamily {
 public:
  QStieltjesFamily(Scalar sqrt_q, Scalar a);

  const Scalar& sqrt_q() const { return s_; }
  Scalar q() const { return s_ * s_; }
  const Scalar& a() const { return a_; }

  Scalar zeta(long n) const { return s_.pow(-n * n); }
  /// Term a^k q^{k^2/2} of the normalizer L(a) = sum over k in Z.
  Scalar theta_term(long k) const { return a_.pow(k) * s_.pow(k * k); }
  /// First index from which the paired two-sided term ratios are provably
  /// <= 1/2 (monotone decay, so the bound holds from here on).
  long ratio_from() const { return ratio_from_; }
  /// Certified bound on sum_{|k| > window} theta_term(k).
  Scalar theta_tail_bound(long window) const;
  BoundedSum big_l(long window) const;

  /// lambda_a truncated to atoms a q^k, |k| <= K, with divisor L(a) and a
  /// moment tail certificate (valid for |n| <= K - ratio_from() + 1).
  DiscreteMeasure lambda_a(long K) const;

  /// Enclosure of int x^m d(lambda_a) sharpened through the reindexing
  /// identity theta_k x_k^m = zeta_m theta_{k+m}: the window sum is part of
  /// the full normalizer series, so zeta_m is an exact upper bound.
  BoundedSum moment_enclosure(long K, long m) const;

  /// sqrt(-log q), float regime.
  Scalar sigma() const;
  /// Density value of the absolutely continuous family member omega_theta.
  Scalar eval_omega_theta(const Scalar& theta, const Scalar& x) const;

 private:
  Scalar s_;
  Scalar a_;
  long ratio_from_;
};

}  // namespace treeshift
