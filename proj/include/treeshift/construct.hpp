#pragma once

#include "treeshift/moments.hpp"
#include "treeshift/shift.hpp"

namespace treeshift {

/// Input to the weight-building scheme: a moment system gamma (window
/// reaching down to -kappa), a representing measure rho for the shifted
/// sequence, and a partition of rho's atoms into branch groups.
struct ConstructionInput {
  MomentSequence gamma;
  DiscreteMeasure rho;
  std::vector<std::vector<size_t>> partition;  // groups of atom indices
  std::optional<long> kappa;
};

/// One group per atom, in stored order. Each group then carries the
/// restriction rho|_{Omega_i} = rho({q_i}) delta_{q_i}.
std::vector<std::vector<size_t>> singleton_partition(const DiscreteMeasure& rho);

/// Weights from the scheme: lambda_{i,1}^2 = rho(Omega_i); lambda_{i,j}^2 is
/// the (j-1)/(j-2) moment ratio of the normalized restriction mu_{i,1};
/// lambda_{-k}^2 = gamma_{-k}/gamma_{-(k+1)}. For singleton groups the ratio
/// collapses to the atom position q_i; this is asserted against the generic
/// formula.
WeightedShift build_weights(const ConstructionInput& in);

/// The q-family instance: rho = (1/t) lambda_a with the singleton partition,
/// gamma_n = t^{-1} zeta_{n-1}. Branch i hosts atom a q^{k(i)} with the
/// alternating enumeration k = 0, 1, -1, 2, -2, ...
struct MainExample {
  QStieltjesFamily fam;
  Scalar t;
  std::optional<long> kappa;
  long K;            // materialized atom window |k| <= K, i.e. 2K+1 branches
  long cert_window;  // wider window used by the tail certificates
  WeightedShift shift;
  /// int(1/x) d rho; upper end exactly zeta_{-1}/t.
  BoundedSum inv_moment_rho;
  bool nonhyponormality_certified;  // t < zeta_{-1}

  /// gamma_n = t^{-1} zeta_{n-1}, any n.
  Scalar gamma(long n) const { return fam.zeta(n - 1) / t; }
  MomentSequence gamma_window(long lo, long hi) const;
  static long branch_k(long i);  // 1,2,3,4,5,... -> 0,1,-1,2,-2,...
};

MainExample make_main_example(const Scalar& sqrt_q, const Scalar& a, const Scalar& t,
                              std::optional<long> kappa, long K = 12, long cert_window = 28);

/// The slow-growth instance: rho = c^{-1}(sum 2^{-j} delta_{1/j} +
/// sum e^{-j^2} delta_j), j >= 2, with c its total (1/x)-mass, so the
/// consistency value at vertex 0 is exactly 1. Float regime.
struct SubnormalExample {
  WeightedShift shift;
  BoundedSum c;
  DiscreteMeasure nu;   // backward system: gamma_n = moment(nu, n)
  DiscreteMeasure rho;
  MomentSequence gamma;
  /// [1 - guard, 1]: the value is exactly 1 by termwise identity of the
  /// consistency numerator with c's own defining series.
  BoundedSum consistency_at_zero;
  long J;
  long kappa;
};

SubnormalExample make_subnormal_example(long J = 20, long kappa = 2, long horizon = 17);

}  // namespace treeshift
