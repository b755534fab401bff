#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treeshift/determinant.hpp"
#include "treeshift/measures.hpp"

namespace treeshift {

/// A finite window of a moment sequence {gamma_n}, n in [min_index, max_index].
/// Values are certified enclosures (exact sequences use point intervals).
class MomentSequence {
 public:
  MomentSequence(std::map<long, BoundedSum> values, bool normalized = false,
                 std::string note = {});
  static MomentSequence from_measure(const DiscreteMeasure& mu, long lo, long hi,
                                     bool normalized = false, std::string note = {});

  long min_index() const { return values_.begin()->first; }
  long max_index() const { return values_.rbegin()->first; }
  /// kappa >= 0: how far below 0 the window reaches.
  long kappa() const { return min_index() < 0 ? -min_index() : 0; }
  bool has(long n) const { return values_.count(n) != 0; }
  const BoundedSum& at(long n) const;
  bool normalized() const { return normalized_; }
  const std::string& note() const { return note_; }

 private:
  std::map<long, BoundedSum> values_;
  bool normalized_;
  std::string note_;
};

enum class HankelKind { plain, shifted };

/// (n+1) x (n+1) matrix M_ij = gamma_{i+j+shift}.
std::vector<std::vector<BoundedSum>> hankel_matrix(const MomentSequence& seq, long shift,
                                                   long n);

struct OrderResult {
  long order;
  HankelKind kind;
  DetSign sign;
};

struct PositivityReport {
  enum class Verdict { consistent, refuted };
  long n_max;
  Verdict verdict;
  std::vector<OrderResult> checks;
  // Set when refuted: the first certified-negative determinant.
  long refuted_order = -1;
  HankelKind refuted_kind = HankelKind::plain;
  // Orders whose determinant vanished exactly (finitely-atomic measures do
  // this legitimately); never grounds for refutation.
  std::vector<OrderResult> degenerate;

  std::string to_json() const;
};

/// Finite-order Stieltjes test: both Hankel families [gamma_{i+j}] and
/// [gamma_{i+j+1}] through order n_max. Refutes on the first certified
/// negative determinant; exact zeros are recorded as degenerate and skipped.
/// Throws inconclusive_comparison when a float-regime sign cannot be decided.
PositivityReport stieltjes_check(const MomentSequence& seq, long n_max);

/// Thresholds of the backward-extendability determinants: for n = 1..n_max,
/// det[gamma_{i+j-1}]_{i,j=0..n} is affine in the unknown gamma_{-1} with the
/// (0,0)-minor det[gamma_{i+j+1}]_{0..n-1} > 0 as leading coefficient; the
/// returned entry n-1 is the root, a lower bound for the extendability
/// threshold t0. Exact regime only.
std::vector<Scalar> t0_lower_bound(const MomentSequence& seq, long n_max);

struct BackwardVerdict {
  bool certified_not_stieltjes;
  long order = -1;           // witness order when refuted
  long orders_checked;
  std::string to_json() const;
};

/// One-sided backward-extension classifier: prepending gamma_minus1 refutes
/// Stieltjes extendability when some det[gamma_{i+j-1}]_{0..n} <= 0 certified
/// (n = 1..n_max); otherwise consistent-up-to-n_max. Never claims
/// determinacy or indeterminacy.
BackwardVerdict classify_backward(const MomentSequence& seq, const Scalar& gamma_minus1,
                                  long n_max);

struct CarlemanReport {
  struct Entry {
    long n;
    bool odd_bound_holds;   // gamma_{2n+1} <= 4 c^{-1} n^n
    bool even_bound_holds;  // gamma_{2n}   <= 5 c^{-1} n^n
  };
  std::vector<Entry> entries;
  bool all_hold() const;
  std::string to_json() const;
};

/// Growth bounds feeding Carleman's criterion, interval-aware. Throws
/// inconclusive_comparison when an enclosure straddles its bound.
CarlemanReport carleman_bound_check(const MomentSequence& seq, const BoundedSum& c,
                                    long n_lo, long n_hi);

}  // namespace treeshift
