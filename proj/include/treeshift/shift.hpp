#pragma once

#include <map>
#include <optional>

#include "treeshift/measures.hpp"
#include "treeshift/tree.hpp"

namespace treeshift {

struct truncation_error : std::runtime_error {
  explicit truncation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Squared weight in semi-symbolic form: coeff * sym^lpow, where sym is a
/// shift-wide positive enclosure (the normalizer L(a) in the constructed
/// instances; 1 and lpow = 0 for plain shifts). Keeping the sym power
/// symbolic lets path products carry exactly one enclosure factor.
struct WeightSq {
  BoundedSum coeff;
  long lpow = 0;

  WeightSq operator*(const WeightSq& o) const { return {coeff * o.coeff, lpow + o.lpow}; }
  BoundedSum value(const BoundedSum& sym) const;
};

/// Certified sums over the full (possibly infinite) branch fan at vertex 0.
/// power_sum(n) = sum_i prod_{j=1..n} lambda_{i,j}^2 (n >= 1);
/// hyponormality_sum = sum_i lambda_{i,1}^2 / lambda_{i,2}^2;
/// consistency_sum = sum_i lambda_{i,1}^2 * int(1/x) dmu_{i,1}.
struct BranchData {
  std::function<BoundedSum(long)> power_sum;
  std::function<BoundedSum()> hyponormality_sum;
  std::function<BoundedSum()> consistency_sum;
};

/// Coefficient c * sqrt(sq): weights enter amplitudes through square roots,
/// but paths never merge on a tree, so every coefficient stays of this form
/// and all comparisons can be done on squares.
struct PathCoeff {
  Scalar c;
  Scalar sq;
  Scalar norm_sq() const { return c * c * sq; }
};

class FiniteVector {
 public:
  FiniteVector() = default;
  static FiniteVector basis(const VertexId& u) { return FiniteVector({{u, {Scalar(1), Scalar(1)}}}); }
  explicit FiniteVector(std::map<VertexId, PathCoeff> entries);

  const std::map<VertexId, PathCoeff>& entries() const { return entries_; }
  void set(const VertexId& u, Scalar c) { entries_[u] = {std::move(c), Scalar(1)}; }
  Scalar norm_sq() const;

 private:
  std::map<VertexId, PathCoeff> entries_;
};

class WeightedShift {
 public:
  WeightedShift(TreeModel tree, std::function<WeightSq(const VertexId&)> weight_sq,
                BoundedSum sym = BoundedSum(Scalar(1)),
                std::optional<BranchData> branch = std::nullopt, long default_max_i = 16);

  const TreeModel& tree() const { return tree_; }
  const BoundedSum& sym() const { return sym_; }
  long default_max_i() const { return max_i_; }
  WeightSq weight_sq(const VertexId& v) const;
  BoundedSum weight_sq_value(const VertexId& v) const { return weight_sq(v).value(sym_); }
  const std::optional<BranchData>& branch_data() const { return branch_; }

  /// ||S^n e_u||^2 = sum over Chi<n>(u) of lambda_{u|v}^2. Uses the certified
  /// branch sums whenever a path crosses the branching vertex; with an
  /// infinite fan and no branch data, throws truncation_error.
  BoundedSum norm_sq_power_basis(const VertexId& u, long n) const;

  /// ||S^n f||^2 via the orthogonal decomposition sum |f(u)|^2 ||S^n e_u||^2.
  BoundedSum norm_sq_power(const FiniteVector& f, long n) const;

  /// One application of the shift; requires plain point weights (lpow = 0).
  FiniteVector apply(const FiniteVector& f) const;

 private:
  Scalar plain_weight(const VertexId& v) const;

  TreeModel tree_;
  std::function<WeightSq(const VertexId&)> weight_;
  BoundedSum sym_;
  std::optional<BranchData> branch_;
  long max_i_;
};

enum class TestVerdict { satisfied, violated, inconclusive };

struct VertexCheck {
  VertexId vertex;
  BoundedSum value;
  TestVerdict verdict;
};

/// Per-vertex hyponormality criterion: sum over children v of
/// lambda_v^2 / ||S e_v||^2, compared against 1.
std::vector<VertexCheck> hyponormality_test(const WeightedShift& S,
                                            const std::vector<VertexId>& vertices);

struct ParanormalityResult {
  BoundedSum lhs;  // ||Sf||^4
  BoundedSum rhs;  // ||f||^2 ||S^2 f||^2
  TestVerdict verdict;
};

/// ||Sf||^4 <= ||f||^2 ||S^2 f||^2, the squared paranormality inequality.
ParanormalityResult paranormality_check(const WeightedShift& S, const FiniteVector& f);

struct ConsistencyResult {
  BoundedSum value;  // sum over children of lambda_v^2 int(1/x) dmu_v
  Cmp versus_one;
};

/// The consistency condition at u against supplied child representing
/// measures; at the branching vertex an infinite fan requires branch data.
ConsistencyResult consistency_condition(
    const WeightedShift& S, const VertexId& u,
    const std::map<VertexId, DiscreteMeasure>& child_measures);

/// The parent measure mu_u built from the children: atom part
/// sum_v lambda_v^2 (1/x) mu_v plus mass 1 - (consistency value) at zero.
/// Finite child sets with point-valued data only; refuses when the
/// consistency condition fails.
DiscreteMeasure mu_u_from_children(const WeightedShift& S, const VertexId& u,
                                   const std::map<VertexId, DiscreteMeasure>& child_measures);

}  // namespace treeshift
