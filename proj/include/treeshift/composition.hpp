#pragma once

#include "treeshift/shift.hpp"

namespace treeshift {

/// A finite window of the rootless tree: stem vertices 0, -1, ..., -stem_depth
/// and branch vertices (i, j) with i <= max_i, j <= depth.
struct Truncation {
  long stem_depth;
  long max_i;
  long depth;

  bool contains(const VertexId& v) const;
  /// Interior = vertices with at least one child inside the truncation (the
  /// branch frontier j = depth is excluded).
  bool interior(const VertexId& v) const;
  std::vector<VertexId> vertices() const;
};

/// Point masses alpha(u) realizing the shift as a composition operator with
/// phi(u) = par(u). Values are kept in the semi-symbolic coeff * sym^lpow
/// form so the construction stays exact even when weights carry the 1/L
/// normalizer. Invariant: alpha(v) = lambda_v^2 * alpha(par v) inside the
/// truncation, alpha(anchor) = 1.
struct MeasureSpaceOnV {
  std::map<VertexId, WeightSq> alpha;
  VertexId anchor;
  Truncation window;

  const WeightSq& at(const VertexId& v) const;
};

/// Build alpha from the anchor z: alpha(z) = 1, descendants by the forward
/// recursion, ancestors by products of inverse weights, sibling subtrees
/// seeded through the common ancestor. Refuses rooted trees (phi would be
/// undefined at the root).
MeasureSpaceOnV build_alpha(const WeightedShift& S, const VertexId& z,
                            const Truncation& window);

struct UnitaryReport {
  bool equal;
  std::size_t checked;
  std::optional<VertexId> first_mismatch;
  bool norm_preserved;  // ||Uf||^2 == ||f||^2 (alpha cancels termwise)
};

/// Square-root-free verification of the intertwining (Uf) o phi = U(Sf):
/// at every truncation vertex v with par(v) also inside, check
/// f(phi(v))^2 * alpha(v) == lambda_v^2 * f(par v)^2 * alpha(phi(v)),
/// exactly, in the coeff * sym^lpow representation. The right-hand side is
/// (Lambda f)(v)^2 * alpha(phi(v)) expanded symbolically.
UnitaryReport unitary_check(const WeightedShift& S, const MeasureSpaceOnV& space,
                            const FiniteVector& f);

/// The ratio alpha'(v)/alpha(v) over the common window; throws domain_error
/// unless it is one global constant (uniqueness of the realization up to a
/// scalar), which is returned.
WeightSq alpha_ratio_constant(const MeasureSpaceOnV& a, const MeasureSpaceOnV& b);

/// Every interior vertex has a phi-preimage inside the truncation (the tree
/// is leafless, so the induced composition operator is injective).
bool phi_surjective_on_interior(const Truncation& window);

}  // namespace treeshift
