#pragma once

#include <vector>

#include "treeshift/bounded_sum.hpp"

namespace treeshift {

using Matrix = std::vector<std::vector<Scalar>>;

enum class DetSign { negative, zero, positive, inconclusive };

struct DetResult {
  Scalar value;
  Scalar error_bound;  // zero in the exact regime
  DetSign sign;
};

/// Determinant. Exact regime: fraction-free (Bareiss) elimination, exact sign.
/// Float regime: LU with partial pivoting plus a crude forward error bound;
/// sign is `inconclusive` when |det| <= error bound.
DetResult det_exact(const Matrix& m);

/// Determinant of a matrix with certified-enclosure entries: evaluated at the
/// interval midpoints with a perturbation bound covering the entry widths.
/// Entries with zero width in the exact regime go through det_exact.
DetResult det_certified(const std::vector<std::vector<BoundedSum>>& m);

}  // namespace treeshift
