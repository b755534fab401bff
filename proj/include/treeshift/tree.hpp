#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "treeshift/scalar.hpp"

namespace treeshift {

/// Vertex of the model tree: stem vertices -k (k >= 0, with 0 the branching
/// vertex) and branch vertices (i, j), i indexing the branch, j the depth.
struct VertexId {
  enum class Kind { stem, branch };
  Kind kind;
  long k;  // stem: vertex -k
  long i, j;

  static VertexId neg(long k) {
    if (k < 0) throw std::invalid_argument("stem index must be >= 0");
    return {Kind::stem, k, 0, 0};
  }
  static VertexId br(long i, long j) {
    if (i < 1 || j < 1) throw std::invalid_argument("branch indices start at 1");
    return {Kind::branch, 0, i, j};
  }

  bool operator==(const VertexId& o) const = default;
  auto operator<=>(const VertexId& o) const = default;

  std::string str() const;
  static VertexId parse(const std::string& s);
};

struct ChildSet {
  std::vector<VertexId> vertices;
  bool truncated;  // true when the branching fan-out was cut at max_i
};

/// T_{eta, kappa}: a backward chain -kappa, ..., -1, 0 glued at 0 to eta
/// forward chains (i, 1), (i, 2), .... Either parameter may be infinite
/// (nullopt); set-valued operations then take an explicit fan-out bound.
class TreeModel {
 public:
  TreeModel(std::optional<long> eta, std::optional<long> kappa);

  const std::optional<long>& eta() const { return eta_; }
  const std::optional<long>& kappa() const { return kappa_; }
  bool rooted() const { return kappa_.has_value(); }
  std::optional<VertexId> root() const;
  bool contains(const VertexId& v) const;

  std::optional<VertexId> parent(const VertexId& v) const;
  ChildSet children(const VertexId& v, long max_i) const;
  /// Iterated child set Chi<n>(u).
  ChildSet chi_n(const VertexId& u, long n, long max_i) const;

  /// Vertices of the descending path u -> v, excluding u: each carries one
  /// edge weight, so the path product runs over exactly this list. Empty for
  /// v = u; nullopt when v is not a descendant of u.
  std::optional<std::vector<VertexId>> path(const VertexId& u, const VertexId& v) const;

  /// Squared path product lambda_{u|v}^2 = prod lambda_w^2 over path(u, v).
  Scalar lambda_path_sq(const std::function<Scalar(const VertexId&)>& weight_sq,
                        const VertexId& u, const VertexId& v) const;

 private:
  std::optional<long> eta_;
  std::optional<long> kappa_;
};

}  // namespace treeshift
