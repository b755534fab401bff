#include "treeshift/tree.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace treeshift {

std::string VertexId::str() const {
  std::ostringstream os;
  if (kind == Kind::stem)
    os << -k;
  else
    os << '(' << i << ',' << j << ')';
  return os.str();
}

VertexId VertexId::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty vertex string");
  auto parse_long = [](std::string_view sv) {
    long v = 0;
    auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec != std::errc() || p != sv.data() + sv.size())
      throw std::invalid_argument("bad vertex number");
    return v;
  };
  if (s.front() == '(') {
    if (s.back() != ')') throw std::invalid_argument("unbalanced vertex parens: " + s);
    auto comma = s.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("branch vertex needs (i,j)");
    long i = parse_long(std::string_view(s).substr(1, comma - 1));
    long j = parse_long(std::string_view(s).substr(comma + 1, s.size() - comma - 2));
    return br(i, j);
  }
  long v = parse_long(s);
  if (v > 0) throw std::invalid_argument("stem vertices are nonpositive: " + s);
  return neg(-v);
}

TreeModel::TreeModel(std::optional<long> eta, std::optional<long> kappa)
    : eta_(eta), kappa_(kappa) {
  if (eta_ && *eta_ < 2) throw std::invalid_argument("eta must be >= 2 (0 must branch)");
  if (kappa_ && *kappa_ < 0) throw std::invalid_argument("kappa must be >= 0");
}

std::optional<VertexId> TreeModel::root() const {
  if (!kappa_) return std::nullopt;
  return VertexId::neg(*kappa_);
}

bool TreeModel::contains(const VertexId& v) const {
  if (v.kind == VertexId::Kind::stem) return !kappa_ || v.k <= *kappa_;
  return !eta_ || v.i <= *eta_;
}

std::optional<VertexId> TreeModel::parent(const VertexId& v) const {
  if (!contains(v)) throw std::invalid_argument("vertex outside tree: " + v.str());
  if (v.kind == VertexId::Kind::stem) {
    if (kappa_ && v.k == *kappa_) return std::nullopt;  // root
    return VertexId::neg(v.k + 1);
  }
  if (v.j == 1) return VertexId::neg(0);
  return VertexId::br(v.i, v.j - 1);
}

ChildSet TreeModel::children(const VertexId& v, long max_i) const {
  if (!contains(v)) throw std::invalid_argument("vertex outside tree: " + v.str());
  if (v.kind == VertexId::Kind::branch) return {{VertexId::br(v.i, v.j + 1)}, false};
  if (v.k >= 1) return {{VertexId::neg(v.k - 1)}, false};
  long fan = eta_ ? std::min(*eta_, max_i) : max_i;
  ChildSet cs;
  cs.truncated = !eta_ || *eta_ > max_i;
  cs.vertices.reserve(fan);
  for (long i = 1; i <= fan; ++i) cs.vertices.push_back(VertexId::br(i, 1));
  return cs;
}

ChildSet TreeModel::chi_n(const VertexId& u, long n, long max_i) const {
  ChildSet cur{{u}, false};
  for (long step = 0; step < n; ++step) {
    ChildSet next;
    next.truncated = cur.truncated;
    for (const auto& v : cur.vertices) {
      ChildSet c = children(v, max_i);
      next.truncated = next.truncated || c.truncated;
      next.vertices.insert(next.vertices.end(), c.vertices.begin(), c.vertices.end());
    }
    cur = std::move(next);
  }
  std::sort(cur.vertices.begin(), cur.vertices.end());
  return cur;
}

std::optional<std::vector<VertexId>> TreeModel::path(const VertexId& u,
                                                     const VertexId& v) const {
  std::vector<VertexId> rev;
  VertexId cur = v;
  while (cur != u) {
    auto p = parent(cur);
    if (!p) return std::nullopt;  // climbed past the root
    rev.push_back(cur);
    cur = *p;
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

Scalar TreeModel::lambda_path_sq(const std::function<Scalar(const VertexId&)>& weight_sq,
                                 const VertexId& u, const VertexId& v) const {
  auto p = path(u, v);
  if (!p) throw std::invalid_argument(v.str() + " is not a descendant of " + u.str());
  if (p->empty()) return Scalar(1);
  Scalar prod = weight_sq(p->front());
  for (size_t idx = 1; idx < p->size(); ++idx) prod *= weight_sq((*p)[idx]);
  return prod;
}

}  // namespace treeshift
