#include "treeshift/shift.hpp"

#include <sstream>

namespace treeshift {

BoundedSum WeightSq::value(const BoundedSum& sym) const {
  if (lpow == 0) return coeff;
  BoundedSum p(coeff.lower().is_exact() ? Scalar(1) : Scalar(Real(1)));
  for (long i = 0; i < (lpow < 0 ? -lpow : lpow); ++i) p = p * sym;
  if (lpow > 0) return coeff * p;
  return coeff / p;
}

FiniteVector::FiniteVector(std::map<VertexId, PathCoeff> entries)
    : entries_(std::move(entries)) {
  for (const auto& [v, pc] : entries_)
    if (pc.sq.sign() <= 0) throw std::invalid_argument("path coefficient needs sq > 0");
}

Scalar FiniteVector::norm_sq() const {
  if (entries_.empty()) return Scalar(0);
  Scalar s = entries_.begin()->second.norm_sq();
  for (auto it = std::next(entries_.begin()); it != entries_.end(); ++it)
    s += it->second.norm_sq();
  return s;
}

WeightedShift::WeightedShift(TreeModel tree, std::function<WeightSq(const VertexId&)> weight_sq,
                             BoundedSum sym, std::optional<BranchData> branch, long default_max_i)
    : tree_(std::move(tree)),
      weight_(std::move(weight_sq)),
      sym_(std::move(sym)),
      branch_(std::move(branch)),
      max_i_(default_max_i) {
  if (sym_.lower().sign() <= 0) throw std::invalid_argument("sym must be positive");
  if (max_i_ < 1) throw std::invalid_argument("fan-out bound must be >= 1");
}

WeightSq WeightedShift::weight_sq(const VertexId& v) const {
  if (tree_.rooted() && v == *tree_.root())
    throw std::invalid_argument("the root carries no weight");
  if (!tree_.contains(v)) throw std::invalid_argument("vertex outside tree: " + v.str());
  WeightSq w = weight_(v);
  if (w.coeff.lower().sign() <= 0)
    throw std::invalid_argument("weights must be positive at " + v.str());
  return w;
}

Scalar WeightedShift::plain_weight(const VertexId& v) const {
  WeightSq w = weight_sq(v);
  if (w.lpow != 0 || !w.coeff.is_point())
    throw std::invalid_argument("operation needs plain point weights");
  return w.coeff.partial();
}

BoundedSum WeightedShift::norm_sq_power_basis(const VertexId& u, long n) const {
  if (n < 0) throw std::invalid_argument("negative power");
  // Probe a child weight to get the working regime's 1.
  Scalar one = weight_sq(tree_.children(u, 1).vertices.front()).coeff.lower().is_exact()
                   ? Scalar(1)
                   : Scalar(Real(1));
  if (n == 0) return BoundedSum(one);

  auto chain_product = [&](const VertexId& from, long steps) {
    WeightSq acc{BoundedSum(one), 0};
    VertexId cur = from;
    for (long s = 0; s < steps; ++s) {
      VertexId next = tree_.children(cur, 1).vertices.front();
      acc = acc * weight_sq(next);
      cur = next;
    }
    return acc;
  };

  if (u.kind == VertexId::Kind::branch) return chain_product(u, n).value(sym_);
  // Stem vertex -k: first min(n, k) steps walk down the stem.
  long k = u.k;
  if (n <= k) return chain_product(u, n).value(sym_);
  WeightSq stem = chain_product(u, k);
  long m = n - k;
  BoundedSum branch_sum = [&] {
    if (branch_) return branch_->power_sum(m);
    const auto& eta = tree_.eta();
    if (!eta)
      throw truncation_error("infinite branch fan needs certified branch sums");
    WeightSq first = chain_product(VertexId::br(1, 1), m - 1) * weight_sq(VertexId::br(1, 1));
    BoundedSum total = first.value(sym_);
    for (long i = 2; i <= *eta; ++i) {
      WeightSq p = chain_product(VertexId::br(i, 1), m - 1) * weight_sq(VertexId::br(i, 1));
      total = total + p.value(sym_);
    }
    return total;
  }();
  return stem.value(sym_) * branch_sum;
}

BoundedSum WeightedShift::norm_sq_power(const FiniteVector& f, long n) const {
  if (f.entries().empty()) return BoundedSum(Scalar(0));
  bool first = true;
  BoundedSum total;
  for (const auto& [u, pc] : f.entries()) {
    BoundedSum term = norm_sq_power_basis(u, n).scaled(pc.norm_sq());
    total = first ? term : total + term;
    first = false;
  }
  return total;
}

FiniteVector WeightedShift::apply(const FiniteVector& f) const {
  std::map<VertexId, PathCoeff> out;
  for (const auto& [u, pc] : f.entries()) {
    if (pc.c.is_zero()) continue;
    ChildSet cs = tree_.children(u, max_i_);
    if (cs.truncated)
      throw truncation_error("apply at " + u.str() + " needs the full (infinite) child set");
    for (const auto& v : cs.vertices) out[v] = {pc.c, pc.sq * plain_weight(v)};
  }
  return FiniteVector(std::move(out));
}

namespace {
TestVerdict verdict_vs_one(const BoundedSum& value) {
  if (value.certified_le(Scalar(1))) return TestVerdict::satisfied;
  if (value.certified_gt(Scalar(1))) return TestVerdict::violated;
  return TestVerdict::inconclusive;
}
}  // namespace

std::vector<VertexCheck> hyponormality_test(const WeightedShift& S,
                                            const std::vector<VertexId>& vertices) {
  std::vector<VertexCheck> out;
  out.reserve(vertices.size());
  for (const auto& u : vertices) {
    ChildSet cs = S.tree().children(u, S.default_max_i());
    BoundedSum value;
    if (cs.truncated) {
      if (!S.branch_data() || !S.branch_data()->hyponormality_sum)
        throw truncation_error("hyponormality at " + u.str() +
                               " needs a certified branch sum");
      value = S.branch_data()->hyponormality_sum();
    } else {
      bool first = true;
      for (const auto& v : cs.vertices) {
        BoundedSum term = S.weight_sq(v).value(S.sym()) / S.norm_sq_power_basis(v, 1);
        value = first ? term : value + term;
        first = false;
      }
    }
    out.push_back({u, value, verdict_vs_one(value)});
  }
  return out;
}

ParanormalityResult paranormality_check(const WeightedShift& S, const FiniteVector& f) {
  BoundedSum n1 = S.norm_sq_power(f, 1);
  BoundedSum n2 = S.norm_sq_power(f, 2);
  BoundedSum lhs = n1 * n1;
  BoundedSum rhs = BoundedSum(f.norm_sq()) * n2;
  TestVerdict v;
  if (BoundedSum::certified_le(lhs, rhs))
    v = TestVerdict::satisfied;
  else if (rhs.upper() < lhs.lower())
    v = TestVerdict::violated;
  else
    v = TestVerdict::inconclusive;
  return {lhs, rhs, v};
}

ConsistencyResult consistency_condition(
    const WeightedShift& S, const VertexId& u,
    const std::map<VertexId, DiscreteMeasure>& child_measures) {
  ChildSet cs = S.tree().children(u, S.default_max_i());
  BoundedSum value;
  if (cs.truncated) {
    if (!S.branch_data() || !S.branch_data()->consistency_sum)
      throw truncation_error("consistency at " + u.str() + " needs a certified branch sum");
    value = S.branch_data()->consistency_sum();
  } else {
    bool first = true;
    for (const auto& v : cs.vertices) {
      auto it = child_measures.find(v);
      if (it == child_measures.end())
        throw std::invalid_argument("missing representing measure for child " + v.str());
      BoundedSum term = S.weight_sq(v).value(S.sym()) * it->second.moment(-1);
      value = first ? term : value + term;
      first = false;
    }
  }
  return {value, value.compare(Scalar(1))};
}

DiscreteMeasure mu_u_from_children(const WeightedShift& S, const VertexId& u,
                                   const std::map<VertexId, DiscreteMeasure>& child_measures) {
  ChildSet cs = S.tree().children(u, S.default_max_i());
  if (cs.truncated)
    throw truncation_error("parent-measure assembly needs a finite child set at " + u.str());
  ConsistencyResult con = consistency_condition(S, u, child_measures);
  if (con.versus_one == Cmp::certified_greater)
    throw std::domain_error("consistency condition fails at " + u.str() +
                            ": no parent measure");
  if (con.versus_one == Cmp::inconclusive)
    throw inconclusive_comparison("consistency condition undecided at " + u.str());
  if (!con.value.is_point())
    throw inconclusive_comparison("parent measure needs point-valued child data");

  std::map<Scalar, Scalar> merged;  // position -> accumulated weight
  for (const auto& v : cs.vertices) {
    const DiscreteMeasure& mv = child_measures.at(v);
    if (mv.is_truncated() || !mv.divisor().is_point() || !mv.mass_at_zero().is_zero())
      throw std::invalid_argument("child measure at " + v.str() +
                                  " must be finite with no mass at zero");
    WeightSq w = S.weight_sq(v);
    if (w.lpow != 0 || !w.coeff.is_point())
      throw std::invalid_argument("parent measure needs plain point weights");
    Scalar lam2 = w.coeff.partial();
    for (const auto& at : mv.atoms()) {
      Scalar add = lam2 * at.w / (at.x * mv.divisor().partial());
      auto it = merged.find(at.x);
      if (it == merged.end())
        merged.emplace(at.x, add);
      else
        it->second += add;
    }
  }
  std::vector<Atom> atoms;
  atoms.reserve(merged.size());
  for (const auto& [x, w] : merged) atoms.push_back({x, w});
  Scalar one = con.value.partial().is_exact() ? Scalar(1) : Scalar(Real(1));
  Scalar eps = one - con.value.partial();
  return DiscreteMeasure(std::move(atoms), eps);
}

}  // namespace treeshift
