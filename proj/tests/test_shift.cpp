#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "treeshift/shift.hpp"

using namespace treeshift;

namespace {
WeightSq plain(Scalar s) { return {BoundedSum(std::move(s)), 0}; }

// A finite shift with memoized random positive rational weights.
struct RandomShift {
  std::shared_ptr<std::map<VertexId, Scalar>> table =
      std::make_shared<std::map<VertexId, Scalar>>();

  RandomShift(long eta, long kappa, std::mt19937& rng) {
    tree = TreeModel(eta, kappa);
    this->rng = &rng;
  }
  TreeModel tree{2, 0};
  std::mt19937* rng;

  WeightedShift make() {
    auto table_ = table;
    auto* rng_ = rng;
    return WeightedShift(tree, [table_, rng_](const VertexId& v) {
      auto it = table_->find(v);
      if (it == table_->end()) {
        std::uniform_int_distribution<int> d(1, 9);
        it = table_->emplace(v, Scalar::rational(d(*rng_), d(*rng_))).first;
      }
      return plain(it->second);
    });
  }
};
}  // namespace

TEST_CASE("apply moves coefficients down edges") {
  TreeModel t(2, 1);
  auto w = [](const VertexId& v) {
    if (v.kind == VertexId::Kind::stem) return plain(Scalar::rational(1, 4));
    return plain(Scalar::rational(v.i, v.j + 1));
  };
  WeightedShift S(t, w);

  FiniteVector ej = S.apply(FiniteVector::basis(VertexId::br(1, 2)));
  REQUIRE(ej.entries().size() == 1);
  CHECK(ej.entries().begin()->first == VertexId::br(1, 3));
  CHECK(ej.entries().begin()->second.norm_sq() == Scalar::rational(1, 4));  // lambda_{1,3}^2

  FiniteVector en = S.apply(FiniteVector::basis(VertexId::neg(1)));
  REQUIRE(en.entries().size() == 1);
  CHECK(en.entries().begin()->first == VertexId::neg(0));
  CHECK(en.entries().begin()->second.norm_sq() == Scalar::rational(1, 4));

  FiniteVector e0 = S.apply(FiniteVector::basis(VertexId::neg(0)));
  CHECK(e0.entries().size() == 2);
  // ||S e_0||^2 = sum of the two level-1 weights.
  CHECK(e0.norm_sq() == Scalar::rational(1, 2) + Scalar::rational(2, 2));
}

TEST_CASE("basis power norms against brute-force path sums") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    RandomShift rs(2 + trial % 2, trial % 3, rng);
    WeightedShift S = rs.make();
    std::vector<VertexId> starts = {VertexId::neg(trial % 3), VertexId::br(1, 1),
                                    VertexId::br(2, 2)};
    for (const auto& u : starts) {
      if (!S.tree().contains(u)) continue;
      CHECK(S.norm_sq_power_basis(u, 0).partial() == Scalar(1));
      for (long n = 1; n <= 4; ++n) {
        Scalar direct(0);
        for (const auto& v : S.tree().chi_n(u, n, 10).vertices)
          direct += S.tree().lambda_path_sq(
              [&](const VertexId& x) { return S.weight_sq(x).coeff.partial(); }, u, v);
        BoundedSum got = S.norm_sq_power_basis(u, n);
        CHECK(got.is_point());
        CHECK(got.partial() == direct);
      }
    }
  }
}

TEST_CASE("power norm via orthogonal decomposition equals repeated apply") {
  std::mt19937 rng(47);
  std::uniform_int_distribution<int> d(1, 9);
  for (int trial = 0; trial < 20; ++trial) {
    RandomShift rs(2 + trial % 2, trial % 3, rng);
    WeightedShift S = rs.make();
    FiniteVector f;
    std::vector<VertexId> pool = {VertexId::neg(0), VertexId::br(1, 1), VertexId::br(2, 3),
                                  VertexId::br(1, 4)};
    if (trial % 3 > 0) pool.push_back(VertexId::neg(trial % 3));
    for (const auto& u : pool)
      if (d(rng) % 2) f.set(u, Scalar::rational(d(rng) - 5, d(rng)));
    FiniteVector g = f;
    for (long n = 0; n <= 4; ++n) {
      CHECK(S.norm_sq_power(f, n).partial() == g.norm_sq());
      g = S.apply(g);
    }
  }
}

TEST_CASE("split power norms recombine across intermediate levels") {
  std::mt19937 rng(53);
  RandomShift rs(3, 2, rng);
  WeightedShift S = rs.make();
  auto wfn = [&](const VertexId& x) { return S.weight_sq(x).coeff.partial(); };
  for (const auto& u : {VertexId::neg(2), VertexId::neg(0), VertexId::br(2, 1)})
    for (long m = 0; m <= 2; ++m)
      for (long n = 0; n <= 2; ++n) {
        Scalar split(0);
        for (const auto& v : S.tree().chi_n(u, m, 10).vertices)
          split += S.tree().lambda_path_sq(wfn, u, v) *
                   S.norm_sq_power_basis(v, n).partial();
        CHECK(split == S.norm_sq_power_basis(u, n + m).partial());
      }
}

TEST_CASE("hyponormality criterion per vertex") {
  TreeModel t(2, 1);
  // Chain condition at (i,j) reduces to lambda_{i,j+1} <= lambda_{i,j+2}.
  auto w = [](const VertexId& v) {
    if (v.kind == VertexId::Kind::stem) return plain(Scalar(1));
    if (v.i == 1) return plain(Scalar(v.j));      // increasing: satisfied
    return plain(Scalar::rational(1, v.j + 1));   // decreasing: violated
  };
  WeightedShift S(t, w);
  auto rep = hyponormality_test(
      S, {VertexId::br(1, 1), VertexId::br(2, 1), VertexId::neg(1)});
  CHECK(rep[0].verdict == TestVerdict::satisfied);   // lambda^2 ratio 2/3 <= 1
  CHECK(rep[0].value.partial() == Scalar::rational(2, 3));
  CHECK(rep[1].verdict == TestVerdict::violated);    // (1/3)/(1/4) > 1
  CHECK(rep[1].value.partial() == Scalar::rational(4, 3));
  CHECK(rep[1].value.certified_gt(Scalar(1)));
  CHECK(rep[2].verdict == TestVerdict::satisfied);   // 1 / ||S e_0||^2, fan helps
}

TEST_CASE("paranormality inequality") {
  // Constant-weight chain: equality (delta-measure Cauchy-Schwarz).
  TreeModel t(2, 0);
  WeightedShift flat(t, [](const VertexId&) { return plain(Scalar::rational(1, 3)); });
  auto eq = paranormality_check(flat, FiniteVector::basis(VertexId::br(1, 2)));
  CHECK(eq.verdict == TestVerdict::satisfied);
  CHECK(eq.lhs.partial() == eq.rhs.partial());

  // Decreasing chain weights break it.
  WeightedShift dec(t, [](const VertexId& v) {
    return plain(v.kind == VertexId::Kind::branch && v.j == 2 ? Scalar(4) : Scalar(1));
  });
  auto bad = paranormality_check(dec, FiniteVector::basis(VertexId::br(1, 1)));
  CHECK(bad.verdict == TestVerdict::violated);  // lhs 16 vs rhs 4

  auto empty = paranormality_check(flat, FiniteVector());
  CHECK(empty.verdict == TestVerdict::satisfied);  // 0 <= 0
}

TEST_CASE("consistency condition and parent measure") {
  TreeModel t(2, 0);
  Scalar q1 = Scalar::rational(1, 2), q2 = Scalar::rational(1, 3);
  auto w = [&](const VertexId& v) {
    // lambda_{i,1}^2 chosen below; deeper weights are the delta-measure ratios q_i.
    if (v.j == 1) return plain(v.i == 1 ? Scalar::rational(1, 4) : Scalar::rational(1, 6));
    return plain(v.i == 1 ? q1 : q2);
  };
  WeightedShift S(t, w);
  std::map<VertexId, DiscreteMeasure> mus = {
      {VertexId::br(1, 1), DiscreteMeasure({{q1, Scalar(1)}})},
      {VertexId::br(2, 1), DiscreteMeasure({{q2, Scalar(1)}})}};
  ConsistencyResult con = consistency_condition(S, VertexId::neg(0), mus);
  // (1/4)/(1/2) + (1/6)/(1/3) = 1: holds with equality.
  CHECK(con.value.partial() == Scalar(1));
  CHECK(con.versus_one == Cmp::certified_equal);

  DiscreteMeasure mu0 = mu_u_from_children(S, VertexId::neg(0), mus);
  CHECK(mu0.mass_at_zero().is_zero());
  REQUIRE(mu0.atoms().size() == 2);
  // Moments of mu_0 reproduce ||S^n e_0||^2.
  for (long n = 0; n <= 4; ++n)
    CHECK(mu0.moment(n).partial() == S.norm_sq_power_basis(VertexId::neg(0), n).partial());

  // Single child with lambda^2 = q: mu_u = delta_q exactly, no mass at zero.
  DiscreteMeasure mu1 = mu_u_from_children(S, VertexId::br(1, 1),
                                           {{VertexId::br(1, 2), DiscreteMeasure({{q1, Scalar(1)}})}});
  CHECK(mu1.mass_at_zero().is_zero());
  CHECK(mu1.atoms()[0].x == q1);
  CHECK(mu1.moment(0).partial() == Scalar(1));

  // lambda^2 < q leaves mass at zero.
  auto wlow = [&](const VertexId& v) {
    return plain(v.j == 2 && v.i == 1 ? Scalar::rational(1, 4) : q1);
  };
  WeightedShift Slow(TreeModel(2, 0), wlow);
  DiscreteMeasure mulow = mu_u_from_children(
      Slow, VertexId::br(1, 1), {{VertexId::br(1, 2), DiscreteMeasure({{q1, Scalar(1)}})}});
  CHECK(mulow.mass_at_zero() == Scalar(1) - Scalar::rational(1, 4) / q1);

  // Consistency failure refuses the parent measure.
  auto whigh = [&](const VertexId& v) {
    return plain(v.j == 2 && v.i == 1 ? Scalar(2) : q1);
  };
  WeightedShift Shigh(TreeModel(2, 0), whigh);
  CHECK_THROWS_AS(mu_u_from_children(Shigh, VertexId::br(1, 1),
                                     {{VertexId::br(1, 2), DiscreteMeasure({{q1, Scalar(1)}})}}),
                  std::domain_error);
  CHECK_THROWS(consistency_condition(S, VertexId::neg(0), {}));
}

TEST_CASE("symbolic weight factors") {
  BoundedSum sym(Scalar(3), Scalar::rational(1, 100));  // [3, 3.01]
  WeightSq w{BoundedSum(Scalar(6)), -1};
  BoundedSum v = w.value(sym);
  CHECK(v.lower() == Scalar(6) / (Scalar(3) + Scalar::rational(1, 100)));
  CHECK(v.upper() == Scalar(2));
  WeightSq prod = w * WeightSq{BoundedSum(Scalar(2)), 1};
  CHECK(prod.lpow == 0);
  CHECK(prod.value(sym).partial() == Scalar(12));

  // An infinite fan without certified branch sums must refuse, and accept
  // once branch data is supplied.
  TreeModel inf(std::nullopt, 0);
  WeightedShift S(inf, [](const VertexId&) { return plain(Scalar(1)); });
  CHECK_THROWS_AS(S.norm_sq_power_basis(VertexId::neg(0), 1), truncation_error);
  BranchData bd;
  bd.power_sum = [](long) { return BoundedSum(Scalar(7)); };
  bd.hyponormality_sum = [] { return BoundedSum(Scalar::rational(1, 2)); };
  WeightedShift S2(inf, [](const VertexId&) { return plain(Scalar(1)); },
                   BoundedSum(Scalar(1)), bd);
  CHECK(S2.norm_sq_power_basis(VertexId::neg(0), 2).partial() == Scalar(7));
  CHECK(hyponormality_test(S2, {VertexId::neg(0)})[0].verdict == TestVerdict::satisfied);
}
