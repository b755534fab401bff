#include "treeshift/construct.hpp"

#include <memory>
#include <sstream>

namespace treeshift {

std::vector<std::vector<size_t>> singleton_partition(const DiscreteMeasure& rho) {
  std::vector<std::vector<size_t>> groups;
  groups.reserve(rho.atoms().size());
  for (size_t i = 0; i < rho.atoms().size(); ++i) groups.push_back({i});
  return groups;
}

namespace {

void intervals_must_meet(const BoundedSum& a, const BoundedSum& b, const char* what) {
  if (a.upper() < b.lower() || b.upper() < a.lower())
    throw std::invalid_argument(std::string(what) + ": certified mismatch");
}

}  // namespace

WeightedShift build_weights(const ConstructionInput& in) {
  const DiscreteMeasure& rho = in.rho;
  if (rho.is_truncated() || !rho.divisor().is_point())
    throw std::invalid_argument("weight building needs a finite representing measure");
  const long eta = static_cast<long>(in.partition.size());
  if (eta < 2) throw std::invalid_argument("need at least two branch groups");

  std::vector<char> covered(rho.atoms().size(), 0);
  for (const auto& g : in.partition) {
    if (g.empty()) throw std::invalid_argument("empty partition group");
    for (size_t idx : g) {
      if (idx >= covered.size() || covered[idx])
        throw std::invalid_argument("partition must cover each atom exactly once");
      covered[idx] = 1;
    }
  }
  for (char c : covered)
    if (!c) throw std::invalid_argument("partition must cover all atoms");

  // rho represents the forward-shifted system: moment(rho, n) = gamma_{n+1}.
  for (long n = 0; n + 1 <= in.gamma.max_index(); ++n)
    intervals_must_meet(rho.moment(n), in.gamma.at(n + 1), "rho moment vs gamma");
  if (in.kappa) {
    if (in.gamma.min_index() > -*in.kappa)
      throw std::invalid_argument("gamma window does not reach -kappa");
    for (long n = 1; n <= *in.kappa + 1 && -n >= in.gamma.min_index(); ++n)
      if (in.gamma.at(-n).lower().sign() <= 0)
        throw std::invalid_argument("backward moments must be positive");
  }

  struct Data {
    MomentSequence gamma;
    DiscreteMeasure rho;
    std::vector<std::vector<size_t>> groups;
  };
  auto data = std::make_shared<Data>(Data{in.gamma, in.rho, in.partition});

  auto weight = [data](const VertexId& v) -> WeightSq {
    if (v.kind == VertexId::Kind::stem)
      return {data->gamma.at(-v.k) / data->gamma.at(-(v.k + 1)), 0};
    const auto& group = data->groups.at(v.i - 1);
    if (v.j == 1) {
      Scalar mass = data->rho.atoms()[group[0]].w;
      for (size_t g = 1; g < group.size(); ++g) mass += data->rho.atoms()[group[g]].w;
      return {BoundedSum(mass / data->rho.divisor().partial()), 0};
    }
    // Moment ratio of the normalized restriction mu_{i,1}; normalization
    // cancels, so unnormalized sums suffice.
    auto restricted_moment = [&](long p) {
      Scalar m = data->rho.atoms()[group[0]].w * data->rho.atoms()[group[0]].x.pow(p);
      for (size_t g = 1; g < group.size(); ++g)
        m += data->rho.atoms()[group[g]].w * data->rho.atoms()[group[g]].x.pow(p);
      return m;
    };
    Scalar ratio = restricted_moment(v.j - 1) / restricted_moment(v.j - 2);
    if (group.size() == 1 && ratio != data->rho.atoms()[group[0]].x)
      throw std::logic_error("singleton moment ratio must equal the atom position");
    return {BoundedSum(ratio), 0};
  };

  return WeightedShift(TreeModel(eta, in.kappa), weight, BoundedSum(Scalar(1)), std::nullopt,
                       eta);
}

long MainExample::branch_k(long i) {
  if (i < 1) throw std::invalid_argument("branch index starts at 1");
  if (i == 1) return 0;
  return i % 2 == 0 ? i / 2 : -(i - 1) / 2;
}

MomentSequence MainExample::gamma_window(long lo, long hi) const {
  std::map<long, BoundedSum> v;
  for (long n = lo; n <= hi; ++n) v.emplace(n, BoundedSum(gamma(n)));
  return MomentSequence(std::move(v));
}

MainExample make_main_example(const Scalar& sqrt_q, const Scalar& a, const Scalar& t,
                              std::optional<long> kappa, long K, long cert_window) {
  if (!sqrt_q.is_exact() || !a.is_exact() || !t.is_exact())
    throw std::invalid_argument("the q-family instance runs in the exact regime");
  if (t.sign() <= 0) throw std::invalid_argument("t must be positive");
  QStieltjesFamily fam(sqrt_q, a);
  if (cert_window < K) cert_window = K;
  Scalar inv_t = t.pow(-1);

  auto weight = [fam, t](const VertexId& v) -> WeightSq {
    if (v.kind == VertexId::Kind::stem)
      return {BoundedSum(fam.zeta(-v.k - 1) / fam.zeta(-v.k - 2)), 0};
    long k = MainExample::branch_k(v.i);
    if (v.j == 1) return {BoundedSum(fam.theta_term(k) / t), -1};
    return {BoundedSum(fam.a() * fam.sqrt_q().pow(2 * k)), 0};
  };

  long cw = cert_window;
  BranchData bd;
  bd.power_sum = [fam, inv_t, cw](long n) {
    long m = n - 1;
    return fam.moment_enclosure(cw + (m < 0 ? -m : m), m).scaled(inv_t);
  };
  bd.hyponormality_sum = [fam, inv_t, cw] {
    return fam.moment_enclosure(cw + 1, -1).scaled(inv_t);
  };
  bd.consistency_sum = bd.hyponormality_sum;

  WeightedShift shift(TreeModel(std::nullopt, kappa), weight, fam.big_l(cert_window), bd,
                      2 * K + 1);
  BoundedSum inv_moment = fam.moment_enclosure(cert_window + 1, -1).scaled(inv_t);
  bool certified = t < fam.zeta(-1);
  return {fam,   t,          kappa,     K, cert_window, std::move(shift),
          inv_moment, certified};
}

SubnormalExample make_subnormal_example(long J, long kappa, long horizon) {
  if (J < 8) throw truncation_error("truncation too small for the tail certificates");
  if (kappa < 0) throw std::invalid_argument("kappa must be >= 0");
  Scalar one(Real(1));

  // Two atom families, j >= 2: weight 2^{-j} at 1/j, and e^{-j^2} at j.
  auto w1 = [](long j) { return Scalar(Real(2)).pow(-j); };
  auto x1 = [one](long j) { return one / Scalar(Real(j)); };
  auto w2 = [](long j) { return exp(Scalar(Real(-j * j))); };
  auto x2 = [](long j) { return Scalar(Real(j)); };

  // Bound on sum_{j>J} j^{p1} 2^{-j} + j^{p2} e^{-j^2}: per-family term
  // ratios are <= 3/4 at j = J+1 (checked) and stay there (for p >= 0 the
  // ratio decreases in j; for p < 0 it is below 1/2 outright), so the tail
  // is dominated by a geometric series with sum 4 * (first omitted term).
  auto tail_pair = [w1, w2, J](long p1, long p2) {
    auto term1 = [&](long j) { return Scalar(Real(j)).pow(p1) * w1(j); };
    auto term2 = [&](long j) { return Scalar(Real(j)).pow(p2) * w2(j); };
    Scalar threshold(Real(0.75));
    if (term1(J + 2) > threshold * term1(J + 1) || term2(J + 2) > threshold * term2(J + 1))
      throw decay_certificate_error("tail ratio above 3/4 at the truncation edge");
    return Scalar(Real(4)) * (term1(J + 1) + term2(J + 1));
  };

  std::vector<Atom> rho_atoms, nu_atoms;
  Scalar c_partial(Real(0));
  for (long j = 2; j <= J; ++j) rho_atoms.push_back({x1(j), w1(j)});
  for (long j = 2; j <= J; ++j) rho_atoms.push_back({x2(j), w2(j)});
  for (const auto& at : rho_atoms) {
    Scalar nw = at.w / at.x;  // the consistency numerator term, = c's own term
    nu_atoms.push_back({at.x, nw});
    c_partial += nw;
  }
  BoundedSum c(c_partial, tail_pair(1, -1));

  auto nu_tail = [tail_pair](long n) { return tail_pair(1 - n, n - 1); };
  auto rho_tail = [tail_pair](long n) { return tail_pair(-n, n); };
  DiscreteMeasure nu(nu_atoms, Scalar(Real(0)), c, nu_tail);
  DiscreteMeasure rho(rho_atoms, Scalar(Real(0)), c, rho_tail);

  MomentSequence gamma = MomentSequence::from_measure(nu, -kappa, horizon, true,
                                                      "backward system of the slow-growth instance");

  const long branches = 2 * (J - 1);
  struct Data {
    MomentSequence gamma;
    std::vector<Atom> atoms;
  };
  auto data = std::make_shared<Data>(Data{gamma, rho_atoms});
  auto weight = [data, branches](const VertexId& v) -> WeightSq {
    if (v.kind == VertexId::Kind::stem)
      return {data->gamma.at(-v.k) / data->gamma.at(-(v.k + 1)), 0};
    if (v.i > branches)
      throw truncation_error("branch " + v.str() + " beyond the materialized window");
    const Atom& at = data->atoms[v.i - 1];
    if (v.j == 1) return {BoundedSum(at.w), -1};
    return {BoundedSum(at.x), 0};
  };

  // The consistency numerator is termwise c's own series (verified in the
  // loop above by construction: nu weights are w/x), and the tails agree as
  // series, so the value is exactly 1; the guard absorbs the final division.
  BoundedSum consistency = BoundedSum::from_interval(one - Scalar::float_guard(), one);

  BranchData bd;
  DiscreteMeasure rho_copy = rho;
  bd.power_sum = [rho_copy](long n) { return rho_copy.moment(n - 1); };
  bd.hyponormality_sum = [consistency] { return consistency; };
  bd.consistency_sum = bd.hyponormality_sum;

  WeightedShift shift(TreeModel(std::nullopt, kappa), weight, c, bd, branches);
  return {std::move(shift), c, std::move(nu), std::move(rho), std::move(gamma), consistency,
          J, kappa};
}

}  // namespace treeshift
