#include "treeshift/moments.hpp"

#include <json.hpp>

#include <sstream>

namespace treeshift {

MomentSequence::MomentSequence(std::map<long, BoundedSum> values, bool normalized,
                               std::string note)
    : values_(std::move(values)), normalized_(normalized), note_(std::move(note)) {
  if (values_.empty()) throw std::invalid_argument("empty moment sequence");
  long prev = values_.begin()->first;
  for (auto it = std::next(values_.begin()); it != values_.end(); ++it) {
    if (it->first != prev + 1) throw std::invalid_argument("moment indices must be contiguous");
    prev = it->first;
  }
  for (const auto& [n, v] : values_)
    if (v.lower().sign() < 0) throw std::invalid_argument("negative moment value");
  if (normalized_) {
    auto it = values_.find(0);
    if (it == values_.end() || !it->second.contains(Scalar(1)))
      throw std::invalid_argument("normalized sequence needs gamma_0 = 1");
  }
}

MomentSequence MomentSequence::from_measure(const DiscreteMeasure& mu, long lo, long hi,
                                            bool normalized, std::string note) {
  std::map<long, BoundedSum> vals;
  for (long n = lo; n <= hi; ++n) vals.emplace(n, mu.moment(n));
  return MomentSequence(std::move(vals), normalized, std::move(note));
}

const BoundedSum& MomentSequence::at(long n) const {
  auto it = values_.find(n);
  if (it == values_.end()) {
    std::ostringstream os;
    os << "moment index " << n << " outside stored window [" << min_index() << ", "
       << max_index() << "]";
    throw std::out_of_range(os.str());
  }
  return it->second;
}

std::vector<std::vector<BoundedSum>> hankel_matrix(const MomentSequence& seq, long shift,
                                                   long n) {
  std::vector<std::vector<BoundedSum>> m(n + 1);
  for (long i = 0; i <= n; ++i) {
    m[i].reserve(n + 1);
    for (long j = 0; j <= n; ++j) m[i].push_back(seq.at(i + j + shift));
  }
  return m;
}

namespace {
const char* kind_name(HankelKind k) { return k == HankelKind::plain ? "plain" : "shifted"; }
}  // namespace

std::string PositivityReport::to_json() const {
  nlohmann::json j;
  j["n_max"] = n_max;
  j["verdict"] = verdict == Verdict::consistent ? "ConsistentUpTo" : "RefutedAt";
  if (verdict == Verdict::refuted) {
    j["refuted_order"] = refuted_order;
    j["refuted_hankel"] = kind_name(refuted_kind);
  }
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    const char* s = c.sign == DetSign::positive  ? "positive"
                    : c.sign == DetSign::negative ? "negative"
                                                  : "zero";
    j["checks"].push_back({{"order", c.order}, {"hankel", kind_name(c.kind)}, {"sign", s}});
  }
  j["degenerate_orders"] = nlohmann::json::array();
  for (const auto& d : degenerate)
    j["degenerate_orders"].push_back({{"order", d.order}, {"hankel", kind_name(d.kind)}});
  return j.dump(2);
}

PositivityReport stieltjes_check(const MomentSequence& seq, long n_max) {
  if (seq.max_index() < 2 * n_max + 1)
    throw std::invalid_argument("horizon too short for requested order");
  PositivityReport rep;
  rep.n_max = n_max;
  rep.verdict = PositivityReport::Verdict::consistent;
  for (long n = 0; n <= n_max; ++n) {
    for (HankelKind kind : {HankelKind::plain, HankelKind::shifted}) {
      long shift = kind == HankelKind::plain ? 0 : 1;
      DetResult d = det_certified(hankel_matrix(seq, shift, n));
      if (d.sign == DetSign::inconclusive) {
        std::ostringstream os;
        os << "Hankel sign undecided at order " << n << " (" << kind_name(kind)
           << "); raise precision or truncation";
        throw inconclusive_comparison(os.str());
      }
      rep.checks.push_back({n, kind, d.sign});
      if (d.sign == DetSign::zero) rep.degenerate.push_back({n, kind, d.sign});
      if (d.sign == DetSign::negative) {
        rep.verdict = PositivityReport::Verdict::refuted;
        rep.refuted_order = n;
        rep.refuted_kind = kind;
        return rep;
      }
    }
  }
  return rep;
}

std::vector<Scalar> t0_lower_bound(const MomentSequence& seq, long n_max) {
  if (!seq.at(0).lower().is_exact() )
    throw std::invalid_argument("threshold roots need the exact regime");
  std::vector<Scalar> thresholds;
  for (long n = 1; n <= n_max; ++n) {
    // Leading coefficient in gamma_{-1}: the (0,0)-minor, a shifted Hankel.
    Matrix minor(n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) minor[i].push_back(seq.at(i + j + 1).partial());
    DetResult a = det_exact(minor);
    if (a.sign != DetSign::positive)
      throw std::domain_error("leading minor not positive: sequence prefix unusable");
    // Constant term: the full matrix with 0 in the gamma_{-1} corner.
    Matrix m(n + 1);
    for (long i = 0; i <= n; ++i)
      for (long j = 0; j <= n; ++j)
        m[i].push_back(i + j == 0 ? Scalar(0) : seq.at(i + j - 1).partial());
    DetResult b = det_exact(m);
    thresholds.push_back(-b.value / a.value);
  }
  return thresholds;
}

std::string BackwardVerdict::to_json() const {
  nlohmann::json j;
  j["verdict"] = certified_not_stieltjes ? "CertifiedNotStieltjes" : "ConsistentUpTo";
  if (certified_not_stieltjes) j["witness_order"] = order;
  j["orders_checked"] = orders_checked;
  return j.dump(2);
}

BackwardVerdict classify_backward(const MomentSequence& seq, const Scalar& gamma_minus1,
                                  long n_max) {
  for (long n = 1; n <= n_max; ++n) {
    std::vector<std::vector<BoundedSum>> m(n + 1);
    for (long i = 0; i <= n; ++i)
      for (long j = 0; j <= n; ++j)
        m[i].push_back(i + j == 0 ? BoundedSum(gamma_minus1) : seq.at(i + j - 1));
    DetResult d = det_certified(m);
    if (d.sign == DetSign::inconclusive) {
      std::ostringstream os;
      os << "extension determinant sign undecided at order " << n;
      throw inconclusive_comparison(os.str());
    }
    // det <= 0 refutes: the determinant is increasing in gamma_{-1} and
    // strictly positive at every admissible value.
    if (d.sign != DetSign::positive) return {true, n, n_max};
  }
  return {false, -1, n_max};
}

bool CarlemanReport::all_hold() const {
  for (const auto& e : entries)
    if (!e.odd_bound_holds || !e.even_bound_holds) return false;
  return true;
}

std::string CarlemanReport::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : entries)
    j.push_back({{"n", e.n}, {"odd_bound", e.odd_bound_holds}, {"even_bound", e.even_bound_holds}});
  return j.dump(2);
}

CarlemanReport carleman_bound_check(const MomentSequence& seq, const BoundedSum& c, long n_lo,
                                    long n_hi) {
  CarlemanReport rep;
  bool exact = seq.at(n_lo >= 0 ? 2 * n_lo : 0).lower().is_exact();
  for (long n = n_lo; n <= n_hi; ++n) {
    Scalar nn = exact ? Scalar(n).pow(n) : Scalar(Real(n)).pow(n);
    Scalar four = exact ? Scalar(4) : Scalar(Real(4));
    Scalar five = exact ? Scalar(5) : Scalar(Real(5));
    BoundedSum odd_rhs = BoundedSum(four * nn) / c;
    BoundedSum even_rhs = BoundedSum(five * nn) / c;
    auto decide = [n](const BoundedSum& lhs, const BoundedSum& rhs) {
      if (BoundedSum::certified_le(lhs, rhs)) return true;
      if (rhs.upper() < lhs.lower()) return false;
      std::ostringstream os;
      os << "growth bound undecided at n = " << n;
      throw inconclusive_comparison(os.str());
    };
    CarlemanReport::Entry e;
    e.n = n;
    e.odd_bound_holds = decide(seq.at(2 * n + 1), odd_rhs);
    e.even_bound_holds = decide(seq.at(2 * n), even_rhs);
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace treeshift
