#include "treeshift/measures.hpp"

#include <json.hpp>

#include <algorithm>

namespace treeshift {

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms, Scalar mass_at_zero,
                                 BoundedSum divisor, std::function<Scalar(long)> numerator_tail)
    : atoms_(std::move(atoms)),
      mass0_(std::move(mass_at_zero)),
      divisor_(std::move(divisor)),
      tail_(std::move(numerator_tail)) {
  for (const auto& at : atoms_) {
    if (at.x.sign() <= 0) throw std::invalid_argument("atom position must be positive");
    if (at.w.sign() <= 0) throw std::invalid_argument("atom weight must be positive");
  }
  std::vector<Scalar> xs;
  xs.reserve(atoms_.size());
  for (const auto& at : atoms_) xs.push_back(at.x);
  std::sort(xs.begin(), xs.end());
  if (std::adjacent_find(xs.begin(), xs.end()) != xs.end())
    throw std::invalid_argument("atom positions must be distinct");
  if (mass0_.sign() < 0) throw std::invalid_argument("negative mass at zero");
  if (!atoms_.empty() && !atoms_[0].x.is_exact() && mass0_.is_exact()) {
    if (!mass0_.is_zero()) throw regime_mismatch();
    mass0_ = Scalar(Real(0));
  }
  if (divisor_.lower().sign() <= 0) throw std::invalid_argument("divisor must be positive");
  if (!atoms_.empty() && !atoms_[0].x.is_exact() && divisor_.lower().is_exact()) {
    if (!divisor_.is_point() || divisor_.partial() != Scalar(1)) throw regime_mismatch();
    divisor_ = BoundedSum(Scalar(Real(1)));
  }
}

BoundedSum DiscreteMeasure::moment(long n) const {
  if (n < 0 && !mass0_.is_zero()) throw infinite_moment();
  Scalar num = n == 0 ? mass0_ : (mass0_.is_exact() ? Scalar(0) : Scalar(Real(0)));
  for (const auto& at : atoms_) num += at.w * at.x.pow(n);
  Scalar tail = tail_ ? tail_(n) : (num.is_exact() ? Scalar(0) : Scalar(Real(0)));
  return BoundedSum(num, tail) / divisor_;
}

std::string DiscreteMeasure::to_json() const {
  nlohmann::json j;
  j["atoms"] = nlohmann::json::array();
  for (const auto& at : atoms_)
    j["atoms"].push_back({at.x.str(), (at.w / divisor_.midpoint()).str()});
  j["mass_at_zero"] = (mass0_ / divisor_.midpoint()).str();
  if (!divisor_.is_point()) j["normalizer_width"] = divisor_.width().str();
  return j.dump(2);
}

DiscreteMeasure backward_transform_nu(const DiscreteMeasure& mu, const Scalar& gamma_minus1) {
  if (mu.is_truncated() || !mu.divisor().is_point())
    throw std::invalid_argument("backward transform needs a finite measure");
  if (!mu.mass_at_zero().is_zero()) throw infinite_moment();
  BoundedSum inv = mu.moment(-1);
  Cmp c = inv.compare(gamma_minus1);
  if (c == Cmp::inconclusive)
    throw inconclusive_comparison("int(1/x)dmu vs gamma_{-1} undecided at this precision");
  if (c == Cmp::certified_greater)
    throw std::domain_error("not backward-extendable with this gamma_{-1}");
  std::vector<Atom> atoms;
  atoms.reserve(mu.atoms().size());
  Scalar inv_sum = gamma_minus1.is_exact() ? Scalar(0) : Scalar(Real(0));
  for (const auto& at : mu.atoms()) {
    atoms.push_back({at.x, at.w / at.x});
    inv_sum += at.w / at.x;
  }
  Scalar mass0 = gamma_minus1 * mu.divisor().partial() - inv_sum;
  return DiscreteMeasure(std::move(atoms), mass0, mu.divisor());
}

DiscreteMeasure backward_transform_mu(const DiscreteMeasure& nu) {
  if (nu.is_truncated() || !nu.divisor().is_point())
    throw std::invalid_argument("backward transform needs a finite measure");
  std::vector<Atom> atoms;
  atoms.reserve(nu.atoms().size());
  for (const auto& at : nu.atoms()) atoms.push_back({at.x, at.w * at.x});
  Scalar zero = nu.mass_at_zero().is_exact() ? Scalar(0) : Scalar(Real(0));
  return DiscreteMeasure(std::move(atoms), zero, nu.divisor());
}

QStieltjesFamily::QStieltjesFamily(Scalar sqrt_q, Scalar a)
    : s_(std::move(sqrt_q)), a_(std::move(a)) {
  Scalar one = s_.is_exact() ? Scalar(1) : Scalar(Real(1));
  if (s_.sign() <= 0 || s_ >= one) throw std::invalid_argument("sqrt(q) must lie in (0,1)");
  if (a_.sign() <= 0) throw std::invalid_argument("a must be positive");
  if (a_.regime() != s_.regime()) throw regime_mismatch();
  // theta_{j+1}/theta_j = a s^{2j+1} and theta_{-(j+1)}/theta_{-j} = s^{2j+1}/a
  // both fall below 1/2 once j is large enough, and decrease from there.
  Scalar half = one / (one + one);
  Scalar big = a_ < one ? one / a_ : a_;
  long j = 1;
  while (big * s_.pow(2 * j + 1) > half) {
    ++j;
    if (j > 100000) throw decay_certificate_error("q too close to 1 for tail certification");
  }
  ratio_from_ = j;
}

Scalar QStieltjesFamily::theta_tail_bound(long window) const {
  if (window + 1 < ratio_from_)
    throw decay_certificate_error("truncation window below the decay certification point");
  Scalar edge = theta_term(window + 1) + theta_term(-(window + 1));
  return edge + edge;
}

BoundedSum QStieltjesFamily::big_l(long window) const {
  Scalar sum = theta_term(0);
  for (long k = 1; k <= window; ++k) sum += theta_term(k) + theta_term(-k);
  return BoundedSum(sum, theta_tail_bound(window));
}

DiscreteMeasure QStieltjesFamily::lambda_a(long K) const {
  std::vector<Atom> atoms;
  atoms.reserve(2 * K + 1);
  for (long k = -K; k <= K; ++k) atoms.push_back({a_ * s_.pow(2 * k), theta_term(k)});
  QStieltjesFamily fam = *this;
  auto tail = [fam, K](long n) {
    long j = K - (n < 0 ? -n : n);
    // theta_k x_k^n = zeta_n theta_{k+n}: the omitted-atom mass shifts into
    // the normalizer series beyond window j.
    return fam.zeta(n) * fam.theta_tail_bound(j);
  };
  Scalar zero = s_.is_exact() ? Scalar(0) : Scalar(Real(0));
  return DiscreteMeasure(std::move(atoms), zero, big_l(K), tail);
}

BoundedSum QStieltjesFamily::moment_enclosure(long K, long m) const {
  Scalar window_sum = s_.is_exact() ? Scalar(0) : Scalar(Real(0));
  for (long k = -K; k <= K; ++k) window_sum += theta_term(k + m);
  BoundedSum l = big_l(K + (m < 0 ? -m : m));
  // The shifted window sum undercounts the full normalizer series, so the
  // true moment zeta_m * (full sum)/L equals zeta_m exactly from above.
  return BoundedSum::from_interval(zeta(m) * window_sum / l.upper(), zeta(m));
}

Scalar QStieltjesFamily::sigma() const {
  Scalar qf = Scalar::floating_of(q());
  return sqrt(-log(qf));
}

Scalar QStieltjesFamily::eval_omega_theta(const Scalar& theta, const Scalar& x) const {
  if (x.sign() <= 0) throw std::domain_error("omega_theta needs x > 0");
  Scalar xf = Scalar::floating_of(x);
  Scalar th = Scalar::floating_of(theta);
  Scalar one(Real(1));
  if (th.abs() > one) throw std::domain_error("theta must lie in [-1,1]");
  Scalar sg = sigma();
  Scalar lx = log(xf);
  Scalar two(Real(2));
  Scalar front = one / (sqrt(two * pi_value()) * sg) / xf;
  Scalar gauss = exp(-(lx * lx) / (two * sg * sg));
  Scalar wave = one + th * sin(two * pi_value() / (sg * sg) * lx);
  return front * gauss * wave;
}

}  // namespace treeshift
