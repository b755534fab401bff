#include "treeshift/scalar.hpp"

#include <iomanip>
#include <sstream>

namespace treeshift {

namespace {
unsigned g_precision_bits = 512;

template <class F>
Scalar same_regime(const Scalar& a, const Scalar& b, F&& f) {
  if (a.regime() != b.regime()) throw regime_mismatch();
  if (a.is_exact()) return Scalar(Rational(f(a.rat(), b.rat())));
  return Scalar(Real(f(a.real(), b.real())));
}
}  // namespace

void Scalar::set_float_precision(unsigned bits) {
  if (bits < 24) throw std::invalid_argument("precision too low");
  g_precision_bits = bits;
  // default_precision takes decimal digits; round up so we get >= bits.
  Real::default_precision((bits * 301 + 999) / 1000);
}

unsigned Scalar::float_precision_bits() { return g_precision_bits; }

Scalar Scalar::float_guard() {
  unsigned p = g_precision_bits > 96 ? g_precision_bits - 64 : 32;
  Real g(1);
  mpfr_div_2ui(g.backend().data(), g.backend().data(), p, MPFR_RNDU);
  return Scalar(g);
}

Scalar Scalar::operator-() const {
  if (is_exact()) return Scalar(Rational(-rat()));
  return Scalar(Real(-real()));
}

Scalar Scalar::operator+(const Scalar& o) const {
  return same_regime(*this, o, [](const auto& a, const auto& b) { return a + b; });
}
Scalar Scalar::operator-(const Scalar& o) const {
  return same_regime(*this, o, [](const auto& a, const auto& b) { return a - b; });
}
Scalar Scalar::operator*(const Scalar& o) const {
  return same_regime(*this, o, [](const auto& a, const auto& b) { return a * b; });
}
Scalar Scalar::operator/(const Scalar& o) const {
  if (o.is_zero()) throw std::domain_error("division by zero");
  return same_regime(*this, o, [](const auto& a, const auto& b) { return a / b; });
}

Scalar Scalar::pow(long e) const {
  if (e == 0) return is_exact() ? Scalar(Rational(1)) : Scalar(Real(1));
  if (is_zero() && e < 0) throw std::domain_error("zero to negative power");
  if (is_exact()) {
    Rational base = e < 0 ? Rational(1) / rat() : rat();
    unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
    Rational acc(1);
    Rational sq = base;
    while (k) {
      if (k & 1) acc *= sq;
      if (k >>= 1) sq *= sq;
    }
    return Scalar(acc);
  }
  Real r;
  mpfr_pow_si(r.backend().data(), real().backend().data(), e, MPFR_RNDN);
  return Scalar(r);
}

Scalar Scalar::abs() const { return sign() < 0 ? -*this : *this; }

bool Scalar::is_zero() const { return sign() == 0; }

int Scalar::sign() const {
  if (is_exact()) {
    int c = mpq_sgn(rat().backend().data());
    return c;
  }
  return mpfr_sgn(real().backend().data());
}

int Scalar::compare(const Scalar& o) const {
  if (regime() == o.regime()) {
    if (is_exact()) return rat().compare(o.rat());
    return mpfr_cmp(real().backend().data(), o.real().backend().data());
  }
  // Mixed: compare float against rational exactly.
  if (is_exact()) return -o.compare(*this);
  return mpfr_cmp_q(real().backend().data(), o.rat().backend().data());
}

std::string Scalar::str() const {
  std::ostringstream os;
  if (is_exact())
    os << rat();
  else
    os << std::setprecision(static_cast<int>(Real::default_precision())) << real();
  return os.str();
}

double Scalar::to_double() const {
  if (is_exact()) return rat().convert_to<double>();
  return real().convert_to<double>();
}

Scalar Scalar::parse(const std::string& s, Regime regime) {
  if (s.empty()) throw std::invalid_argument("empty numeric literal");
  const bool rational_form = s.find('/') != std::string::npos;
  const bool decimal_form = s.find('.') != std::string::npos ||
                            s.find('e') != std::string::npos ||
                            s.find('E') != std::string::npos;
  if (regime == Regime::exact) {
    if (decimal_form)
      throw std::invalid_argument("exact regime takes integers or p/q strings: " + s);
    return Scalar(Rational(s));
  }
  if (rational_form) {
    Rational r(s);
    return Scalar(Real(r));
  }
  return Scalar(Real(s));
}

namespace {
template <class F>
Scalar float_fn(const Scalar& x, F&& f) {
  if (x.is_exact()) throw regime_mismatch();
  return Scalar(Real(f(x.real())));
}
}  // namespace

Scalar exp(const Scalar& x) {
  return float_fn(x, [](const Real& r) { return boost::multiprecision::exp(r); });
}
Scalar log(const Scalar& x) {
  return float_fn(x, [](const Real& r) { return boost::multiprecision::log(r); });
}
Scalar sin(const Scalar& x) {
  return float_fn(x, [](const Real& r) { return boost::multiprecision::sin(r); });
}
Scalar sqrt(const Scalar& x) {
  return float_fn(x, [](const Real& r) { return boost::multiprecision::sqrt(r); });
}
Scalar pi_value() {
  Real p;
  mpfr_const_pi(p.backend().data(), MPFR_RNDN);
  return Scalar(p);
}

}  // namespace treeshift
