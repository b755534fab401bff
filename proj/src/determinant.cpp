#include "treeshift/determinant.hpp"

#include <algorithm>
#include <stdexcept>

namespace treeshift {

namespace {

void check_square(size_t n, const Matrix& m) {
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("matrix is not square");
}

DetResult bareiss(Matrix a) {
  const size_t n = a.size();
  Scalar prev(1);
  int sign_flips = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      size_t p = k + 1;
      while (p < n && a[p][k].is_zero()) ++p;
      if (p == n) return {Scalar(0), Scalar(0), DetSign::zero};
      std::swap(a[k], a[p]);
      sign_flips = -sign_flips;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  Scalar det = a[n - 1][n - 1];
  if (sign_flips < 0) det = -det;
  int s = det.sign();
  DetSign ds = s < 0 ? DetSign::negative : (s > 0 ? DetSign::positive : DetSign::zero);
  return {det, Scalar(0), ds};
}

DetResult lu_float(Matrix a) {
  const size_t n = a.size();
  // Crude forward bound: gamma_n * n! * max|entry|^n with gamma_n ~ 2n^2 eps.
  Scalar max_abs(Real(0));
  for (const auto& row : a)
    for (const auto& e : row) max_abs = std::max(max_abs, e.abs());
  Scalar det(Real(1));
  int sign_flips = 1;
  for (size_t k = 0; k < n; ++k) {
    size_t p = k;
    for (size_t i = k + 1; i < n; ++i)
      if (a[i][k].abs() > a[p][k].abs()) p = i;
    if (a[p][k].is_zero()) {
      det = Scalar(Real(0));
      break;
    }
    if (p != k) {
      std::swap(a[k], a[p]);
      sign_flips = -sign_flips;
    }
    det *= a[k][k];
    for (size_t i = k + 1; i < n; ++i) {
      Scalar f = a[i][k] / a[k][k];
      for (size_t j = k + 1; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  if (sign_flips < 0) det = -det;
  Scalar eps = Scalar::float_guard();
  Scalar fact(Real(1));
  for (size_t i = 2; i <= n; ++i) fact *= Scalar(Real(static_cast<long>(i)));
  Scalar err = Scalar(Real(2 * static_cast<long>(n * n))) * eps * fact *
               max_abs.pow(static_cast<long>(n));
  DetSign ds;
  if (det.abs() <= err)
    ds = DetSign::inconclusive;
  else
    ds = det.sign() < 0 ? DetSign::negative : DetSign::positive;
  return {det, err, ds};
}

}  // namespace

DetResult det_exact(const Matrix& m) {
  const size_t n = m.size();
  if (n == 0) return {Scalar(1), Scalar(0), DetSign::positive};
  check_square(n, m);
  bool exact = m[0][0].is_exact();
  for (const auto& row : m)
    for (const auto& e : row)
      if (e.is_exact() != exact) throw regime_mismatch();
  return exact ? bareiss(m) : lu_float(m);
}

DetResult det_certified(const std::vector<std::vector<BoundedSum>>& m) {
  const size_t n = m.size();
  if (n == 0) return {Scalar(1), Scalar(0), DetSign::positive};
  Matrix mid(n);
  Scalar max_mid(0), max_wid(0);
  bool any_width = false;
  bool exact = m[0][0].lower().is_exact();
  if (!exact) max_mid = max_wid = Scalar(Real(0));
  for (size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw std::invalid_argument("matrix is not square");
    mid[i].reserve(n);
    for (const auto& e : m[i]) {
      mid[i].push_back(e.midpoint());
      max_mid = std::max(max_mid, e.midpoint().abs());
      Scalar half_wid = e.upper() - e.midpoint();
      max_wid = std::max(max_wid, half_wid);
      if (!e.is_point()) any_width = true;
    }
  }
  DetResult base = det_exact(mid);
  if (!any_width) return base;
  // Entry perturbations of size <= w move the determinant by at most
  // n! * ((m + w)^n - m^n), m = max midpoint magnitude.
  Scalar fact(exact ? Scalar(1) : Scalar(Real(1)));
  for (size_t i = 2; i <= n; ++i) {
    Scalar s(static_cast<long>(i));
    fact *= exact ? s : Scalar::floating_of(s);
  }
  const long ln = static_cast<long>(n);
  Scalar perturb = fact * ((max_mid + max_wid).pow(ln) - max_mid.pow(ln));
  Scalar err = base.error_bound + perturb;
  DetSign ds;
  if (base.value.abs() <= err)
    ds = DetSign::inconclusive;
  else
    ds = base.value.sign() < 0 ? DetSign::negative : DetSign::positive;
  return {base.value, err, ds};
}

}  // namespace treeshift
