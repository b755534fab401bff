#include "treeshift/bounded_sum.hpp"

#include <sstream>

namespace treeshift {

BoundedSum sum_superexp(const std::function<Scalar(long)>& term, long ratio_bound_from,
                        long truncation) {
  if (truncation < ratio_bound_from)
    throw std::invalid_argument("truncation below ratio certification point");
  Scalar sum = term(0);
  if (sum.sign() < 0) throw decay_certificate_error("negative term at index 0");
  Scalar zero = sum - sum;
  Scalar half = sum.is_exact() ? Scalar::rational(1, 2) : Scalar(Real(0.5));
  for (long k = 1; k <= truncation; ++k) {
    Scalar t = term(k);
    if (t.sign() < 0) {
      std::ostringstream os;
      os << "negative term at index " << k;
      throw decay_certificate_error(os.str());
    }
    sum += t;
  }
  // Verify the decay ratios on [ratio_bound_from, truncation + 2].
  Scalar prev = term(ratio_bound_from);
  for (long k = ratio_bound_from + 1; k <= truncation + 2; ++k) {
    Scalar t = term(k);
    if (t.sign() < 0 || (!prev.is_zero() && t > prev * half) || (prev.is_zero() && !t.is_zero())) {
      std::ostringstream os;
      os << "decay ratio > 1/2 at index " << k;
      throw decay_certificate_error(os.str());
    }
    prev = t;
  }
  Scalar first_omitted = term(truncation + 1);
  return BoundedSum(sum, first_omitted + first_omitted);
}

}  // namespace treeshift
