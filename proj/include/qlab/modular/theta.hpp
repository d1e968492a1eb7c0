#pragma once

// The cubic theta functions of the Borwein brothers:
//   A(q) = sum_{m,n} q^(m^2+mn+n^2)
//   B(q) = eta(tau)^3 / eta(3 tau)
//   D(q) = 3 eta(3 tau)^3 / eta(tau) = q^(1/3) * (3 + 3q + ...)
// D has a fractional leading power, so it is returned with the q^(1/3)
// stripped; D^3 = q * theta_D_normalized^3 is then an honest q-series.

#include <cmath>
#include <vector>

#include "qlab/core/series.hpp"
#include "qlab/modular/eta.hpp"

namespace qlab {

template <class Ring>
TruncatedSeries<Ring> theta_A(const Ring& R, long precision) {
  if (precision < 1) throw DomainError("theta_A needs precision >= 1");
  // m^2+mn+n^2 = (m+n/2)^2 + 3n^2/4 >= 3n^2/4 (and symmetrically in m), so
  // |m|, |n| <= sqrt(4N/3) covers every representation below N.
  const long bound = static_cast<long>(std::ceil(std::sqrt(4.0 * static_cast<double>(precision) / 3.0)));
  std::vector<long long> counts(static_cast<std::size_t>(precision), 0);
  for (long m = -bound; m <= bound; ++m) {
    for (long n = -bound; n <= bound; ++n) {
      const long v = m * m + m * n + n * n;
      if (v < precision) ++counts[static_cast<std::size_t>(v)];
    }
  }
  std::vector<typename Ring::value_type> c;
  c.reserve(counts.size());
  for (long long x : counts) c.push_back(R.from_int(x));
  return TruncatedSeries<Ring>(R, 0, precision, std::move(c));
}

template <class Ring>
TruncatedSeries<Ring> theta_B(const Ring& R, long precision) {
  return eta_quotient(R, EtaQuotientSpec{{{1, 3}, {3, -1}}}, precision);
}

/// D(q) / q^(1/3).
template <class Ring>
TruncatedSeries<Ring> theta_D_normalized(const Ring& R, long precision) {
  return scale(eta_product_normalized(R, EtaQuotientSpec{{{3, 3}, {1, -1}}}, precision), 3);
}

/// The fractional part of the leading exponent of D.
inline mpq_class theta_D_shift() { return mpq_class(1, 3); }

}  // namespace qlab
