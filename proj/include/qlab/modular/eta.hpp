#pragma once

// Eta quotients prod_i eta(d_i tau)^(e_i) as q-series.

#include <cstdlib>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qlab/core/errors.hpp"
#include "qlab/core/series.hpp"

namespace qlab {

struct EtaFactor {
  long scale;     // d >= 1
  long exponent;  // e, any sign
};

struct EtaQuotientSpec {
  std::vector<EtaFactor> factors;

  /// sum d*e / 24.
  mpq_class leading_q_power() const {
    mpz_class s = 0;
    for (const auto& f : factors) s += mpz_class(f.scale) * f.exponent;
    mpq_class r(s, 24);
    r.canonicalize();
    return r;
  }
};

/// prod_i prod_{n>=1} (1 - q^(d_i n))^(e_i), without the q^(sum d e/24)
/// prefactor. Each Euler factor is applied as |e| sparse passes
/// (multiply: a_k -= a_{k-s} downward; divide: a_k += a_{k-s} upward).
template <class Ring>
TruncatedSeries<Ring> eta_product_normalized(const Ring& R, const EtaQuotientSpec& spec, long precision) {
  if (precision <= 0) return TruncatedSeries<Ring>::zero(R, precision);
  std::vector<typename Ring::value_type> a(static_cast<std::size_t>(precision), R.zero());
  a[0] = R.one();
  for (const auto& f : spec.factors) {
    if (f.scale < 1) throw DomainError("eta factor scale must be positive");
    const long passes = std::labs(f.exponent);
    for (long step = f.scale; step < precision; step += f.scale) {
      const auto s = static_cast<std::size_t>(step);
      for (long rep = 0; rep < passes; ++rep) {
        if (f.exponent > 0) {
          for (std::size_t k = a.size() - 1; k >= s; --k) a[k] = R.sub(a[k], a[k - s]);
        } else {
          for (std::size_t k = s; k < a.size(); ++k) a[k] = R.add(a[k], a[k - s]);
        }
      }
    }
  }
  return TruncatedSeries<Ring>(R, 0, precision, std::move(a));
}

/// The eta quotient itself, known below q^precision. Requires an integral
/// leading power.
template <class Ring>
TruncatedSeries<Ring> eta_quotient(const Ring& R, const EtaQuotientSpec& spec, long precision) {
  const mpq_class lead = spec.leading_q_power();
  if (lead.get_den() != 1) throw DomainError("eta quotient has non-integral leading power q^(" + lead.get_str() + ")");
  const long shift = lead.get_num().get_si();
  return eta_product_normalized(R, spec, precision - shift).shifted(shift);
}

}  // namespace qlab
