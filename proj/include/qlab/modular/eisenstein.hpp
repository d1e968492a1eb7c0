#pragma once

// Weight-5 Eisenstein series for Gamma_0(3) with character chi_3.
//
// Convention: E_{5,chi,psi} = c_0 + sum_{n>=1} (sum_{d|n} chi(n/d) psi(d) d^4) q^n,
// i.e. chi acts on the cofactor n/d and psi on the divisor d. PARI/GP's
// mfeisenstein takes its two characters in the opposite order.

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qlab/core/arith.hpp"
#include "qlab/core/errors.hpp"
#include "qlab/core/series.hpp"

namespace qlab {

enum class CharacterMod3 { Chi0, Chi3 };

inline int character_value(CharacterMod3 c, long long n) {
  if (c == CharacterMod3::Chi3) return chi3(n);
  return n % 3 == 0 ? 0 : 1;
}

inline std::string to_string(CharacterMod3 c) { return c == CharacterMod3::Chi0 ? "chi0" : "chi3"; }

/// s(n) = sum_{d|n} chi3(d) d^4 and beta(n) = sum_{d|n} chi3(n/d) d^4 for
/// 1 <= n < limit; index 0 is unused and zero.
struct DivisorSumTables {
  std::vector<mpz_class> s;
  std::vector<mpz_class> beta;
};

inline DivisorSumTables divisor_sum_tables(long limit) {
  DivisorSumTables t;
  const auto n = static_cast<std::size_t>(std::max(limit, 1L));
  t.s.assign(n, 0);
  t.beta.assign(n, 0);
  for (long d = 1; d < limit; ++d) {
    const mpz_class d4 = mpz_pow(static_cast<std::uint64_t>(d), 4);
    const int cd = chi3(d);
    for (long m = d, k = 1; m < limit; m += d, ++k) {
      if (cd != 0) t.s[static_cast<std::size_t>(m)] += cd * d4;
      if (int ck = chi3(k); ck != 0) t.beta[static_cast<std::size_t>(m)] += ck * d4;
    }
  }
  return t;
}

/// Exact coefficients of E_{5,chi,psi} below q^precision; the constant term
/// is 1/3 for (chi0, chi3) and 0 for (chi3, chi0).
inline std::vector<mpq_class> eisenstein_5_coefficients(CharacterMod3 chi, CharacterMod3 psi, long precision) {
  const bool first = chi == CharacterMod3::Chi0 && psi == CharacterMod3::Chi3;
  const bool second = chi == CharacterMod3::Chi3 && psi == CharacterMod3::Chi0;
  if (!first && !second) {
    throw DomainError("unsupported character pair (" + to_string(chi) + ", " + to_string(psi) + ")");
  }
  std::vector<mpq_class> c(static_cast<std::size_t>(std::max(precision, 0L)), mpq_class(0));
  if (precision <= 0) return c;
  c[0] = first ? mpq_class(1, 3) : mpq_class(0);
  const auto tables = divisor_sum_tables(precision);
  for (long n = 1; n < precision; ++n) c[static_cast<std::size_t>(n)] = first ? tables.s[static_cast<std::size_t>(n)] : tables.beta[static_cast<std::size_t>(n)];
  return c;
}

/// E_{5,chi,psi} over R. Over Z the 1/3 of E_{5,chi0,chi3} is not
/// representable and NotLocalized is thrown; use 3E (C0) there instead.
template <class Ring>
TruncatedSeries<Ring> eisenstein_5(const Ring& R, CharacterMod3 chi, CharacterMod3 psi, long precision) {
  const auto c = eisenstein_5_coefficients(chi, psi, precision);
  std::vector<typename Ring::value_type> v;
  v.reserve(c.size());
  for (const auto& x : c) v.push_back(R.from_rational(x));
  return TruncatedSeries<Ring>(R, 0, precision, std::move(v));
}

/// 3 E_{5,chi0,chi3} = 1 + 3 sum s(n) q^n, integral in every ring.
template <class Ring>
TruncatedSeries<Ring> eisenstein_C0(const Ring& R, long precision) {
  const auto tables = divisor_sum_tables(precision);
  std::vector<typename Ring::value_type> v;
  v.reserve(static_cast<std::size_t>(precision));
  if (precision > 0) v.push_back(R.one());
  for (long n = 1; n < precision; ++n) v.push_back(R.from_mpz(3 * tables.s[static_cast<std::size_t>(n)]));
  return TruncatedSeries<Ring>(R, 0, precision, std::move(v));
}

}  // namespace qlab
