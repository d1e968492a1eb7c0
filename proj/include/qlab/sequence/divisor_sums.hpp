#pragma once

// Eisenstein coefficient arithmetic: s(n), beta(n) and c_n^mix = 3 s(n) - 27 beta(n).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qlab/core/arith.hpp"
#include "qlab/core/errors.hpp"
#include "qlab/modular/dictionary.hpp"
#include "qlab/modular/eisenstein.hpp"

namespace qlab {

/// Sieved tables for 1 <= n <= N (index 0 unused).
inline DivisorSumTables divisor_sums(long N) {
  if (N < 1) throw DomainError("divisor sums need N >= 1");
  return divisor_sum_tables(N + 1);
}

inline std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> f;
  for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e) f.emplace_back(d, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

namespace detail {

// sum_{j=0..e} w_j p^(4j) with w_j = chi^j for s and chi^(e-j) for beta.
inline mpz_class prime_power_sum(std::uint64_t p, unsigned e, bool twisted_by_cofactor) {
  const int c = chi3(static_cast<long long>(p));
  mpz_class total = 0;
  for (unsigned j = 0; j <= e; ++j) {
    const unsigned k = twisted_by_cofactor ? e - j : j;
    mpz_class w = k == 0 ? 1 : (c == 0 ? 0 : (k % 2 == 0 || c == 1 ? 1 : -1));
    total += w * mpz_pow(p, 4UL * j);
  }
  return total;
}

inline mpz_class multiplicative_value(std::uint64_t n, bool twisted_by_cofactor) {
  if (n == 0) throw DomainError("divisor sums are defined for n >= 1");
  mpz_class r = 1;
  for (auto [p, e] : factorize(n)) r *= prime_power_sum(p, e, twisted_by_cofactor);
  return r;
}

}  // namespace detail

/// s(n) = sum_{d|n} chi3(d) d^4, from the factorization of n.
inline mpz_class s_value(std::uint64_t n) { return detail::multiplicative_value(n, false); }

/// beta(n) = sum_{d|n} chi3(n/d) d^4.
inline mpz_class beta_value(std::uint64_t n) { return detail::multiplicative_value(n, true); }

inline mpz_class c_mix_value(std::uint64_t n) {
  if (n == 0) return 1;
  return 3 * s_value(n) - 27 * beta_value(n);
}

/// c_n^mix for 1 <= n < tables.s.size(); index 0 holds the constant term 1.
inline std::vector<mpz_class> c_mix_table(const DivisorSumTables& t) {
  std::vector<mpz_class> c(t.s.size());
  if (!c.empty()) c[0] = 1;
  for (std::size_t n = 1; n < c.size(); ++n) c[n] = 3 * t.s[n] - 27 * t.beta[n];
  return c;
}

/// First n where the dictionary's C_mix disagrees with 3 s(n) - 27 beta(n).
template <class Ring>
std::optional<long> c_mix_dictionary_mismatch(const std::vector<mpz_class>& c, const ModularDictionary<Ring>& dict) {
  const auto& R = dict.ring();
  const auto& cm = dict.C_mix();
  const long n_max = std::min<long>(cm.precision(), static_cast<long>(c.size()));
  for (long n = 0; n < n_max; ++n) {
    if (!(cm[n] == R.from_mpz(c[static_cast<std::size_t>(n)]))) return n;
  }
  return std::nullopt;
}

}  // namespace qlab
