#pragma once

// Shared helpers for the test suites: seeded random series and a few
// deliberately naive oracles.

#include <cstdint>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "qlab/core/rings.hpp"
#include "qlab/core/series.hpp"

namespace qlab::testkit {

inline constexpr std::uint64_t kSeed = 20240611;

/// Integer-seed series: coefficients in [-bound, bound], a forced unit
/// (+1) at the lowest exponent when `unit_lead` is set.
inline std::vector<long long> random_ints(std::mt19937_64& rng, std::size_t len, long long bound, bool unit_lead) {
  std::uniform_int_distribution<long long> dist(-bound, bound);
  std::vector<long long> v(len);
  for (auto& x : v) x = dist(rng);
  if (unit_lead && !v.empty()) v[0] = 1;
  return v;
}

template <class Ring>
TruncatedSeries<Ring> series_from(const Ring& R, long lowest, const std::vector<long long>& v, long precision) {
  std::vector<typename Ring::value_type> c(static_cast<std::size_t>(precision - lowest), R.zero());
  for (std::size_t i = 0; i < v.size() && static_cast<long>(i) < precision - lowest; ++i) c[i] = R.from_int(v[i]);
  return TruncatedSeries<Ring>(R, lowest, precision, std::move(c));
}

/// Schoolbook product of two integer coefficient lists, no truncation.
inline std::vector<mpz_class> naive_product(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<mpz_class> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

}  // namespace qlab::testkit
