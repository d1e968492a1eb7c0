#pragma once

// Scalar number theory shared by the ring backends and the sequence engine.

#include <cstdint>
#include <optional>
#include <string>

#include <gmpxx.h>

#include "qlab/core/errors.hpp"

namespace qlab {

using u128 = unsigned __int128;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

/// b^e if it stays below 2^63, otherwise nullopt.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t b, unsigned e) {
  constexpr std::uint64_t limit = std::uint64_t{1} << 63;
  u128 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    r *= b;
    if (r >= limit) return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

inline mpz_class mpz_pow(std::uint64_t b, unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), b, e);
  return r;
}

/// Inverse of a modulo m; throws NonUnit when gcd(a, m) != 1.
inline std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  __int128 t = 0, new_t = 1;
  __int128 r = m, new_r = a % m;
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw NonUnit("element " + std::to_string(a) + " is not invertible mod " + std::to_string(m));
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

/// v_p(x) for nonzero x, nullopt for zero.
inline std::optional<long> valuation(const mpz_class& x, std::uint64_t p) {
  if (x == 0) return std::nullopt;
  mpz_class tmp = x;
  mpz_class prime = static_cast<unsigned long>(p);
  return static_cast<long>(mpz_remove(tmp.get_mpz_t(), tmp.get_mpz_t(), prime.get_mpz_t()));
}

inline std::optional<long> valuation(const mpq_class& x, std::uint64_t p) {
  if (x == 0) return std::nullopt;
  return *valuation(x.get_num(), p) - *valuation(x.get_den(), p);
}

inline long valuation(std::uint64_t x, std::uint64_t p) {
  long v = 0;
  while (x != 0 && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

/// Legendre: v_p(k!).
inline long factorial_valuation(long k, std::uint64_t p) {
  long v = 0;
  for (u128 pk = p; pk <= static_cast<u128>(k); pk *= p) v += static_cast<long>(k / static_cast<long>(pk));
  return v;
}

/// floor(log_p k) for k >= 1.
inline long floor_log(long k, std::uint64_t p) {
  long e = 0;
  for (u128 pk = p; pk <= static_cast<u128>(k); pk *= p) ++e;
  return e;
}

/// The quadratic character mod 3: (n/3).
inline int chi3(long long n) {
  long long r = ((n % 3) + 3) % 3;
  return r == 0 ? 0 : (r == 1 ? 1 : -1);
}

/// floor and ceil division with a positive divisor.
inline long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
inline long ceil_div(long a, long b) { return -floor_div(-a, b); }

inline long binomial_small(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace qlab
