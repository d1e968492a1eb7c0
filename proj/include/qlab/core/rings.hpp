#pragma once

// Coefficient ring backends for truncated q-series.
//
// Every backend exposes the same duck-typed surface (value_type, an
// accumulator for fused multiply-add, unit checks, conversion from integers and
// rationals), so the series template and all operators above it are written
// once. Four backends exist:
//
//   IntegerRing          Z, reference arithmetic on mpz_class
//   LocalRationalRing    Z_(p) realized as rationals with p-free denominators
//   ResidueRing          Z/p^K with machine-word representatives (p^K < 2^63)
//   BigResidueRing       Z/p^K on mpz_class, for moduli that overflow a word
//
// ResidueRing and BigResidueRing share a descriptor kind; callers that should
// not care which one backs a modulus go through with_residue_ring().

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

#include <gmpxx.h>

#include "qlab/core/arith.hpp"
#include "qlab/core/errors.hpp"

namespace qlab {

enum class RingKind { ExactInteger, ExactRationalLocalized, Residue };

/// Runtime description of a coefficient ring, used for mismatch checks,
/// serialization and cache keys.
struct CoefficientRing {
  RingKind kind = RingKind::ExactInteger;
  std::uint64_t prime = 0;
  int exponent = 0;

  friend bool operator==(const CoefficientRing&, const CoefficientRing&) = default;
};

inline std::string to_string(const CoefficientRing& r) {
  switch (r.kind) {
    case RingKind::ExactInteger:
      return "ZZ";
    case RingKind::ExactRationalLocalized:
      return "Z_(" + std::to_string(r.prime) + ")";
    case RingKind::Residue:
      return "Z/" + std::to_string(r.prime) + "^" + std::to_string(r.exponent);
  }
  return "?";
}

namespace detail {

inline mpq_class parse_rational(std::string_view text) {
  mpq_class q;
  if (q.set_str(std::string(text), 10) != 0) throw Error("malformed rational coefficient '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

inline mpz_class parse_integer(std::string_view text) {
  mpz_class z;
  if (z.set_str(std::string(text), 10) != 0) throw Error("malformed integer coefficient '" + std::string(text) + "'");
  return z;
}

}  // namespace detail

class IntegerRing {
 public:
  using value_type = mpz_class;
  using accumulator = mpz_class;

  CoefficientRing descriptor() const { return {RingKind::ExactInteger, 0, 0}; }
  friend bool operator==(const IntegerRing&, const IntegerRing&) { return true; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const {
    mpz_class r;
    mpz_set_si(r.get_mpz_t(), v);
    return r;
  }
  value_type from_mpz(const mpz_class& v) const { return v; }
  value_type from_rational(const mpq_class& v) const {
    if (v.get_den() != 1) throw NotLocalized("rational " + v.get_str() + " is not an integer");
    return v.get_num();
  }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  bool is_zero(const value_type& a) const { return a == 0; }
  bool is_unit(const value_type& a) const { return a == 1 || a == -1; }
  value_type inverse(const value_type& a) const {
    if (!is_unit(a)) throw NonUnit("integer " + a.get_str() + " is not a unit");
    return a;
  }

  accumulator acc_zero() const { return 0; }
  void acc_addmul(accumulator& acc, const value_type& a, const value_type& b) const {
    mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }
  value_type acc_value(const accumulator& acc) const { return acc; }

  mpq_class to_rational(const value_type& a) const { return mpq_class(a); }
  std::optional<long> valuation(const value_type& a, std::uint64_t p) const { return qlab::valuation(a, p); }
  std::string to_string(const value_type& a) const { return a.get_str(); }
  value_type parse(std::string_view text) const { return detail::parse_integer(text); }
};

/// Z localized at p: rationals whose reduced denominator is prime to p.
class LocalRationalRing {
 public:
  using value_type = mpq_class;
  using accumulator = mpq_class;

  explicit LocalRationalRing(std::uint64_t p) : p_(p) {
    if (!is_prime(p)) throw DomainError("localization requires a prime, got " + std::to_string(p));
  }

  std::uint64_t prime() const { return p_; }
  CoefficientRing descriptor() const { return {RingKind::ExactRationalLocalized, p_, 0}; }
  friend bool operator==(const LocalRationalRing& a, const LocalRationalRing& b) { return a.p_ == b.p_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const {
    mpz_class z;
    mpz_set_si(z.get_mpz_t(), v);
    return mpq_class(z);
  }
  value_type from_mpz(const mpz_class& v) const { return mpq_class(v); }
  value_type from_rational(const mpq_class& v) const {
    mpq_class c = v;
    c.canonicalize();
    check(c);
    return c;
  }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  bool is_zero(const value_type& a) const { return a == 0; }
  bool is_unit(const value_type& a) const {
    return a != 0 && mpz_divisible_ui_p(a.get_num_mpz_t(), static_cast<unsigned long>(p_)) == 0;
  }
  value_type inverse(const value_type& a) const {
    if (!is_unit(a)) throw NonUnit(a.get_str() + " is not a unit of Z_(" + std::to_string(p_) + ")");
    return 1 / a;
  }

  accumulator acc_zero() const { return 0; }
  void acc_addmul(accumulator& acc, const value_type& a, const value_type& b) const { acc += a * b; }
  value_type acc_value(const accumulator& acc) const { return acc; }

  mpq_class to_rational(const value_type& a) const { return a; }
  std::optional<long> valuation(const value_type& a, std::uint64_t p) const { return qlab::valuation(a, p); }
  std::string to_string(const value_type& a) const { return a.get_str(); }
  value_type parse(std::string_view text) const { return from_rational(detail::parse_rational(text)); }

  void check(const value_type& a) const {
    if (mpz_divisible_ui_p(a.get_den_mpz_t(), static_cast<unsigned long>(p_)) != 0) {
      throw NotLocalized("denominator of " + a.get_str() + " is divisible by " + std::to_string(p_));
    }
  }

 private:
  std::uint64_t p_;
};

/// Z/p^K with canonical representatives in [0, p^K) held in a machine word.
class ResidueRing {
 public:
  using value_type = std::uint64_t;

  struct accumulator {
    u128 sum = 0;
    std::uint64_t pending = 0;
  };

  ResidueRing(std::uint64_t p, int exponent) : p_(p), k_(exponent) {
    if (!is_prime(p)) throw DomainError("residue ring requires a prime, got " + std::to_string(p));
    if (exponent < 1) throw DomainError("residue exponent must be >= 1");
    auto m = checked_pow(p, static_cast<unsigned>(exponent));
    if (!m) throw DomainError("modulus " + std::to_string(p) + "^" + std::to_string(exponent) + " does not fit a machine word");
    m_ = *m;
    // Largest number of products (m-1)^2 that can be summed without
    // overflowing 128 bits; always >= 1 since m < 2^63.
    const u128 sq = static_cast<u128>(m_ - 1) * (m_ - 1);
    const u128 max = ~u128{0};
    batch_ = sq == 0 ? ~std::uint64_t{0} : static_cast<std::uint64_t>(std::min<u128>((max - m_) / sq, ~std::uint64_t{0}));
  }

  /// Whether p^K fits the machine-word backend.
  static bool fits(std::uint64_t p, int exponent) { return checked_pow(p, static_cast<unsigned>(exponent)).has_value(); }

  std::uint64_t prime() const { return p_; }
  int exponent() const { return k_; }
  std::uint64_t modulus() const { return m_; }
  /// The ring Z/p^(K-v), target of exact division by p^v.
  ResidueRing lowered(int v) const { return ResidueRing(p_, k_ - v); }

  CoefficientRing descriptor() const { return {RingKind::Residue, p_, k_}; }
  friend bool operator==(const ResidueRing& a, const ResidueRing& b) { return a.p_ == b.p_ && a.k_ == b.k_; }

  value_type zero() const { return 0; }
  value_type one() const { return m_ == 1 ? 0 : 1; }
  value_type from_int(long long v) const {
    __int128 r = static_cast<__int128>(v) % static_cast<__int128>(m_);
    if (r < 0) r += m_;
    return static_cast<value_type>(r);
  }
  value_type from_u64(std::uint64_t v) const { return v % m_; }
  value_type from_mpz(const mpz_class& v) const {
    return mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(m_));
  }
  value_type from_rational(const mpq_class& v) const {
    const std::uint64_t den = from_mpz(v.get_den());
    if (den % p_ == 0) throw NotLocalized("denominator of " + v.get_str() + " is divisible by " + std::to_string(p_));
    return mul(from_mpz(v.get_num()), inverse_mod(den, m_));
  }

  value_type add(value_type a, value_type b) const {
    value_type s = a + b;
    return s >= m_ ? s - m_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + (m_ - b); }
  value_type neg(value_type a) const { return a == 0 ? 0 : m_ - a; }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>(static_cast<u128>(a) * b % m_);
  }
  bool is_zero(value_type a) const { return a == 0; }
  bool is_unit(value_type a) const { return a % p_ != 0; }
  value_type inverse(value_type a) const {
    if (!is_unit(a)) throw NonUnit(std::to_string(a) + " is not a unit mod " + std::to_string(p_) + "^" + std::to_string(k_));
    return inverse_mod(a, m_);
  }

  accumulator acc_zero() const { return {}; }
  void acc_addmul(accumulator& acc, value_type a, value_type b) const {
    acc.sum += static_cast<u128>(a) * b;
    if (++acc.pending == batch_) {
      acc.sum %= m_;
      acc.pending = 0;
    }
  }
  value_type acc_value(const accumulator& acc) const { return static_cast<value_type>(acc.sum % m_); }

  mpq_class to_rational(value_type a) const {
    mpz_class z;
    mpz_set_ui(z.get_mpz_t(), static_cast<unsigned long>(a));
    return mpq_class(z);
  }
  /// v_p of the representative; nullopt for zero (meaning: at least K).
  std::optional<long> valuation(value_type a, std::uint64_t p) const {
    if (a == 0) return std::nullopt;
    return qlab::valuation(a, p);
  }
  std::string to_string(value_type a) const { return std::to_string(a); }
  value_type parse(std::string_view text) const { return from_mpz(detail::parse_integer(text)); }

 private:
  std::uint64_t p_;
  int k_;
  std::uint64_t m_ = 1;
  std::uint64_t batch_ = 1;
};

/// Z/p^K on arbitrary-precision representatives.
class BigResidueRing {
 public:
  using value_type = mpz_class;
  using accumulator = mpz_class;

  BigResidueRing(std::uint64_t p, int exponent) : p_(p), k_(exponent) {
    if (!is_prime(p)) throw DomainError("residue ring requires a prime, got " + std::to_string(p));
    if (exponent < 1) throw DomainError("residue exponent must be >= 1");
    m_ = mpz_pow(p, static_cast<unsigned long>(exponent));
  }

  std::uint64_t prime() const { return p_; }
  int exponent() const { return k_; }
  const mpz_class& modulus() const { return m_; }
  BigResidueRing lowered(int v) const { return BigResidueRing(p_, k_ - v); }

  CoefficientRing descriptor() const { return {RingKind::Residue, p_, k_}; }
  friend bool operator==(const BigResidueRing& a, const BigResidueRing& b) { return a.p_ == b.p_ && a.k_ == b.k_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const {
    mpz_class z;
    mpz_set_si(z.get_mpz_t(), v);
    return from_mpz(z);
  }
  value_type from_mpz(const mpz_class& v) const {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m_.get_mpz_t());
    return r;
  }
  value_type from_rational(const mpq_class& v) const {
    if (mpz_divisible_ui_p(v.get_den_mpz_t(), static_cast<unsigned long>(p_)) != 0) {
      throw NotLocalized("denominator of " + v.get_str() + " is divisible by " + std::to_string(p_));
    }
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), v.get_den_mpz_t(), m_.get_mpz_t());
    return from_mpz(v.get_num() * inv);
  }

  value_type add(const value_type& a, const value_type& b) const { return reduce(a + b); }
  value_type sub(const value_type& a, const value_type& b) const { return reduce(a - b); }
  value_type neg(const value_type& a) const { return reduce(-a); }
  value_type mul(const value_type& a, const value_type& b) const { return reduce(a * b); }
  bool is_zero(const value_type& a) const { return a == 0; }
  bool is_unit(const value_type& a) const {
    return mpz_divisible_ui_p(a.get_mpz_t(), static_cast<unsigned long>(p_)) == 0;
  }
  value_type inverse(const value_type& a) const {
    if (!is_unit(a)) throw NonUnit(a.get_str() + " is not a unit mod " + std::to_string(p_) + "^" + std::to_string(k_));
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), m_.get_mpz_t());
    return inv;
  }

  accumulator acc_zero() const { return 0; }
  void acc_addmul(accumulator& acc, const value_type& a, const value_type& b) const {
    mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }
  value_type acc_value(const accumulator& acc) const { return reduce(acc); }

  mpq_class to_rational(const value_type& a) const { return mpq_class(a); }
  std::optional<long> valuation(const value_type& a, std::uint64_t p) const { return qlab::valuation(a, p); }
  std::string to_string(const value_type& a) const { return a.get_str(); }
  value_type parse(std::string_view text) const { return from_mpz(detail::parse_integer(text)); }

 private:
  value_type reduce(const mpz_class& v) const {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m_.get_mpz_t());
    return r;
  }

  std::uint64_t p_;
  int k_;
  mpz_class m_;
};

template <class R>
inline constexpr bool is_residue_ring_v = std::is_same_v<R, ResidueRing> || std::is_same_v<R, BigResidueRing>;

template <class R>
inline constexpr bool is_exact_ring_v = std::is_same_v<R, IntegerRing> || std::is_same_v<R, LocalRationalRing>;

/// Calls fn with Z/p^K backed by machine words when p^K < 2^63 and by mpz
/// otherwise. Both instantiations must return the same type.
template <class Fn>
decltype(auto) with_residue_ring(std::uint64_t p, int exponent, Fn&& fn) {
  if (ResidueRing::fits(p, exponent)) return std::forward<Fn>(fn)(ResidueRing(p, exponent));
  return std::forward<Fn>(fn)(BigResidueRing(p, exponent));
}

}  // namespace qlab
