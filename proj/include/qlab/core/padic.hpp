#pragma once

// p-adic bookkeeping on truncated series: ring changes, valuations, exact
// division by powers of p, and the scaled logarithm/exponential used for the
// Frobenius defects.

#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>

#include "qlab/core/arith.hpp"
#include "qlab/core/errors.hpp"
#include "qlab/core/prime_context.hpp"
#include "qlab/core/rings.hpp"
#include "qlab/core/series.hpp"

namespace qlab {

/// The prime attached to a localized or residue ring; 0 for Z.
template <class Ring>
std::uint64_t ring_prime(const Ring& r) {
  if constexpr (std::is_same_v<Ring, IntegerRing>) {
    return 0;
  } else {
    return r.prime();
  }
}

/// Image of a single coefficient under the canonical map From -> To.
/// Only ring homomorphisms are allowed: exact rings map anywhere their
/// denominators permit, residue rings only map to Z/p^K' with K' <= K.
template <class From, class To>
typename To::value_type convert_value(const From& from, const typename From::value_type& v, const To& to) {
  if constexpr (is_residue_ring_v<From>) {
    static_assert(is_residue_ring_v<To>, "residue classes cannot be mapped into an exact ring");
    if (from.prime() != to.prime() || to.exponent() > from.exponent()) {
      throw RingMismatch("no reduction map " + to_string(from.descriptor()) + " -> " + to_string(to.descriptor()));
    }
    if constexpr (std::is_same_v<From, ResidueRing> && std::is_same_v<To, ResidueRing>) {
      return to.from_u64(v);
    } else if constexpr (std::is_same_v<From, ResidueRing>) {
      return to.from_mpz(mpz_class(static_cast<unsigned long>(v)));
    } else {
      return to.from_mpz(v);
    }
  } else if constexpr (std::is_same_v<From, IntegerRing>) {
    return to.from_mpz(v);
  } else {
    return to.from_rational(v);
  }
}

template <class From, class To>
TruncatedSeries<To> change_ring(const TruncatedSeries<From>& a, const To& to) {
  std::vector<typename To::value_type> out;
  out.reserve(a.coefficients().size());
  for (const auto& c : a.coefficients()) out.push_back(convert_value(a.ring(), c, to));
  return TruncatedSeries<To>(to, a.lowest_exponent(), a.precision(), std::move(out));
}

/// Coefficientwise canonical reduction into Z/p^K.
template <class From>
TruncatedSeries<ResidueRing> reduce_mod(const TruncatedSeries<From>& a, std::uint64_t p, int K) {
  return change_ring(a, ResidueRing(p, K));
}

/// min_n v_p(a_n); nullopt for the zero series. Over Z/p^K a vanishing
/// coefficient is treated as infinite, so the answer is only meaningful
/// below K.
template <class Ring>
std::optional<long> p_valuation(const TruncatedSeries<Ring>& a, std::uint64_t p) {
  std::optional<long> best;
  for (const auto& c : a.coefficients()) {
    auto v = a.ring().valuation(c, p);
    if (v && (!best || *v < *best)) best = v;
  }
  return best;
}

/// Exponent of the first coefficient with v_p < e; nullopt if every known
/// coefficient is divisible by p^e.
template <class Ring>
std::optional<long> first_not_divisible(const TruncatedSeries<Ring>& a, std::uint64_t p, long e) {
  if constexpr (is_residue_ring_v<Ring>) {
    if (e > a.ring().exponent()) throw DomainError("cannot test divisibility by p^" + std::to_string(e) + " in " + to_string(a.ring().descriptor()));
  }
  for (long n = a.lowest_exponent(); n < a.precision(); ++n) {
    auto v = a.ring().valuation(a[n], p);
    if (v && *v < e) return n;
  }
  return std::nullopt;
}

/// Exponent of the first coefficient where a and b differ modulo p^e.
template <class Ring>
std::optional<long> first_noncongruence(const TruncatedSeries<Ring>& a, const TruncatedSeries<Ring>& b, std::uint64_t p,
                                        long e) {
  return first_not_divisible(sub(a, b), p, e);
}

/// Exponent of the first coefficient where a and b differ modulo p^e, for
/// series that may live in different residue rings Z/p^K, Z/p^K' (both
/// K, K' >= e) or in the same exact ring.
template <class Ring>
std::optional<long> first_difference_mod(const TruncatedSeries<Ring>& a, const TruncatedSeries<Ring>& b, long e) {
  if (e <= 0) return std::nullopt;
  if constexpr (is_residue_ring_v<Ring>) {
    const Ring target(a.ring().prime(), static_cast<int>(e));
    return first_mismatch(change_ring(a, target), change_ring(b, target));
  } else if constexpr (std::is_same_v<Ring, IntegerRing>) {
    throw DomainError("first_difference_mod over Z needs a prime; use first_noncongruence");
  } else {
    return first_noncongruence(a, b, a.ring().prime(), e);
  }
}

/// a read modulo p^e: over a residue ring the image in Z/p^e, over an exact
/// ring a itself (comparisons then go through first_difference_mod).
template <class Ring>
TruncatedSeries<Ring> modulo_view(const TruncatedSeries<Ring>& a, long e) {
  if constexpr (is_residue_ring_v<Ring>) {
    return change_ring(a, Ring(a.ring().prime(), static_cast<int>(e)));
  } else {
    return a;
  }
}

/// Exact division of every coefficient by p^v. Over Z/p^K the quotient lands
/// in Z/p^(K-v); over exact rings the ring is unchanged. Throws
/// InexactDivision if some coefficient is not divisible.
template <class Ring>
TruncatedSeries<Ring> divide_by_p_power(const TruncatedSeries<Ring>& a, long v) {
  if (v < 0) throw DomainError("negative p-power division");
  if (v == 0) return a;
  const Ring& R = a.ring();
  if constexpr (std::is_same_v<Ring, IntegerRing>) {
    throw DomainError("divide_by_p_power over Z needs an explicit prime; use divide_by_integer");
  } else {
    const std::uint64_t p = R.prime();
    if constexpr (is_residue_ring_v<Ring>) {
      if (v >= R.exponent()) throw DomainError("division by p^" + std::to_string(v) + " exhausts " + to_string(R.descriptor()));
      const Ring target = R.lowered(static_cast<int>(v));
      std::vector<typename Ring::value_type> out;
      out.reserve(a.coefficients().size());
      if constexpr (std::is_same_v<Ring, ResidueRing>) {
        const std::uint64_t pv = *checked_pow(p, static_cast<unsigned>(v));
        for (long n = a.lowest_exponent(); n < a.precision(); ++n) {
          const auto c = a[n];
          if (c % pv != 0) throw InexactDivision("coefficient of q^" + std::to_string(n) + " is not divisible by p^" + std::to_string(v));
          out.push_back(c / pv);
        }
      } else {
        const mpz_class pv = mpz_pow(p, static_cast<unsigned long>(v));
        for (long n = a.lowest_exponent(); n < a.precision(); ++n) {
          const auto& c = a[n];
          if (mpz_divisible_p(c.get_mpz_t(), pv.get_mpz_t()) == 0) {
            throw InexactDivision("coefficient of q^" + std::to_string(n) + " is not divisible by p^" + std::to_string(v));
          }
          out.push_back(target.from_mpz(c / pv));
        }
      }
      return TruncatedSeries<Ring>(target, a.lowest_exponent(), a.precision(), std::move(out));
    } else {
      const mpq_class pv(mpz_pow(p, static_cast<unsigned long>(v)));
      std::vector<mpq_class> out;
      out.reserve(a.coefficients().size());
      for (long n = a.lowest_exponent(); n < a.precision(); ++n) {
        mpq_class c = a[n] / pv;
        auto val = qlab::valuation(c, p);
        if (val && *val < 0) throw InexactDivision("coefficient of q^" + std::to_string(n) + " is not divisible by p^" + std::to_string(v));
        out.push_back(std::move(c));
      }
      return TruncatedSeries<Ring>(R, a.lowest_exponent(), a.precision(), std::move(out));
    }
  }
}

/// Exact division by a nonzero integer over Z.
inline TruncatedSeries<IntegerRing> divide_by_integer(const TruncatedSeries<IntegerRing>& a, const mpz_class& d) {
  std::vector<mpz_class> out;
  out.reserve(a.coefficients().size());
  for (long n = a.lowest_exponent(); n < a.precision(); ++n) {
    if (mpz_divisible_p(a[n].get_mpz_t(), d.get_mpz_t()) == 0) {
      throw InexactDivision("coefficient of q^" + std::to_string(n) + " is not divisible by " + d.get_str());
    }
    out.push_back(a[n] / d);
  }
  return TruncatedSeries<IntegerRing>(a.ring(), a.lowest_exponent(), a.precision(), std::move(out));
}

namespace detail {

template <class Ring>
void require_prime_match(const Ring& R, const PrimeContext& ctx) {
  static_assert(!std::is_same_v<Ring, IntegerRing>, "the p-adic logarithm is not defined over Z; use LocalRationalRing");
  if (R.prime() != ctx.p()) {
    throw RingMismatch("ring " + to_string(R.descriptor()) + " does not match p=" + std::to_string(ctx.p()));
  }
}

/// Checks x = 1 + h with p | h and returns h.
template <class Ring>
TruncatedSeries<Ring> frobenius_compatible_part(const TruncatedSeries<Ring>& x, std::uint64_t p) {
  if (x.lowest_exponent() < 0) throw DomainError("log argument has a principal part");
  if (!(x[0] == x.ring().one())) throw DomainError("log argument must have constant term 1");
  auto h = add_constant(x, -1);
  if (auto n = first_not_divisible(h, p, 1)) {
    throw DomainError("coefficient of q^" + std::to_string(*n) + " in log argument is not divisible by p");
  }
  return h;
}

/// h / p with representatives divided exactly, kept in the same ring. Over
/// Z/p^K the quotient is only determined mod p^(K-1); every use multiplies
/// it back by a positive power of p, which absorbs the ambiguity.
template <class Ring>
TruncatedSeries<Ring> lift_divide_by_p(const TruncatedSeries<Ring>& h) {
  const Ring& R = h.ring();
  const std::uint64_t p = R.prime();
  std::vector<typename Ring::value_type> out;
  out.reserve(h.coefficients().size());
  for (const auto& c : h.coefficients()) {
    if constexpr (std::is_same_v<Ring, ResidueRing>) {
      out.push_back(c / p);
    } else if constexpr (std::is_same_v<Ring, BigResidueRing>) {
      out.push_back(c / static_cast<unsigned long>(p));
    } else {
      out.push_back(c / mpq_class(static_cast<unsigned long>(p)));
    }
  }
  return TruncatedSeries<Ring>(R, h.lowest_exponent(), h.precision(), std::move(out));
}

template <class Ring>
typename Ring::value_type power_of_p(const Ring& R, long e) {
  auto r = R.one();
  const auto p = R.from_int(static_cast<long long>(R.prime()));
  for (long i = 0; i < e; ++i) r = R.mul(r, p);
  return r;
}

/// q * d/dq.
template <class Ring>
TruncatedSeries<Ring> theta_derivative(const TruncatedSeries<Ring>& a) {
  const Ring& R = a.ring();
  std::vector<typename Ring::value_type> out;
  out.reserve(a.coefficients().size());
  for (long n = a.lowest_exponent(); n < a.precision(); ++n) out.push_back(R.mul(R.from_int(n), a[n]));
  return TruncatedSeries<Ring>(R, a.lowest_exponent(), a.precision(), std::move(out));
}

}  // namespace detail

/// Smallest k with k - floor(log_p k) >= M: every term h^k/k of log(1+h)
/// with k >= k_max vanishes modulo p^M when p | h.
inline long log_series_cutoff(std::uint64_t p, int M) {
  long k = 1;
  while (k - floor_log(k, p) < M) ++k;
  return k;
}

/// log(1+h) for h with zero constant term and p | h.
///
/// Over Z/p^M this sums (-1)^(k+1) h^k / k for k <= log_series_cutoff(p, M),
/// writing h = p h' and h^k / k = p^(k - v_p(k)) h'^k / (k / p^(v_p(k))) so
/// that no division by p is ever performed on a residue. Over Z_(p) the
/// logarithm is computed exactly through the logarithmic derivative
/// (n c_n = [q^n] q x'/x), which is an independent route.
template <class Ring>
TruncatedSeries<Ring> log1p_scaled(const TruncatedSeries<Ring>& x, const PrimeContext& ctx) {
  const Ring& R = x.ring();
  detail::require_prime_match(R, ctx);
  const std::uint64_t p = ctx.p();
  auto h = detail::frobenius_compatible_part(x, p);

  if constexpr (is_residue_ring_v<Ring>) {
    const int M = R.exponent();
    const long k_max = log_series_cutoff(p, M);
    const auto hp = detail::lift_divide_by_p(h);
    auto result = TruncatedSeries<Ring>::zero(R, x.precision());
    auto power = TruncatedSeries<Ring>::one(R, x.precision());
    for (long k = 1; k <= k_max; ++k) {
      power = mul(power, hp);
      const long v = valuation(static_cast<std::uint64_t>(k), p);
      if (k - v >= M) continue;
      long unit = k;
      for (long i = 0; i < v; ++i) unit /= static_cast<long>(p);
      auto c = R.mul(detail::power_of_p(R, k - v), R.inverse(R.from_int(unit)));
      if (k % 2 == 0) c = R.neg(c);
      result = add(result, scale(power, c));
    }
    return result;
  } else {
    const auto qdx = detail::theta_derivative(x);
    const auto ratio = mul(qdx, invert(x));
    std::vector<mpq_class> out;
    for (long n = 1; n < ratio.precision(); ++n) out.push_back(R.from_rational(ratio[n] / mpq_class(n)));
    return TruncatedSeries<Ring>(R, 1, ratio.precision(), std::move(out));
  }
}

/// exp(x) for x with zero constant term and p | x; the inverse of
/// log1p_scaled. Same two strategies: a truncated sum with p-powers split off
/// over Z/p^M, the differential equation E' = x'E over Z_(p).
template <class Ring>
TruncatedSeries<Ring> exp_scaled(const TruncatedSeries<Ring>& x, const PrimeContext& ctx) {
  const Ring& R = x.ring();
  detail::require_prime_match(R, ctx);
  const std::uint64_t p = ctx.p();
  if (x.lowest_exponent() < 1) throw DomainError("exp argument must have zero constant term");
  if (auto n = first_not_divisible(x, p, 1)) {
    throw DomainError("coefficient of q^" + std::to_string(*n) + " in exp argument is not divisible by p");
  }

  if constexpr (is_residue_ring_v<Ring>) {
    const long M = R.exponent();
    const auto xp = detail::lift_divide_by_p(x);
    auto result = TruncatedSeries<Ring>::one(R, x.precision());
    auto power = TruncatedSeries<Ring>::one(R, x.precision());
    mpz_class unit_factorial = 1;
    // v_p(x^k/k!) >= k - (k-1)/(p-1), increasing in k.
    for (long k = 1; static_cast<long>(k * (p - 2) + 1) < M * static_cast<long>(p - 1); ++k) {
      power = mul(power, xp);
      long kk = k;
      while (kk % static_cast<long>(p) == 0) kk /= static_cast<long>(p);
      unit_factorial *= kk;
      const long v = factorial_valuation(k, p);
      if (k - v >= M) continue;
      const auto c = R.mul(detail::power_of_p(R, k - v), R.inverse(R.from_mpz(unit_factorial)));
      result = add(result, scale(power, c));
    }
    return result;
  } else {
    const long prec = x.precision();
    std::vector<mpq_class> e(static_cast<std::size_t>(prec), mpq_class(0));
    e[0] = 1;
    for (long n = 1; n < prec; ++n) {
      mpq_class s = 0;
      for (long j = std::max(1L, x.lowest_exponent()); j <= n; ++j) s += j * x[j] * e[static_cast<std::size_t>(n - j)];
      e[static_cast<std::size_t>(n)] = s / n;
    }
    for (auto& c : e) c = R.from_rational(c);
    return TruncatedSeries<Ring>(R, 0, prec, std::move(e));
  }
}

/// The four-term exponential layer sum sum_{l<=3} X^l U^l / l!, which agrees
/// with exp(X U) modulo p^4 whenever p | U and p >= 5.
template <class Ring>
TruncatedSeries<Ring> exp_layers(const TruncatedSeries<Ring>& U, long X) {
  const Ring& R = U.ring();
  auto result = TruncatedSeries<Ring>::one(R, U.precision());
  auto power = TruncatedSeries<Ring>::one(R, U.precision());
  mpq_class coeff = 1;
  for (int l = 1; l <= 3; ++l) {
    power = mul(power, U);
    coeff *= mpq_class(mpz_class(static_cast<long>(X)), mpz_class(l));
    coeff.canonicalize();
    result = add(result, scale(power, R.from_rational(coeff)));
  }
  return result;
}

}  // namespace qlab
