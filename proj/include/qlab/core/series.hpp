#pragma once

// Truncated Laurent q-series over a pluggable coefficient ring.
//
// A series stores the dense coefficient block for exponents in
// [lowest_exponent, precision). Coefficients at exponents >= precision are
// unknown, never implicitly zero; every operation propagates the largest
// precision its inputs justify and no more.

#include <algorithm>
#include <climits>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qlab/core/errors.hpp"
#include "qlab/core/rings.hpp"

namespace qlab {

/// Default bound on the order of a principal part; operations that would
/// produce a deeper pole throw PoleCapExceeded.
inline constexpr long kDefaultPoleCap = 1L << 20;

template <class Ring>
class TruncatedSeries {
 public:
  using ring_type = Ring;
  using value_type = typename Ring::value_type;

  /// The zero series known on [lowest, precision).
  TruncatedSeries(Ring ring, long lowest, long precision)
      : ring_(std::move(ring)), lowest_(std::min(lowest, precision)), precision_(precision) {
    coeffs_.assign(static_cast<std::size_t>(precision_ - lowest_), ring_.zero());
    normalize();
  }

  TruncatedSeries(Ring ring, long lowest, long precision, std::vector<value_type> coefficients)
      : ring_(std::move(ring)), lowest_(lowest), precision_(precision), coeffs_(std::move(coefficients)) {
    if (lowest_ > precision_ || coeffs_.size() != static_cast<std::size_t>(precision_ - lowest_)) {
      throw Error("coefficient block does not match [" + std::to_string(lowest) + ", " + std::to_string(precision) + ")");
    }
    normalize();
  }

  static TruncatedSeries zero(Ring ring, long precision) { return TruncatedSeries(std::move(ring), precision, precision); }

  static TruncatedSeries one(Ring ring, long precision) {
    return monomial(ring, 0, ring.one(), precision);
  }

  static TruncatedSeries monomial(Ring ring, long exponent, value_type c, long precision) {
    if (exponent >= precision) return zero(std::move(ring), precision);
    std::vector<value_type> v(static_cast<std::size_t>(precision - exponent), ring.zero());
    v[0] = std::move(c);
    return TruncatedSeries(std::move(ring), exponent, precision, std::move(v));
  }

  /// Small integer literals, mostly for tests: values[i] is the coefficient
  /// of q^(lowest + i); the series is known up to `precision`.
  static TruncatedSeries from_ints(Ring ring, long lowest, std::initializer_list<long long> values, long precision) {
    std::vector<value_type> v(static_cast<std::size_t>(std::max(0L, precision - lowest)), ring.zero());
    long i = 0;
    for (long long x : values) {
      if (lowest + i >= precision) break;
      v[static_cast<std::size_t>(i++)] = ring.from_int(x);
    }
    return TruncatedSeries(std::move(ring), lowest, precision, std::move(v));
  }

  const Ring& ring() const { return ring_; }
  long lowest_exponent() const { return lowest_; }
  long precision() const { return precision_; }
  std::span<const value_type> coefficients() const { return coeffs_; }

  /// Coefficient of q^n; zero below the lowest exponent, an error at or
  /// beyond the precision.
  const value_type& operator[](long n) const {
    if (n >= precision_) {
      throw PrecisionError("coefficient q^" + std::to_string(n) + " requested from a series known below q^" +
                           std::to_string(precision_));
    }
    if (n < lowest_) return zero_;
    return coeffs_[static_cast<std::size_t>(n - lowest_)];
  }

  bool is_zero() const { return coeffs_.empty(); }

  /// q-adic valuation (exponent of the first nonzero coefficient).
  std::optional<long> valuation() const {
    if (coeffs_.empty()) return std::nullopt;
    return lowest_;
  }

  TruncatedSeries truncated(long precision) const {
    if (precision >= precision_) return *this;
    if (precision <= lowest_) return zero(ring_, precision);
    std::vector<value_type> v(coeffs_.begin(), coeffs_.begin() + (precision - lowest_));
    return TruncatedSeries(ring_, lowest_, precision, std::move(v));
  }

  /// Multiplication by q^k.
  TruncatedSeries shifted(long k) const {
    TruncatedSeries r = *this;
    r.lowest_ += k;
    r.precision_ += k;
    return r;
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.ring_ == b.ring_ && a.lowest_ == b.lowest_ && a.precision_ == b.precision_ && a.coeffs_ == b.coeffs_;
  }

 private:
  void normalize() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && ring_.is_zero(coeffs_[lead])) ++lead;
    if (lead == coeffs_.size()) {
      coeffs_.clear();
      lowest_ = precision_;
      return;
    }
    if (lead > 0) {
      coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
      lowest_ += static_cast<long>(lead);
    }
  }

  Ring ring_;
  long lowest_;
  long precision_;
  std::vector<value_type> coeffs_;
  value_type zero_ = ring_.zero();
};

template <class Ring>
void require_same_ring(const TruncatedSeries<Ring>& a, const TruncatedSeries<Ring>& b) {
  if (!(a.ring() == b.ring())) {
    throw RingMismatch("series over " + to_string(a.ring().descriptor()) + " and " + to_string(b.ring().descriptor()));
  }
}

namespace detail {

template <class Ring, class Op>
TruncatedSeries<Ring> combine(const TruncatedSeries<Ring>& a, const TruncatedSeries<Ring>& b, Op op) {
  require_same_ring(a, b);
  const Ring& R = a.ring();
  const long prec = std::min(a.precision(), b.precision());
  const long low = std::min({a.lowest_exponent(), b.lowest_exponent(), prec});
  std::vector<typename Ring::value_type> out(static_cast<std::size_t>(prec - low), R.zero());
  for (long n = low; n < prec; ++n) {
    out[static_cast<std::size_t>(n - low)] = op(R, a[n], b[n]);
  }
  return TruncatedSeries<Ring>(R, low, prec, std::move(out));
}

}  // namespace detail

template <class Ring>
TruncatedSeries<Ring> add(const TruncatedSeries<Ring>& a, const TruncatedSeries<Ring>& b) {
  return detail::combine(a, b, [](const Ring& R, const auto& x, const auto& y) { return R.add(x, y); });
}

template <class Ring>
TruncatedSeries<Ring> sub(const TruncatedSeries<Ring>& a, const TruncatedSeries<Ring>& b) {
  return detail::combine(a, b, [](const Ring& R, const auto& x, const auto& y) { return R.sub(x, y); });
}

template <class Ring>
TruncatedSeries<Ring> neg(const TruncatedSeries<Ring>& a) {
  const Ring& R = a.ring();
  std::vector<typename Ring::value_type> out;
  out.reserve(a.coefficients().size());
  for (const auto& c : a.coefficients()) out.push_back(R.neg(c));
  return TruncatedSeries<Ring>(R, a.lowest_exponent(), a.precision(), std::move(out));
}

template <class Ring>
TruncatedSeries<Ring> scale(const TruncatedSeries<Ring>& a, const typename Ring::value_type& c) {
  const Ring& R = a.ring();
  std::vector<typename Ring::value_type> out;
  out.reserve(a.coefficients().size());
  for (const auto& x : a.coefficients()) out.push_back(R.mul(c, x));
  return TruncatedSeries<Ring>(R, a.lowest_exponent(), a.precision(), std::move(out));
}

template <class Ring>
TruncatedSeries<Ring> scale(const TruncatedSeries<Ring>& a, long long c) {
  return scale(a, a.ring().from_int(c));
}

/// Cauchy product. The result is known below
/// min(prec_a + val_b, prec_b + val_a), optionally clipped to max_precision.
template <class Ring>
TruncatedSeries<Ring> mul(const TruncatedSeries<Ring>& a, const TruncatedSeries<Ring>& b, long max_precision = LONG_MAX) {
  require_same_ring(a, b);
  const Ring& R = a.ring();
  const long low = a.lowest_exponent() + b.lowest_exponent();
  const long prec = std::min({a.precision() + b.lowest_exponent(), b.precision() + a.lowest_exponent(), max_precision});
  if (prec <= low) return TruncatedSeries<Ring>::zero(R, prec);

  const auto ac = a.coefficients();
  const auto bc = b.coefficients();
  const long na = static_cast<long>(ac.size());
  const long nb = static_cast<long>(bc.size());
  const long len = prec - low;
  std::vector<typename Ring::value_type> out(static_cast<std::size_t>(len), R.zero());
  for (long k = 0; k < len; ++k) {
    const long i_lo = std::max(0L, k - (nb - 1));
    const long i_hi = std::min(k, na - 1);
    auto acc = R.acc_zero();
    for (long i = i_lo; i <= i_hi; ++i) R.acc_addmul(acc, ac[static_cast<std::size_t>(i)], bc[static_cast<std::size_t>(k - i)]);
    out[static_cast<std::size_t>(k)] = R.acc_value(acc);
  }
  return TruncatedSeries<Ring>(R, low, prec, std::move(out));
}

/// Multiplicative inverse. The leading coefficient must be a unit; a pole of
/// order greater than pole_cap is refused.
template <class Ring>
TruncatedSeries<Ring> invert(const TruncatedSeries<Ring>& a, long pole_cap = kDefaultPoleCap) {
  const Ring& R = a.ring();
  if (a.is_zero()) throw NonUnit("cannot invert a series with no known nonzero coefficient");
  const auto ac = a.coefficients();
  if (!R.is_unit(ac[0])) {
    throw NonUnit("leading coefficient " + R.to_string(ac[0]) + " of q^" + std::to_string(a.lowest_exponent()) + " is not a unit");
  }
  const long low = -a.lowest_exponent();
  if (low < -pole_cap) throw PoleCapExceeded("inverse would have a pole of order " + std::to_string(-low));
  const long n = static_cast<long>(ac.size());
  const auto lead_inv = R.inverse(ac[0]);
  std::vector<typename Ring::value_type> r(static_cast<std::size_t>(n), R.zero());
  r[0] = lead_inv;
  for (long k = 1; k < n; ++k) {
    auto acc = R.acc_zero();
    for (long j = 1; j <= k; ++j) R.acc_addmul(acc, ac[static_cast<std::size_t>(j)], r[static_cast<std::size_t>(k - j)]);
    r[static_cast<std::size_t>(k)] = R.neg(R.mul(lead_inv, R.acc_value(acc)));
  }
  return TruncatedSeries<Ring>(R, low, low + n, std::move(r));
}

/// a^e by binary powering; negative e goes through invert.
template <class Ring>
TruncatedSeries<Ring> pow_int(const TruncatedSeries<Ring>& a, long e, long pole_cap = kDefaultPoleCap) {
  if (e < 0) return pow_int(invert(a, pole_cap), -e, pole_cap);
  if (e == 0) {
    // 1 is exact; carry the relative precision of the base.
    const long rel = a.precision() - a.lowest_exponent();
    return TruncatedSeries<Ring>::one(a.ring(), std::max(rel, 1L));
  }
  std::optional<TruncatedSeries<Ring>> result;
  TruncatedSeries<Ring> base = a;
  while (true) {
    if (e & 1) result = result ? mul(*result, base) : base;
    e >>= 1;
    if (e == 0) break;
    base = mul(base, base);
  }
  if (-result->lowest_exponent() > pole_cap) {
    throw PoleCapExceeded("power would have a pole of order " + std::to_string(-result->lowest_exponent()));
  }
  return *result;
}

template <class Ring>
TruncatedSeries<Ring> divide(const TruncatedSeries<Ring>& a, const TruncatedSeries<Ring>& b, long pole_cap = kDefaultPoleCap) {
  return mul(a, invert(b, pole_cap));
}

/// a + c for a scalar c (added to the q^0 coefficient).
template <class Ring>
TruncatedSeries<Ring> add_constant(const TruncatedSeries<Ring>& a, long long c) {
  return add(a, TruncatedSeries<Ring>::monomial(a.ring(), 0, a.ring().from_int(c), a.precision()));
}

/// First exponent in the common known range where a and b differ.
template <class Ring>
std::optional<long> first_mismatch(const TruncatedSeries<Ring>& a, const TruncatedSeries<Ring>& b) {
  require_same_ring(a, b);
  const long prec = std::min(a.precision(), b.precision());
  const long low = std::min(a.lowest_exponent(), b.lowest_exponent());
  for (long n = low; n < prec; ++n) {
    if (!(a[n] == b[n])) return n;
  }
  return std::nullopt;
}

template <class Ring>
TruncatedSeries<Ring> operator+(const TruncatedSeries<Ring>& a, const TruncatedSeries<Ring>& b) {
  return add(a, b);
}
template <class Ring>
TruncatedSeries<Ring> operator-(const TruncatedSeries<Ring>& a, const TruncatedSeries<Ring>& b) {
  return sub(a, b);
}
template <class Ring>
TruncatedSeries<Ring> operator-(const TruncatedSeries<Ring>& a) {
  return neg(a);
}
template <class Ring>
TruncatedSeries<Ring> operator*(const TruncatedSeries<Ring>& a, const TruncatedSeries<Ring>& b) {
  return mul(a, b);
}

}  // namespace qlab
