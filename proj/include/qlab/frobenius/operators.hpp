#pragma once

// Cartier (Lambda_p), Verschiebung (sigma_p) and the q-expansion Hecke
// operator T_p = Lambda_p + chi_3(p) p^4 sigma_p on Laurent series.

#include <climits>
#include <cstdint>

#include "qlab/core/arith.hpp"
#include "qlab/core/prime_context.hpp"
#include "qlab/core/series.hpp"

namespace qlab {

/// sum a_{pn} q^n. Lowest exponent ceil(L/p); known below q^floor(P/p).
template <class Ring>
TruncatedSeries<Ring> cartier(const TruncatedSeries<Ring>& f, std::uint64_t p) {
  const long pl = static_cast<long>(p);
  const long low = ceil_div(f.lowest_exponent(), pl);
  const long prec = floor_div(f.precision(), pl);
  if (prec <= low) return TruncatedSeries<Ring>::zero(f.ring(), prec);
  std::vector<typename Ring::value_type> out;
  out.reserve(static_cast<std::size_t>(prec - low));
  for (long n = low; n < prec; ++n) out.push_back(f[n * pl]);
  return TruncatedSeries<Ring>(f.ring(), low, prec, std::move(out));
}

/// f(q^p). Known below q^(pP).
template <class Ring>
TruncatedSeries<Ring> verschiebung(const TruncatedSeries<Ring>& f, std::uint64_t p) {
  const long pl = static_cast<long>(p);
  const long low = f.lowest_exponent() * pl;
  const long prec = f.precision() * pl;
  std::vector<typename Ring::value_type> out(static_cast<std::size_t>(prec - low), f.ring().zero());
  const auto c = f.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) out[i * p] = c[i];
  return TruncatedSeries<Ring>(f.ring(), low, prec, std::move(out));
}

/// Lambda_p(a b) without forming the full product: only the coefficients at
/// multiples of p are convolved.
template <class Ring>
TruncatedSeries<Ring> cartier_product(const TruncatedSeries<Ring>& a, const TruncatedSeries<Ring>& b, std::uint64_t p,
                                      long max_precision = LONG_MAX) {
  require_same_ring(a, b);
  const Ring& R = a.ring();
  const long pl = static_cast<long>(p);
  const long la = a.lowest_exponent(), lb = b.lowest_exponent();
  const long prod_prec = std::min(a.precision() + lb, b.precision() + la);
  const long low = ceil_div(la + lb, pl);
  const long prec = std::min(floor_div(prod_prec, pl), max_precision);
  if (prec <= low) return TruncatedSeries<Ring>::zero(R, prec);
  const auto ac = a.coefficients();
  const auto bc = b.coefficients();
  const long na = static_cast<long>(ac.size()), nb = static_cast<long>(bc.size());
  std::vector<typename Ring::value_type> out;
  out.reserve(static_cast<std::size_t>(prec - low));
  for (long n = low; n < prec; ++n) {
    const long k = n * pl - la - lb;  // index into the product block
    const long i_lo = std::max(0L, k - (nb - 1));
    const long i_hi = std::min(k, na - 1);
    auto acc = R.acc_zero();
    for (long i = i_lo; i <= i_hi; ++i) R.acc_addmul(acc, ac[static_cast<std::size_t>(i)], bc[static_cast<std::size_t>(k - i)]);
    out.push_back(R.acc_value(acc));
  }
  return TruncatedSeries<Ring>(R, low, prec, std::move(out));
}

/// T_p f = Lambda_p f + chi_3(p) p^4 sigma_p f.
template <class Ring>
TruncatedSeries<Ring> hecke_T_p(const TruncatedSeries<Ring>& f, const PrimeContext& ctx) {
  const long long p4 = static_cast<long long>(*checked_pow(ctx.p(), 4));
  return add(cartier(f, ctx.p()), scale(verschiebung(f, ctx.p()), ctx.chi3() * p4));
}

}  // namespace qlab
