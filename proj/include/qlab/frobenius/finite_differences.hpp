#pragma once

// Hecke finite differences and the phi/U layer conversion.
//
//   N_l(f)  = sum_{j=0..l} (-1)^(l-j) C(l,j) t^j T_p(f / t^(jp))
//   E_l(f)  = N_l(f) / p^l
//   V_l(f)  = sum_{j=0..l} (-1)^(l-j) C(l,j) t^j sigma_p(f / t^(jp))
//
// Since t^j Lambda_p(f t^(-jp)) = Lambda_p(f nu^j), the numerator splits
// exactly as N_l = Lambda_p(f phi^l) + chi_3(p) p^4 V_l.

#include <array>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>

#include "qlab/core/errors.hpp"
#include "qlab/core/padic.hpp"
#include "qlab/core/prime_context.hpp"
#include "qlab/core/series.hpp"
#include "qlab/frobenius/defects.hpp"
#include "qlab/frobenius/operators.hpp"

namespace qlab {

/// Pole order reached by sigma_p(f / t^(3p)): 3p^2.
inline long finite_difference_pole_cap(std::uint64_t p) { return 3 * static_cast<long>(p * p); }

namespace detail {

inline void require_layer(int ell, int lo) {
  if (ell < lo || ell > 3) throw DomainError("layer index " + std::to_string(ell) + " outside " + std::to_string(lo) + "..3");
}

template <class Ring>
TruncatedSeries<Ring> divide_layer(const TruncatedSeries<Ring>& a, std::uint64_t p, int ell) {
  if constexpr (std::is_same_v<Ring, IntegerRing>) {
    return divide_by_integer(a, mpz_pow(p, static_cast<unsigned long>(ell)));
  } else {
    return divide_by_p_power(a, ell);
  }
}

/// sum_j (-1)^(l-j) C(l,j) t^j op(f / t^(jp)), with op one of T_p, sigma_p.
template <class Ring, class Op>
TruncatedSeries<Ring> binomial_difference(const TruncatedSeries<Ring>& f, const TruncatedSeries<Ring>& t, const PrimeContext& ctx,
                                          int ell, long pole_cap, Op op) {
  const std::uint64_t p = ctx.p();
  std::optional<TruncatedSeries<Ring>> sum;
  for (int j = 0; j <= ell; ++j) {
    const auto inner = mul(f, invert(pow_int(t, j * static_cast<long>(p)), pole_cap));
    const auto transformed = op(inner);
    if (-transformed.lowest_exponent() > pole_cap) {
      throw PoleCapExceeded("finite difference term has a pole of order " + std::to_string(-transformed.lowest_exponent()));
    }
    auto term = mul(pow_int(t, j), transformed);
    long long c = binomial_small(ell, j);
    if ((ell - j) % 2 != 0) c = -c;
    term = scale(term, c);
    sum = sum ? add(*sum, term) : term;
  }
  return *sum;
}

}  // namespace detail

/// N_l(f). Asserts every coefficient is divisible by p^l (InexactDivision
/// otherwise).
template <class Ring>
TruncatedSeries<Ring> finite_difference_numerator(const TruncatedSeries<Ring>& f, const TruncatedSeries<Ring>& t, const PrimeContext& ctx,
                                                  int ell, long pole_cap = -1) {
  detail::require_layer(ell, 0);
  if (pole_cap < 0) pole_cap = finite_difference_pole_cap(ctx.p());
  auto n = detail::binomial_difference(f, t, ctx, ell, pole_cap, [&](const auto& h) { return hecke_T_p(h, ctx); });
  if (auto bad = first_not_divisible(n, ctx.p(), ell)) {
    throw InexactDivision("N_" + std::to_string(ell) + " coefficient of q^" + std::to_string(*bad) + " is not divisible by p^" + std::to_string(ell));
  }
  return n;
}

/// E_l(f) = N_l(f) / p^l, meaningful modulo p^(4-l).
template <class Ring>
TruncatedSeries<Ring> frak_E(const TruncatedSeries<Ring>& f, const TruncatedSeries<Ring>& t, const PrimeContext& ctx, int ell,
                             long pole_cap = -1) {
  return detail::divide_layer(finite_difference_numerator(f, t, ctx, ell, pole_cap), ctx.p(), ell);
}

/// The Verschiebung remainder V_l(f).
template <class Ring>
TruncatedSeries<Ring> verschiebung_remainder(const TruncatedSeries<Ring>& f, const TruncatedSeries<Ring>& t, const PrimeContext& ctx,
                                             int ell, long pole_cap = -1) {
  detail::require_layer(ell, 0);
  if (pole_cap < 0) pole_cap = finite_difference_pole_cap(ctx.p());
  return detail::binomial_difference(f, t, ctx, ell, pole_cap, [&](const auto& h) { return verschiebung(h, ctx.p()); });
}

/// Lambda_p(f phi^l) / p^l.
template <class Ring>
TruncatedSeries<Ring> cartier_layer(const TruncatedSeries<Ring>& f, const TruncatedSeries<Ring>& phi, std::uint64_t p, int ell) {
  detail::require_layer(ell, 1);
  return detail::divide_layer(cartier_product(f, pow_int(phi, ell), p), p, ell);
}

/// Three layer entries; entry l is only meaningful modulo p^(4-l).
template <class Ring>
struct LayerVector {
  std::array<TruncatedSeries<Ring>, 3> entries;

  const TruncatedSeries<Ring>& operator[](int ell) const { return entries[static_cast<std::size_t>(ell - 1)]; }
  static constexpr int modulus_exponent(int ell) { return 4 - ell; }
};

/// Phi_l = f phi^l / p^l and U_l = f U^l / p^l for l = 1, 2, 3 (f = 1 when
/// omitted).
template <class Ring>
std::pair<LayerVector<Ring>, LayerVector<Ring>> layer_vectors(const FrobeniusDefects<Ring>& d,
                                                              const std::optional<TruncatedSeries<Ring>>& f = std::nullopt) {
  auto phi_pow = d.phi, U_pow = d.U;
  std::array<std::optional<TruncatedSeries<Ring>>, 3> Phi, Ul;
  for (int ell = 1; ell <= 3; ++ell) {
    if (ell > 1) {
      phi_pow = mul(phi_pow, d.phi);
      U_pow = mul(U_pow, d.U);
    }
    Phi[static_cast<std::size_t>(ell - 1)] = divide_by_p_power(f ? mul(*f, phi_pow) : phi_pow, ell);
    Ul[static_cast<std::size_t>(ell - 1)] = divide_by_p_power(f ? mul(*f, U_pow) : U_pow, ell);
  }
  return {LayerVector<Ring>{{*Phi[0], *Phi[1], *Phi[2]}}, LayerVector<Ring>{{*Ul[0], *Ul[1], *Ul[2]}}};
}

/// Row l of Phi = M U, read modulo p^(4-l), where
/// M = [[-1, p/2, -p^2/6], [0, 1, -p], [0, 0, -1]].
template <class Ring>
TruncatedSeries<Ring> triangular_row(const LayerVector<Ring>& U, std::uint64_t p, int ell) {
  detail::require_layer(ell, 1);
  const long e = LayerVector<Ring>::modulus_exponent(ell);
  const auto u1 = modulo_view(U[1], e), u2 = modulo_view(U[2], e), u3 = modulo_view(U[3], e);
  const auto& R = u3.ring();
  const mpz_class pz(static_cast<unsigned long>(p));
  switch (ell) {
    case 1:
      return add(add(neg(u1), scale(u2, R.from_rational(mpq_class(pz, mpz_class(2))))), scale(u3, R.from_rational(mpq_class(mpz_class(-pz * pz), mpz_class(6)))));
    case 2:
      return sub(u2, scale(u3, static_cast<long long>(p)));
    default:
      return neg(u3);
  }
}

/// First (row, exponent) where the triangular relation fails.
template <class Ring>
std::optional<std::pair<int, long>> triangular_violation(const LayerVector<Ring>& Phi, const LayerVector<Ring>& U, std::uint64_t p) {
  for (int ell = 1; ell <= 3; ++ell) {
    const long e = LayerVector<Ring>::modulus_exponent(ell);
    if (auto n = first_difference_mod(modulo_view(Phi[ell], e), triangular_row(U, p, ell), e)) return std::make_pair(ell, *n);
  }
  return std::nullopt;
}

/// layer_vectors plus the triangular check; throws IdentityMismatch if the
/// relation fails.
template <class Ring>
std::pair<LayerVector<Ring>, LayerVector<Ring>> checked_layer_vectors(const FrobeniusDefects<Ring>& d,
                                                                      const std::optional<TruncatedSeries<Ring>>& f = std::nullopt) {
  auto layers = layer_vectors(d, f);
  if (auto bad = triangular_violation(layers.first, layers.second, d.ctx.p())) {
    throw IdentityMismatch("triangular layer relation fails in row " + std::to_string(bad->first) + " at q^" + std::to_string(bad->second));
  }
  return layers;
}

}  // namespace qlab
