#pragma once

// Frobenius defects of the level-3 parameters:
//   U_p = log(t^p / sigma_p t),  V_p = log(u^p / sigma_p u),  W_p = log(g^p / sigma_p g)
//   nu_p = sigma_p t / t^p = exp(-U_p),  phi_p = nu_p - 1.

#include <optional>
#include <string>
#include <type_traits>

#include "qlab/core/errors.hpp"
#include "qlab/core/padic.hpp"
#include "qlab/core/prime_context.hpp"
#include "qlab/core/series.hpp"
#include "qlab/frobenius/operators.hpp"
#include "qlab/modular/dictionary.hpp"

namespace qlab {

template <class Ring>
struct FrobeniusDefects {
  PrimeContext ctx;
  TruncatedSeries<Ring> U, V, W, nu, phi;
};

/// x^p / sigma_p(x), which is 1 + O(q) whenever x has leading coefficient
/// 1. sigma_p is a ring map, so the inverse is taken before dilating.
template <class Ring>
TruncatedSeries<Ring> frobenius_ratio(const TruncatedSeries<Ring>& x, std::uint64_t p) {
  return mul(pow_int(x, static_cast<long>(p)), verschiebung(invert(x), p));
}

/// log(x^p / sigma_p x). Throws DomainError naming `what` if the ratio is
/// not congruent to 1 mod p, which would mean the input is not a
/// Frobenius-compatible q-series (or has been corrupted).
template <class Ring>
TruncatedSeries<Ring> frobenius_log_defect(const TruncatedSeries<Ring>& x, const PrimeContext& ctx, const char* what) {
  try {
    return log1p_scaled(frobenius_ratio(x, ctx.p()), ctx);
  } catch (const DomainError& e) {
    throw DomainError(std::string("Frobenius defect of ") + what + " at p=" + std::to_string(ctx.p()) + ": " + e.what());
  }
}

/// First violated defect invariant, if any.
template <class Ring>
std::optional<std::string> defect_invariant_violation(const FrobeniusDefects<Ring>& d) {
  const std::uint64_t p = d.ctx.p();
  const std::pair<const char*, const TruncatedSeries<Ring>*> divisible[] = {{"U_p", &d.U}, {"V_p", &d.V}, {"W_p", &d.W}, {"phi_p", &d.phi}};
  for (const auto& [name, s] : divisible) {
    if (s->lowest_exponent() < 1) return std::string(name) + " has a nonzero constant term";
    if (auto n = first_not_divisible(*s, p, 1)) return std::string(name) + " coefficient of q^" + std::to_string(*n) + " is not divisible by p";
  }
  if (auto n = first_mismatch(d.U, sub(d.V, scale(d.W, 2)))) return "U_p != V_p - 2 W_p at q^" + std::to_string(*n);
  if (auto n = first_mismatch(d.phi, add_constant(d.nu, -1))) return "phi_p != nu_p - 1 at q^" + std::to_string(*n);
  long e = 4;
  if constexpr (is_residue_ring_v<Ring>) e = std::min<long>(e, d.U.ring().exponent());
  if (auto n = first_difference_mod(d.nu, exp_layers(d.U, -1), e)) {
    return "nu_p differs from the exponential layers of -U_p at q^" + std::to_string(*n);
  }
  return std::nullopt;
}

/// Builds the defects from a dictionary over Z/p^(K+guard) or Z_(p) and
/// verifies every invariant before returning; a violation throws
/// IdentityMismatch.
template <class Ring>
FrobeniusDefects<Ring> build_defects(const ModularDictionary<Ring>& dict, const PrimeContext& ctx) {
  static_assert(!std::is_same_v<Ring, IntegerRing>, "Frobenius defects need a p-local ring");
  const std::uint64_t p = ctx.p();
  FrobeniusDefects<Ring> d{ctx,
                           frobenius_log_defect(dict.t(), ctx, "t"),
                           frobenius_log_defect(dict.u(), ctx, "u"),
                           frobenius_log_defect(dict.g(), ctx, "g"),
                           invert(frobenius_ratio(dict.t(), p)),
                           TruncatedSeries<Ring>::zero(dict.ring(), 0)};
  d.phi = add_constant(d.nu, -1);
  if (auto why = defect_invariant_violation(d)) throw IdentityMismatch("defect invariant failed at p=" + std::to_string(p) + ": " + *why);
  return d;
}

}  // namespace qlab
