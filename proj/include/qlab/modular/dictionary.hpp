#pragma once

// The level-3 dictionary: every named q-expansion the verification pipeline
// consumes, with each object that has two independent formulas built both
// ways and compared.

#include <map>
#include <optional>
#include <string>
#include <type_traits>

#include "qlab/core/errors.hpp"
#include "qlab/core/series.hpp"
#include "qlab/modular/eisenstein.hpp"
#include "qlab/modular/eta.hpp"
#include "qlab/modular/theta.hpp"

namespace qlab {

enum class ObjectName { u, g, alpha, t, H_mix, ThetaA, ThetaB, ThetaD, C0, uC0, C_mix, E5_chi0_chi3, E5_chi3_chi0 };

inline const char* to_string(ObjectName n) {
  switch (n) {
    case ObjectName::u: return "u";
    case ObjectName::g: return "g";
    case ObjectName::alpha: return "alpha";
    case ObjectName::t: return "t";
    case ObjectName::H_mix: return "H_mix";
    case ObjectName::ThetaA: return "ThetaA";
    case ObjectName::ThetaB: return "ThetaB";
    case ObjectName::ThetaD: return "ThetaD";
    case ObjectName::C0: return "C0";
    case ObjectName::uC0: return "uC0";
    case ObjectName::C_mix: return "C_mix";
    case ObjectName::E5_chi0_chi3: return "E5_chi0_chi3";
    case ObjectName::E5_chi3_chi0: return "E5_chi3_chi0";
  }
  return "?";
}

inline std::optional<ObjectName> parse_object_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(ObjectName::E5_chi3_chi0); ++i) {
    auto n = static_cast<ObjectName>(i);
    if (s == to_string(n)) return n;
  }
  return std::nullopt;
}

enum class Construction { EtaQuotient, Composition, Inversion, ProductFormula, LatticeSum, DivisorSum, ThetaProduct };

inline const char* to_string(Construction c) {
  switch (c) {
    case Construction::EtaQuotient: return "eta_quotient";
    case Construction::Composition: return "composition";
    case Construction::Inversion: return "inversion";
    case Construction::ProductFormula: return "product_formula";
    case Construction::LatticeSum: return "lattice_sum";
    case Construction::DivisorSum: return "divisor_sum";
    case Construction::ThetaProduct: return "theta_product";
  }
  return "?";
}

template <class Ring>
struct ModularObject {
  ObjectName name;
  TruncatedSeries<Ring> series;
  Construction construction;
};

template <class Ring>
class ModularDictionary {
 public:
  ModularDictionary(Ring ring, long precision) : ring_(std::move(ring)), precision_(precision) {}

  const Ring& ring() const { return ring_; }
  long precision() const { return precision_; }

  bool contains(ObjectName n) const { return objects_.count(n) != 0; }
  const ModularObject<Ring>& object(ObjectName n) const {
    auto it = objects_.find(n);
    if (it == objects_.end()) throw Error(std::string("dictionary has no ") + to_string(n));
    return it->second;
  }
  const TruncatedSeries<Ring>& operator[](ObjectName n) const { return object(n).series; }
  const std::map<ObjectName, ModularObject<Ring>>& objects() const { return objects_; }

  void insert(ObjectName n, TruncatedSeries<Ring> s, Construction c) { objects_.insert_or_assign(n, ModularObject<Ring>{n, std::move(s), c}); }

  const TruncatedSeries<Ring>& u() const { return (*this)[ObjectName::u]; }
  const TruncatedSeries<Ring>& g() const { return (*this)[ObjectName::g]; }
  const TruncatedSeries<Ring>& t() const { return (*this)[ObjectName::t]; }
  const TruncatedSeries<Ring>& H_mix() const { return (*this)[ObjectName::H_mix]; }
  const TruncatedSeries<Ring>& C0() const { return (*this)[ObjectName::C0]; }
  const TruncatedSeries<Ring>& uC0() const { return (*this)[ObjectName::uC0]; }
  const TruncatedSeries<Ring>& C_mix() const { return (*this)[ObjectName::C_mix]; }

 private:
  Ring ring_;
  long precision_;
  std::map<ObjectName, ModularObject<Ring>> objects_;
};

namespace detail {

template <class Ring>
void require_identity(const char* what, const TruncatedSeries<Ring>& a, const TruncatedSeries<Ring>& b) {
  if (auto n = first_mismatch(a, b)) {
    throw IdentityMismatch(std::string(what) + ": constructions disagree at q^" + std::to_string(*n) + " (" +
                           a.ring().to_string(a[*n]) + " vs " + b.ring().to_string(b[*n]) + ")");
  }
}

}  // namespace detail

/// Builds the dictionary below q^precision. The dual constructions compared
/// here are H_mix (q/t against the product formula), C0 (3E_{5,chi0,chi3}
/// against A^2 B^3), uC0 (u*C0 against E_{5,chi3,chi0}) and C_mix
/// (C0 - 27 uC0 against (1 - 27u) C0); any disagreement throws
/// IdentityMismatch.
template <class Ring>
ModularDictionary<Ring> build_dictionary(const Ring& R, long precision) {
  if (precision < 4) throw DomainError("dictionary precision must be >= 4");
  const long N = precision;
  ModularDictionary<Ring> d(R, N);

  const auto u = eta_quotient(R, EtaQuotientSpec{{{3, 12}, {1, -12}}}, N);
  const auto g = add_constant(scale(u, 27), 1);
  const auto g_inv = invert(g);
  const auto alpha = mul(scale(u, 27), g_inv);
  const auto t = mul(u, mul(g_inv, g_inv));
  d.insert(ObjectName::u, u, Construction::EtaQuotient);
  d.insert(ObjectName::g, g, Construction::Composition);
  d.insert(ObjectName::alpha, alpha, Construction::Composition);
  d.insert(ObjectName::t, t, Construction::Composition);

  // prod_{3 not| n} (1-q^n)^12 = prod (1-q^n)^12 / prod (1-q^{3n})^12.
  const auto H_by_product = mul(eta_product_normalized(R, EtaQuotientSpec{{{1, 12}, {3, -12}}}, N), mul(g, g));
  const auto H_by_inversion = invert(t.shifted(-1));
  detail::require_identity("H_mix", H_by_inversion, H_by_product);
  d.insert(ObjectName::H_mix, H_by_product, Construction::ProductFormula);

  const auto A = theta_A(R, N);
  const auto B = theta_B(R, N);
  d.insert(ObjectName::ThetaA, A, Construction::LatticeSum);
  d.insert(ObjectName::ThetaB, B, Construction::EtaQuotient);
  d.insert(ObjectName::ThetaD, theta_D_normalized(R, N), Construction::EtaQuotient);

  const auto C0 = eisenstein_C0(R, N);
  const auto B2 = mul(B, B);
  detail::require_identity("C0", C0, mul(mul(A, A), mul(B2, B)));
  d.insert(ObjectName::C0, C0, Construction::DivisorSum);

  const auto E_chi3_chi0 = eisenstein_5(R, CharacterMod3::Chi3, CharacterMod3::Chi0, N);
  detail::require_identity("uC0", mul(u, C0), E_chi3_chi0);
  d.insert(ObjectName::uC0, E_chi3_chi0, Construction::DivisorSum);
  d.insert(ObjectName::E5_chi3_chi0, E_chi3_chi0, Construction::DivisorSum);
  if constexpr (!std::is_same_v<Ring, IntegerRing>) {
    d.insert(ObjectName::E5_chi0_chi3, eisenstein_5(R, CharacterMod3::Chi0, CharacterMod3::Chi3, N), Construction::DivisorSum);
  }

  const auto C_mix = sub(C0, scale(E_chi3_chi0, 27));
  detail::require_identity("C_mix", C_mix, mul(add_constant(scale(u, -27), 1), C0));
  d.insert(ObjectName::C_mix, C_mix, Construction::Composition);
  return d;
}

/// Compares u*C0 with E_{5,chi3,chi0}: first the two coefficients a_0, a_1
/// that determine a form in this space, then every coefficient below
/// q^precision. Returns false on any mismatch.
template <class Ring>
bool verify_sturm_identification(const TruncatedSeries<Ring>& u, const TruncatedSeries<Ring>& C0,
                                 const TruncatedSeries<Ring>& E) {
  const auto lhs = mul(u, C0);
  if (lhs.precision() < 2 || E.precision() < 2) return false;
  for (long n = 0; n < 2; ++n) {
    if (!(lhs[n] == E[n])) return false;
  }
  return !first_mismatch(lhs, E).has_value();
}

template <class Ring>
bool verify_sturm_identification(const Ring& R, long precision) {
  if (precision < 2) throw DomainError("Sturm comparison needs precision >= 2");
  const auto u = eta_quotient(R, EtaQuotientSpec{{{3, 12}, {1, -12}}}, precision);
  return verify_sturm_identification(u, eisenstein_C0(R, precision), eisenstein_5(R, CharacterMod3::Chi3, CharacterMod3::Chi0, precision));
}

}  // namespace qlab
