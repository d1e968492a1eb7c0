#pragma once

// Coefficient extraction against the dictionary:
//   A_m^(eps) = [q^m] (C0 - 27 eps uC0) H_mix^m,   A_m^mix = A_m^(+1).

#include <string>
#include <vector>

#include "qlab/core/errors.hpp"
#include "qlab/core/series.hpp"
#include "qlab/modular/dictionary.hpp"

namespace qlab {

enum class BranchSelector : int { Plus = 1, Minus = -1 };

inline BranchSelector branch_from_sign(int eps) {
  if (eps == 1) return BranchSelector::Plus;
  if (eps == -1) return BranchSelector::Minus;
  throw DomainError("branch sign must be +1 or -1, got " + std::to_string(eps));
}

inline int sign_of(BranchSelector b) { return static_cast<int>(b); }

namespace detail {

template <class Ring>
void require_dictionary_precision(const ModularDictionary<Ring>& dict, long m) {
  if (m < 0) throw DomainError("coefficient index must be non-negative");
  if (dict.precision() <= m) {
    throw PrecisionError("A_" + std::to_string(m) + " needs dictionary precision > " + std::to_string(m) + ", have " +
                         std::to_string(dict.precision()));
  }
}

// [q^m] f h, both known through q^m.
template <class Ring>
typename Ring::value_type coefficient_of_product(const TruncatedSeries<Ring>& f, const TruncatedSeries<Ring>& h, long m) {
  const Ring& R = f.ring();
  auto acc = R.acc_zero();
  for (long i = 0; i <= m; ++i) R.acc_addmul(acc, f[i], h[m - i]);
  return R.acc_value(acc);
}

}  // namespace detail

template <class Ring>
TruncatedSeries<Ring> branch_series(const ModularDictionary<Ring>& dict, BranchSelector eps) {
  return sub(dict.C0(), scale(dict.uC0(), 27LL * sign_of(eps)));
}

template <class Ring>
typename Ring::value_type branch_coefficient(long m, BranchSelector eps, const ModularDictionary<Ring>& dict) {
  detail::require_dictionary_precision(dict, m);
  const auto h = pow_int(dict.H_mix().truncated(m + 1), m);
  return detail::coefficient_of_product(branch_series(dict, eps), h, m);
}

template <class Ring>
typename Ring::value_type lagrange_burmann_coefficient(long m, const ModularDictionary<Ring>& dict) {
  detail::require_dictionary_precision(dict, m);
  const auto h = pow_int(dict.H_mix().truncated(m + 1), m);
  return detail::coefficient_of_product(dict.C_mix(), h, m);
}

/// [q^m] C^(eps) H_mix^m for m = 0..m_max, with H_mix^m built incrementally.
template <class Ring>
std::vector<typename Ring::value_type> branch_sweep(long m_max, BranchSelector eps, const ModularDictionary<Ring>& dict) {
  detail::require_dictionary_precision(dict, m_max);
  const long n = m_max + 1;
  const auto H = dict.H_mix().truncated(n);
  const auto C = branch_series(dict, eps).truncated(n);
  std::vector<typename Ring::value_type> out;
  out.reserve(static_cast<std::size_t>(n));
  auto Hm = TruncatedSeries<Ring>::one(dict.ring(), n);
  for (long m = 0; m <= m_max; ++m) {
    if (m > 0) Hm = mul(Hm, H);
    out.push_back(detail::coefficient_of_product(C, Hm, m));
  }
  return out;
}

template <class Ring>
std::vector<typename Ring::value_type> lagrange_burmann_sweep(long m_max, const ModularDictionary<Ring>& dict) {
  return branch_sweep(m_max, BranchSelector::Plus, dict);
}

}  // namespace qlab
