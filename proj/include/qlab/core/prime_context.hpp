#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qlab/core/arith.hpp"
#include "qlab/core/errors.hpp"

namespace qlab {

/// A prime p >= 5 together with its splitting type in Q(sqrt(-3)) and the
/// precision/modulus bookkeeping shared by every per-prime computation.
class PrimeContext {
 public:
  explicit PrimeContext(std::uint64_t p, std::optional<long> precision = std::nullopt, int modulus_exponent = 4,
                        int guard_digits = 2)
      : p_(p), modulus_exponent_(modulus_exponent), guard_digits_(guard_digits) {
    validate_prime(p);
    precision_ = precision.value_or(static_cast<long>(5 * p * p));
    if (precision_ < static_cast<long>(p) + 1) {
      throw DomainError("precision " + std::to_string(precision_) + " is below p+1=" + std::to_string(p + 1));
    }
    if (modulus_exponent_ < 1 || guard_digits_ < 0) throw DomainError("modulus exponent must be >= 1, guard >= 0");
  }

  /// Throws DomainError unless p is a prime >= 5.
  static void validate_prime(std::uint64_t p) {
    if (p == 3) throw DomainError("p=3 excluded");
    if (!is_prime(p)) throw DomainError("p=" + std::to_string(p) + " is not prime");
    if (p < 5) throw DomainError("p=" + std::to_string(p) + " excluded (need p >= 5)");
  }

  std::uint64_t p() const { return p_; }
  /// chi_3(p): +1 for p = 1 mod 3 (split), -1 for p = 2 mod 3 (inert).
  int chi3() const { return p_ % 3 == 1 ? 1 : -1; }
  bool is_split() const { return chi3() == 1; }
  long default_precision() const { return precision_; }
  int modulus_exponent() const { return modulus_exponent_; }
  int guard_digits() const { return guard_digits_; }
  /// Exponent of the residue ring the fast path works in.
  int working_exponent() const { return modulus_exponent_ + guard_digits_; }

 private:
  std::uint64_t p_;
  long precision_ = 0;
  int modulus_exponent_;
  int guard_digits_;
};

}  // namespace qlab
