#pragma once

// A_n^mix two ways: the order-two recurrence
//   (n+2)^4 A_{n+2} = 6(36n^4+198n^3+424n^2+417n+158) A_{n+1}
//                     - 324(n+1)(2n+1)(3n+2)(6n+5) A_n
// and 108^n [z^n] 2F1(1/6, 1/3; 1; z)^3 in exact rationals.

#include <string>
#include <vector>

#include <gmpxx.h>

#include "qlab/core/errors.hpp"

namespace qlab {

struct RecurrenceCoefficients {
  mpz_class lead;   // (n+2)^4
  mpz_class mid;    // 6(36n^4+198n^3+424n^2+417n+158)
  mpz_class tail;   // 324(n+1)(2n+1)(3n+2)(6n+5)
};

inline RecurrenceCoefficients recurrence_coefficients(long n) {
  const mpz_class x(n);
  const mpz_class n2 = x + 2;
  return {n2 * n2 * n2 * n2, 6 * ((((36 * x + 198) * x + 424) * x + 417) * x + 158),
          324 * (x + 1) * (2 * x + 1) * (3 * x + 2) * (6 * x + 5)};
}

/// A_0..A_N from the seeds A_0 = 1, A_1 = 18. Every step checks that
/// (n+2)^4 divides the right-hand side exactly.
inline std::vector<mpz_class> a_mix_recurrence(long N) {
  if (N < 0) throw DomainError("sequence length must be non-negative");
  std::vector<mpz_class> a{1, 18};
  a.resize(static_cast<std::size_t>(std::max(N + 1, 2L)));
  for (long n = 0; n + 2 <= N; ++n) {
    const auto c = recurrence_coefficients(n);
    const auto i = static_cast<std::size_t>(n);
    mpz_class rhs = c.mid * a[i + 1] - c.tail * a[i];
    if (!mpz_divisible_p(rhs.get_mpz_t(), c.lead.get_mpz_t())) {
      throw InexactDivision("recurrence step n=" + std::to_string(n) + " is not divisible by (n+2)^4");
    }
    mpz_divexact(a[i + 2].get_mpz_t(), rhs.get_mpz_t(), c.lead.get_mpz_t());
  }
  a.resize(static_cast<std::size_t>(N + 1));
  return a;
}

/// h_n = (1/6)_n (1/3)_n / (n!)^2 for n <= N.
inline std::vector<mpq_class> hypergeometric_factor(long N) {
  std::vector<mpq_class> h(static_cast<std::size_t>(N + 1));
  if (N < 0) return h;
  h[0] = 1;
  for (long n = 0; n < N; ++n) {
    mpq_class step(mpz_class((6 * n + 1) * (3 * n + 1)), mpz_class(18 * (n + 1) * (n + 1)));
    step.canonicalize();
    h[static_cast<std::size_t>(n + 1)] = h[static_cast<std::size_t>(n)] * step;
  }
  return h;
}

/// 108^n [z^n] F^3 with F = sum h_n z^n; throws InexactDivision if a value
/// fails to be an integer.
inline std::vector<mpz_class> a_mix_direct(long N) {
  if (N < 0) throw DomainError("sequence length must be non-negative");
  const auto h = hypergeometric_factor(N);
  const auto n1 = h.size();
  std::vector<mpq_class> sq(n1, 0), cube(n1, 0);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; i + j < n1; ++j) sq[i + j] += h[i] * h[j];
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; i + j < n1; ++j) cube[i + j] += sq[i] * h[j];
  std::vector<mpz_class> a(n1);
  mpz_class scale = 1;
  for (std::size_t n = 0; n < n1; ++n) {
    mpq_class v = cube[n] * scale;
    v.canonicalize();
    if (v.get_den() != 1) throw InexactDivision("direct coefficient " + std::to_string(n) + " is not an integer: " + v.get_str());
    a[n] = v.get_num();
    scale *= 108;
  }
  return a;
}

/// w(n) = (n+2)^4 A_{n+2} - 6(...) A_{n+1} + 324(...) A_n; zero for every n
/// exactly when the sequence satisfies the recurrence.
inline mpz_class recurrence_residual(const std::vector<mpz_class>& a, long n) {
  if (n < 0 || static_cast<std::size_t>(n + 2) >= a.size()) throw PrecisionError("residual w(" + std::to_string(n) + ") needs A_" + std::to_string(n + 2));
  const auto c = recurrence_coefficients(n);
  const auto i = static_cast<std::size_t>(n);
  return c.lead * a[i + 2] - c.mid * a[i + 1] + c.tail * a[i];
}

}  // namespace qlab
