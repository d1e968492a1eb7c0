// Walks A_{m p^r} against A_m for a few primes and prints the p-adic
// valuation of the difference. Split primes sit at >= 4r; inert primes
// stop at 0 as soon as m is coprime to p.

#include <iostream>

#include "qlab/core/padic.hpp"
#include "qlab/sequence/recurrence.hpp"

int main() {
  const auto A = qlab::a_mix_recurrence(5 * 31 * 31);
  std::cout << "p\tchi\tm\tr\tv_p(A_{mp^r} - A_{mp^(r-1)})\n";
  for (std::uint64_t p : {5ULL, 7ULL, 11ULL, 13ULL, 31ULL}) {
    for (long m = 1; m <= 3; ++m) {
      long pr = 1;
      for (long r = 1; r <= 2; ++r) {
        const long hi = m * pr * static_cast<long>(p);
        const mpz_class d = A[static_cast<std::size_t>(hi)] - A[static_cast<std::size_t>(m * pr)];
        pr *= static_cast<long>(p);
        const auto v = qlab::valuation(d, p);
        std::cout << p << '\t' << (p % 3 == 1 ? "+1" : "-1") << '\t' << m << '\t' << r << '\t' << (v ? std::to_string(*v) : "inf") << '\n';
      }
    }
  }
}
