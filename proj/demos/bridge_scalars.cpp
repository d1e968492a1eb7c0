// Prints the closure scalars gamma_l, beta_l and gamma_l - 27 beta_l for
// the primes on the command line (default 7 13).

#include <cstdlib>
#include <iostream>

#include "qlab/harness/checks.hpp"

int main(int argc, char** argv) {
  std::vector<std::uint64_t> primes;
  for (int i = 1; i < argc; ++i) primes.push_back(std::strtoull(argv[i], nullptr, 10));
  if (primes.empty()) primes = {7, 13};

  qlab::ArtifactPool pool;
  std::cout << "p\tl\tgamma\tbeta\tgamma-27beta\tresiduals\n";
  for (std::uint64_t p : primes) {
    try {
      for (const auto& L : qlab::closure_layers(pool.residue(p))) {
        std::cout << p << '\t' << L.ell << '\t' << L.gamma << '\t' << L.beta << '\t' << static_cast<long long>(L.gamma) - 27 * static_cast<long long>(L.beta) << '\t'
                  << (!L.residual_C.is_zero() || !L.residual_u.is_zero() ? "nonzero" : "zero") << '\n';
      }
    } catch (const qlab::Error& e) {
      std::cerr << "p=" << p << ": " << e.what() << '\n';
      return 2;
    }
  }
}
