#include <gtest/gtest.h>

#include <vector>

#include "qlab/core/padic.hpp"
#include "qlab/modular/dictionary.hpp"
#include "support.hpp"

using namespace qlab;

namespace {

// Naive oracle: expand prod_{n>=1}(1 - q^(d n))^e by multiplying one
// binomial factor at a time as dense integer polynomials.
std::vector<mpz_class> naive_euler(long d, long e, long len) {
  std::vector<mpz_class> r(static_cast<std::size_t>(len), 0);
  r[0] = 1;
  for (long n = 1; d * n < len; ++n) {
    for (long rep = 0; rep < std::labs(e); ++rep) {
      std::vector<mpz_class> factor(static_cast<std::size_t>(len), 0);
      if (e > 0) {
        factor[0] = 1;
        factor[static_cast<std::size_t>(d * n)] = -1;
      } else {
        for (long k = 0; k < len; k += d * n) factor[static_cast<std::size_t>(k)] = 1;
      }
      auto prod = testkit::naive_product(r, factor);
      prod.resize(static_cast<std::size_t>(len));
      r = prod;
    }
  }
  return r;
}

}  // namespace

TEST(EtaQuotient, UMatchesNaiveExpansion) {
  IntegerRing Z;
  const long N = 15;
  auto u = eta_quotient(Z, EtaQuotientSpec{{{3, 12}, {1, -12}}}, N);
  auto oracle = testkit::naive_product(naive_euler(3, 12, N), naive_euler(1, -12, N));
  EXPECT_EQ(u.lowest_exponent(), 1);
  for (long n = 1; n < N; ++n) EXPECT_EQ(u[n], oracle[static_cast<std::size_t>(n - 1)]) << n;
  EXPECT_EQ(u[1], 1);
  EXPECT_EQ(u[2], 12);
  EXPECT_EQ(u[3], 90);
}

TEST(EtaQuotient, EmptySpecIsOne) {
  IntegerRing Z;
  EXPECT_EQ(eta_quotient(Z, EtaQuotientSpec{}, 10), TruncatedSeries<IntegerRing>::one(Z, 10));
}

TEST(EtaQuotient, ThetaBAndFractionalPower) {
  IntegerRing Z;
  auto B = theta_B(Z, 12);
  auto oracle = testkit::naive_product(naive_euler(1, 3, 12), naive_euler(3, -1, 12));
  for (long n = 0; n < 12; ++n) EXPECT_EQ(B[n], oracle[static_cast<std::size_t>(n)]);
  EXPECT_EQ(B[0], 1);
  EXPECT_EQ(B[1], -3);
  EXPECT_THROW(eta_quotient(Z, EtaQuotientSpec{{{3, 3}, {1, -1}}}, 10), DomainError);
  EXPECT_EQ(EtaQuotientSpec({{{3, 3}, {1, -1}}}).leading_q_power(), mpq_class(1, 3));
}

TEST(Theta, LatticeCounts) {
  IntegerRing Z;
  auto A = theta_A(Z, 40);
  EXPECT_EQ(A[0], 1);
  EXPECT_EQ(A[1], 6);
  EXPECT_EQ(A[2], 0);
  // Brute force over a generous box.
  for (long v = 0; v < 40; ++v) {
    long count = 0;
    for (long m = -20; m <= 20; ++m)
      for (long n = -20; n <= 20; ++n)
        if (m * m + m * n + n * n == v) ++count;
    EXPECT_EQ(A[v], count) << v;
  }
}

TEST(Theta, CubicIdentities) {
  IntegerRing Z;
  const long N = 250;
  auto A = theta_A(Z, N), B = theta_B(Z, N), Dn = theta_D_normalized(Z, N);
  auto D3 = pow_int(Dn, 3).shifted(1);
  EXPECT_EQ(first_mismatch(pow_int(A, 3), pow_int(B, 3) + D3), std::nullopt);
  auto u = eta_quotient(Z, EtaQuotientSpec{{{3, 12}, {1, -12}}}, N);
  EXPECT_EQ(first_mismatch(D3, scale(mul(u, pow_int(B, 3)), 27)), std::nullopt);
}

TEST(Eisenstein, Examples) {
  auto e = eisenstein_5_coefficients(CharacterMod3::Chi3, CharacterMod3::Chi0, 4);
  EXPECT_EQ(e[0], 0);
  EXPECT_EQ(e[1], 1);
  EXPECT_EQ(e[2], 15);
  EXPECT_EQ(e[3], 81);
  auto f = eisenstein_5_coefficients(CharacterMod3::Chi0, CharacterMod3::Chi3, 4);
  EXPECT_EQ(f[0], mpq_class(1, 3));
  EXPECT_EQ(f[1], 1);
  EXPECT_EQ(f[2], -15);
  EXPECT_THROW(eisenstein_5_coefficients(CharacterMod3::Chi0, CharacterMod3::Chi0, 4), DomainError);
  EXPECT_THROW(eisenstein_5(IntegerRing{}, CharacterMod3::Chi0, CharacterMod3::Chi3, 4), NotLocalized);
  EXPECT_EQ(eisenstein_5(ResidueRing(7, 2), CharacterMod3::Chi0, CharacterMod3::Chi3, 4)[0], ResidueRing(7, 2).from_rational(mpq_class(1, 3)));
}

TEST(Eisenstein, DivisorSumsAgainstBruteForce) {
  auto t = divisor_sum_tables(200);
  for (long n = 1; n < 200; ++n) {
    mpz_class s = 0, b = 0;
    for (long d = 1; d <= n; ++d) {
      if (n % d) continue;
      s += chi3(d) * mpz_pow(static_cast<std::uint64_t>(d), 4);
      b += chi3(n / d) * mpz_pow(static_cast<std::uint64_t>(d), 4);
    }
    EXPECT_EQ(t.s[static_cast<std::size_t>(n)], s);
    EXPECT_EQ(t.beta[static_cast<std::size_t>(n)], b);
  }
}

TEST(Dictionary, LeadingTerms) {
  IntegerRing Z;
  auto d = build_dictionary(Z, 60);
  const auto& t = d.t();
  EXPECT_EQ(t[1], 1);
  EXPECT_EQ(t[2], -42);
  EXPECT_EQ(t[3], 981);
  EXPECT_EQ(d.H_mix()[0], 1);
  EXPECT_EQ(d.H_mix()[1], 42);
  EXPECT_EQ(d.H_mix()[2], 783);
  EXPECT_EQ(d.C_mix()[0], 1);
  EXPECT_EQ(d.C_mix()[1], -24);
  EXPECT_EQ(d.uC0().lowest_exponent(), 1);
  EXPECT_EQ(d.u().lowest_exponent(), 1);
  EXPECT_FALSE(d.contains(ObjectName::E5_chi0_chi3));
  EXPECT_EQ(d.object(ObjectName::H_mix).construction, Construction::ProductFormula);
}

TEST(Dictionary, ThreeTermOracles) {
  // u = q + 12q^2 + 90q^3: t = u/(1+27u)^2 and q/t by hand.
  IntegerRing Z;
  auto u = TruncatedSeries<IntegerRing>::from_ints(Z, 1, {1, 12, 90}, 4);
  auto g = add_constant(scale(u, 27), 1);
  auto t = mul(u, invert(mul(g, g)));
  EXPECT_EQ(t, TruncatedSeries<IntegerRing>::from_ints(Z, 1, {1, -42, 981}, 4));
  EXPECT_EQ(invert(t.shifted(-1)), TruncatedSeries<IntegerRing>::from_ints(Z, 0, {1, 42, 783}, 3));
}

TEST(Dictionary, IdentitiesHoldInEveryBackend) {
  const long N = 220;
  auto z = build_dictionary(IntegerRing{}, N);
  auto r = build_dictionary(ResidueRing(7, 6), N);
  auto q = build_dictionary(LocalRationalRing(7), N);
  for (const auto& [name, obj] : z.objects()) {
    EXPECT_EQ(change_ring(obj.series, ResidueRing(7, 6)), r[name]) << to_string(name);
    EXPECT_EQ(change_ring(obj.series, LocalRationalRing(7)), q[name]) << to_string(name);
  }
  // 108 t = 4 alpha (1 - alpha).
  const auto& alpha = z[ObjectName::alpha];
  EXPECT_EQ(first_mismatch(scale(z.t(), 108), scale(mul(alpha, add_constant(neg(alpha), 1)), 4)), std::nullopt);
  EXPECT_TRUE(q.contains(ObjectName::E5_chi0_chi3));
  EXPECT_EQ(first_mismatch(scale(q[ObjectName::E5_chi0_chi3], 3), q.C0()), std::nullopt);
}

TEST(Dictionary, SturmIdentification) {
  IntegerRing Z;
  EXPECT_TRUE(verify_sturm_identification(Z, 51));
  auto u = eta_quotient(Z, EtaQuotientSpec{{{3, 12}, {1, -12}}}, 51);
  auto C0 = eisenstein_C0(Z, 51);
  auto E = eisenstein_5(Z, CharacterMod3::Chi3, CharacterMod3::Chi0, 51);
  auto perturbed = E + TruncatedSeries<IntegerRing>::monomial(Z, 37, 1, 51);
  EXPECT_FALSE(verify_sturm_identification(u, C0, perturbed));
  EXPECT_TRUE(verify_sturm_identification(u, C0, E));
}

TEST(Dictionary, RejectsTinyPrecision) { EXPECT_THROW(build_dictionary(IntegerRing{}, 3), DomainError); }
