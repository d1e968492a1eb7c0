#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "qlab/sequence/branch.hpp"
#include "qlab/sequence/cache.hpp"
#include "qlab/sequence/divisor_sums.hpp"
#include "qlab/sequence/recurrence.hpp"
#include "support.hpp"

using namespace qlab;

namespace {

// Divisor sums by trial division over every d <= n.
std::pair<mpz_class, mpz_class> naive_s_beta(long n) {
  mpz_class s = 0, b = 0;
  for (long d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const mpz_class d4 = mpz_pow(static_cast<std::uint64_t>(d), 4);
    s += chi3(d) * d4;
    b += chi3(n / d) * d4;
  }
  return {s, b};
}

const std::vector<mpz_class>& recurrence_table() {
  static const auto a = a_mix_recurrence(120);
  return a;
}

}  // namespace

TEST(Recurrence, KnownTerms) {
  const auto& a = recurrence_table();
  const char* known[] = {"1", "18", "864", "55152", "4035906", "320012532", "26749991016"};
  for (std::size_t n = 0; n < std::size(known); ++n) EXPECT_EQ(a[n], mpz_class(known[n])) << "n=" << n;
}

TEST(Recurrence, FirstStepsByHand) {
  // 16 A_2 = 6*158*18 - 324*1*1*2*5*1 and 81 A_3 = 6*1233*864 - 324*2*3*5*11*18.
  EXPECT_EQ(6 * 158 * 18 - 324 * 10, 16 * 864);
  EXPECT_EQ(6LL * 1233 * 864 - 324LL * 2 * 3 * 5 * 11 * 18, 81LL * 55152);
  const auto c = recurrence_coefficients(1);
  EXPECT_EQ(c.lead, 81);
  EXPECT_EQ(c.mid, 6 * 1233);
  EXPECT_EQ(c.tail, 324 * 2 * 3 * 5 * 11);
}

TEST(Recurrence, ShortLengths) {
  EXPECT_EQ(a_mix_recurrence(0), std::vector<mpz_class>{1});
  EXPECT_EQ(a_mix_recurrence(1), (std::vector<mpz_class>{1, 18}));
  EXPECT_THROW(a_mix_recurrence(-1), DomainError);
}

TEST(Direct, HypergeometricFactor) {
  const auto h = hypergeometric_factor(2);
  EXPECT_EQ(h[1], mpq_class(1, 18));
  // (1/6)(7/6)(1/3)(4/3) / 4
  EXPECT_EQ(h[2], mpq_class("7/324"));
  EXPECT_EQ(a_mix_direct(1)[1], 108 * 3 * mpq_class(1, 18));
}

TEST(Direct, AgreesWithRecurrence) {
  const auto direct = a_mix_direct(60);
  const auto& rec = recurrence_table();
  for (std::size_t n = 0; n < direct.size(); ++n) ASSERT_EQ(direct[n], rec[n]) << "n=" << n;
}

TEST(Direct, RecurrenceAnnihilatesDirectSequence) {
  const auto direct = a_mix_direct(52);
  for (long n = 0; n + 2 < static_cast<long>(direct.size()); ++n) EXPECT_EQ(recurrence_residual(direct, n), 0) << "n=" << n;
  auto broken = direct;
  broken[30] += 1;
  EXPECT_NE(recurrence_residual(broken, 28), 0);
  EXPECT_THROW(recurrence_residual(direct, 51), PrecisionError);
}

TEST(LagrangeBurmann, SweepAgreesWithRecurrence) {
  IntegerRing Z;
  const auto dict = build_dictionary(Z, 51);
  const auto sweep = lagrange_burmann_sweep(50, dict);
  const auto& rec = recurrence_table();
  for (long m = 0; m <= 50; ++m) ASSERT_EQ(sweep[static_cast<std::size_t>(m)], rec[static_cast<std::size_t>(m)]) << "m=" << m;
  EXPECT_EQ(lagrange_burmann_coefficient(0, dict), 1);
  EXPECT_EQ(lagrange_burmann_coefficient(3, dict), 55152);
  EXPECT_EQ(lagrange_burmann_coefficient(6, dict), mpz_class("26749991016"));
  EXPECT_THROW(lagrange_burmann_coefficient(51, dict), PrecisionError);
}

TEST(Branches, ConjugateBranch) {
  IntegerRing Z;
  const auto dict = build_dictionary(Z, 12);
  EXPECT_EQ(branch_coefficient(0, BranchSelector::Plus, dict), 1);
  EXPECT_EQ(branch_coefficient(0, BranchSelector::Minus, dict), 1);
  EXPECT_EQ(branch_coefficient(1, BranchSelector::Plus, dict), 18);
  EXPECT_EQ(branch_coefficient(1, BranchSelector::Minus, dict), 72);
  const auto minus = branch_sweep(11, BranchSelector::Minus, dict);
  for (long m = 0; m <= 11; ++m) EXPECT_EQ(minus[static_cast<std::size_t>(m)], branch_coefficient(m, BranchSelector::Minus, dict));
  EXPECT_THROW(branch_from_sign(0), DomainError);
  EXPECT_EQ(branch_from_sign(-1), BranchSelector::Minus);
}

TEST(Branches, ResidueBackendReducesExactValues) {
  IntegerRing Z;
  ResidueRing R(5, 3);
  const auto exact = build_dictionary(Z, 30);
  const auto reduced = build_dictionary(R, 30);
  for (long m = 0; m < 30; m += 7) {
    EXPECT_EQ(R.from_mpz(branch_coefficient(m, BranchSelector::Minus, exact)), branch_coefficient(m, BranchSelector::Minus, reduced));
  }
}

TEST(DivisorSums, SieveFactorizationAndBruteForceAgree) {
  const long N = 400;
  const auto t = divisor_sums(N);
  ASSERT_EQ(t.s.size(), static_cast<std::size_t>(N + 1));
  for (long n = 1; n <= N; ++n) {
    const auto [s, b] = naive_s_beta(n);
    ASSERT_EQ(t.s[static_cast<std::size_t>(n)], s) << n;
    ASSERT_EQ(t.beta[static_cast<std::size_t>(n)], b) << n;
    ASSERT_EQ(s_value(static_cast<std::uint64_t>(n)), s) << n;
    ASSERT_EQ(beta_value(static_cast<std::uint64_t>(n)), b) << n;
  }
  EXPECT_THROW(divisor_sums(0), DomainError);
  EXPECT_THROW(s_value(0), DomainError);
}

TEST(DivisorSums, Examples) {
  EXPECT_EQ(s_value(1), 1);
  EXPECT_EQ(beta_value(1), 1);
  EXPECT_EQ(c_mix_value(1), -24);
  for (std::uint64_t p : {5u, 11u, 17u, 23u}) EXPECT_EQ(beta_value(p), mpz_pow(p, 4) - 1);
  for (std::uint64_t p : {7u, 13u}) {
    for (unsigned e = 1; e <= 4; ++e) {
      mpz_class geometric = 0;
      for (unsigned j = 0; j <= e; ++j) geometric += mpz_pow(p, 4 * j);
      const auto pe = static_cast<std::uint64_t>(mpz_pow(p, e).get_ui());
      EXPECT_EQ(s_value(pe), geometric);
      EXPECT_EQ(beta_value(pe), geometric);
    }
  }
}

TEST(DivisorSums, MultiplicativeOnRandomCoprimePairs) {
  std::mt19937_64 rng(testkit::kSeed + 7);
  std::uniform_int_distribution<std::uint64_t> pick(1, 10000);
  int tested = 0;
  while (tested < 300) {
    const auto m = pick(rng), n = pick(rng);
    if (std::gcd(m, n) != 1) continue;
    ++tested;
    ASSERT_EQ(s_value(m * n), s_value(m) * s_value(n)) << m << "," << n;
    ASSERT_EQ(beta_value(m * n), beta_value(m) * beta_value(n)) << m << "," << n;
  }
}

TEST(DivisorSums, CMixMatchesDictionary) {
  IntegerRing Z;
  const long N = 250;
  const auto dict = build_dictionary(Z, N);
  const auto c = c_mix_table(divisor_sums(N));
  EXPECT_EQ(c_mix_dictionary_mismatch(c, dict), std::nullopt);
  auto bad = c;
  bad[77] += 1;
  EXPECT_EQ(c_mix_dictionary_mismatch(bad, dict), 77);
}

TEST(SequenceCache, BuildsAndValidates) {
  const auto c = build_sequence_cache(96);
  EXPECT_EQ(c.A(6), mpz_class("26749991016"));
  EXPECT_EQ(c.c(1), -24);
  EXPECT_EQ(c.c(0), 1);
  EXPECT_THROW(c.A(97), PrecisionError);
  const auto d = build_sequence_cache(40, SequenceProvenance::DirectHypergeometric);
  for (long n = 0; n <= 40; ++n) EXPECT_EQ(d.A(n), c.A(n));
  EXPECT_NE(c.key(), d.key());
}

TEST(SequenceCache, DetectsBrokenInvariants) {
  auto c = build_sequence_cache(30);
  auto seeds = c;
  seeds.a_mix[2] = 865;
  EXPECT_TRUE(sequence_cache_violation(seeds).has_value());
  auto mix = c;
  mix.c_mix[10] += 1;
  EXPECT_TRUE(sequence_cache_violation(mix).has_value());
  auto mult = c;
  for (auto& x : mult.s_vals) x += 1;
  for (std::size_t n = 1; n < mult.c_mix.size(); ++n) mult.c_mix[n] = 3 * mult.s_vals[n] - 27 * mult.beta_vals[n];
  EXPECT_TRUE(sequence_cache_violation(mult, 500).has_value());
}

TEST(SequenceCache, JsonRoundTrip) {
  const auto c = build_sequence_cache(25);
  const auto j = sequence_cache_to_json(c);
  EXPECT_EQ(j["a_mix"].size(), 26u);
  EXPECT_EQ(j["s"].size(), 25u);
  const auto back = sequence_cache_from_json(j);
  EXPECT_EQ(back.a_mix, c.a_mix);
  EXPECT_EQ(back.c_mix, c.c_mix);
  EXPECT_EQ(sequence_cache_to_json(back).dump(), j.dump());

  auto tampered = j;
  tampered["a_mix"][3] = "55153";
  EXPECT_THROW(sequence_cache_from_json(tampered), IdentityMismatch);
  tampered = j;
  tampered["c_mix"][4] = "0";
  EXPECT_THROW(sequence_cache_from_json(tampered), IdentityMismatch);
  tampered = j;
  tampered["beta"][2] = "x9";
  EXPECT_THROW(sequence_cache_from_json(tampered), Error);
  auto wrong_version = j;
  wrong_version["version"] = 99;
  EXPECT_THROW(sequence_cache_from_json(wrong_version), Error);
  auto truncated = j;
  truncated["s"].erase(0);
  EXPECT_THROW(sequence_cache_from_json(truncated), Error);
}
