#include <gtest/gtest.h>

#include <random>

#include "qlab/core/arith.hpp"
#include "qlab/core/rings.hpp"
#include "support.hpp"

using namespace qlab;

TEST(Arith, PrimalityAndValuations) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(97));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(91));
  EXPECT_EQ(valuation(std::uint64_t{343 * 2}, 7), 3);
  EXPECT_EQ(valuation(mpz_class(0), 7), std::nullopt);
  EXPECT_EQ(valuation(mpq_class(49, 5), 7), 2);
  EXPECT_EQ(valuation(mpq_class(5, 49), 7), -2);
  EXPECT_EQ(factorial_valuation(25, 5), 6);
  EXPECT_EQ(floor_log(48, 7), 1);
  EXPECT_EQ(floor_log(49, 7), 2);
  EXPECT_EQ(chi3(4), 1);
  EXPECT_EQ(chi3(5), -1);
  EXPECT_EQ(chi3(-1), -1);
  EXPECT_EQ(chi3(9), 0);
  EXPECT_EQ(floor_div(-7, 2), -4);
  EXPECT_EQ(ceil_div(-7, 2), -3);
  EXPECT_EQ(ceil_div(7, 2), 4);
}

TEST(ResidueRing, ReducesRationals) {
  ResidueRing R(7, 2);
  EXPECT_EQ(R.from_rational(mpq_class(1, 2)), 25u);
  EXPECT_EQ(R.from_int(-1), 48u);
  EXPECT_THROW(R.from_rational(mpq_class(1, 14)), NotLocalized);
  EXPECT_THROW(R.inverse(14), NonUnit);
  EXPECT_EQ(R.mul(R.inverse(3), 3), 1u);
}

TEST(ResidueRing, RejectsBadParameters) {
  EXPECT_THROW(ResidueRing(9, 2), DomainError);
  EXPECT_THROW(ResidueRing(7, 0), DomainError);
  EXPECT_THROW(ResidueRing(7, 40), DomainError);
  EXPECT_NO_THROW(BigResidueRing(7, 40));
}

TEST(LocalRationalRing, ChecksDenominators) {
  LocalRationalRing R(7);
  EXPECT_NO_THROW(R.from_rational(mpq_class(1, 6)));
  EXPECT_THROW(R.from_rational(mpq_class(1, 21)), NotLocalized);
  EXPECT_TRUE(R.is_unit(mpq_class(3, 5)));
  EXPECT_FALSE(R.is_unit(mpq_class(14, 5)));
}

TEST(ResidueRing, AccumulatorMatchesBigBackendNearWordLimit) {
  // 7^22 is close to 2^62, so the 128-bit accumulator has to reduce often.
  ResidueRing R(7, 22);
  BigResidueRing B(7, 22);
  std::mt19937_64 rng(testkit::kSeed);
  for (int trial = 0; trial < 20; ++trial) {
    auto acc = R.acc_zero();
    auto big = B.acc_zero();
    for (int i = 0; i < 200; ++i) {
      std::uint64_t a = rng() % R.modulus(), b = rng() % R.modulus();
      R.acc_addmul(acc, a, b);
      B.acc_addmul(big, B.from_mpz(mpz_class(static_cast<unsigned long>(a))), B.from_mpz(mpz_class(static_cast<unsigned long>(b))));
    }
    EXPECT_EQ(mpz_class(static_cast<unsigned long>(R.acc_value(acc))), B.acc_value(big));
  }
}

TEST(Rings, ReductionIsAHomomorphism) {
  LocalRationalRing Q(5);
  ResidueRing R(5, 4);
  std::mt19937_64 rng(testkit::kSeed + 1);
  std::uniform_int_distribution<long> num(-1000, 1000), den(1, 60);
  for (int i = 0; i < 500; ++i) {
    long d1 = den(rng), d2 = den(rng);
    if (d1 % 5 == 0) d1 += 1;
    if (d2 % 5 == 0) d2 += 1;
    mpq_class a(num(rng), d1), b(num(rng), d2);
    a.canonicalize();
    b.canonicalize();
    EXPECT_EQ(R.from_rational(Q.mul(a, b)), R.mul(R.from_rational(a), R.from_rational(b)));
    EXPECT_EQ(R.from_rational(Q.add(a, b)), R.add(R.from_rational(a), R.from_rational(b)));
  }
}

TEST(Rings, WithResidueRingPicksBackend) {
  auto small = with_residue_ring(31, 6, [](const auto& R) { return is_residue_ring_v<std::decay_t<decltype(R)>> && std::is_same_v<std::decay_t<decltype(R)>, ResidueRing>; });
  auto big = with_residue_ring(31, 20, [](const auto& R) { return std::is_same_v<std::decay_t<decltype(R)>, BigResidueRing>; });
  EXPECT_TRUE(small);
  EXPECT_TRUE(big);
}

TEST(Rings, Descriptors) {
  EXPECT_EQ(to_string(IntegerRing{}.descriptor()), "ZZ");
  EXPECT_EQ(to_string(LocalRationalRing(7).descriptor()), "Z_(7)");
  EXPECT_EQ(to_string(ResidueRing(7, 6).descriptor()), "Z/7^6");
  EXPECT_EQ(ResidueRing(7, 6).descriptor(), BigResidueRing(7, 6).descriptor());
}
