#include <gtest/gtest.h>

#include <random>

#include "qlab/core/series.hpp"
#include "qlab/core/series_json.hpp"
#include "support.hpp"

using namespace qlab;
using testkit::random_ints;
using testkit::series_from;

using ZS = TruncatedSeries<IntegerRing>;

TEST(Series, AddExamples) {
  IntegerRing Z;
  auto a = ZS::from_ints(Z, 0, {1, 1}, 5);
  auto b = ZS::from_ints(Z, 1, {1}, 5);
  EXPECT_EQ(a + b, ZS::from_ints(Z, 0, {1, 2}, 5));
  EXPECT_EQ(a + ZS::zero(Z, 5), a);
  auto c = ZS::from_ints(Z, -1, {1, 1}, 5);
  auto d = ZS::from_ints(Z, -1, {-1}, 5);
  auto s = c + d;
  EXPECT_EQ(s.lowest_exponent(), 0);
  EXPECT_EQ(s, ZS::one(Z, 5));
}

TEST(Series, MulExamples) {
  IntegerRing Z;
  auto a = ZS::from_ints(Z, 0, {1, 1}, 6);
  auto b = ZS::from_ints(Z, 0, {1, -1}, 6);
  EXPECT_EQ(a * b, ZS::from_ints(Z, 0, {1, 0, -1}, 6));
  auto m = ZS::monomial(Z, -2, 1, 4) * ZS::monomial(Z, 3, 1, 10);
  EXPECT_EQ(m.valuation(), 1);
  EXPECT_EQ(m[1], 1);
  // precision: min(4 + 3, 10 - 2) = 7
  EXPECT_EQ(m.precision(), 7);
}

TEST(Series, PrecisionNeverOverclaims) {
  IntegerRing Z;
  auto a = ZS::from_ints(Z, 0, {1, 2, 3}, 3);
  auto b = ZS::from_ints(Z, 2, {5}, 20);
  EXPECT_EQ((a * b).precision(), 5);
  EXPECT_EQ((a + b).precision(), 3);
  EXPECT_THROW(a[3], PrecisionError);
  EXPECT_EQ(a[-4], 0);
}

TEST(Series, InvertExamples) {
  IntegerRing Z;
  auto inv = invert(ZS::from_ints(Z, 0, {1, -1}, 6));
  EXPECT_EQ(inv, ZS::from_ints(Z, 0, {1, 1, 1, 1, 1, 1}, 6));
  auto inv2 = invert(ZS::from_ints(Z, 1, {1, 1}, 6));
  EXPECT_EQ(inv2, ZS::from_ints(Z, -1, {1, -1, 1, -1, 1}, 4));
  EXPECT_THROW(invert(ZS::from_ints(Z, 0, {2, 1}, 6)), NonUnit);
  ResidueRing R(7, 3);
  auto bad = TruncatedSeries<ResidueRing>::from_ints(R, 0, {14, 1}, 4);
  EXPECT_THROW(invert(bad), NonUnit);
  EXPECT_THROW(invert(ZS::monomial(Z, 5, 1, 20), 4), PoleCapExceeded);
}

TEST(Series, PowExamples) {
  IntegerRing Z;
  auto a = ZS::from_ints(Z, 0, {1, 1}, 8);
  EXPECT_EQ(pow_int(a, 2), ZS::from_ints(Z, 0, {1, 2, 1}, 8));
  EXPECT_EQ(pow_int(a, 0), ZS::one(Z, 8));
  EXPECT_EQ(pow_int(a, -1), invert(a));
  EXPECT_EQ(pow_int(a, 5) * pow_int(a, -5), ZS::one(Z, 8));
}

TEST(Series, NaiveProductOracle) {
  IntegerRing Z;
  std::mt19937_64 rng(testkit::kSeed);
  for (int trial = 0; trial < 30; ++trial) {
    auto av = random_ints(rng, 25, 50, false), bv = random_ints(rng, 25, 50, false);
    std::vector<mpz_class> az, bz;
    for (long long x : av) az.emplace_back(static_cast<long>(x));
    for (long long x : bv) bz.emplace_back(static_cast<long>(x));
    auto expect = testkit::naive_product(az, bz);
    auto got = series_from(Z, 0, av, 25) * series_from(Z, 0, bv, 25);
    for (long n = 0; n < got.precision(); ++n) EXPECT_EQ(got[n], expect[static_cast<std::size_t>(n)]);
  }
}

template <class Ring>
void check_ring_axioms(const Ring& R, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 25; ++trial) {
    const long lo = static_cast<long>(rng() % 3) - 1;
    auto a = series_from(R, lo, random_ints(rng, 30, 20, true), lo + 30);
    auto b = series_from(R, 0, random_ints(rng, 30, 20, true), 30);
    auto c = series_from(R, 1, random_ints(rng, 30, 20, false), 31);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * b, b * a);
    auto one = a * invert(a);
    EXPECT_EQ(one, TruncatedSeries<Ring>::one(R, one.precision()));
    EXPECT_EQ(one.precision(), 30);
  }
}

TEST(SeriesProperties, RingAxiomsInteger) { check_ring_axioms(IntegerRing{}, testkit::kSeed); }
TEST(SeriesProperties, RingAxiomsLocalRational) { check_ring_axioms(LocalRationalRing(7), testkit::kSeed + 1); }
TEST(SeriesProperties, RingAxiomsResidue) { check_ring_axioms(ResidueRing(7, 6), testkit::kSeed + 2); }
TEST(SeriesProperties, RingAxiomsBigResidue) { check_ring_axioms(BigResidueRing(7, 30), testkit::kSeed + 3); }

TEST(SeriesProperties, PrecisionHonesty) {
  IntegerRing Z;
  std::mt19937_64 rng(testkit::kSeed + 4);
  for (int trial = 0; trial < 25; ++trial) {
    auto av = random_ints(rng, 60, 9, true), bv = random_ints(rng, 60, 9, true);
    const long lo = static_cast<long>(rng() % 4) - 2;
    auto hi_a = series_from(Z, lo, av, lo + 60), hi_b = series_from(Z, 0, bv, 60);
    auto lo_a = hi_a.truncated(lo + 25), lo_b = hi_b.truncated(40);
    auto prod = lo_a * lo_b;
    EXPECT_EQ((hi_a * hi_b).truncated(prod.precision()), prod);
    auto inv = invert(lo_a);
    EXPECT_EQ(invert(hi_a).truncated(inv.precision()), inv);
    auto sum = lo_a + lo_b;
    EXPECT_EQ((hi_a + hi_b).truncated(sum.precision()), sum);
  }
}

TEST(SeriesProperties, RingMismatchIsAnError) {
  ResidueRing a(7, 3), b(7, 4);
  auto x = TruncatedSeries<ResidueRing>::one(a, 5);
  auto y = TruncatedSeries<ResidueRing>::one(b, 5);
  EXPECT_THROW(x + y, RingMismatch);
  EXPECT_THROW(x * y, RingMismatch);
}

template <class Ring>
void check_json_round_trip(const Ring& R) {
  std::mt19937_64 rng(testkit::kSeed + 5);
  auto a = series_from(R, -3, random_ints(rng, 40, 1000, true), 37);
  auto j = series_to_json(a);
  EXPECT_EQ(series_from_json(ordered_json::parse(j.dump()), R), a);
}

TEST(SeriesJson, RoundTrips) {
  check_json_round_trip(IntegerRing{});
  check_json_round_trip(LocalRationalRing(5));
  check_json_round_trip(ResidueRing(7, 6));
  check_json_round_trip(BigResidueRing(31, 20));
}

TEST(SeriesJson, RejectsWrongRingAndGarbage) {
  ResidueRing R(7, 6);
  auto j = series_to_json(TruncatedSeries<ResidueRing>::one(R, 10));
  EXPECT_THROW(series_from_json(j, ResidueRing(7, 5)), RingMismatch);
  auto broken = j;
  broken["coefficients"].erase(broken["coefficients"].begin());
  EXPECT_THROW(series_from_json(broken, R), Error);
  EXPECT_THROW(series_from_json(ordered_json::parse(R"({"format":"x"})"), R), Error);
}
