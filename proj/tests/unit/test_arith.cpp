#include "gcdlcm/arith.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace gcdlcm;

TEST(Arith, GcdExamples) {
  EXPECT_EQ(gcd(6, 10), 2);
  EXPECT_EQ(gcd(7, 7), 7);
  EXPECT_EQ(gcd(12, 35), 1);
}

TEST(Arith, LcmExamples) {
  EXPECT_EQ(lcm(6, 10), 30);
  EXPECT_EQ(lcm(5, 5), 5);
  EXPECT_EQ(lcm(4, 6), 12);
}

TEST(Arith, GcdTimesLcmIsProduct) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> dist(1, 1'000'000);
  for (int t = 0; t < 2000; ++t) {
    Integer a = dist(rng), b = dist(rng);
    EXPECT_EQ(gcd(a, b) * lcm(a, b), a * b);
    EXPECT_EQ(gcd(a, b), gcd(b, a));
    EXPECT_TRUE(divides(gcd(a, b), a) && divides(gcd(a, b), b));
  }
}

TEST(Arith, MobiusExamples) {
  EXPECT_EQ(mobius(1), 1);
  EXPECT_EQ(mobius(12), 0);
  EXPECT_EQ(oracle::mobius(30), -1);
  EXPECT_EQ(mobius(30), -1);
}

TEST(Arith, MobiusMatchesTrialDivisionOracle) {
  for (long n = 1; n <= 2000; ++n) EXPECT_EQ(mobius(n), oracle::mobius(n)) << n;
}

TEST(Arith, MobiusDivisorSumIsIndicatorOfOne) {
  for (long n = 1; n <= 10'000; ++n) {
    int sum = 0;
    for (const auto& d : divisors(n)) sum += mobius(d);
    ASSERT_EQ(sum, n == 1 ? 1 : 0) << n;
  }
}

TEST(Arith, DirichletConvolutionExamples) {
  // Frozen from oracle::jordan: phi(30) = 8, J_2(6) = 36 - 9 - 4 + 1 = 24.
  ASSERT_EQ(oracle::jordan(30, 1), 8);
  ASSERT_EQ(oracle::jordan(6, 2), 24);
  EXPECT_EQ(dirichlet_convolve_at(fn::Identity{}, fn::Mobius{}, 30), 8);
  EXPECT_EQ(dirichlet_convolve_at(fn::Identity{}, fn::Mobius{}, 1), 1);
  EXPECT_EQ(dirichlet_convolve_at(fn::Power{2}, fn::Mobius{}, 6), 24);
}

TEST(Arith, DirichletWithTableFunction) {
  fn::Table t;
  for (long d : {1, 2, 3, 6}) t.values[d] = d * d + 1;
  // (t * 1)(6) = 2 + 5 + 10 + 37
  fn::Table one;
  for (long d : {1, 2, 3, 6}) one.values[d] = 1;
  EXPECT_EQ(dirichlet_convolve_at(t, one, 6), 54);
  EXPECT_THROW(dirichlet_convolve_at(t, one, 12), std::out_of_range);
}

TEST(Arith, XiStarMuExamples) {
  ASSERT_EQ(oracle::jordan(4, 2), 12);
  EXPECT_EQ(xi_e_star_mu(30, 1), 8);
  EXPECT_EQ(xi_e_star_mu(1, 5), 1);
  EXPECT_EQ(xi_e_star_mu(4, 2), 12);
  EXPECT_THROW(xi_e_star_mu(4, 0), std::domain_error);
}

TEST(Arith, XiStarMuAgreesWithBruteForce) {
  for (unsigned e = 1; e <= 3; ++e)
    for (long n = 1; n <= 300; ++n) EXPECT_EQ(xi_e_star_mu(n, e), oracle::jordan(n, e)) << n << " e=" << e;
}

TEST(Arith, MobiusInversionRoundTrip) {
  for (unsigned e = 1; e <= 3; ++e)
    for (long n = 1; n <= 10'000; ++n) {
      Integer sum = 0;
      for (const auto& d : divisors(n)) sum += xi_e_star_mu(d, e);
      ASSERT_EQ(sum, pow(Integer(n), e)) << n << " e=" << e;
    }
}

TEST(Arith, FactorizationRoundTripAndPrimality) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> dist(1, 5'000'000);
  for (int t = 0; t < 500; ++t) {
    const long n = dist(rng);
    const auto f = factorize(n);
    EXPECT_EQ(reconstruct(f), n);
    for (std::size_t i = 0; i < f.size(); ++i) {
      EXPECT_TRUE(oracle::is_prime(f[i].prime.get_si()));
      if (i) {
        EXPECT_LT(f[i - 1].prime, f[i].prime);
      }
    }
  }
}

TEST(Arith, FactorizesLargeCofactors) {
  // 2^61 - 1 is prime; (2^31 - 1)(2^61 - 1) needs the rho fallback.
  const Integer m61 = pow(Integer(2), 61) - 1;
  const Integer m31 = pow(Integer(2), 31) - 1;
  const auto f = factorize(m31 * m61 * 12);
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[2].prime, m31);
  EXPECT_EQ(f[3].prime, m61);
  EXPECT_EQ(reconstruct(f), m31 * m61 * 12);
  const Integer p1 = 1'000'003, p2 = 1'000'033;
  EXPECT_EQ(reconstruct(factorize(p1 * p1 * p2)), p1 * p1 * p2);
  EXPECT_EQ(factorize(p1 * p1 * p2)[0].exponent, 2u);
}

TEST(Arith, DivisorsAscending) {
  EXPECT_EQ(divisors(12), (std::vector<Integer>{1, 2, 3, 4, 6, 12}));
  EXPECT_EQ(divisors(1), (std::vector<Integer>{1}));
  for (long n = 1; n <= 500; ++n) {
    const auto d = divisors(n);
    const auto o = oracle::divisors(n);
    ASSERT_EQ(d.size(), o.size());
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(d[i], o[i]);
  }
}

TEST(Arith, RejectsNonPositive) {
  EXPECT_THROW(factorize(0), std::domain_error);
  EXPECT_THROW(mobius(-3), std::domain_error);
  EXPECT_THROW(parse_integer("12x"), std::invalid_argument);
  EXPECT_EQ(parse_integer("123456789012345678901234567890").get_str(), "123456789012345678901234567890");
}
