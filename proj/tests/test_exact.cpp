#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace rama;
using namespace rama::testing;

namespace {

BigRational random_rational(std::int64_t p) {
  BigInt num = uniform(-1000000, 1000000);
  BigInt den;
  do den = uniform(1, 100000);
  while (den % p == 0);
  return make_rational(num, den);
}

PrimePowerModulus random_modulus() {
  static const std::int64_t primes[] = {3, 5, 7, 11, 13, 41, 101};
  return PrimePowerModulus(primes[uniform(0, 6)], static_cast<int>(uniform(1, 6)));
}

}  // namespace

TEST(Valuation, Examples) {
  EXPECT_EQ(padic_valuation(Q("-29/128"), 2).value(), -7);
  EXPECT_EQ(padic_valuation(Q("1"), 7).value(), 0);
  BigRational q = BigRational(pow_int(11, 5) * 3) / 5;
  EXPECT_EQ(padic_valuation(q, 11).value(), 5);
}

TEST(Valuation, ZeroIsInfinite) {
  Valuation v = padic_valuation(BigRational(0), 5);
  EXPECT_TRUE(v.is_infinite());
  EXPECT_EQ(v.to_string(), "inf");
  EXPECT_TRUE(v.at_least(1000000));
  EXPECT_THROW(v.value(), Error);
  EXPECT_GT(v, padic_valuation(BigRational(pow_int(5, 40)), 5));
}

TEST(Valuation, MatchesRepeatedDivision) {
  for (int i = 0; i < 200; ++i) {
    std::int64_t p = std::vector<std::int64_t>{2, 3, 5, 7, 11}[uniform(0, 4)];
    BigRational q = make_rational(BigInt(uniform(1, 1 << 30)) * pow_int(BigInt(p), uniform(0, 6)),
                                  BigInt(uniform(1, 1 << 20)));
    EXPECT_EQ(padic_valuation(q, p).value(), naive_valuation(q, p));
  }
}

TEST(ReduceMod, Examples) {
  EXPECT_EQ(reduce_mod(Q("-1/90"), PrimePowerModulus(11, 1)).value(), 5);
  EXPECT_EQ(reduce_mod(Q("0"), PrimePowerModulus(13, 4)).value(), 0);
  PrimePowerModulus m(11, 5);
  Residue r = reduce_mod(Q("99/128"), m);
  EXPECT_EQ((r * Residue(128, m)).value(), 99);
}

TEST(ReduceMod, DenominatorDivisibleByP) {
  try {
    reduce_mod(Q("1/22"), PrimePowerModulus(11, 2));
    FAIL() << "expected an exception";
  } catch (const InadmissiblePrime& e) {
    EXPECT_EQ(e.prime(), 11);
    EXPECT_NE(std::string(e.what()).find("inadmissible denominator 22"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("p-valuation 1"), std::string::npos);
  }
}

TEST(ReduceMod, RingHomomorphismRandomized) {
  for (int i = 0; i < 1000; ++i) {
    PrimePowerModulus m = random_modulus();
    BigRational a = random_rational(m.prime()), b = random_rational(m.prime());
    Residue ra = reduce_mod(a, m), rb = reduce_mod(b, m);
    ASSERT_EQ(reduce_mod(a + b, m), ra + rb) << to_string(a) << " " << to_string(b) << " " << m.to_string();
    ASSERT_EQ(reduce_mod(a * b, m), ra * rb);
    ASSERT_EQ(reduce_mod(a - b, m), ra - rb);
  }
}

TEST(Residue, MixedModuliIsAHardError) {
  Residue a(1, PrimePowerModulus(11, 2)), b(1, PrimePowerModulus(11, 3));
  EXPECT_THROW(a + b, ModulusMismatch);
  EXPECT_THROW(a * b, ModulusMismatch);
}

TEST(Residue, ValueAlwaysInRange) {
  PrimePowerModulus m(7, 3);
  for (long x : {-1000L, -343L, -1L, 0L, 342L, 343L, 100000L}) {
    Residue r(x, m);
    EXPECT_GE(r.value(), 0);
    EXPECT_LT(r.value(), 343);
  }
}

TEST(PrimePowerModulus, RejectsComposite) {
  EXPECT_THROW(PrimePowerModulus(9, 2), Error);
  EXPECT_THROW(PrimePowerModulus(11, 0), Error);
  EXPECT_EQ(PrimePowerModulus(41, 5).value(), 115856201);
}

TEST(Primes, DeterministicCheckAgreesWithSieve) {
  const int limit = 200000;
  std::vector<bool> composite(limit + 1, false);
  for (int i = 2; i * i <= limit; ++i)
    if (!composite[i])
      for (int j = i * i; j <= limit; j += i) composite[j] = true;
  for (int n = 0; n <= limit; ++n) ASSERT_EQ(is_prime(n), n >= 2 && !composite[n]) << n;
  EXPECT_TRUE(is_prime(1000000007));
  EXPECT_FALSE(is_prime(3215031751LL));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST(ModInverse, PrintedInverses) {
  EXPECT_EQ(mod_inverse(BigInt(95491225), PrimePowerModulus(11, 4)).value(), 12252);
  EXPECT_EQ(mod_inverse(BigInt(26628), PrimePowerModulus(13, 4)).value(), 9279);
  EXPECT_EQ(mod_inverse(BigInt(38939), PrimePowerModulus(41, 3)).value(), 55540);
}

TEST(ModInverse, NotInvertible) {
  try {
    mod_inverse(BigInt(22), PrimePowerModulus(11, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("not invertible"), std::string::npos);
  }
}

TEST(Kronecker, Examples) {
  for (std::int64_t p : primes_in(2, 1000)) EXPECT_EQ(kronecker(1, p), 1);
  EXPECT_EQ(kronecker(-4, 11), -1);
  EXPECT_EQ(kronecker(5, 41), 1);
  EXPECT_EQ(kronecker(5, 5), 0);
  EXPECT_EQ(kronecker(-4, 2), 0);
  EXPECT_EQ(kronecker(5, 2), -1);   // 5 = 5 mod 8
  EXPECT_EQ(kronecker(-7, 2), 1);   // -7 = 1 mod 8
  EXPECT_EQ(kronecker(-4, 1), 1);
}

TEST(Kronecker, BruteForceSquaresModOddPrimes) {
  for (std::int64_t p : primes_in(3, 99)) {
    std::set<std::int64_t> squares;
    for (std::int64_t x = 1; x < p; ++x) squares.insert(x * x % p);
    for (std::int64_t d = -50; d <= 50; ++d) {
      std::int64_t r = ((d % p) + p) % p;
      if (r == 0) {
        EXPECT_EQ(kronecker(d, p), 0);
        continue;
      }
      EXPECT_EQ(kronecker(d, p), squares.count(r) ? 1 : -1) << "d=" << d << " p=" << p;
    }
  }
}

TEST(Kronecker, MultiplicativeInLowerArgumentRandomized) {
  for (int i = 0; i < 1000; ++i) {
    std::int64_t d = uniform(-200, 200), n1 = uniform(1, 10000), n2 = uniform(1, 10000);
    ASSERT_EQ(kronecker(d, n1 * n2), kronecker(d, n1) * kronecker(d, n2)) << d << " " << n1 << " " << n2;
  }
}

TEST(BalancedLift, PrintedRepresentatives) {
  PrimePowerModulus m(11, 4);
  EXPECT_EQ(balanced_lift(Residue(-14621, m)), 20);
  EXPECT_EQ(balanced_lift(Residue(-14633, m)), 8);
  EXPECT_EQ(balanced_lift(Residue(0, m)), 0);
}

TEST(BalancedLift, RangeAndCongruenceRandomized) {
  for (int i = 0; i < 500; ++i) {
    PrimePowerModulus m = random_modulus();
    BigInt x = uniform(-10000000, 10000000);
    Residue r(x, m);
    BigInt y = balanced_lift(r);
    const BigInt& M = m.value();
    ASSERT_TRUE(-M < 2 * y && 2 * y <= M);
    ASSERT_EQ(mod_floor(y - x, M), 0);
  }
}

TEST(RationalReconstruct, Examples) {
  PrimePowerModulus m4(11, 4), m5(11, 5);
  EXPECT_EQ(*rational_reconstruct(Residue(20, m4), 100, 100), Q("20"));
  EXPECT_EQ(*rational_reconstruct(reduce_mod(Q("-1/90"), m5), 1000, 1000), Q("-1/90"));
  std::vector<std::pair<BigInt, BigInt>> pairs;
  for (long p : {7, 11, 13, 17, 19}) pairs.emplace_back(BigInt(448 % p), BigInt(p));
  ModularValue c = crt(pairs);
  EXPECT_EQ(c.modulus, 7 * 11 * 13 * 17 * 19);
  EXPECT_EQ(*rational_reconstruct(c.value, c.modulus, 10000, 100), Q("448"));
}

TEST(RationalReconstruct, NoSmallSolution) {
  // 1/2 mod 101 = 51: no fraction with numerator and denominator at most 1 besides +-1, 0
  EXPECT_FALSE(rational_reconstruct(BigInt(51), BigInt(101), 1, 1).has_value());
}

TEST(RationalReconstruct, RoundTripRandomized) {
  for (int i = 0; i < 1000; ++i) {
    PrimePowerModulus m(std::vector<std::int64_t>{11, 13, 41, 10007}[uniform(0, 3)], static_cast<int>(uniform(3, 8)));
    const BigInt& M = m.value();
    BigInt d;
    do d = uniform(1, 3000);
    while (d % m.prime() == 0);
    BigInt nmax = M / (2 * d);
    if (nmax > 1000000) nmax = 1000000;
    BigInt n = uniform(-nmax.get_si(), nmax.get_si());
    BigRational q = make_rational(n, d);
    // bounds taken from the reduced fraction so that 2*N*D <= M holds
    auto back = rational_reconstruct(reduce_mod(q, m), abs(q.get_num()), q.get_den());
    ASSERT_TRUE(back.has_value()) << to_string(q) << " mod " << m.to_string();
    ASSERT_EQ(*back, q);
  }
}

TEST(Crt, Examples) {
  ModularValue a = crt({{BigInt(1), BigInt(3)}, {BigInt(2), BigInt(5)}});
  EXPECT_EQ(a.value, 7);
  EXPECT_EQ(a.modulus, 15);
  for (int x = 0; x < 15; ++x)
    if (x % 3 == 1 && x % 5 == 2) {
      EXPECT_EQ(a.value, x);
    }
  ModularValue b = crt({{BigInt(0), BigInt(97)}});
  EXPECT_EQ(b.value, 0);
  ModularValue c = crt({{BigInt(448 % 11), BigInt(11)}, {BigInt(448 % 13), BigInt(13)}});
  EXPECT_EQ(c.value, 448 % 143);
  EXPECT_THROW(crt({{BigInt(1), BigInt(6)}, {BigInt(1), BigInt(4)}}), Error);
}

TEST(Rationals, ParseAndPrint) {
  EXPECT_EQ(to_string(Q("-29/128")), "-29/128");
  EXPECT_EQ(to_string(Q("6/3")), "2");
  EXPECT_EQ(Q("3/9"), Q("1/3"));
  EXPECT_EQ(Q("\u2212" "29/128"), Q("-29/128"));
  EXPECT_THROW(Q(" 3/9"), Error);
  EXPECT_THROW(Q("1/0"), Error);
  EXPECT_THROW(Q("abc"), Error);
  BigRational zero = Q("0/5");
  EXPECT_EQ(zero.get_den(), 1);
}
