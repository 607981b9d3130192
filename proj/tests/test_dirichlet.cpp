#include <gtest/gtest.h>

#include "support.hpp"

using namespace rama;
using namespace rama::testing;

namespace {

BigRational frac(long a, long b) { return make_rational(BigInt(a), BigInt(b)); }

// Akiyama-Tanigawa; yields B_1 = +1/2, flipped below.
std::vector<BigRational> akiyama_tanigawa(long nmax) {
  std::vector<BigRational> a(nmax + 1), out;
  for (long m = 0; m <= nmax; ++m) {
    a[m] = frac(1, m + 1);
    for (long j = m; j >= 1; --j) a[j - 1] = BigRational(j) * (a[j - 1] - a[j]);
    out.push_back(a[0]);
  }
  if (nmax >= 1) out[1] = -out[1];
  return out;
}

// B_n(x) from oracle numbers.
BigRational oracle_poly(long n, const BigRational& x, const std::vector<BigRational>& b) {
  BigRational acc = 0;
  BigInt c = 1;
  for (long k = 0; k <= n; ++k) {
    BigRational xp = 1;
    for (long i = 0; i < n - k; ++i) xp *= x;
    acc += BigRational(c) * b[k] * xp;
    c = c * (n - k) / (k + 1);
  }
  return acc;
}

BigRational oracle_generalized(long n, std::int64_t d, const std::vector<BigRational>& b) {
  const std::int64_t f = d < 0 ? -d : d;
  BigRational acc = 0;
  for (std::int64_t a = 1; a <= f; ++a) {
    // chi_D(a) by brute force on small D
    int c = kronecker(d, a);
    acc += BigRational(c) * oracle_poly(n, frac(a, f), b);
  }
  BigRational scale = 1;
  for (long i = 0; i < n - 1; ++i) scale *= f;
  if (n == 0) return acc / BigRational(f);
  return acc * scale;
}

}  // namespace

TEST(Bernoulli, Examples) {
  EXPECT_EQ(bernoulli(0), 1);
  EXPECT_EQ(bernoulli(1), Q("-1/2"));
  EXPECT_EQ(bernoulli(3), 0);
  EXPECT_EQ(bernoulli(8), Q("-1/30"));
  EXPECT_EQ(bernoulli(12), Q("-691/2730"));
  EXPECT_THROW(bernoulli_table(-1), Error);
}

TEST(Bernoulli, AgreesWithAkiyamaTanigawa) {
  auto oracle = akiyama_tanigawa(80);
  auto table = bernoulli_table(80);
  ASSERT_EQ(table.nmax(), 80u);
  for (long n = 0; n <= 80; ++n) EXPECT_EQ(table[n], oracle[n]) << n;
}

TEST(Bernoulli, VonStaudtClausen) {
  for (long n = 2; n <= 60; n += 2) {
    BigInt den = 1;
    BigRational sum = bernoulli(n);
    for (long q = 2; q <= n + 1; ++q) {
      bool prime = q > 1;
      for (long d = 2; d * d <= q; ++d)
        if (q % d == 0) prime = false;
      if (prime && n % (q - 1) == 0) {
        den *= q;
        sum += frac(1, q);
      }
    }
    EXPECT_EQ(bernoulli(n).get_den(), den) << n;
    EXPECT_EQ(sum.get_den(), 1) << n;
  }
}

TEST(Bernoulli, OddIndicesVanish) {
  auto t = bernoulli_table(101);
  for (long n = 3; n <= 101; n += 2) EXPECT_EQ(t[n], 0);
}

TEST(BernoulliPoly, Examples) {
  EXPECT_EQ(bernoulli_poly_at(1, Q("1/4")), Q("-1/4"));
  EXPECT_EQ(bernoulli_poly_at(2, Q("1/2")), Q("-1/12"));
  for (long n = 0; n <= 20; ++n) EXPECT_EQ(bernoulli_poly_at(n, BigRational(0)), bernoulli(n));
}

TEST(BernoulliPoly, DifferenceIdentityRandomized) {
  // B_n(x+1) - B_n(x) = n x^(n-1)
  for (int i = 0; i < 200; ++i) {
    long n = uniform(1, 25);
    BigRational x = frac(uniform(-50, 50), uniform(1, 30));
    BigRational xp = 1;
    for (long k = 0; k < n - 1; ++k) xp *= x;
    ASSERT_EQ(bernoulli_poly_at(n, x + 1) - bernoulli_poly_at(n, x), BigRational(n) * xp) << n << " " << x;
  }
}

TEST(BernoulliPoly, Reflection) {
  for (long n = 0; n <= 15; ++n) {
    BigRational x = frac(3, 7);
    BigRational lhs = bernoulli_poly_at(n, 1 - x), rhs = bernoulli_poly_at(n, x);
    EXPECT_EQ(lhs, n % 2 ? BigRational(-rhs) : rhs);
  }
}

TEST(GeneralizedBernoulli, Examples) {
  EXPECT_EQ(generalized_bernoulli(1, -4), Q("-1/2"));
  for (long n = 2; n <= 20; ++n) EXPECT_EQ(generalized_bernoulli(n, 1), bernoulli(n));
  auto b = akiyama_tanigawa(10);
  EXPECT_EQ(generalized_bernoulli(2, 5), oracle_generalized(2, 5, b));
  EXPECT_EQ(generalized_bernoulli(2, 5), Q("4/5"));
  try {
    generalized_bernoulli(2, 7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("not a discriminant"), std::string::npos);
  }
}

TEST(GeneralizedBernoulli, AgreesWithOracle) {
  auto b = akiyama_tanigawa(30);
  for (std::int64_t d : {-3, -4, -7, -8, 5, 8, 12, 13, -20, 24})
    for (long n = 1; n <= 14; ++n) EXPECT_EQ(generalized_bernoulli(n, d), oracle_generalized(n, d, b)) << d << " " << n;
}

TEST(GeneralizedBernoulli, ParityVanishing) {
  for (std::int64_t d : {1, 5, 8})
    for (long n = 3; n <= 20; n += 2) EXPECT_EQ(generalized_bernoulli(n, d), 0) << d << " " << n;
  for (std::int64_t d : {-4, -8, -3})
    for (long n = 2; n <= 20; n += 2) EXPECT_EQ(generalized_bernoulli(n, d), 0) << d << " " << n;
}

TEST(LNonpositive, Examples) {
  EXPECT_EQ(l_at_nonpositive(-4, 0), Q("1/2"));
  EXPECT_EQ(l_at_nonpositive(1, -5), Q("-1/252"));
  EXPECT_EQ(l_at_nonpositive(1, -2), 0);
  EXPECT_EQ(l_at_nonpositive(1, -1), Q("-1/12"));
  EXPECT_EQ(l_at_nonpositive(-3, 0), Q("1/3"));
  EXPECT_THROW(l_at_nonpositive(1, 1), Error);
}

TEST(LpResidue, Examples) {
  EXPECT_EQ(lp_residue(1, 3, 11).value(), 5);
  EXPECT_EQ(lp_residue(1, 3, 13), reduce_mod(Q("5/198"), PrimePowerModulus(13, 1)));
  auto b = akiyama_tanigawa(10);
  EXPECT_EQ(lp_residue(-4, 4, 11), reduce_mod(-oracle_generalized(7, -4, b) / 7, PrimePowerModulus(11, 1)));
}

TEST(LpResidue, GeneralizedPathMatchesDirectFormula) {
  for (int m : {2, 3, 4})
    for (std::int64_t p : primes_in(m + 3, 100)) {
      if (p == 2) continue;
      BigRational direct = bernoulli(p - m - 1) / BigRational(m + 1);
      EXPECT_EQ(lp_residue(1, m + 1, p), reduce_mod(direct, PrimePowerModulus(p, 1))) << m << " " << p;
    }
}

TEST(LpResidue, ParityMismatchGivesZero) {
  // n = p - s has the wrong parity for chi
  EXPECT_TRUE(lp_residue(5, 4, 11).is_zero());
  EXPECT_TRUE(lp_residue(-4, 3, 13).is_zero());
}

TEST(LpResidue, PreconditionErrors) {
  auto expect_msg = [](auto&& f, const std::string& reason) {
    try {
      f();
      FAIL() << "no throw";
    } catch (const InadmissiblePrime& e) {
      std::string w = e.what();
      EXPECT_NE(w.find("inadmissible prime for L_p congruence"), std::string::npos) << w;
      EXPECT_NE(w.find(reason), std::string::npos) << w;
    }
  };
  expect_msg([] { lp_residue(1, 3, 2); }, "p must be odd");
  expect_msg([] { lp_residue(5, 3, 5); }, "p divides chi = 5");
  expect_msg([] { lp_residue(1, 3, 3); }, "need p >= 5");
  expect_msg([] { lp_residue(1, 3, 9); }, "not prime");
}
