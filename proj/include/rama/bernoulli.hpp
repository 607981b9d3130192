#pragma once

// Bernoulli numbers and their character twists B_{n,chi}. L(chi, 1-n) = -B_{n,chi}/n
// supplies the mod-p value of L_p(chi, m+1).

#include <cstdint>
#include <mutex>
#include <vector>

#include "rama/exact.hpp"

namespace rama {

/// B_0..B_nmax with B_1 = -1/2.
class BernoulliTable {
 public:
  explicit BernoulliTable(std::vector<BigRational> values) : values_(std::move(values)) {}

  const BigRational& operator[](std::size_t n) const { return values_.at(n); }
  std::size_t nmax() const { return values_.size() - 1; }
  const std::vector<BigRational>& values() const { return values_; }

 private:
  std::vector<BigRational> values_;
};

namespace detail {

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// Shared cache; extension is serialized, reads copy out under the lock.
struct BernoulliCache {
  std::mutex mu;
  std::vector<BigRational> values{BigRational(1)};

  void extend_to(std::size_t nmax) {
    // sum_{k<=n} C(n+1,k) B_k = 0
    for (std::size_t n = values.size(); n <= nmax; ++n) {
      if (n >= 3 && n % 2 == 1) {
        values.emplace_back(0);
        continue;
      }
      BigRational acc = 0;
      for (std::size_t k = 0; k < n; ++k)
        if (values[k] != 0) acc += BigRational(binomial(n + 1, k)) * values[k];
      values.push_back(-acc / BigRational(static_cast<long>(n + 1)));
    }
  }
};

inline BernoulliCache& bernoulli_cache() {
  static BernoulliCache cache;
  return cache;
}

}  // namespace detail

inline BernoulliTable bernoulli_table(long nmax) {
  if (nmax < 0) throw Error("bernoulli_table: nmax must be >= 0");
  auto& cache = detail::bernoulli_cache();
  std::lock_guard lock(cache.mu);
  cache.extend_to(static_cast<std::size_t>(nmax));
  return BernoulliTable(std::vector<BigRational>(cache.values.begin(), cache.values.begin() + nmax + 1));
}

inline BigRational bernoulli(long n) {
  if (n < 0) throw Error("bernoulli: n must be >= 0");
  auto& cache = detail::bernoulli_cache();
  std::lock_guard lock(cache.mu);
  cache.extend_to(static_cast<std::size_t>(n));
  return cache.values[static_cast<std::size_t>(n)];
}

/// B_n(x) = sum_k C(n,k) B_k x^(n-k).
inline BigRational bernoulli_poly_at(long n, const BigRational& x) {
  if (n < 0) throw Error("bernoulli_poly_at: n must be >= 0");
  BernoulliTable b = bernoulli_table(n);
  BigRational acc = 0, xp = 1;  // x^(n-k), walked from k = n down to 0
  for (long k = n; k >= 0; --k) {
    acc += BigRational(detail::binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(k))) *
           b[static_cast<std::size_t>(k)] * xp;
    xp *= x;
  }
  return acc;
}

/// D = 1 or D = 0,1 (mod 4), D != 0. Squarefreeness is not enforced.
inline bool is_discriminant(std::int64_t d) {
  if (d == 1) return true;
  if (d == 0) return false;
  std::int64_t r = ((d % 4) + 4) % 4;
  return r == 0 || r == 1;
}

/// Conductor used for the character sum: |D|, or 1 for the trivial character.
inline std::int64_t conductor(std::int64_t d) { return d < 0 ? -d : d; }

/// B_{n,chi} = f^(n-1) sum_{a=1..f} chi_D(a) B_n(a/f), f = |D|.
inline BigRational generalized_bernoulli(long n, std::int64_t d) {
  if (n < 0) throw Error("generalized_bernoulli: n must be >= 0");
  if (!is_discriminant(d)) throw Error(std::to_string(d) + " is not a discriminant");
  if (d == 1 && n >= 2) return bernoulli(n);
  const std::int64_t f = conductor(d);
  BigRational acc = 0;
  for (std::int64_t a = 1; a <= f; ++a) {
    int c = kronecker(d, a);
    if (c == 0) continue;
    BigRational b = bernoulli_poly_at(n, make_rational(BigInt(static_cast<long>(a)), BigInt(static_cast<long>(f))));
    acc += c > 0 ? b : BigRational(-b);
  }
  if (n == 0) return acc / BigRational(static_cast<long>(f));
  return acc * BigRational(pow_int(BigInt(static_cast<long>(f)), static_cast<unsigned long>(n - 1)));
}

/// L(chi_D, s) for s <= 0, via L(chi, 1-n) = -B_{n,chi}/n.
inline BigRational l_at_nonpositive(std::int64_t d, long s) {
  if (s > 0) throw Error("l_at_nonpositive: s must be <= 0");
  long n = 1 - s;
  return -generalized_bernoulli(n, d) / BigRational(n);
}

/// L_p(chi_D, s) mod p through the congruence L_p(chi, s) = L(chi, s + 1 - p) (mod p).
/// For D = 1 and s = m+1 this is B_{p-m-1}/(m+1) mod p.
inline Residue lp_residue(std::int64_t d, long s, std::int64_t p) {
  if (!is_prime(p)) throw InadmissiblePrime(p, {"p is not prime"}, "for L_p congruence");
  std::vector<std::string> why;
  if (p == 2) why.push_back("p must be odd");
  if (d % p == 0) why.push_back("p divides chi = " + std::to_string(d));
  if (p < s + 2) why.push_back("need p >= " + std::to_string(s + 2));
  if (!why.empty()) throw InadmissiblePrime(p, std::move(why), "for L_p congruence");
  PrimePowerModulus mod(p, 1);
  BigRational v = l_at_nonpositive(d, s + 1 - static_cast<long>(p));
  if (padic_valuation(v.get_den(), p).value() > 0)
    throw InadmissiblePrime(p, {"L-value denominator divisible by p"}, "for L_p congruence");
  return reduce_mod(v, mod);
}

}  // namespace rama
