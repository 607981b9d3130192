#pragma once

// Exact integer and rational arithmetic, with residues modulo prime powers.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rama {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Domain failure raised by the library (bad input, violated precondition).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A prime that cannot be used for the requested reduction or congruence.
class InadmissiblePrime : public Error {
 public:
  InadmissiblePrime(std::int64_t p, std::vector<std::string> reasons, const std::string& context = "")
      : Error(format(p, reasons, context)), p_(p), reasons_(std::move(reasons)) {}

  std::int64_t prime() const { return p_; }
  const std::vector<std::string>& reasons() const { return reasons_; }

 private:
  static std::string format(std::int64_t p, const std::vector<std::string>& reasons, const std::string& context) {
    std::string msg = "inadmissible prime " + (context.empty() ? "" : context + " ") + std::to_string(p);
    for (std::size_t i = 0; i < reasons.size(); ++i) msg += (i == 0 ? ": " : "; ") + reasons[i];
    return msg;
  }

  std::int64_t p_;
  std::vector<std::string> reasons_;
};

/// Arithmetic between residues with different moduli. A programming error.
class ModulusMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Rational helpers

inline BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error("zero denominator");
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

inline BigInt pow_int(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline BigRational pow_rational(const BigRational& base, long e) {
  BigInt n = pow_int(base.get_num(), static_cast<unsigned long>(e < 0 ? -e : e));
  BigInt d = pow_int(base.get_den(), static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? make_rational(d, n) : make_rational(n, d);
}

/// "num/den", or "num" for integers. ASCII minus sign.
inline std::string to_string(const BigRational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline std::string to_string(const BigInt& n) { return n.get_str(); }

/// Parses "a", "a/b" or "-a/b" with decimal integers. A leading U+2212 minus sign is accepted.
inline BigRational parse_rational(std::string_view text) {
  static constexpr std::string_view unicode_minus = "\xE2\x88\x92";
  if (text.starts_with(unicode_minus)) {
    std::string_view rest = text.substr(unicode_minus.size());
    if (rest.empty() || rest.front() == '-' || rest.front() == '+')
      throw Error("malformed rational '" + std::string(text) + "'");
    return -parse_rational(rest);
  }
  auto slash = text.find('/');
  auto parse_int = [&](std::string_view part) {
    std::string s(part);
    if (s.empty() || s == "-" || s == "+") throw Error("malformed rational '" + std::string(text) + "'");
    if (s.front() == '+') s.erase(0, 1);
    for (std::size_t i = (s.front() == '-') ? 1 : 0; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') throw Error("malformed rational '" + std::string(text) + "'");
    return BigInt(s, 10);
  };
  if (slash == std::string_view::npos) return BigRational(parse_int(text));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den <= 0) throw Error("rational '" + std::string(text) + "' needs a positive denominator");
  return make_rational(parse_int(text.substr(0, slash)), den);
}

// ---------------------------------------------------------------------------
// Primality

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin; the first twelve prime bases cover all 64-bit n.
inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  const auto un = static_cast<std::uint64_t>(n);
  for (auto b : bases) {
    if (un == b) return true;
    if (un % b == 0) return false;
  }
  std::uint64_t d = un - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (auto a : bases) {
    std::uint64_t x = detail::pow_mod(a, d, un);
    if (x == 1 || x == un - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mul_mod(x, x, un);
      if (x == un - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline std::int64_t next_prime(std::int64_t n) {
  std::int64_t q = n < 2 ? 2 : n + 1;
  while (!is_prime(q)) ++q;
  return q;
}

inline std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t q = lo < 2 ? 2 : lo; q <= hi; ++q)
    if (is_prime(q)) out.push_back(q);
  return out;
}

// ---------------------------------------------------------------------------
// Valuations

/// v_p of an exact quantity; zero maps to +infinity.
class Valuation {
 public:
  constexpr explicit Valuation(long v) : v_(v), infinite_(false) {}
  static constexpr Valuation infinity() { return Valuation(); }

  constexpr bool is_infinite() const { return infinite_; }
  long value() const {
    if (infinite_) throw Error("valuation of zero is +infinity");
    return v_;
  }
  std::string to_string() const { return infinite_ ? "inf" : std::to_string(v_); }

  constexpr bool at_least(long bound) const { return infinite_ || v_ >= bound; }

  friend constexpr bool operator==(const Valuation& a, const Valuation& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.v_ == b.v_);
  }
  friend constexpr std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.v_ <=> b.v_;
  }

 private:
  constexpr Valuation() : v_(0), infinite_(true) {}
  long v_;
  bool infinite_;
};

/// Exponent of p in a nonzero integer; strips those factors from `n` when given.
inline long strip_prime(BigInt& n, std::int64_t p) {
  if (n == 0) throw Error("valuation of zero is +infinity");
  BigInt pp(static_cast<long>(p));
  return static_cast<long>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

inline Valuation padic_valuation(const BigInt& n, std::int64_t p) {
  if (n == 0) return Valuation::infinity();
  BigInt tmp = n;
  return Valuation(strip_prime(tmp, p));
}

inline Valuation padic_valuation(const BigRational& q, std::int64_t p) {
  if (q == 0) return Valuation::infinity();
  BigInt n = q.get_num(), d = q.get_den();
  return Valuation(strip_prime(n, p) - (d == 1 ? 0 : strip_prime(d, p)));
}

// ---------------------------------------------------------------------------
// Prime-power moduli and residues

class PrimePowerModulus {
 public:
  PrimePowerModulus(std::int64_t p, int e) : p_(p), e_(e) {
    if (!is_prime(p)) throw Error("modulus base " + std::to_string(p) + " is not prime");
    if (e < 1) throw Error("modulus exponent must be >= 1");
    modulus_ = pow_int(BigInt(static_cast<long>(p)), static_cast<unsigned long>(e));
  }

  std::int64_t prime() const { return p_; }
  int exponent() const { return e_; }
  const BigInt& value() const { return modulus_; }
  std::string to_string() const { return std::to_string(p_) + "^" + std::to_string(e_); }

  bool operator==(const PrimePowerModulus& o) const { return p_ == o.p_ && e_ == o.e_; }

 private:
  std::int64_t p_;
  int e_;
  BigInt modulus_;
};

inline BigInt mod_floor(const BigInt& a, const BigInt& m) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

/// Element of Z/p^e. Value is kept in [0, p^e).
class Residue {
 public:
  Residue(const BigInt& v, PrimePowerModulus m) : modulus_(std::move(m)), value_(mod_floor(v, modulus_.value())) {}

  const BigInt& value() const { return value_; }
  const PrimePowerModulus& modulus() const { return modulus_; }

  bool is_zero() const { return value_ == 0; }
  bool is_unit() const { return mpz_divisible_ui_p(value_.get_mpz_t(), static_cast<unsigned long>(modulus_.prime())) == 0; }

  Residue operator+(const Residue& o) const { return Residue(value_ + check(o).value_, modulus_); }
  Residue operator-(const Residue& o) const { return Residue(value_ - check(o).value_, modulus_); }
  Residue operator*(const Residue& o) const { return Residue(value_ * check(o).value_, modulus_); }
  Residue operator-() const { return Residue(-value_, modulus_); }

  Residue inverse() const {
    BigInt r;
    if (mpz_invert(r.get_mpz_t(), value_.get_mpz_t(), modulus_.value().get_mpz_t()) == 0)
      throw Error(value_.get_str() + " is not invertible modulo " + modulus_.to_string());
    return Residue(r, modulus_);
  }

  bool operator==(const Residue& o) const { return value_ == check(o).value_; }

 private:
  const Residue& check(const Residue& o) const {
    if (!(modulus_ == o.modulus_))
      throw ModulusMismatch("residue arithmetic across moduli " + modulus_.to_string() + " and " +
                            o.modulus_.to_string());
    return o;
  }

  PrimePowerModulus modulus_;
  BigInt value_;
};

inline Residue reduce_mod(const BigRational& q, const PrimePowerModulus& m) {
  BigInt den = q.get_den();
  auto v = padic_valuation(den, m.prime());
  if (v.value() > 0)
    throw InadmissiblePrime(m.prime(), {"inadmissible denominator " + den.get_str() + " (p-valuation " +
                                        v.to_string() + ")"});
  BigInt inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.value().get_mpz_t());
  return Residue(q.get_num() * inv, m);
}

inline Residue mod_inverse(const BigInt& a, const PrimePowerModulus& m) {
  BigInt r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.value().get_mpz_t()) == 0)
    throw Error(a.get_str() + " is not invertible modulo " + m.to_string());
  return Residue(r, m);
}

/// The representative in (-M/2, M/2].
inline BigInt balanced_lift(const Residue& r) {
  const BigInt& m = r.modulus().value();
  if (2 * r.value() > m) return r.value() - m;
  return r.value();
}

// ---------------------------------------------------------------------------
// Kronecker symbol (D / n)

inline int kronecker(std::int64_t d, std::int64_t n) {
  if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (d < 0) result = -result;
  }
  // Factor 2 from n: (d/2) is 0 for even d, +1 for d = +-1 mod 8, -1 for d = +-3 mod 8.
  int twos = 0;
  while ((n & 1) == 0) {
    n >>= 1;
    ++twos;
  }
  if (twos > 0) {
    if ((d & 1) == 0) return 0;
    std::int64_t r8 = ((d % 8) + 8) % 8;
    if ((twos & 1) && (r8 == 3 || r8 == 5)) result = -result;
  }
  // Jacobi (d / n), n odd positive.
  std::int64_t a = ((d % n) + n) % n;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      std::int64_t r8 = n % 8;
      if (r8 == 3 || r8 == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

// ---------------------------------------------------------------------------
// CRT and rational reconstruction

/// A value modulo an arbitrary positive integer (output of crt).
struct ModularValue {
  BigInt value;
  BigInt modulus;
};

inline ModularValue crt(const std::vector<std::pair<BigInt, BigInt>>& pairs) {
  ModularValue acc{BigInt(0), BigInt(1)};
  for (const auto& [v, m] : pairs) {
    if (m <= 0) throw Error("crt modulus must be positive");
    BigInt g;
    mpz_gcd(g.get_mpz_t(), acc.modulus.get_mpz_t(), m.get_mpz_t());
    if (g != 1) throw Error("crt moduli are not pairwise coprime (" + acc.modulus.get_str() + ", " + m.get_str() + ")");
    // acc.value + acc.modulus * t = v (mod m)
    BigInt inv;
    mpz_invert(inv.get_mpz_t(), acc.modulus.get_mpz_t(), m.get_mpz_t());
    BigInt t = mod_floor((v - acc.value) * inv, m);
    acc.value += acc.modulus * t;
    acc.modulus *= m;
    acc.value = mod_floor(acc.value, acc.modulus);
  }
  return acc;
}

/// Wang's half-extended Euclid. Returns n/d with |n| <= num_bound, 0 < d <= den_bound,
/// gcd(d, M) = 1 and n = d*u (mod M), or nothing. The answer is unique only when
/// 2*num_bound*den_bound <= M; with looser bounds the first candidate is returned.
inline std::optional<BigRational> rational_reconstruct(const BigInt& u, const BigInt& modulus,
                                                       const BigInt& num_bound, const BigInt& den_bound) {
  if (num_bound < 0 || den_bound < 1) return std::nullopt;
  BigInt r0 = modulus, r1 = mod_floor(u, modulus);
  BigInt s0 = 0, s1 = 1;
  while (r1 > num_bound) {
    BigInt q = r0 / r1;
    BigInt r2 = r0 - q * r1;
    BigInt s2 = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (s1 == 0) return std::nullopt;
  BigInt n = r1, d = s1;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (d > den_bound) return std::nullopt;
  BigInt g;
  mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), modulus.get_mpz_t());
  if (g != 1) return std::nullopt;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  if (g != 1) return std::nullopt;
  return make_rational(n, d);
}

inline std::optional<BigRational> rational_reconstruct(const Residue& r, const BigInt& num_bound,
                                                       const BigInt& den_bound) {
  return rational_reconstruct(r.value(), r.modulus().value(), num_bound, den_bound);
}

}  // namespace rama
