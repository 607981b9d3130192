#pragma once

// Rational Ramanujan-type series
//
//   R(n) = prod_i (s_i)_n / (1)_n * (a_0 + a_1 n + ... + a_m n^m) * z0^n,   i = 0..2m
//
// with exact partial sums S(N) = R(0) + ... + R(N-1), the coefficient-basis sums
// U_k(N) = sum_{n<N} prod_i (s_i)_n/(1)_n * n^k * z0^n, and their reductions
// modulo prime powers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rama/exact.hpp"
#include "rama/mpreal.hpp"

namespace rama {

/// Invalid series data; the message names the field and the violated rule.
class SpecError : public Error {
 public:
  using Error::Error;
};

struct ComplexRational {
  BigRational re;
  BigRational im;
  bool operator==(const ComplexRational&) const = default;
};

/// Coefficients of F(x) = V (1 - sum_k (alpha_k (cos 2 pi k x - 1) + beta_k sin 2 pi k x)),
/// V = t0 sqrt((-1)^m chi) / pi^m.
struct FourierData {
  std::vector<ComplexRational> alpha;
  std::vector<ComplexRational> beta;
  bool operator==(const FourierData&) const = default;
};

enum class Validation { strict, unchecked };

/// Shape of a series without its polynomial: m, s_0..s_2m, z0 and the discriminant.
class SeriesTemplate {
 public:
  SeriesTemplate(std::string name, int m, std::vector<BigRational> s, BigRational z0, std::int64_t chi,
                 Validation mode = Validation::strict)
      : name_(std::move(name)), m_(m), s_(std::move(s)), z0_(std::move(z0)), chi_(chi), mode_(mode) {
    validate();
  }

  const std::string& name() const { return name_; }
  int m() const { return m_; }
  const std::vector<BigRational>& s() const { return s_; }
  const BigRational& z0() const { return z0_; }
  std::int64_t chi() const { return chi_; }
  Validation mode() const { return mode_; }
  int order() const { return 2 * m_ + 1; }

 private:
  void validate() const {
    if (m_ < 1) throw SpecError(name_ + ": m must be >= 1");
    if (static_cast<int>(s_.size()) != 2 * m_ + 1) throw SpecError(name_ + ": length(s) must be 2m+1");
    for (const auto& si : s_)
      if (si <= 0 || si >= 1) throw SpecError(name_ + ": s entries must lie in (0,1), got " + to_string(si));
    if (z0_ == 0 || z0_ == 1) throw SpecError(name_ + ": z0 must differ from 0 and 1");
    if (chi_ == 0) throw SpecError(name_ + ": chi must be nonzero");
    if (mode_ == Validation::unchecked) return;
    const BigRational half(1, 2);
    std::vector<BigRational> low, mirrored;
    long halves = 0;
    for (const auto& si : s_) {
      if (si == half)
        ++halves;
      else if (si < half)
        low.push_back(si);
      else
        mirrored.push_back(1 - si);
    }
    std::sort(low.begin(), low.end());
    std::sort(mirrored.begin(), mirrored.end());
    if (low != mirrored) throw SpecError(name_ + ": companion rule violated (every s < 1/2 needs a matching 1 - s)");
    if (halves % 2 == 0) throw SpecError(name_ + ": companion rule violated (number of s = 1/2 must be odd)");
  }

  std::string name_;
  int m_;
  std::vector<BigRational> s_;
  BigRational z0_;
  std::int64_t chi_;
  Validation mode_;
};

/// A complete series: template plus polynomial coefficients a_0..a_m and optional
/// normalization t0 (sum = t0 sqrt((-1)^m chi)/pi^m) and Fourier data.
class SeriesSpec {
 public:
  SeriesSpec(SeriesTemplate shape, std::vector<BigRational> a, std::optional<BigRational> t0 = std::nullopt,
             std::optional<FourierData> fourier = std::nullopt)
      : shape_(std::move(shape)), a_(std::move(a)), t0_(std::move(t0)), fourier_(std::move(fourier)) {
    if (static_cast<int>(a_.size()) != shape_.m() + 1) throw SpecError(shape_.name() + ": length(a) must be m+1");
    if (fourier_ && (static_cast<int>(fourier_->alpha.size()) != shape_.m() ||
                     static_cast<int>(fourier_->beta.size()) != shape_.m()))
      throw SpecError(shape_.name() + ": fourier alpha and beta must each have m entries");
  }

  const SeriesTemplate& shape() const { return shape_; }
  const std::string& name() const { return shape_.name(); }
  int m() const { return shape_.m(); }
  const std::vector<BigRational>& s() const { return shape_.s(); }
  const BigRational& z0() const { return shape_.z0(); }
  std::int64_t chi() const { return shape_.chi(); }
  const std::vector<BigRational>& a() const { return a_; }
  const std::optional<BigRational>& t0() const { return t0_; }
  const std::optional<FourierData>& fourier() const { return fourier_; }

 private:
  SeriesTemplate shape_;
  std::vector<BigRational> a_;
  std::optional<BigRational> t0_;
  std::optional<FourierData> fourier_;
};

// ---------------------------------------------------------------------------
// Exact evaluation

/// a_0 + a_1 x + ... evaluated by Horner's rule.
inline BigRational poly_at(const std::vector<BigRational>& a, const BigRational& x) {
  BigRational r = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * x + *it;
  return r;
}

/// T(n+1)/T(n) = z0 prod_i (s_i + n) / (1 + n)^(2m+1).
inline BigRational step_ratio(const SeriesTemplate& shape, long n) {
  BigRational r = shape.z0();
  for (const auto& si : shape.s()) r *= si + n;
  r /= pow_rational(BigRational(n + 1), shape.order());
  return r;
}

/// T(nu) = z0^nu prod_i (s_i)_nu / (1)_nu.
inline BigRational t_factor(const SeriesTemplate& shape, long nu) {
  if (nu < 0) throw Error("t_factor: nu must be >= 0");
  BigRational t = 1;
  for (long n = 0; n < nu; ++n) t *= step_ratio(shape, n);
  return t;
}
inline BigRational t_factor(const SeriesSpec& spec, long nu) { return t_factor(spec.shape(), nu); }

inline BigRational term(const SeriesSpec& spec, long n) {
  if (n < 0) throw Error("term: n must be >= 0");
  return t_factor(spec.shape(), n) * poly_at(spec.a(), BigRational(n));
}

/// S(0), S(1), ..., S(N), built with the term-ratio recurrence.
inline std::vector<BigRational> partial_sums(const SeriesSpec& spec, long N) {
  if (N < 0) throw Error("partial_sums: N must be >= 0");
  std::vector<BigRational> out;
  out.reserve(static_cast<std::size_t>(N) + 1);
  out.emplace_back(0);
  BigRational t = 1, acc = 0;
  for (long n = 0; n < N; ++n) {
    acc += t * poly_at(spec.a(), BigRational(n));
    out.push_back(acc);
    t *= step_ratio(spec.shape(), n);
  }
  return out;
}

inline BigRational partial_sum(const SeriesSpec& spec, long N) { return partial_sums(spec, N).back(); }

/// U_0(N) .. U_m(N).
inline std::vector<BigRational> basis_sums(const SeriesTemplate& shape, long N) {
  if (N < 0) throw Error("basis_sums: N must be >= 0");
  std::vector<BigRational> u(static_cast<std::size_t>(shape.m()) + 1, BigRational(0));
  BigRational t = 1;
  for (long n = 0; n < N; ++n) {
    BigRational w = t;  // t * n^k
    for (int k = 0; k <= shape.m(); ++k) {
      if (k > 0) w *= n;
      u[static_cast<std::size_t>(k)] += w;
    }
    t *= step_ratio(shape, n);
  }
  return u;
}

// ---------------------------------------------------------------------------
// Modular evaluation

namespace detail {

/// A p-adic number known as unit * p^exponent, the unit modulo p^precision.
struct UnitExp {
  BigInt unit;
  long exponent = 0;
};

inline UnitExp split_rational(const BigRational& q, std::int64_t p, const BigInt& modulus) {
  BigInt num = q.get_num(), den = q.get_den();
  long e = strip_prime(num, p) - (den == 1 ? 0 : strip_prime(den, p));
  BigInt inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t());
  return {mod_floor(num * inv, modulus), e};
}

inline std::vector<std::string> stream_obstructions(const SeriesTemplate& shape, std::int64_t p) {
  std::vector<std::string> why;
  const BigInt pp(static_cast<long>(p));
  for (std::size_t i = 0; i < shape.s().size(); ++i)
    if (mpz_divisible_p(shape.s()[i].get_den().get_mpz_t(), pp.get_mpz_t()))
      why.push_back("p divides denominator of s_" + std::to_string(i) + " = " + to_string(shape.s()[i]));
  if (mpz_divisible_p(shape.z0().get_num().get_mpz_t(), pp.get_mpz_t()))
    why.push_back("p divides numerator of z0 = " + to_string(shape.z0()));
  if (mpz_divisible_p(shape.z0().get_den().get_mpz_t(), pp.get_mpz_t()))
    why.push_back("p divides denominator of z0 = " + to_string(shape.z0()));
  return why;
}

/// Streams T(n) = z0^n prod (s_i)_n/(1)_n as UnitExp modulo p^precision, removing
/// every factor p from the Pochhammer factors before dividing.
class PadicTermStream {
 public:
  PadicTermStream(const SeriesTemplate& shape, std::int64_t p, int precision)
      : shape_(shape), p_(p), modulus_(pow_int(BigInt(static_cast<long>(p)), static_cast<unsigned long>(precision))) {
    auto why = stream_obstructions(shape, p);
    if (!why.empty()) throw InadmissiblePrime(p, std::move(why));
    // z0 / prod v_i, with s_i = u_i / v_i
    BigInt den = shape.z0().get_den();
    for (const auto& si : shape.s()) den *= si.get_den();
    BigInt inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus_.get_mpz_t());
    step_constant_ = mod_floor(shape.z0().get_num() * inv, modulus_);
    state_.unit = 1;
  }

  long n() const { return n_; }
  const UnitExp& current() const { return state_; }
  const BigInt& modulus() const { return modulus_; }

  void advance() {
    BigInt num = step_constant_;
    long e = 0;
    for (const auto& si : shape_.s()) {
      BigInt f = si.get_num() + si.get_den() * n_;
      e += strip_prime(f, p_);
      num = mod_floor(num * f, modulus_);
    }
    BigInt d = n_ + 1;
    e -= strip_prime(d, p_) * shape_.order();
    BigInt dpow = pow_int(d, static_cast<unsigned long>(shape_.order()));
    BigInt inv;
    mpz_invert(inv.get_mpz_t(), dpow.get_mpz_t(), modulus_.get_mpz_t());
    state_.unit = mod_floor(state_.unit * num * inv, modulus_);
    state_.exponent += e;
    ++n_;
  }

 private:
  const SeriesTemplate& shape_;
  std::int64_t p_;
  BigInt modulus_;
  BigInt step_constant_;
  UnitExp state_;
  long n_ = 0;
};

/// Accumulates sum_n T(n) * w_j(n) for j weights, modulo p^e, with `guard` extra
/// digits absorbing negative intermediate exponents.
template <typename Weights>
std::vector<Residue> stream_sums(const SeriesTemplate& shape, long N, const PrimePowerModulus& M, std::size_t count,
                                 Weights&& weights) {
  if (N < 0) throw Error("modular sum: N must be >= 0");
  const std::int64_t p = M.prime();
  const int e = M.exponent();
  const int guard = 2 * shape.m() + 4;
  PadicTermStream stream(shape, p, e + guard);
  const BigInt& big = stream.modulus();
  const BigInt pp(static_cast<long>(p));
  std::vector<BigInt> acc(count, BigInt(0));
  for (long n = 0; n < N; ++n) {
    const UnitExp& t = stream.current();
    std::vector<BigRational> w = weights(n);
    for (std::size_t j = 0; j < count; ++j) {
      if (w[j] == 0) continue;
      if (mpz_divisible_p(w[j].get_den().get_mpz_t(), pp.get_mpz_t()))
        throw InadmissiblePrime(p, {"p divides a denominator of the polynomial coefficients"});
      UnitExp wj = split_rational(w[j], p, big);
      long shift = t.exponent + wj.exponent + guard;
      if (shift < 0)
        throw Error("guard digits exhausted at n = " + std::to_string(n) + " (exponent " +
                    std::to_string(t.exponent + wj.exponent) + ")");
      if (shift >= e + guard) continue;
      acc[j] = mod_floor(acc[j] + t.unit * wj.unit * pow_int(pp, static_cast<unsigned long>(shift)), big);
    }
    stream.advance();
  }
  std::vector<Residue> out;
  out.reserve(count);
  const BigInt g = pow_int(pp, static_cast<unsigned long>(guard));
  for (auto& a : acc) {
    if (!mpz_divisible_p(a.get_mpz_t(), g.get_mpz_t()))
      throw InadmissiblePrime(p, {"partial sum is not p-integral"});
    out.emplace_back(a / g, M);
  }
  return out;
}

}  // namespace detail

inline Residue partial_sum_mod(const SeriesSpec& spec, long N, const PrimePowerModulus& M) {
  for (std::size_t k = 0; k < spec.a().size(); ++k)
    if (padic_valuation(spec.a()[k].get_den(), M.prime()).value() > 0)
      throw InadmissiblePrime(M.prime(), {"p divides denominator of a_" + std::to_string(k) + " = " +
                                          to_string(spec.a()[k])});
  return detail::stream_sums(spec.shape(), N, M, 1, [&](long n) {
    return std::vector<BigRational>{poly_at(spec.a(), BigRational(n))};
  })[0];
}

inline std::vector<Residue> basis_sums_mod(const SeriesTemplate& shape, long N, const PrimePowerModulus& M) {
  const auto count = static_cast<std::size_t>(shape.m()) + 1;
  return detail::stream_sums(shape, N, M, count, [&](long n) {
    std::vector<BigRational> w(count);
    BigInt pw = 1;
    for (std::size_t k = 0; k < count; ++k) {
      w[k] = pw;
      pw *= n;
    }
    return w;
  });
}

// ---------------------------------------------------------------------------
// Numeric value of the series

/// A real number together with an absolute error bound.
struct NumericEstimate {
  MPReal value;
  MPReal error_bound;
};

namespace detail {

/// Eventual bound on |P(n+1)/P(n)| from the coefficient sizes (double precision is enough for a bound).
inline double poly_growth_bound(const std::vector<BigRational>& a, long n) {
  double lead = std::abs(a.back().get_d());
  double rest = 0, all = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double c = std::abs(a[k].get_d()) * std::pow(static_cast<double>(n), static_cast<double>(k));
    all += c;
    if (k + 1 < a.size()) rest += c;
  }
  double low = lead * std::pow(static_cast<double>(n), static_cast<double>(a.size() - 1)) - rest;
  if (low <= 0) return INFINITY;
  return std::pow(1.0 + 1.0 / static_cast<double>(n), static_cast<double>(a.size() - 1)) * all / low;
}

}  // namespace detail

/// Sum of R(n) for |z0| < 1, stopped once the geometric tail bound falls below 10^-digits.
inline NumericEstimate value_estimate(const SeriesSpec& spec, int digits) {
  if (abs(spec.z0()) >= 1) throw Error(spec.name() + ": |z0| >= 1 requires analytic continuation; out of scope");
  if (spec.a().back() == 0) throw Error(spec.name() + ": leading coefficient a_m must be nonzero");
  const mpfr_prec_t bits = digits_to_bits(digits + 10);
  const double z = std::abs(spec.z0().get_d());
  const MPReal target = ten_to_minus(digits + 2, bits);
  MPReal t(1, bits), sum(bits), biggest(bits);
  for (long n = 0;; ++n) {
    MPReal r = t * MPReal(poly_at(spec.a(), BigRational(n)), bits);
    sum += r;
    biggest = max(biggest, abs(r));
    t *= MPReal(step_ratio(spec.shape(), n), bits);
    if (n < 4) continue;
    double q = z * detail::poly_growth_bound(spec.a(), n + 1);
    if (q >= 1) continue;
    // |R(n+1)| <= |T(n+1)| |P(n+1)| and subsequent terms shrink by at most q.
    MPReal next = abs(t * MPReal(poly_at(spec.a(), BigRational(n + 1)), bits));
    MPReal tail = next / (1 - MPReal(std::to_string(q), bits));
    if (tail < target) {
      MPReal rounding = biggest * MPReal(n + 1, bits) * pow(MPReal(2, bits), -static_cast<long>(bits - 4));
      return {sum, tail + rounding};
    }
  }
}

}  // namespace rama
