#pragma once

// Multiprecision analysis around the bilateral series sum_{n in Z} R(n+x).
// The closed form is e^{i pi x} F(x) / prefactor(x); the constant A is defined by
//
//   sum_{n in Z} R(n+x) - sum_{n>=0} R(n+x) = (A + B x + ...) x^(2m+1).
//
// Precision is always a call argument in decimal digits. Internally 10 guard digits
// are carried on top of whatever a routine needs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rama/bernoulli.hpp"
#include "rama/exact.hpp"
#include "rama/mpreal.hpp"
#include "rama/series.hpp"

namespace rama {

inline constexpr int default_digits = 50;
inline constexpr int guard_digits = 10;

inline mpfr_prec_t working_bits(int digits) { return digits_to_bits(digits + guard_digits); }

inline MPReal log_gamma(const MPReal& x, int digits) {
  if (x.sign() <= 0) throw Error("log_gamma: x must be positive");
  MPReal r(std::max(working_bits(digits), x.precision()));
  mpfr_lngamma(r.get(), x.get(), MPFR_RNDN);
  return r;
}

inline MPReal gamma(const MPReal& x, int digits) { return exp(log_gamma(x, digits)); }

/// zeta(s, a) = sum_{k>=0} (k+a)^-s for s > 1, 0 < a <= 1, by Euler-Maclaurin summation.
/// The error bound is the first omitted correction term.
inline NumericEstimate hurwitz_zeta(const MPReal& s, const MPReal& a, int digits) {
  const mpfr_prec_t bits = std::max({working_bits(digits), s.precision(), a.precision()});
  if (!(s > MPReal(1, bits))) throw Error("hurwitz_zeta: need s > 1");
  if (a.sign() <= 0 || a > MPReal(1, bits)) throw Error("hurwitz_zeta: need 0 < a <= 1");
  const MPReal target = ten_to_minus(digits + 5, bits);
  const long N = std::max(20L, static_cast<long>(digits));
  MPReal sum(bits);
  for (long k = 0; k < N; ++k) sum += pow(MPReal(k, bits) + a, -s);
  const MPReal w = MPReal(N, bits) + a;
  sum += pow(w, 1 - s) / (s - 1);
  sum += pow(w, -s) / 2;
  // B_{2j}/(2j)! * s(s+1)...(s+2j-2) * w^(-s-2j+1)
  MPReal rising = s;           // s(s+1)...(s+2j-2)
  MPReal wpow = pow(w, -s - 1);  // w^(-s-2j+1)
  MPReal fact(2, bits);        // (2j)!
  const MPReal winv2 = 1 / (w * w);
  for (long j = 1;; ++j) {
    MPReal term = MPReal(bernoulli(2 * j), bits) / fact * rising * wpow;
    if (abs(term) < target || j > 4 * digits) {
      return {sum, abs(term) + pow(MPReal(2, bits), -static_cast<long>(bits - 8)) * abs(sum)};
    }
    sum += term;
    rising *= (s + (2 * j - 1)) * (s + 2 * j);
    wpow *= winv2;
    fact *= MPReal((2 * j + 1) * (2 * j + 2), bits);
  }
}

/// 1, or a fundamental discriminant.
inline bool is_fundamental_discriminant(std::int64_t d) {
  if (d == 1) return true;
  auto squarefree = [](std::int64_t n) {
    n = n < 0 ? -n : n;
    for (std::int64_t q = 2; q * q <= n; ++q)
      if (n % (q * q) == 0) return false;
    return true;
  };
  std::int64_t r = ((d % 4) + 4) % 4;
  if (r == 1) return squarefree(d);
  if (r == 0) {
    std::int64_t k = d / 4, rk = ((k % 4) + 4) % 4;
    return (rk == 2 || rk == 3) && squarefree(k);
  }
  return false;
}

/// L(chi_D, s) = f^-s sum_{a=1..f} chi_D(a) zeta(s, a/f), f = |D|.
inline NumericEstimate l_value(std::int64_t d, long s, int digits) {
  if (!is_fundamental_discriminant(d)) throw Error("l_value: " + std::to_string(d) + " is not a fundamental discriminant");
  if (s < 2) throw Error("l_value: need s >= 2");
  const mpfr_prec_t bits = working_bits(digits);
  const MPReal sr(s, bits);
  if (d == 1) return hurwitz_zeta(sr, MPReal(1, bits), digits);
  const std::int64_t f = conductor(d);
  MPReal sum(bits), err(bits);
  for (std::int64_t a = 1; a <= f; ++a) {
    int c = kronecker(d, a);
    if (c == 0) continue;
    auto z = hurwitz_zeta(sr, MPReal(make_rational(BigInt(static_cast<long>(a)), BigInt(static_cast<long>(f))), bits),
                          digits);
    sum += c > 0 ? z.value : -z.value;
    err += z.error_bound;
  }
  MPReal scale = pow(MPReal(f, bits), -s);
  return {sum * scale, err * scale};
}

/// V = t0 sqrt((-1)^m chi) / pi^m, the value of the series.
inline MPComplex closed_form_value(const SeriesSpec& spec, int digits) {
  if (!spec.t0()) throw Error(spec.name() + ": no t0 recorded");
  const mpfr_prec_t bits = working_bits(digits);
  const long radicand = (spec.m() % 2 == 0 ? 1 : -1) * static_cast<long>(spec.chi());
  MPReal scale = MPReal(*spec.t0(), bits) / pow(const_pi(bits), static_cast<long>(spec.m()));
  MPReal root = sqrt(MPReal(radicand < 0 ? -radicand : radicand, bits));
  if (radicand < 0) return {MPReal(bits), scale * root};
  return MPComplex(scale * root);
}

namespace detail {

inline MPComplex complex_of(const ComplexRational& c, mpfr_prec_t bits) { return {MPReal(c.re, bits), MPReal(c.im, bits)}; }

/// Rounded up, so tail bounds built from it stay bounds.
inline MPReal from_double(double q, mpfr_prec_t bits) {
  MPReal r(bits);
  mpfr_set_d(r.get(), q, MPFR_RNDU);
  return r;
}

}  // namespace detail

/// F(x) = V (1 - sum_k (alpha_k (cos 2 pi k x - 1) + beta_k sin 2 pi k x)).
inline MPComplex fourier_value(const SeriesSpec& spec, const MPReal& x, int digits) {
  if (!spec.fourier()) throw Error(spec.name() + ": no Fourier data recorded");
  const mpfr_prec_t bits = std::max(working_bits(digits), x.precision());
  const MPReal two_pi_x = 2 * const_pi(bits) * x;
  MPComplex inner(MPReal(1, bits));
  const auto& f = *spec.fourier();
  for (std::size_t k = 1; k <= f.alpha.size(); ++k) {
    MPReal arg = two_pi_x * static_cast<long>(k);
    inner -= detail::complex_of(f.alpha[k - 1], bits) * (cos(arg) - 1);
    inner -= detail::complex_of(f.beta[k - 1], bits) * sin(arg);
  }
  return closed_form_value(spec, digits) * inner;
}

/// prod_k (cos pi x - cos pi s_k) / (1 - cos pi s_k).
inline MPReal prefactor(const SeriesTemplate& shape, const MPReal& x, mpfr_prec_t bits) {
  const MPReal pi = const_pi(bits);
  const MPReal cx = cos(pi * x);
  MPReal p(1, bits);
  for (const auto& s : shape.s()) {
    MPReal cs = cos(pi * MPReal(s, bits));
    p *= (cx - cs) / (1 - cs);
  }
  return p;
}

/// Distance from x to the nearest zero of the prefactor, x = +-s_k (mod 2).
inline MPReal pole_distance(const SeriesTemplate& shape, const MPReal& x) {
  const mpfr_prec_t bits = x.precision();
  MPReal best(10, bits);
  for (const auto& s : shape.s())
    for (int sign : {1, -1}) {
      MPReal d = x - MPReal(s, bits) * sign;
      d = d - floor(d / 2 + MPReal("0.5", bits)) * 2;  // reduce to [-1, 1)
      if (abs(d) < best) best = abs(d);
    }
  return best;
}

/// sum_{n in Z} R(n+x) = e^{i pi x} F(x) / prefactor(x).
inline MPComplex bilateral_closed(const SeriesSpec& spec, const MPReal& x, int digits) {
  const mpfr_prec_t bits = std::max(working_bits(digits), x.precision());
  MPReal xx(bits);
  mpfr_set(xx.get(), x.get(), MPFR_RNDN);
  MPReal dist = pole_distance(spec.shape(), xx);
  if (dist < ten_to_minus(digits / 2, bits))
    throw Error(spec.name() + ": x is within " + dist.to_string(6) + " of a pole of the closed form");
  MPComplex f = fourier_value(spec, xx, digits);
  MPReal pf = prefactor(spec.shape(), xx, bits);
  return expi(const_pi(bits) * xx) * f / pf;
}

namespace detail {

/// sum_{n>=0} R(n+x) without the domain check on x; valid for |x| < 1/2.
inline MPComplex right_sum_unchecked(const SeriesSpec& spec, const MPReal& x, int digits) {
  const mpfr_prec_t bits = std::max(working_bits(digits), x.precision());
  const MPReal pi = const_pi(bits);
  const MPReal z(spec.z0(), bits);
  const MPReal one(1, bits);
  // z0^x prod Gamma(s_i + x) / (Gamma(s_i) Gamma(1 + x)), through log-gamma differences
  MPReal lg = log(abs(z)) * x;
  const MPReal lg1x = log_gamma(one + x, digits);
  for (const auto& s : spec.s()) {
    MPReal sr(s, bits);
    lg += log_gamma(sr + x, digits) - log_gamma(sr, digits) - lg1x;
  }
  MPReal mag = exp(lg);
  MPComplex front = z.sign() < 0 ? expi(pi * x) * mag : MPComplex(mag);

  const MPReal target = ten_to_minus(digits + 5, bits);
  const double zabs = std::abs(spec.z0().get_d());
  std::vector<MPReal> a;
  for (const auto& c : spec.a()) a.emplace_back(c, bits);
  auto poly = [&](const MPReal& y) {
    MPReal acc(bits);
    for (std::size_t k = a.size(); k-- > 0;) acc = acc * y + a[k];
    return acc;
  };
  MPReal t(1, bits), sum(bits);
  for (long n = 0;; ++n) {
    MPReal y = MPReal(n, bits) + x;
    MPReal term = t * poly(y);
    sum += term;
    MPReal ratio = z;
    for (const auto& s : spec.s()) ratio *= (MPReal(s, bits) + y);
    ratio /= pow(one + y, static_cast<long>(spec.s().size()));
    t *= ratio;
    if (n < 4) continue;
    double q = zabs * detail::poly_growth_bound(spec.a(), n + 1) * 1.001;
    if (q >= 1) continue;
    MPReal next = abs(t * poly(y + 1));
    if (next / (1 - from_double(q, bits)) < target) break;
  }
  return front * sum;
}

}  // namespace detail

/// sum_{n>=0} R(n+x) for |z0| < 1 and 0 <= x < 1/2.
inline MPComplex right_sum(const SeriesSpec& spec, const MPReal& x, int digits) {
  if (abs(spec.z0()) >= 1) throw Error(spec.name() + ": right_sum needs |z0| < 1");
  if (x.sign() < 0 || !(x < MPReal("0.5", x.precision()))) throw Error("right_sum: need 0 <= x < 1/2");
  return detail::right_sum_unchecked(spec, x, digits);
}

/// A = sum_{n>=1} prod_i (1)_n/(s_i)_n * sum_k a_k (-n)^(k-2m-1) * z0^-n, convergent for |z0| > 1.
inline NumericEstimate a_constant_direct(const SeriesSpec& spec, int digits) {
  if (abs(spec.z0()) <= 1) throw Error(spec.name() + ": |z0| <= 1, use a_constant_extrapolate");
  const mpfr_prec_t bits = working_bits(digits);
  const long order = spec.shape().order();
  const MPReal target = ten_to_minus(digits + 2, bits);
  const BigRational zinv = 1 / spec.z0();
  const double zinv_abs = std::abs(zinv.get_d());
  double coeff_sum = 0;
  for (const auto& c : spec.a()) coeff_sum += std::abs(c.get_d());
  BigRational c = 1;  // prod (1)_n/(s_i)_n z0^-n
  MPReal sum(bits);
  for (long n = 1;; ++n) {
    for (const auto& s : spec.s()) c *= BigRational(n) / (s + n - 1);
    c *= zinv;
    BigRational poly = 0;
    for (std::size_t k = 0; k < spec.a().size(); ++k)
      poly += spec.a()[k] * pow_rational(BigRational(-n), static_cast<long>(k) - order);
    sum += MPReal(BigRational(c * poly), bits);
    // ratios of prod(1)_n/(s_i)_n z0^-n decrease toward 1/|z0|; |poly| <= sum |a_k|
    double q = zinv_abs;
    for (const auto& s : spec.s()) q *= (n + 1.0) / (s.get_d() + n);
    if (q >= 1 || n < 3) continue;
    MPReal next = abs(MPReal(c, bits)) * detail::from_double(q * coeff_sum, bits);
    MPReal tail = next / (1 - detail::from_double(q, bits));
    if (tail < target) return {sum, tail};
  }
}

struct AEstimate {
  MPComplex value;
  MPReal error;
  /// E(x)/x^(2m+1) at each sample point
  std::vector<MPComplex> samples;
  /// Neville estimates using the first 1, 2, ... samples
  std::vector<MPComplex> estimates;
};

/// A from E(x) = bilateral(x) - right(x) = (A + B x + ...) x^(2m+1), extrapolating
/// E(x)/x^(2m+1) polynomially to x = 0 over the given samples.
inline AEstimate a_constant_extrapolate(const SeriesSpec& spec, const std::vector<MPReal>& xs, int digits) {
  if (abs(spec.z0()) >= 1) throw Error(spec.name() + ": |z0| >= 1, use a_constant_direct");
  if (xs.empty()) throw Error("a_constant_extrapolate: need at least one sample point");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].sign() <= 0) throw Error("a_constant_extrapolate: sample points must be positive");
    if (i > 0 && !(xs[i] < xs[i - 1])) throw Error("a_constant_extrapolate: sample points must decrease");
  }
  const long order = spec.shape().order();
  const double lx = std::abs(std::log10(xs.back().to_double()));
  const int inner = digits + guard_digits + static_cast<int>(std::ceil(order * lx));
  const mpfr_prec_t bits = working_bits(inner);
  AEstimate out{MPComplex(bits), MPReal(bits), {}, {}};
  std::vector<MPReal> x;
  for (const auto& xi : xs) {
    MPReal v(bits);
    mpfr_set(v.get(), xi.get(), MPFR_RNDN);
    x.push_back(v);
    MPComplex e = bilateral_closed(spec, v, inner) - right_sum(spec, v, inner);
    out.samples.push_back(e / pow(v, order));
  }
  // Neville: p[i] holds the interpolant through samples i..j evaluated at 0
  std::vector<MPComplex> p = out.samples;
  out.estimates.push_back(p[0]);
  for (std::size_t j = 1; j < p.size(); ++j) {
    for (std::size_t i = j; i-- > 0;) {
      // P_{i..j}(0) = (x_i P_{i+1..j} - x_j P_{i..j-1}) / (x_i - x_j)
      p[i] = (x[i] * p[i + 1] - x[j] * p[i]) / (x[i] - x[j]);
    }
    out.estimates.push_back(p[0]);
  }
  out.value = out.estimates.back();
  const std::size_t n = out.estimates.size();
  out.error = n > 1 ? abs(out.estimates[n - 1] - out.estimates[n - 2]) : abs(out.value);
  return out;
}

/// First continued-fraction convergent h/k of v with k <= max_den and |v - h/k| <= tol.
inline std::optional<BigRational> recognize_rational(const MPReal& v, const BigInt& max_den, const MPReal& tol) {
  const mpfr_prec_t bits = std::max(v.precision(), tol.precision());
  BigInt h0 = 0, h1 = 1, k0 = 1, k1 = 0;  // h_{n-2}, h_{n-1}, k_{n-2}, k_{n-1}
  MPReal x = v;
  for (int iter = 0; iter < 10000; ++iter) {
    MPReal fl = floor(x);
    BigInt a;
    mpfr_get_z(a.get_mpz_t(), fl.get(), MPFR_RNDD);
    BigInt h = a * h1 + h0, k = a * k1 + k0;
    if (k > max_den) return std::nullopt;
    BigRational q = make_rational(h, k);
    if (abs(v - MPReal(q, bits)) <= tol) return q;
    MPReal frac = x - fl;
    if (frac.is_zero()) return std::nullopt;
    x = 1 / frac;
    h0 = h1, h1 = h, k0 = k1, k1 = k;
  }
  return std::nullopt;
}

inline std::optional<BigRational> recognize_rational(const MPReal& v, long max_den, const MPReal& tol) {
  return recognize_rational(v, BigInt(max_den), tol);
}

struct FourierFit {
  /// F(0) / V; equals 1 when F has the expected normalization
  MPComplex c0;
  std::vector<MPComplex> alpha;
  std::vector<MPComplex> beta;
};

/// Recovers alpha_k, beta_k numerically by matching Taylor coefficients at x = 0 up to
/// order 2m of e^{-i pi x} prefactor(x) right(x), which equals F(x) near 0 because the
/// left-hand sum starts at order 2m+1. Needs |z0| < 1 and t0.
inline FourierFit fit_fourier(const SeriesSpec& spec, int digits) {
  if (abs(spec.z0()) >= 1) throw Error(spec.name() + ": fit_fourier needs |z0| < 1");
  const long order = spec.shape().order();  // unknowns: 1, cos 2 pi k x, sin 2 pi k x
  const long half = spec.m() + 6;           // samples at j h, j = -half..half
  const int step_digits = 4;
  const int inner = digits + guard_digits + static_cast<int>(step_digits * (2 * half + 2));
  const mpfr_prec_t bits = working_bits(inner);
  const MPReal h = ten_to_minus(step_digits, bits);
  const MPReal pi = const_pi(bits);
  const long npts = 2 * half + 1;

  // samples of G(x) = e^{-i pi x} prefactor(x) right(x)
  std::vector<MPComplex> g;
  for (long j = -half; j <= half; ++j) {
    MPReal x = h * j;
    MPComplex r = detail::right_sum_unchecked(spec, x, inner);
    g.push_back(expi(-(pi * x)) * prefactor(spec.shape(), x, bits) * r);
  }
  // Taylor coefficients: solve the Vandermonde system in the scaled variable u = x/h
  std::vector<std::vector<MPReal>> vm(npts, std::vector<MPReal>(npts, MPReal(bits)));
  for (long i = 0; i < npts; ++i)
    for (long c = 0; c < npts; ++c) vm[i][c] = pow(MPReal(i - half, bits), c);
  auto solve = [&](std::vector<std::vector<MPReal>> m, std::vector<MPReal> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < n; ++r)
        if (abs(m[r][c]) > abs(m[piv][c])) piv = r;
      std::swap(m[c], m[piv]);
      std::swap(rhs[c], rhs[piv]);
      for (std::size_t r = c + 1; r < n; ++r) {
        MPReal f = m[r][c] / m[c][c];
        if (f.is_zero()) continue;
        for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        rhs[r] -= f * rhs[c];
      }
    }
    std::vector<MPReal> sol(n, MPReal(bits));
    for (std::size_t c = n; c-- > 0;) {
      MPReal acc = rhs[c];
      for (std::size_t k = c + 1; k < n; ++k) acc -= m[c][k] * sol[k];
      sol[c] = acc / m[c][c];
    }
    return sol;
  };
  std::vector<MPReal> gre, gim;
  for (auto& v : g) gre.push_back(v.re), gim.push_back(v.im);
  auto tre = solve(vm, gre), tim = solve(vm, gim);
  std::vector<MPComplex> taylor;
  for (long k = 0; k < order; ++k) {
    MPReal scale = pow(h, -k);
    taylor.push_back({tre[k] * scale, tim[k] * scale});
  }

  // basis Taylor coefficients up to x^(2m)
  std::vector<std::vector<MPReal>> bm(order, std::vector<MPReal>(order, MPReal(bits)));
  bm[0][0] = MPReal(1, bits);
  for (long k = 1; k <= spec.m(); ++k) {
    MPReal w = 2 * pi * k;
    MPReal wp(1, bits), fact(1, bits);
    for (long d = 0; d < order; ++d) {
      if (d > 0) wp *= w, fact *= d;
      MPReal coef = wp / fact;
      long r = d % 4;
      if (d % 2 == 0) bm[d][k] = r == 0 ? coef : -coef;                 // cos
      else bm[d][spec.m() + k] = r == 1 ? coef : -coef;                  // sin
    }
  }
  std::vector<MPReal> rre, rim;
  for (auto& t : taylor) rre.push_back(t.re), rim.push_back(t.im);
  auto cre = solve(bm, rre), cim = solve(bm, rim);

  MPComplex v = closed_form_value(spec, inner);
  FourierFit out{MPComplex(bits), {}, {}};
  // the constant basis coefficient is 1 + sum alpha_k
  out.c0 = MPComplex(cre[0], cim[0]) / v;
  for (long k = 1; k <= spec.m(); ++k) {
    out.alpha.push_back(-(MPComplex(cre[k], cim[k]) / v));
    out.beta.push_back(-(MPComplex(cre[spec.m() + k], cim[spec.m() + k]) / v));
    out.c0 -= out.alpha.back();
  }
  return out;
}

}  // namespace rama
