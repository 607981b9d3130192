#pragma once

// Shared helpers and independent oracles for the test suites.

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "rama/rama.hpp"

namespace rama {

inline void PrintTo(const MPReal& x, std::ostream* os) { *os << x.to_string(25); }
inline void PrintTo(const MPComplex& z, std::ostream* os) { *os << z.re.to_string(25) << " + " << z.im.to_string(25) << "i"; }

}  // namespace rama

namespace rama::testing {

inline BigRational Q(const std::string& text) { return parse_rational(text); }

inline std::vector<BigRational> Qs(std::initializer_list<const char*> items) {
  std::vector<BigRational> out;
  for (auto* t : items) out.push_back(Q(t));
  return out;
}

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> cat = builtin_catalog();
  return cat;
}

inline const SeriesSpec& series(const std::string& name) { return find_entry(catalog(), name).spec; }

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20260415);
  return gen;
}

inline std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng());
}

/// (s)_n as a product, from scratch.
inline BigRational pochhammer(const BigRational& s, long n) {
  BigRational r = 1;
  for (long i = 0; i < n; ++i) r *= s + i;
  return r;
}

/// R(n) from the definition: Pochhammer products, Horner-free polynomial, explicit power.
inline BigRational oracle_term(const SeriesSpec& spec, long n) {
  BigRational r = 1;
  for (const auto& s : spec.s()) r *= pochhammer(s, n) / pochhammer(BigRational(1), n);
  BigRational poly = 0;
  for (std::size_t k = 0; k < spec.a().size(); ++k) {
    BigRational nk = 1;
    for (std::size_t j = 0; j < k; ++j) nk *= n;
    poly += spec.a()[k] * nk;
  }
  BigRational zn = 1;
  for (long i = 0; i < n; ++i) zn *= spec.z0();
  return r * poly * zn;
}

inline BigRational oracle_partial_sum(const SeriesSpec& spec, long N) {
  BigRational acc = 0;
  for (long n = 0; n < N; ++n) acc += oracle_term(spec, n);
  return acc;
}

/// v_p by repeated division, no library valuation involved.
inline long naive_valuation(BigInt n, std::int64_t p) {
  if (n == 0) return 1L << 30;
  long v = 0;
  while (n % p == 0) n /= p, ++v;
  return v;
}

inline long naive_valuation(const BigRational& q, std::int64_t p) {
  if (q == 0) return 1L << 30;
  return naive_valuation(q.get_num(), p) - naive_valuation(q.get_den(), p);
}

}  // namespace rama::testing
