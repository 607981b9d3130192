#pragma once

// Supercongruence checks for partial sums S(N) of a rational Ramanujan-type series:
//
//   Zudilin:  S(nu p) = (chi/p) p^m S(nu)                                   (mod p^(2m+1))
//   Zhao:     S(nu p) = (chi/p) p^m S(nu) + r T(nu) L_p(chi,m+1) nu^(2m+1) p^(2m+1)  (mod p^(2m+2))
//   Mate:     D(nu) = (S(nu p) - (chi/p) p^m S(nu)) / (T(nu) nu^(2m+1) p^(2m+1))
//             expands as A_p + B_p nu p + C_p nu^2 p^2 + ..., so its j-th forward
//             difference in nu is divisible by p^j.
//
// Failures are data: every check returns a report instead of throwing, except when
// the prime is inadmissible or the requested quantity does not exist.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <future>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "rama/bernoulli.hpp"
#include "rama/exact.hpp"
#include "rama/series.hpp"

namespace rama {

enum class CheckKind { zudilin, zhao, mate };

inline std::string_view to_string(CheckKind k) {
  switch (k) {
    case CheckKind::zudilin: return "zudilin";
    case CheckKind::zhao: return "zhao";
    case CheckKind::mate: return "mate";
  }
  return "?";
}

struct CongruenceReport {
  std::string series;
  std::int64_t p = 0;
  long nu = 0;
  CheckKind kind = CheckKind::zudilin;
  long required_valuation = 0;
  Valuation achieved_valuation = Valuation::infinity();
  bool pass = false;
  /// Tested difference divided by p^required, reduced mod p (present when pass).
  std::optional<Residue> residual;
  std::vector<std::string> notes;
  double timing_ms = 0;
};

struct Admissibility {
  bool ok = true;
  std::vector<std::string> reasons;
  explicit operator bool() const { return ok; }
};

namespace detail {

inline Admissibility screen(const SeriesTemplate& shape, const std::vector<BigRational>* a, std::int64_t p,
                            CheckKind kind) {
  Admissibility out;
  auto fail = [&](std::string why) {
    out.ok = false;
    out.reasons.push_back(std::move(why));
  };
  if (!is_prime(p)) {
    fail("p = " + std::to_string(p) + " is not prime");
    return out;
  }
  if (p == 2) fail("p = 2 is even");
  for (auto& why : stream_obstructions(shape, p)) fail(std::move(why));
  if (a) {
    const BigInt pp(static_cast<long>(p));
    for (std::size_t k = 0; k < a->size(); ++k)
      if (mpz_divisible_p((*a)[k].get_den().get_mpz_t(), pp.get_mpz_t()))
        fail("p divides denominator of a_" + std::to_string(k) + " = " + to_string((*a)[k]));
  }
  if (shape.chi() % p == 0) fail("p divides chi = " + std::to_string(shape.chi()));
  if (kind == CheckKind::zhao && p < shape.m() + 3) fail("zhao check needs p >= m+3 = " + std::to_string(shape.m() + 3));
  return out;
}

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

inline BigInt prime_power(std::int64_t p, long e) { return pow_int(BigInt(static_cast<long>(p)), static_cast<unsigned long>(e)); }

inline void require_sums(std::span<const BigRational> sums, long N) {
  if (static_cast<long>(sums.size()) <= N)
    throw std::invalid_argument("partial-sum table too short: need S(" + std::to_string(N) + ")");
}

/// Residual = diff / p^req reduced mod p, when diff has valuation >= req.
inline std::optional<Residue> residual_of(const BigRational& diff, std::int64_t p, long req) {
  if (!padic_valuation(diff, p).at_least(req)) return std::nullopt;
  return reduce_mod(diff / BigRational(prime_power(p, req)), PrimePowerModulus(p, 1));
}

}  // namespace detail

inline Admissibility admissible(const SeriesSpec& spec, std::int64_t p, CheckKind kind) {
  return detail::screen(spec.shape(), &spec.a(), p, kind);
}

inline Admissibility admissible(const SeriesTemplate& shape, std::int64_t p, CheckKind kind) {
  return detail::screen(shape, nullptr, p, kind);
}

/// S(nu p) - (chi/p) p^m S(nu), read from a table holding at least S(0..nu p).
inline BigRational zudilin_difference(const SeriesSpec& spec, std::span<const BigRational> sums, std::int64_t p,
                                      long nu) {
  detail::require_sums(sums, nu * p);
  const int sign = kronecker(spec.chi(), p);
  return sums[static_cast<std::size_t>(nu * p)] -
         BigRational(detail::prime_power(p, spec.m()) * sign) * sums[static_cast<std::size_t>(nu)];
}

inline CongruenceReport zudilin_check(const SeriesSpec& spec, std::int64_t p, long nu, std::span<const BigRational> sums) {
  auto start = std::chrono::steady_clock::now();
  if (nu < 1) throw Error("zudilin_check: nu must be >= 1");
  if (auto adm = admissible(spec, p, CheckKind::zudilin); !adm) throw InadmissiblePrime(p, adm.reasons);
  CongruenceReport rep;
  rep.series = spec.name();
  rep.p = p;
  rep.nu = nu;
  rep.kind = CheckKind::zudilin;
  rep.required_valuation = spec.shape().order();
  BigRational diff = zudilin_difference(spec, sums, p, nu);
  rep.achieved_valuation = padic_valuation(diff, p);
  rep.pass = rep.achieved_valuation.at_least(rep.required_valuation);
  rep.residual = detail::residual_of(diff, p, rep.required_valuation);
  if (spec.chi() == 1) rep.notes.push_back("trivial character: difference is S(nu p) - p^m S(nu)");
  if (!rep.pass) rep.notes.push_back("exceptional prime: congruence fails at the required order");
  rep.timing_ms = detail::elapsed_ms(start);
  return rep;
}

inline CongruenceReport zudilin_check(const SeriesSpec& spec, std::int64_t p, long nu) {
  auto sums = partial_sums(spec, nu * p);
  return zudilin_check(spec, p, nu, sums);
}

struct ScanResult {
  /// Sorted by p, then nu.
  std::vector<CongruenceReport> reports;
  /// Inadmissible primes with the failed rules.
  std::vector<std::pair<std::int64_t, std::vector<std::string>>> skipped;
  /// (p, nu) pairs whose congruence failed.
  std::vector<std::pair<std::int64_t, long>> exceptional;

  bool all_pass() const { return exceptional.empty(); }
};

/// Checks every admissible prime in [pmin, pmax] against every nu. Primes run in
/// parallel; the merged output order does not depend on scheduling.
inline ScanResult zudilin_scan(const SeriesSpec& spec, std::int64_t pmin, std::int64_t pmax, std::vector<long> nus,
                               unsigned threads = 0) {
  ScanResult out;
  std::sort(nus.begin(), nus.end());
  nus.erase(std::unique(nus.begin(), nus.end()), nus.end());
  auto primes = primes_in(pmin, pmax);
  std::vector<std::int64_t> usable;
  for (auto p : primes) {
    auto adm = admissible(spec, p, CheckKind::zudilin);
    if (adm)
      usable.push_back(p);
    else
      out.skipped.emplace_back(p, adm.reasons);
  }
  if (usable.empty() || nus.empty()) return out;
  const auto sums = partial_sums(spec, nus.back() * usable.back());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  std::vector<std::vector<CongruenceReport>> per_prime(usable.size());
  std::vector<std::future<void>> jobs;
  const std::size_t stride = threads;
  for (std::size_t w = 0; w < std::min<std::size_t>(stride, usable.size()); ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < usable.size(); i += stride)
        for (long nu : nus) per_prime[i].push_back(zudilin_check(spec, usable[i], nu, sums));
    }));
  }
  for (auto& j : jobs) j.get();
  for (auto& reps : per_prime)
    for (auto& r : reps) {
      if (!r.pass) out.exceptional.emplace_back(r.p, r.nu);
      out.reports.push_back(std::move(r));
    }
  return out;
}

// ---------------------------------------------------------------------------
// p-adic mate

/// Exact D(nu); throws when the quotient is not p-integral.
inline BigRational mate_quotient(const SeriesSpec& spec, std::int64_t p, long nu, std::span<const BigRational> sums) {
  if (nu < 1) throw Error("mate quotient: nu must be >= 1");
  if (nu % p == 0) throw Error("mate quotient: p must not divide nu");
  if (auto adm = admissible(spec, p, CheckKind::zudilin); !adm) throw InadmissiblePrime(p, adm.reasons);
  const long order = spec.shape().order();
  BigRational diff = zudilin_difference(spec, sums, p, nu);
  if (diff == 0) return BigRational(0);
  BigRational scale = t_factor(spec.shape(), nu) * BigRational(pow_int(BigInt(nu), static_cast<unsigned long>(order))) *
                      BigRational(detail::prime_power(p, order));
  BigRational d = diff / scale;
  if (padic_valuation(d, p).value() < 0)
    throw Error("mate identity violated at required order (p = " + std::to_string(p) + ", nu = " +
                std::to_string(nu) + ", achieved valuation " + padic_valuation(diff, p).to_string() + ")");
  return d;
}

inline Residue d_value(const SeriesSpec& spec, std::int64_t p, long nu, int depth, std::span<const BigRational> sums) {
  return reduce_mod(mate_quotient(spec, p, nu, sums), PrimePowerModulus(p, depth));
}

inline Residue d_value(const SeriesSpec& spec, std::int64_t p, long nu, int depth) {
  auto sums = partial_sums(spec, nu * p);
  return d_value(spec, p, nu, depth, sums);
}

struct MateExpansion {
  std::int64_t p = 0;
  int depth = 0;
  long nu_max = 0;
  /// D(1..nu_max), exact.
  std::vector<BigRational> d_exact;
  /// D(1..nu_max) mod p^depth (empty when depth = 0).
  std::vector<Residue> d_values;
  /// differences[j][i] = j-th forward difference at nu = 1 + i.
  std::vector<std::vector<BigRational>> differences;
  /// Residues of differences mod p^depth, same shape (empty when depth = 0).
  std::vector<std::vector<Residue>> difference_residues;
  /// valuations[j] = v_p of the j-th difference at nu = 1.
  std::vector<Valuation> valuations;

  /// The expansion predicts v_p(j-th difference) >= j.
  bool prediction_holds(std::size_t j) const { return valuations.at(j).at_least(static_cast<long>(j)); }

  /// Gating verdict: orders 1..min(depth, 2). Higher orders are informational.
  bool pass() const {
    for (std::size_t j = 1; j <= std::min<std::size_t>(static_cast<std::size_t>(depth), 2) && j < valuations.size(); ++j)
      if (!prediction_holds(j)) return false;
    return true;
  }
};

inline MateExpansion mate_expansion_check(const SeriesSpec& spec, std::int64_t p, long nu_max, int depth) {
  MateExpansion out;
  out.p = p;
  out.depth = depth;
  out.nu_max = nu_max;
  if (depth < 0) throw Error("mate expansion: depth must be >= 0");
  if (depth == 0) return out;
  if (nu_max < depth + 1) throw Error("mate expansion: need nu_max >= depth + 1");
  if (nu_max >= p) throw Error("mate expansion: nu_max must stay below p");
  auto sums = partial_sums(spec, nu_max * p);
  const PrimePowerModulus mod(p, depth);
  for (long nu = 1; nu <= nu_max; ++nu) out.d_exact.push_back(mate_quotient(spec, p, nu, sums));
  out.differences.push_back(out.d_exact);
  while (out.differences.back().size() > 1) {
    const auto& prev = out.differences.back();
    std::vector<BigRational> next;
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) next.push_back(prev[i + 1] - prev[i]);
    out.differences.push_back(std::move(next));
  }
  for (const auto& row : out.differences) {
    std::vector<Residue> rr;
    for (const auto& v : row) rr.push_back(reduce_mod(v, mod));
    out.difference_residues.push_back(std::move(rr));
    out.valuations.push_back(padic_valuation(row.front(), p));
  }
  out.d_values = out.difference_residues.front();
  return out;
}

// ---------------------------------------------------------------------------
// Zhao

inline CongruenceReport zhao_check(const SeriesSpec& spec, std::int64_t p, long nu, const BigRational& r,
                                   std::span<const BigRational> sums) {
  auto start = std::chrono::steady_clock::now();
  if (nu < 1) throw Error("zhao_check: nu must be >= 1");
  if (auto adm = admissible(spec, p, CheckKind::zhao); !adm) throw InadmissiblePrime(p, adm.reasons);
  if (nu % p == 0) throw Error("zhao_check: p must not divide nu");
  if (padic_valuation(r.get_den(), p).value() > 0)
    throw InadmissiblePrime(p, {"p divides the denominator of r = " + to_string(r)});
  const long order = spec.shape().order();
  Residue lp = lp_residue(spec.chi(), spec.m() + 1, p);
  BigRational diff = zudilin_difference(spec, sums, p, nu);
  BigRational correction = r * t_factor(spec.shape(), nu) *
                           BigRational(pow_int(BigInt(nu), static_cast<unsigned long>(order))) *
                           BigRational(lp.value() * detail::prime_power(p, order));
  BigRational total = diff - correction;

  CongruenceReport rep;
  rep.series = spec.name();
  rep.p = p;
  rep.nu = nu;
  rep.kind = CheckKind::zhao;
  rep.required_valuation = order + 1;
  rep.achieved_valuation = padic_valuation(total, p);
  rep.pass = rep.achieved_valuation.at_least(rep.required_valuation);
  rep.residual = detail::residual_of(total, p, rep.required_valuation);
  rep.notes.push_back("L_p(" + std::to_string(spec.chi()) + "," + std::to_string(spec.m() + 1) +
                      ") = " + lp.value().get_str() + " (mod " + std::to_string(p) + ")");
  rep.notes.push_back("correction term includes the factor nu^(2m+1)");
  if (!rep.pass) rep.notes.push_back("congruence fails for r = " + to_string(r));
  rep.timing_ms = detail::elapsed_ms(start);
  return rep;
}

inline CongruenceReport zhao_check(const SeriesSpec& spec, std::int64_t p, long nu, const BigRational& r) {
  auto sums = partial_sums(spec, nu * p);
  return zhao_check(spec, p, nu, r, sums);
}

// ---------------------------------------------------------------------------
// Recovery of r

struct ReconstructionBounds {
  BigInt num;
  BigInt den;
};

struct PrimeContribution {
  std::int64_t p = 0;
  std::optional<Residue> d_value;
  std::optional<Residue> lp;
  std::optional<Residue> r_p;
  bool used = false;
  std::string note;
};

struct RRecovery {
  std::optional<BigRational> r;
  std::vector<PrimeContribution> primes;
  ModularValue combined{BigInt(0), BigInt(1)};
  std::optional<CongruenceReport> holdout;

  bool verified() const { return r && holdout && holdout->pass; }
};

/// r_p = D(nu) / L_p(chi, m+1) mod p for each usable prime, combined by CRT and
/// reconstructed. Without explicit bounds the reconstruction looks for an integer
/// in (-M/2, M/2]. The candidate is then checked with zhao_check at a held-out prime.
inline RRecovery recover_r(const SeriesSpec& spec, const std::vector<std::int64_t>& primes, long nu = 1,
                           std::optional<ReconstructionBounds> bounds = std::nullopt) {
  RRecovery out;
  if (primes.empty()) throw Error("recover_r: need at least one prime");
  const std::int64_t pmax = *std::max_element(primes.begin(), primes.end());
  const auto sums = partial_sums(spec, nu * pmax);
  std::vector<std::pair<BigInt, BigInt>> pairs;
  for (auto p : primes) {
    if (auto adm = admissible(spec, p, CheckKind::zhao); !adm) throw InadmissiblePrime(p, adm.reasons);
    PrimeContribution c;
    c.p = p;
    c.lp = lp_residue(spec.chi(), spec.m() + 1, p);
    if (c.lp->is_zero()) {
      c.note = "skipped: L_p residue is 0 mod p";
      out.primes.push_back(std::move(c));
      continue;
    }
    try {
      c.d_value = d_value(spec, p, nu, 1, sums);
    } catch (const Error& e) {
      c.note = std::string("skipped: ") + e.what();
      out.primes.push_back(std::move(c));
      continue;
    }
    c.r_p = *c.d_value * c.lp->inverse();
    c.used = true;
    pairs.emplace_back(c.r_p->value(), BigInt(static_cast<long>(p)));
    out.primes.push_back(std::move(c));
  }
  if (pairs.empty()) return out;
  out.combined = crt(pairs);
  ReconstructionBounds b = bounds ? *bounds : ReconstructionBounds{(out.combined.modulus - 1) / 2, BigInt(1)};
  out.r = rational_reconstruct(out.combined.value, out.combined.modulus, b.num, b.den);
  if (!out.r) return out;

  // held-out prime: first admissible prime past the inputs with a usable L_p residue
  for (std::int64_t q = next_prime(pmax); q < pmax + 10000; q = next_prime(q)) {
    if (std::find(primes.begin(), primes.end(), q) != primes.end()) continue;
    if (!admissible(spec, q, CheckKind::zhao)) continue;
    if (padic_valuation(out.r->get_den(), q).value() > 0) continue;
    if (lp_residue(spec.chi(), spec.m() + 1, q).is_zero()) continue;
    out.holdout = zhao_check(spec, q, nu, *out.r);
    break;
  }
  return out;
}

}  // namespace rama
