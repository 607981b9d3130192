#pragma once

// Recovering unknown polynomial coefficients a_0..a_m from the Zudilin congruence.
// Each nu gives one linear row
//
//   row(nu)_k = U_k(nu p) - (chi/p) p^m U_k(nu)   (mod p^(2m+1)),
//
// and the coefficient vector lies in the kernel of the resulting matrix over Z/p^e.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rama/congruence.hpp"
#include "rama/exact.hpp"
#include "rama/series.hpp"

namespace rama {

struct ModularSystem {
  std::int64_t p = 0;
  int e = 0;
  std::vector<long> nus;
  /// rows indexed by nu, columns by k = 0..m
  std::vector<std::vector<Residue>> matrix;

  PrimePowerModulus modulus() const { return PrimePowerModulus(p, e); }
  std::size_t rows() const { return matrix.size(); }
  std::size_t cols() const { return matrix.empty() ? 0 : matrix.front().size(); }
};

inline ModularSystem build_system(const SeriesTemplate& shape, std::int64_t p, const std::vector<long>& nus) {
  if (nus.empty()) throw Error("build_system: need at least one nu");
  for (long nu : nus)
    if (nu < 1) throw Error("build_system: every nu must be >= 1");
  if (auto adm = admissible(shape, p, CheckKind::zudilin); !adm) throw InadmissiblePrime(p, adm.reasons);
  ModularSystem sys;
  sys.p = p;
  sys.e = shape.order();
  sys.nus = nus;
  const PrimePowerModulus mod(p, sys.e);
  const Residue twist(BigInt(kronecker(shape.chi(), p)) * pow_int(BigInt(static_cast<long>(p)), shape.m()), mod);
  for (long nu : nus) {
    auto big = basis_sums_mod(shape, nu * p, mod);
    auto small = basis_sums_mod(shape, nu, mod);
    std::vector<Residue> row;
    for (std::size_t k = 0; k < big.size(); ++k) row.push_back(big[k] - twist * small[k]);
    sys.matrix.push_back(std::move(row));
  }
  return sys;
}

/// Solution module of A x = 0 over Z/p^e.
///
/// Elimination uses row and column operations with the pivot of least valuation,
/// so U A V = diag(p^d_0 u_0, ..., p^d_{r-1} u_{r-1}, 0, ...). The kernel is then
/// generated by p^(e - d_t) V[:, t] for t < rank and V[:, j] for j >= rank.
struct Kernel {
  std::int64_t p = 0;
  int e = 0;
  std::size_t rank = 0;
  /// d_t for each pivot, in elimination order
  std::vector<long> pivot_valuations;
  /// e - max d_t: the free basis spans the kernel modulo p^precision
  int precision = 0;
  /// columns V[:, j], j >= rank, reduced mod p^e
  std::vector<std::vector<BigInt>> free_basis;
  /// all module generators mod p^e (torsion ones first)
  std::vector<std::vector<BigInt>> generators;
  /// one line per pivot that costs precision
  std::vector<std::string> drops;

  std::size_t dimension() const { return free_basis.size(); }
  BigInt modulus_value() const { return pow_int(BigInt(static_cast<long>(p)), static_cast<unsigned long>(e)); }
};

inline Kernel solve_kernel(std::vector<std::vector<BigInt>> a, std::int64_t p, int e, std::size_t ncols) {
  if (a.empty() && ncols == 0) throw Error("solve_kernel: empty system");
  Kernel out;
  out.p = p;
  out.e = e;
  const BigInt M = pow_int(BigInt(static_cast<long>(p)), static_cast<unsigned long>(e));
  const PrimePowerModulus mod(p, e);
  const std::size_t rows = a.size(), cols = ncols;
  for (auto& row : a) {
    if (row.size() != cols) throw Error("solve_kernel: ragged matrix");
    for (auto& x : row) x = mod_floor(x, M);
  }
  std::vector<std::vector<BigInt>> v(cols, std::vector<BigInt>(cols, BigInt(0)));
  for (std::size_t i = 0; i < cols; ++i) v[i][i] = 1;

  std::size_t t = 0;
  for (; t < std::min(rows, cols); ++t) {
    long best = e;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        if (a[i][j] == 0) continue;
        long d = padic_valuation(a[i][j], p).value();
        if (d < best) best = d, bi = i, bj = j;
      }
    if (best >= e) break;
    std::swap(a[t], a[bi]);
    if (bj != t) {
      for (auto& row : a) std::swap(row[t], row[bj]);
      for (auto& row : v) std::swap(row[t], row[bj]);
    }
    BigInt ppow = pow_int(BigInt(static_cast<long>(p)), static_cast<unsigned long>(best));
    BigInt unit_inv = mod_inverse(a[t][t] / ppow, mod).value();
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == t || a[i][t] == 0) continue;
      BigInt f = mod_floor(a[i][t] / ppow * unit_inv, M);
      for (std::size_t j = t; j < cols; ++j) a[i][j] = mod_floor(a[i][j] - f * a[t][j], M);
    }
    for (std::size_t j = t + 1; j < cols; ++j) {
      if (a[t][j] == 0) continue;
      BigInt f = mod_floor(a[t][j] / ppow * unit_inv, M);
      for (std::size_t i = 0; i < rows; ++i) a[i][j] = mod_floor(a[i][j] - f * a[i][t], M);
      for (std::size_t i = 0; i < cols; ++i) v[i][j] = mod_floor(v[i][j] - f * v[i][t], M);
    }
    out.pivot_valuations.push_back(best);
    if (best > 0)
      out.drops.push_back("pivot " + std::to_string(t) + ": valuation " + std::to_string(best) + ", modulus p^" +
                          std::to_string(e) + " -> p^" + std::to_string(e - best));
  }
  out.rank = t;
  long dmax = 0;
  for (long d : out.pivot_valuations) dmax = std::max(dmax, d);
  out.precision = static_cast<int>(e - dmax);

  auto column = [&](std::size_t j, const BigInt& scale) {
    std::vector<BigInt> c(cols);
    for (std::size_t i = 0; i < cols; ++i) c[i] = mod_floor(v[i][j] * scale, M);
    return c;
  };
  for (std::size_t k = 0; k < out.rank; ++k) {
    if (out.pivot_valuations[k] == 0) continue;
    out.generators.push_back(
        column(k, pow_int(BigInt(static_cast<long>(p)), static_cast<unsigned long>(e - out.pivot_valuations[k]))));
  }
  for (std::size_t j = out.rank; j < cols; ++j) {
    out.free_basis.push_back(column(j, BigInt(1)));
    out.generators.push_back(out.free_basis.back());
  }
  return out;
}

inline Kernel solve_kernel(const ModularSystem& sys) {
  if (sys.matrix.empty()) throw Error("solve_kernel: empty system");
  std::vector<std::vector<BigInt>> a;
  for (const auto& row : sys.matrix) {
    std::vector<BigInt> r;
    for (const auto& x : row) r.push_back(x.value());
    a.push_back(std::move(r));
  }
  return solve_kernel(std::move(a), sys.p, sys.e, sys.cols());
}

struct Normalization {
  std::size_t index = 0;
  BigRational value = 1;
};

struct CoefficientRecovery {
  std::vector<BigRational> coefficients;
  ModularSystem system;
  Kernel kernel;
  /// zudilin_check of the recovered series at a prime other than p
  std::optional<CongruenceReport> verification;

  bool verified() const { return verification && verification->pass; }
};

/// Solves for a_0..a_m with a[index] pinned to value. Coordinates are balanced lifts
/// modulo p^precision, or rational reconstructions when a denominator bound is given.
inline CoefficientRecovery recover_coefficients(const SeriesTemplate& shape, std::int64_t p, const std::vector<long>& nus,
                                                Normalization norm = {}, std::optional<BigInt> den_bound = std::nullopt) {
  CoefficientRecovery out;
  out.system = build_system(shape, p, nus);
  out.kernel = solve_kernel(out.system);
  const Kernel& ker = out.kernel;
  if (ker.dimension() == 0)
    throw Error("inconsistent system: only the zero solution survives; evidence against the template");
  if (ker.dimension() != 1) throw Error("insufficient constraints: add ν values or increase p");
  if (norm.index >= out.system.cols()) throw Error("normalization index out of range");
  if (ker.precision < 1) throw Error("no small solution at this modulus");

  const PrimePowerModulus mod(p, ker.precision);
  const auto& g = ker.free_basis.front();
  Residue pivot(g[norm.index], mod);
  if (!pivot.is_unit())
    throw Error("normalization coordinate a_" + std::to_string(norm.index) + " is not a unit at this modulus");
  Residue scale = reduce_mod(norm.value, mod) * pivot.inverse();
  const BigInt M = mod.value();
  for (std::size_t k = 0; k < g.size(); ++k) {
    Residue x = Residue(g[k], mod) * scale;
    if (k == norm.index) {
      out.coefficients.push_back(norm.value);
      continue;
    }
    if (den_bound) {
      BigInt num_bound = (M - 1) / (2 * *den_bound);
      auto q = rational_reconstruct(x.value(), M, num_bound, *den_bound);
      if (!q) throw Error("no small solution at this modulus");
      out.coefficients.push_back(*q);
    } else {
      out.coefficients.emplace_back(balanced_lift(x));
    }
  }

  SeriesSpec spec(shape, out.coefficients);
  for (std::int64_t q = next_prime(p); q < p + 10000; q = next_prime(q)) {
    if (!admissible(spec, q, CheckKind::zudilin)) continue;
    out.verification = zudilin_check(spec, q, 1);
    break;
  }
  return out;
}

}  // namespace rama
