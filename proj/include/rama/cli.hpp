#pragma once

// Command-line front end. cli_main is callable from tests; tools/rama_cli.cpp wraps it.
//
// Exit codes: 0 everything passed, 1 a check or recovery failed, 2 usage or
// configuration error.

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rama/catalog.hpp"
#include "rama/congruence.hpp"
#include "rama/numeric.hpp"
#include "rama/solver.hpp"

namespace rama {

enum ExitCode : int { exit_pass = 0, exit_fail = 1, exit_usage = 2 };

class UsageError : public Error {
 public:
  using Error::Error;
};

namespace cli {

struct Options {
  std::string series;
  std::string tmpl;
  std::optional<long> p;
  long pmin = 3;
  long pmax = 50;
  std::vector<long> nus;
  std::string r;
  std::vector<long> primes;
  std::string normalize = "0=1";
  int prec = default_digits;
  int depth = 2;
  bool json = false;
  std::optional<std::string> catalog;
  long chi = 1;
  long s = 0;
  std::string value;
  long max_den = 100000;
  std::string tol;
};

inline const CatalogEntry& need_series(const std::vector<CatalogEntry>& cat, const std::string& name) {
  if (name.empty()) throw UsageError("--series is required");
  return find_entry(cat, name);
}

inline std::vector<long> nus_or(const Options& o, std::vector<long> fallback) { return o.nus.empty() ? fallback : o.nus; }

inline std::string report_line(const CongruenceReport& r) {
  std::ostringstream s;
  s << r.series << " " << to_string(r.kind) << " p=" << r.p << " nu=" << r.nu << " required=" << r.required_valuation
    << " achieved=" << r.achieved_valuation.to_string() << " " << (r.pass ? "PASS" : "FAIL");
  return s.str();
}

inline void emit_reports(const std::vector<CongruenceReport>& reps, const Options& o, std::ostream& out) {
  for (const auto& r : reps) {
    if (o.json)
      out << to_json(r).dump() << "\n";
    else
      out << report_line(r) << "\n";
  }
}

inline std::string vector_text(const std::vector<BigRational>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + ")";
}

inline int check_zudilin(const std::vector<CatalogEntry>& cat, const Options& o, std::ostream& out, std::ostream& err) {
  const auto& e = need_series(cat, o.series);
  auto nus = nus_or(o, {1});
  ScanResult scan = o.p ? zudilin_scan(e.spec, *o.p, *o.p, nus) : zudilin_scan(e.spec, o.pmin, o.pmax, nus);
  if (o.p && scan.reports.empty()) {
    auto adm = admissible(e.spec, *o.p, CheckKind::zudilin);
    throw InadmissiblePrime(*o.p, adm.reasons.empty() ? std::vector<std::string>{"p is not prime"} : adm.reasons);
  }
  for (const auto& [p, why] : scan.skipped) {
    err << "skipped p=" << p << ":";
    for (const auto& w : why) err << " " << w << ";";
    err << "\n";
  }
  emit_reports(scan.reports, o, out);
  if (!o.json)
    for (const auto& [p, nu] : scan.exceptional) out << "exceptional prime: p=" << p << " nu=" << nu << "\n";
  return scan.all_pass() ? exit_pass : exit_fail;
}

inline int check_zhao(const std::vector<CatalogEntry>& cat, const Options& o, std::ostream& out) {
  const auto& e = need_series(cat, o.series);
  if (o.r.empty()) throw UsageError("--r is required for check zhao");
  BigRational r = parse_rational(o.r);
  std::vector<long> primes = o.primes;
  if (o.p) primes.push_back(*o.p);
  if (primes.empty()) throw UsageError("give --p or --primes");
  std::vector<CongruenceReport> reps;
  for (long p : primes)
    for (long nu : nus_or(o, {1})) reps.push_back(zhao_check(e.spec, p, nu, r));
  emit_reports(reps, o, out);
  return std::all_of(reps.begin(), reps.end(), [](auto& x) { return x.pass; }) ? exit_pass : exit_fail;
}

inline int check_mate(const std::vector<CatalogEntry>& cat, const Options& o, std::ostream& out) {
  const auto& e = need_series(cat, o.series);
  if (!o.p) throw UsageError("--p is required for check mate");
  long nu_max = o.nus.empty() ? o.depth + 1 : *std::max_element(o.nus.begin(), o.nus.end());
  MateExpansion mx = mate_expansion_check(e.spec, *o.p, nu_max, o.depth);
  std::vector<CongruenceReport> reps;
  for (std::size_t j = 1; j < mx.valuations.size(); ++j) {
    CongruenceReport r;
    r.series = e.name();
    r.p = *o.p;
    r.nu = nu_max;
    r.kind = CheckKind::mate;
    r.required_valuation = static_cast<long>(j);
    r.achieved_valuation = mx.valuations[j];
    r.pass = mx.prediction_holds(j);
    r.residual = detail::residual_of(mx.differences[j].front(), *o.p, r.required_valuation);
    r.notes.push_back("forward difference of order " + std::to_string(j) + " of D at nu = 1");
    r.notes.push_back(j <= std::min<std::size_t>(static_cast<std::size_t>(o.depth), 2) ? "gating" : "informational");
    reps.push_back(std::move(r));
  }
  emit_reports(reps, o, out);
  if (!o.json) {
    out << "D(1.." << nu_max << ") mod p^" << o.depth << ":";
    for (const auto& d : mx.d_values) out << " " << d.value();
    out << "\n";
  }
  return mx.pass() ? exit_pass : exit_fail;
}

inline Normalization parse_normalization(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos) throw UsageError("--normalize expects k=v");
  try {
    return {static_cast<std::size_t>(std::stoul(text.substr(0, eq))), parse_rational(text.substr(eq + 1))};
  } catch (const std::exception&) {
    throw UsageError("--normalize expects k=v, got '" + text + "'");
  }
}

inline int recover_coeffs(const std::vector<CatalogEntry>& cat, const Options& o, std::ostream& out) {
  const std::string& name = o.tmpl.empty() ? o.series : o.tmpl;
  if (name.empty()) throw UsageError("--template is required");
  if (!o.p) throw UsageError("--p is required");
  const auto& e = find_entry(cat, name);
  auto rec = recover_coefficients(e.shape(), *o.p, nus_or(o, {1, 2}), parse_normalization(o.normalize));
  if (o.json) {
    json j;
    j["template"] = name;
    j["p"] = *o.p;
    j["nu"] = rec.system.nus;
    j["coefficients"] = detail::rationals_to_json(rec.coefficients);
    j["precision"] = rec.kernel.precision;
    j["rank"] = rec.kernel.rank;
    j["drops"] = rec.kernel.drops;
    j["verification"] = rec.verification ? to_json(*rec.verification) : json(nullptr);
    out << j.dump() << "\n";
  } else {
    out << vector_text(rec.coefficients) << "\n";
    for (const auto& d : rec.kernel.drops) out << "  " << d << "\n";
    if (rec.verification) out << "  held-out: " << report_line(*rec.verification) << "\n";
  }
  return rec.verified() ? exit_pass : exit_fail;
}

inline int recover_r_cmd(const std::vector<CatalogEntry>& cat, const Options& o, std::ostream& out) {
  const auto& e = need_series(cat, o.series);
  if (o.primes.empty()) throw UsageError("--primes is required");
  long nu = o.nus.empty() ? 1 : o.nus.front();
  RRecovery rec = recover_r(e.spec, std::vector<std::int64_t>(o.primes.begin(), o.primes.end()), nu);
  if (o.json) {
    json j;
    j["series"] = e.name();
    j["r"] = rec.r ? json(to_string(*rec.r)) : json(nullptr);
    json table = json::array();
    for (const auto& c : rec.primes)
      table.push_back({{"p", c.p},
                       {"d", c.d_value ? json(c.d_value->value().get_str()) : json(nullptr)},
                       {"lp", c.lp ? json(c.lp->value().get_str()) : json(nullptr)},
                       {"r_p", c.r_p ? json(c.r_p->value().get_str()) : json(nullptr)},
                       {"used", c.used},
                       {"note", c.note}});
    j["primes"] = table;
    j["holdout"] = rec.holdout ? to_json(*rec.holdout) : json(nullptr);
    out << j.dump() << "\n";
  } else {
    out << (rec.r ? to_string(*rec.r) : std::string("none")) << "\n";
    for (const auto& c : rec.primes)
      out << "  p=" << c.p << (c.used ? " r_p=" + c.r_p->value().get_str() : " " + c.note) << "\n";
    if (rec.holdout) out << "  held-out: " << report_line(*rec.holdout) << "\n";
  }
  return rec.verified() ? exit_pass : exit_fail;
}

inline int numeric_cmd(const std::string& what, const std::vector<CatalogEntry>& cat, const Options& o,
                       std::ostream& out) {
  const int d = o.prec;
  const mpfr_prec_t bits = working_bits(d);
  json j;
  if (what == "value") {
    const auto& e = need_series(cat, o.series);
    auto v = value_estimate(e.spec, d);
    j = {{"series", e.name()}, {"value", v.value.to_string(d)}, {"error_bound", v.error_bound.to_string(6)}};
    if (e.spec.t0()) j["closed_form"] = closed_form_value(e.spec, d).re.to_string(d);
  } else if (what == "a") {
    const auto& e = need_series(cat, o.series);
    MPComplex a(bits);
    MPReal error(bits);
    if (abs(e.spec.z0()) > 1) {
      auto est = a_constant_direct(e.spec, d);
      a = MPComplex(est.value);
      error = est.error_bound;
    } else {
      auto est = a_constant_extrapolate(e.spec, {MPReal("1e-3", bits), MPReal("1e-4", bits), MPReal("1e-5", bits)}, d);
      a = est.value;
      error = est.error;
    }
    MPReal l = l_value(e.spec.chi(), e.spec.m() + 1, d).value;
    MPReal ratio = a.re / l;
    MPReal tol = max(error / abs(l) * 10, ten_to_minus(d / 2, bits));
    auto r = recognize_rational(ratio, o.max_den, tol);
    j = {{"series", e.name()},
         {"A_re", a.re.to_string(d)},
         {"A_im", a.im.to_string(8)},
         {"error", error.to_string(4)},
         {"A_over_L", ratio.to_string(d)},
         {"r", r ? json(to_string(*r)) : json(nullptr)}};
  } else if (what == "lvalue") {
    if (o.s == 0) throw UsageError("--s is required");
    auto v = l_value(o.chi, o.s, d);
    j = {{"chi", o.chi}, {"s", o.s}, {"value", v.value.to_string(d)}, {"error_bound", v.error_bound.to_string(4)}};
  } else if (what == "recognize") {
    if (o.value.empty()) throw UsageError("--value is required");
    MPReal v(o.value, bits);
    MPReal tol = o.tol.empty() ? ten_to_minus(d / 2, bits) : MPReal(o.tol, bits);
    auto r = recognize_rational(v, o.max_den, tol);
    j = {{"value", o.value}, {"r", r ? json(to_string(*r)) : json(nullptr)}};
    if (o.json)
      out << j.dump() << "\n";
    else
      out << (r ? to_string(*r) : std::string("none")) << "\n";
    return r ? exit_pass : exit_fail;
  }
  if (o.json) {
    out << j.dump() << "\n";
  } else {
    for (auto it = j.begin(); it != j.end(); ++it)
      out << it.key() << ": " << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump()) << "\n";
  }
  return exit_pass;
}

}  // namespace cli

/// args excludes the program name.
inline int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Supercongruence and Ramanujan-type series toolkit", "rama"};
  app.require_subcommand(1);
  cli::Options o;
  std::string nu_text, primes_text;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--series", o.series, "catalog series name");
    c->add_option("--catalog", o.catalog, "catalog JSON file (overrides $RAMA_CATALOG)");
    c->add_flag("--json", o.json, "emit JSON records");
  };
  auto add_nu = [&](CLI::App* c) { c->add_option("--nu", nu_text, "comma-separated nu values"); };
  std::string action;

  auto* catalog = app.add_subcommand("catalog", "list or show catalog entries");
  catalog->add_option("action", action, "list | show")->required()->check(CLI::IsMember({"list", "show"}));
  add_common(catalog);

  auto* check = app.add_subcommand("check", "run supercongruence checks");
  check->add_option("kind", action, "zudilin | zhao | mate")->required()->check(CLI::IsMember({"zudilin", "zhao", "mate"}));
  add_common(check);
  add_nu(check);
  check->add_option("--p", o.p, "single prime");
  check->add_option("--pmin", o.pmin, "scan lower bound");
  check->add_option("--pmax", o.pmax, "scan upper bound");
  check->add_option("--primes", primes_text, "comma-separated primes");
  check->add_option("--r", o.r, "rational r for the zhao check");
  check->add_option("--depth", o.depth, "mate expansion depth");

  auto* recover = app.add_subcommand("recover", "recover coefficients or r");
  recover->add_option("what", action, "coeffs | r")->required()->check(CLI::IsMember({"coeffs", "r"}));
  add_common(recover);
  add_nu(recover);
  recover->add_option("--template", o.tmpl, "catalog entry whose shape is used");
  recover->add_option("--p", o.p, "working prime");
  recover->add_option("--primes", primes_text, "comma-separated primes");
  recover->add_option("--normalize", o.normalize, "pinned coordinate k=v");

  auto* numeric = app.add_subcommand("numeric", "multiprecision estimates");
  numeric->add_option("what", action, "value | a | lvalue | recognize")
      ->required()
      ->check(CLI::IsMember({"value", "a", "lvalue", "recognize"}));
  add_common(numeric);
  numeric->add_option("--prec", o.prec, "decimal digits");
  numeric->add_option("--chi", o.chi, "discriminant");
  numeric->add_option("--s", o.s, "integer argument");
  numeric->add_option("--value", o.value, "decimal to recognize");
  numeric->add_option("--max-den", o.max_den, "largest denominator");
  numeric->add_option("--tol", o.tol, "tolerance");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_pass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return exit_usage;
  }

  auto parse_list = [](const std::string& text, const char* flag) {
    std::vector<long> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stol(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw UsageError(std::string(flag) + ": malformed integer '" + item + "'");
      }
    }
    return v;
  };

  try {
    o.nus = parse_list(nu_text, "--nu");
    o.primes = parse_list(primes_text, "--primes");
    auto cat = load_catalog(o.catalog);
    if (*catalog) {
      if (action == "list") {
        if (o.json) {
          json names = json::array();
          for (const auto& e : cat) names.push_back(e.name());
          out << names.dump() << "\n";
        } else {
          for (const auto& e : cat) out << e.name() << "\n";
        }
      } else {
        out << to_json(cli::need_series(cat, o.series)).dump(2) << "\n";
      }
      return exit_pass;
    }
    if (*check) {
      if (action == "zudilin") return cli::check_zudilin(cat, o, out, err);
      if (action == "zhao") return cli::check_zhao(cat, o, out);
      return cli::check_mate(cat, o, out);
    }
    if (*recover) {
      if (action == "coeffs") return cli::recover_coeffs(cat, o, out);
      return cli::recover_r_cmd(cat, o, out);
    }
    if (*numeric) return cli::numeric_cmd(action, cat, o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const CatalogError& e) {
    err << "catalog error: " << e.what() << "\n";
    return exit_usage;
  } catch (const SpecError& e) {
    err << "series error: " << e.what() << "\n";
    return exit_usage;
  } catch (const InadmissiblePrime& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_fail;
  }
  return exit_usage;
}

}  // namespace rama
