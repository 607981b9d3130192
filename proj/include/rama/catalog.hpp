#pragma once

// Series catalog and JSON interchange.
//
// Catalog file: a JSON array of entries
//   {name, m, s: ["1/2", ...], z0: "-1/4", a: ["1", "8", "20"], chi: 1, t0: "8",
//    fourier: {alpha: [["1/2","0"], ...], beta: [...]}, provenance: {...}, status: {...}}
// with t0, fourier, status and unchecked optional. Rationals are always strings.
// Output is canonical: keys sorted, two-space indentation, trailing newline.

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rama/congruence.hpp"
#include "rama/series.hpp"

namespace rama {

using json = nlohmann::json;

class CatalogError : public Error {
 public:
  using Error::Error;
};

struct CatalogEntry {
  SeriesSpec spec;
  /// field -> where the value comes from
  std::map<std::string, std::string> provenance;
  /// field -> caveat, e.g. "derived, unconfirmed"
  std::map<std::string, std::string> status;

  const std::string& name() const { return spec.name(); }
  SeriesTemplate shape() const { return spec.shape(); }
};

namespace detail {

inline json rationals_to_json(const std::vector<BigRational>& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

inline json complex_to_json(const std::vector<ComplexRational>& v) {
  json out = json::array();
  for (const auto& c : v) out.push_back(json::array({to_string(c.re), to_string(c.im)}));
  return out;
}

[[noreturn]] inline void schema_fail(const std::string& entry, const std::string& field, const std::string& what) {
  throw CatalogError("catalog entry '" + entry + "': field '" + field + "': " + what);
}

inline BigRational rational_field(const json& j, const std::string& entry, const std::string& field) {
  if (!j.is_string()) schema_fail(entry, field, "rationals must be strings");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    schema_fail(entry, field, e.what());
  }
}

inline std::vector<BigRational> rational_list(const json& j, const std::string& entry, const std::string& field) {
  if (!j.is_array()) schema_fail(entry, field, "expected an array of rational strings");
  std::vector<BigRational> out;
  for (const auto& x : j) out.push_back(rational_field(x, entry, field));
  return out;
}

inline std::vector<ComplexRational> complex_list(const json& j, const std::string& entry, const std::string& field) {
  if (!j.is_array()) schema_fail(entry, field, "expected an array of [re, im] pairs");
  std::vector<ComplexRational> out;
  for (const auto& x : j) {
    if (!x.is_array() || x.size() != 2) schema_fail(entry, field, "expected [re, im] pairs");
    out.push_back({rational_field(x[0], entry, field), rational_field(x[1], entry, field)});
  }
  return out;
}

inline std::map<std::string, std::string> string_map(const json& j, const std::string& entry, const std::string& field) {
  if (!j.is_object()) schema_fail(entry, field, "expected an object of strings");
  std::map<std::string, std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_string()) schema_fail(entry, field + "." + it.key(), "expected a string");
    out[it.key()] = it.value().get<std::string>();
  }
  return out;
}

}  // namespace detail

inline json to_json(const CatalogEntry& e) {
  const SeriesSpec& s = e.spec;
  json j;
  j["name"] = s.name();
  j["m"] = s.m();
  j["s"] = detail::rationals_to_json(s.s());
  j["z0"] = to_string(s.z0());
  j["a"] = detail::rationals_to_json(s.a());
  j["chi"] = s.chi();
  if (s.t0()) j["t0"] = to_string(*s.t0());
  if (s.fourier()) j["fourier"] = {{"alpha", detail::complex_to_json(s.fourier()->alpha)},
                                   {"beta", detail::complex_to_json(s.fourier()->beta)}};
  j["provenance"] = e.provenance;
  if (!e.status.empty()) j["status"] = e.status;
  if (s.shape().mode() == Validation::unchecked) j["unchecked"] = true;
  return j;
}

inline CatalogEntry entry_from_json(const json& j) {
  static const std::set<std::string> known = {"name", "m",       "s",          "z0",     "a",        "chi",
                                               "t0",   "fourier", "provenance", "status", "unchecked"};
  if (!j.is_object()) throw CatalogError("catalog entry must be a JSON object");
  if (!j.contains("name") || !j["name"].is_string()) throw CatalogError("catalog entry without a string 'name'");
  const std::string name = j["name"].get<std::string>();
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) detail::schema_fail(name, it.key(), "unknown field");
  for (const char* req : {"m", "s", "z0", "a", "chi"})
    if (!j.contains(req)) detail::schema_fail(name, req, "missing required field");
  if (!j["m"].is_number_integer()) detail::schema_fail(name, "m", "expected an integer");
  if (!j["chi"].is_number_integer()) detail::schema_fail(name, "chi", "expected an integer");

  Validation mode = Validation::strict;
  if (j.contains("unchecked")) {
    if (!j["unchecked"].is_boolean()) detail::schema_fail(name, "unchecked", "expected a boolean");
    if (j["unchecked"].get<bool>()) mode = Validation::unchecked;
  }
  std::optional<BigRational> t0;
  if (j.contains("t0")) t0 = detail::rational_field(j["t0"], name, "t0");
  std::optional<FourierData> fourier;
  if (j.contains("fourier")) {
    const json& f = j["fourier"];
    if (!f.is_object() || !f.contains("alpha") || !f.contains("beta") || f.size() != 2)
      detail::schema_fail(name, "fourier", "expected {alpha, beta}");
    fourier = FourierData{detail::complex_list(f["alpha"], name, "fourier.alpha"),
                          detail::complex_list(f["beta"], name, "fourier.beta")};
  }
  std::map<std::string, std::string> provenance, status;
  if (j.contains("provenance")) provenance = detail::string_map(j["provenance"], name, "provenance");
  if (j.contains("status")) status = detail::string_map(j["status"], name, "status");
  for (const char* derived : {"t0", "fourier"})
    if (j.contains(derived) && !provenance.count(derived))
      detail::schema_fail(name, derived, "derived field has no provenance");
  for (const auto& [field, _] : status)
    if (!provenance.count(field)) detail::schema_fail(name, field, "flagged field has no provenance");

  try {
    SeriesTemplate shape(name, j["m"].get<int>(), detail::rational_list(j["s"], name, "s"),
                         detail::rational_field(j["z0"], name, "z0"), j["chi"].get<std::int64_t>(), mode);
    SeriesSpec spec(std::move(shape), detail::rational_list(j["a"], name, "a"), t0, fourier);
    return CatalogEntry{std::move(spec), std::move(provenance), std::move(status)};
  } catch (const SpecError& e) {
    throw CatalogError("catalog entry '" + name + "': " + e.what());
  }
}

inline std::vector<CatalogEntry> load_catalog_json(const json& doc) {
  if (!doc.is_array()) throw CatalogError("catalog must be a JSON array of entries");
  std::vector<CatalogEntry> out;
  std::set<std::string> seen;
  for (const auto& item : doc) {
    out.push_back(entry_from_json(item));
    if (!seen.insert(out.back().name()).second) throw CatalogError("duplicate catalog entry '" + out.back().name() + "'");
  }
  return out;
}

inline std::vector<CatalogEntry> load_catalog_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CatalogError(std::string("catalog is not valid JSON: ") + e.what());
  }
  return load_catalog_json(doc);
}

inline std::vector<CatalogEntry> load_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open catalog '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_catalog_text(buf.str());
}

inline std::string dump_catalog(const std::vector<CatalogEntry>& entries) {
  json doc = json::array();
  for (const auto& e : entries) doc.push_back(to_json(e));
  return doc.dump(2) + "\n";
}

/// The built-in catalog, in canonical form.
inline const std::string& builtin_catalog_text() {
  static const std::string text = R"json([
  {
    "a": [
      "1",
      "8",
      "20"
    ],
    "chi": 1,
    "fourier": {
      "alpha": [
        [
          "1/2",
          "0"
        ],
        [
          "-1/2",
          "0"
        ]
      ],
      "beta": [
        [
          "0",
          "0"
        ],
        [
          "0",
          "0"
        ]
      ]
    },
    "m": 2,
    "name": "zudilin-20",
    "provenance": {
      "a": "supercongruence example and coefficient-recovery example (p = 11)",
      "chi": "supercongruence example",
      "fourier": "normalized from the bilateral closed form of this series",
      "r": "published r = 448, reproduced",
      "s": "supercongruence example",
      "t0": "bilateral closed form at x = 0",
      "z0": "supercongruence example"
    },
    "s": [
      "1/2",
      "1/2",
      "1/2",
      "1/2",
      "1/2"
    ],
    "t0": "8",
    "z0": "-1/4"
  },
  {
    "a": [
      "1",
      "14",
      "76",
      "168"
    ],
    "chi": -4,
    "fourier": {
      "alpha": [
        [
          "-189/32",
          "0"
        ],
        [
          "35/16",
          "0"
        ],
        [
          "-19/32",
          "0"
        ]
      ],
      "beta": [
        [
          "0",
          "19/32"
        ],
        [
          "0",
          "-3/8"
        ],
        [
          "0",
          "7/32"
        ]
      ]
    },
    "m": 3,
    "name": "guillera-168",
    "provenance": {
      "a": "supercongruence example and coefficient-recovery example (p = 11)",
      "chi": "supercongruence example",
      "fourier": "fitted numerically from Taylor coefficients at x = 0 (fit_fourier)",
      "r": "published r = 1536; modular and numeric routes give -49152",
      "s": "supercongruence example",
      "t0": "coefficient-recovery example",
      "z0": "supercongruence example"
    },
    "s": [
      "1/2",
      "1/2",
      "1/2",
      "1/2",
      "1/2",
      "1/2",
      "1/2"
    ],
    "status": {
      "fourier": "fitted, unconfirmed",
      "r": "printed value disagrees with computation"
    },
    "t0": "16",
    "z0": "1/64"
  },
  {
    "a": [
      "29",
      "693",
      "5418"
    ],
    "chi": 5,
    "fourier": {
      "alpha": [
        [
          "220/3",
          "0"
        ],
        [
          "-20",
          "0"
        ]
      ],
      "beta": [
        [
          "0",
          "0"
        ],
        [
          "0",
          "0"
        ]
      ]
    },
    "m": 2,
    "name": "guillera-5418",
    "provenance": {
      "a": "supercongruence example and coefficient-recovery example (p = 41)",
      "chi": "supercongruence example",
      "fourier": "fitted numerically from Taylor coefficients at x = 0 (fit_fourier)",
      "r": "published r = 42000; modular and numeric routes give 5376000",
      "s": "coefficient-recovery example; the supercongruence display repeats 1/2 in the numerator",
      "t0": "coefficient-recovery example",
      "z0": "supercongruence example"
    },
    "s": [
      "1/2",
      "1/3",
      "2/3",
      "1/6",
      "5/6"
    ],
    "status": {
      "fourier": "fitted, unconfirmed",
      "r": "printed value disagrees with computation",
      "s": "corrected from a duplicated 1/2"
    },
    "t0": "128",
    "z0": "-1/512000"
  },
  {
    "a": [
      "21",
      "466",
      "4340",
      "20632",
      "43680"
    ],
    "chi": 1,
    "m": 4,
    "name": "cullen-43680",
    "provenance": {
      "a": "Cullen's series, proved by K. C. Au with the WZ method",
      "chi": "Cullen's series",
      "s": "Cullen's series",
      "t0": "Cullen's series: value 2048/pi^4",
      "z0": "Cullen's series"
    },
    "s": [
      "1/2",
      "1/2",
      "1/2",
      "1/2",
      "1/2",
      "1/2",
      "1/2",
      "1/4",
      "3/4"
    ],
    "t0": "2048",
    "z0": "1/4096"
  },
  {
    "a": [
      "5",
      "63",
      "252"
    ],
    "chi": 1,
    "fourier": {
      "alpha": [
        [
          "16/3",
          "0"
        ],
        [
          "-2",
          "0"
        ]
      ],
      "beta": [
        [
          "0",
          "0"
        ],
        [
          "0",
          "0"
        ]
      ]
    },
    "m": 2,
    "name": "series-252",
    "provenance": {
      "a": "coefficient-recovery example (p = 13, a_0 pinned to 5)",
      "chi": "coefficient-recovery example",
      "fourier": "fitted numerically from Taylor coefficients at x = 0 (fit_fourier)",
      "s": "coefficient-recovery example",
      "t0": "coefficient-recovery example",
      "z0": "coefficient-recovery example"
    },
    "s": [
      "1/2",
      "1/3",
      "2/3",
      "1/4",
      "3/4"
    ],
    "status": {
      "fourier": "fitted, unconfirmed"
    },
    "t0": "48",
    "z0": "-1/48"
  },
  {
    "a": [
      "45",
      "549",
      "1930"
    ],
    "chi": 1,
    "fourier": {
      "alpha": [
        [
          "14/3",
          "0"
        ],
        [
          "-2",
          "0"
        ]
      ],
      "beta": [
        [
          "0",
          "0"
        ],
        [
          "0",
          "0"
        ]
      ]
    },
    "m": 2,
    "name": "series-1930",
    "provenance": {
      "a": "bilateral closed-form example",
      "chi": "bilateral closed-form example",
      "fourier": "normalized from the bilateral closed form of this series",
      "s": "bilateral closed-form example",
      "t0": "bilateral closed-form example (scale 1/384)",
      "z0": "bilateral closed-form example"
    },
    "s": [
      "1/2",
      "1/3",
      "2/3",
      "1/6",
      "5/6"
    ],
    "t0": "384",
    "z0": "-729/4096"
  },
  {
    "a": [
      "3",
      "34",
      "120"
    ],
    "chi": 1,
    "fourier": {
      "alpha": [
        [
          "7/2",
          "0"
        ],
        [
          "-3/2",
          "0"
        ]
      ],
      "beta": [
        [
          "0",
          "-1/2"
        ],
        [
          "0",
          "1/2"
        ]
      ]
    },
    "m": 2,
    "name": "series-120",
    "provenance": {
      "a": "bilateral closed-form example",
      "chi": "bilateral closed-form example",
      "fourier": "normalized from the bilateral closed form of this series; the sine part carries a factor i",
      "s": "bilateral closed-form example",
      "t0": "bilateral closed-form example (scale 1/32)",
      "z0": "bilateral closed-form example"
    },
    "s": [
      "1/2",
      "1/2",
      "1/2",
      "1/4",
      "3/4"
    ],
    "t0": "32",
    "z0": "1/16"
  },
  {
    "a": [
      "3",
      "18",
      "28"
    ],
    "chi": 1,
    "fourier": {
      "alpha": [
        [
          "-1/3",
          "0"
        ],
        [
          "-1/4",
          "0"
        ]
      ],
      "beta": [
        [
          "0",
          "0"
        ],
        [
          "0",
          "0"
        ]
      ]
    },
    "m": 2,
    "name": "series-28",
    "provenance": {
      "a": "bilateral closed-form example",
      "chi": "derived from the bilateral closed form value at x = 0",
      "fourier": "normalized from the bilateral closed form of this series",
      "s": "bilateral closed-form example",
      "t0": "bilateral closed-form example (scale 1/6)",
      "z0": "bilateral closed-form example"
    },
    "s": [
      "1/2",
      "1/2",
      "1/2",
      "1/3",
      "2/3"
    ],
    "status": {
      "chi": "derived, unconfirmed"
    },
    "t0": "6",
    "z0": "-27"
  }
]
)json";
  return text;
}

inline std::vector<CatalogEntry> builtin_catalog() { return load_catalog_text(builtin_catalog_text()); }

/// Explicit path first, then $RAMA_CATALOG, then the built-in catalog.
inline std::vector<CatalogEntry> load_catalog(const std::optional<std::string>& path = std::nullopt) {
  if (path) return load_catalog_file(*path);
  if (const char* env = std::getenv("RAMA_CATALOG"); env && *env) return load_catalog_file(env);
  return builtin_catalog();
}

inline const CatalogEntry& find_entry(const std::vector<CatalogEntry>& catalog, const std::string& name) {
  for (const auto& e : catalog)
    if (e.name() == name) return e;
  throw CatalogError("unknown series '" + name + "'");
}

// ---------------------------------------------------------------------------
// Report records

inline json to_json(const CongruenceReport& r) {
  json j;
  j["series"] = r.series;
  j["kind"] = std::string(to_string(r.kind));
  j["p"] = r.p;
  j["nu"] = r.nu;
  j["required_val"] = r.required_valuation;
  if (r.achieved_valuation.is_infinite())
    j["achieved_val"] = "inf";
  else
    j["achieved_val"] = r.achieved_valuation.value();
  j["pass"] = r.pass;
  j["residual"] = r.residual ? json(r.residual->value().get_str()) : json(nullptr);
  j["notes"] = r.notes;
  j["timing_ms"] = r.timing_ms;
  return j;
}

/// Schema problems of one report record; empty when valid.
inline std::vector<std::string> validate_report_json(const json& j) {
  std::vector<std::string> bad;
  static const std::set<std::string> keys = {"series", "kind",     "p",     "nu",       "required_val",
                                             "achieved_val", "pass", "residual", "notes", "timing_ms"};
  if (!j.is_object()) return {"record is not an object"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key())) bad.push_back("unknown key " + it.key());
  for (const auto& k : keys)
    if (!j.contains(k)) bad.push_back("missing key " + k);
  if (!bad.empty()) return bad;
  if (!j["series"].is_string()) bad.push_back("series must be a string");
  if (!j["kind"].is_string() || !std::set<std::string>{"zudilin", "zhao", "mate"}.count(j["kind"].get<std::string>()))
    bad.push_back("kind must be zudilin, zhao or mate");
  if (!j["p"].is_number_integer()) bad.push_back("p must be an integer");
  if (!j["nu"].is_number_integer()) bad.push_back("nu must be an integer");
  if (!j["required_val"].is_number_integer()) bad.push_back("required_val must be an integer");
  const json& a = j["achieved_val"];
  if (!(a.is_number_integer() || (a.is_string() && a.get<std::string>() == "inf")))
    bad.push_back("achieved_val must be an integer or \"inf\"");
  if (!j["pass"].is_boolean()) bad.push_back("pass must be a boolean");
  if (!(j["residual"].is_null() || j["residual"].is_string())) bad.push_back("residual must be a string or null");
  if (!j["notes"].is_array()) {
    bad.push_back("notes must be an array");
  } else {
    for (const auto& n : j["notes"])
      if (!n.is_string()) bad.push_back("notes must hold strings");
  }
  if (!j["timing_ms"].is_number()) bad.push_back("timing_ms must be a number");
  if (bad.empty() && j["required_val"].is_number_integer()) {
    bool expect = a.is_string() || a.get<long>() >= j["required_val"].get<long>();
    if (expect != j["pass"].get<bool>()) bad.push_back("pass disagrees with the valuations");
  }
  return bad;
}

}  // namespace rama
