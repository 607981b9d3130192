#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rama/cli.hpp"
#include "support.hpp"

using namespace rama;
using namespace rama::testing;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<json> json_lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

json zudilin_json() { return to_json(find_entry(catalog(), "zudilin-20")); }

std::string load_error(const json& entry) {
  try {
    load_catalog_json(json::array({entry}));
  } catch (const CatalogError& e) {
    return e.what();
  }
  return "no error";
}

}  // namespace

TEST(Catalog, BuiltinEntries) {
  std::vector<std::string> names;
  for (const auto& e : catalog()) names.push_back(e.name());
  EXPECT_EQ(names, (std::vector<std::string>{"zudilin-20", "guillera-168", "guillera-5418", "cullen-43680", "series-252",
                                             "series-1930", "series-120", "series-28"}));
}

TEST(Catalog, RoundTripIsByteIdentical) {
  EXPECT_EQ(dump_catalog(builtin_catalog()), builtin_catalog_text());
  EXPECT_EQ(dump_catalog(load_catalog_text(dump_catalog(builtin_catalog()))), builtin_catalog_text());
}

TEST(Catalog, ShippedFileMatchesBuiltin) {
  const std::string path = std::string(RAMA_SOURCE_DIR) + "/data/catalog.json";
  EXPECT_EQ(read_file(path), builtin_catalog_text());
  EXPECT_EQ(load_catalog_file(path).size(), 8u);
}

TEST(Catalog, RationalsAreStrings) {
  json j = zudilin_json();
  EXPECT_EQ(j["z0"], "-1/4");
  EXPECT_EQ(j["a"], json::array({"1", "8", "20"}));
  EXPECT_EQ(j["t0"], "8");
  for (const auto& e : catalog())
    for (const auto& [field, _] : e.status) EXPECT_TRUE(e.provenance.count(field)) << e.name() << " " << field;
}

TEST(Catalog, InvariantErrorsNameTheRule) {
  json bad = zudilin_json();
  bad["s"] = json::array({"1/2", "1/2", "1/2", "1/2"});
  EXPECT_NE(load_error(bad).find("length(s) must be 2m+1"), std::string::npos);

  json lonely = zudilin_json();
  lonely["s"] = json::array({"1/2", "1/2", "1/2", "1/3", "1/3"});
  EXPECT_NE(load_error(lonely).find("companion"), std::string::npos);
}

TEST(Catalog, SchemaErrors) {
  json missing = zudilin_json();
  missing.erase("z0");
  EXPECT_NE(load_error(missing).find("field 'z0': missing required field"), std::string::npos);

  json floaty = zudilin_json();
  floaty["z0"] = -0.25;
  EXPECT_NE(load_error(floaty).find("field 'z0'"), std::string::npos);

  json extra = zudilin_json();
  extra["colour"] = "blue";
  EXPECT_NE(load_error(extra).find("unknown field"), std::string::npos);

  json unsourced = zudilin_json();
  unsourced["provenance"].erase("t0");
  EXPECT_NE(load_error(unsourced).find("derived field has no provenance"), std::string::npos);

  EXPECT_THROW(load_catalog_text("{not json"), CatalogError);
  EXPECT_THROW(load_catalog_text("{}"), CatalogError);
  EXPECT_THROW(load_catalog_json(json::array({zudilin_json(), zudilin_json()})), CatalogError);
  EXPECT_THROW(load_catalog_file("/nonexistent/catalog.json"), CatalogError);
  EXPECT_THROW(find_entry(catalog(), "nope"), CatalogError);
}

TEST(Catalog, EnvironmentAndFlagOverride) {
  json one = json::array({zudilin_json()});
  json other = json::array({to_json(find_entry(catalog(), "series-252"))});
  const std::string env_path = temp_file("rama_env_catalog.json", one.dump());
  const std::string flag_path = temp_file("rama_flag_catalog.json", other.dump());
  setenv("RAMA_CATALOG", env_path.c_str(), 1);
  auto env_run = run({"catalog", "list"});
  auto flag_run = run({"catalog", "list", "--catalog", flag_path});
  auto loaded = load_catalog();
  unsetenv("RAMA_CATALOG");
  EXPECT_EQ(env_run.out, "zudilin-20\n");
  EXPECT_EQ(flag_run.out, "series-252\n");
  EXPECT_EQ(loaded.size(), 1u);
  EXPECT_EQ(load_catalog().size(), 8u);
}

TEST(Cli, CatalogList) {
  auto r = run({"catalog", "list"});
  EXPECT_EQ(r.code, exit_pass);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 8);
  auto s = run({"catalog", "show", "--series", "guillera-168"});
  EXPECT_EQ(s.code, exit_pass);
  EXPECT_EQ(json::parse(s.out)["a"], json::array({"1", "14", "76", "168"}));
}

TEST(Cli, ZudilinScanJson) {
  auto r = run({"check", "zudilin", "--series", "zudilin-20", "--pmin", "5", "--pmax", "50", "--nu", "1,2,3", "--json"});
  EXPECT_EQ(r.code, exit_pass) << r.err;
  auto recs = json_lines(r.out);
  EXPECT_EQ(recs.size(), 13u * 3u);
  for (const auto& j : recs) EXPECT_TRUE(validate_report_json(j).empty()) << j.dump();
  EXPECT_EQ(recs.front()["p"], 5);
}

TEST(Cli, ZudilinScanReportsExceptionalPrime) {
  auto r = run({"check", "zudilin", "--series", "zudilin-20", "--pmin", "3", "--pmax", "50", "--nu", "1,2,3"});
  EXPECT_EQ(r.code, exit_fail);
  EXPECT_NE(r.out.find("exceptional prime: p=3 nu=1"), std::string::npos);
  EXPECT_NE(r.out.find("zudilin-20 zudilin p=11 nu=1 required=5"), std::string::npos);
}

TEST(Cli, ZhaoAndMate) {
  auto z = run({"check", "zhao", "--series", "zudilin-20", "--primes", "7,11,13,17", "--r", "448", "--json"});
  EXPECT_EQ(z.code, exit_pass) << z.err;
  for (const auto& j : json_lines(z.out)) {
    EXPECT_TRUE(validate_report_json(j).empty());
    EXPECT_EQ(j["required_val"], 6);
  }
  auto wrong = run({"check", "zhao", "--series", "zudilin-20", "--p", "11", "--r", "447"});
  EXPECT_EQ(wrong.code, exit_fail);

  auto m = run({"check", "mate", "--series", "zudilin-20", "--p", "13", "--depth", "2", "--json"});
  EXPECT_EQ(m.code, exit_pass) << m.err;
  auto recs = json_lines(m.out);
  ASSERT_EQ(recs.size(), 2u);
  for (const auto& j : recs) EXPECT_TRUE(validate_report_json(j).empty());
  EXPECT_EQ(recs[1]["kind"], "mate");
}

TEST(Cli, RecoverCoefficients) {
  auto r = run({"recover", "coeffs", "--template", "guillera-168", "--p", "11", "--nu", "1,2,3", "--normalize", "0=1"});
  EXPECT_EQ(r.code, exit_pass) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "(1, 14, 76, 168)");
  auto j = run({"recover", "coeffs", "--template", "guillera-5418", "--p", "41", "--nu", "1,2", "--normalize", "0=29", "--json"});
  EXPECT_EQ(j.code, exit_pass);
  EXPECT_EQ(json::parse(j.out)["coefficients"], json::array({"29", "693", "5418"}));
  auto few = run({"recover", "coeffs", "--template", "zudilin-20", "--p", "11", "--nu", "1"});
  EXPECT_EQ(few.code, exit_fail);
  EXPECT_NE(few.err.find("insufficient constraints"), std::string::npos);
}

TEST(Cli, RecoverR) {
  auto r = run({"recover", "r", "--series", "zudilin-20", "--primes", "7,11,13,17"});
  EXPECT_EQ(r.code, exit_pass) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "448");
  auto few = run({"recover", "r", "--series", "guillera-168", "--primes", "11,13,17,19", "--json"});
  EXPECT_EQ(few.code, exit_fail);
  EXPECT_TRUE(json::parse(few.out)["holdout"]["pass"] == false);
}

TEST(Cli, Numeric) {
  auto v = run({"numeric", "value", "--series", "zudilin-20", "--prec", "30", "--json"});
  EXPECT_EQ(v.code, exit_pass);
  EXPECT_EQ(json::parse(v.out)["value"].get<std::string>().substr(0, 12), "8.1056946913");
  auto l = run({"numeric", "lvalue", "--chi", "-4", "--s", "2", "--prec", "30", "--json"});
  EXPECT_EQ(json::parse(l.out)["value"].get<std::string>().substr(0, 12), "9.1596559417");
  auto q = run({"numeric", "recognize", "--value", "0.142857142857142857", "--max-den", "100", "--tol", "1e-15"});
  EXPECT_EQ(q.code, exit_pass);
  EXPECT_EQ(q.out, "1/7\n");
  auto none = run({"numeric", "recognize", "--value", "3.14159265358979", "--max-den", "10", "--tol", "1e-10"});
  EXPECT_EQ(none.code, exit_fail);
  auto a = run({"numeric", "a", "--series", "series-28", "--prec", "30", "--json"});
  EXPECT_EQ(a.code, exit_pass) << a.err;
  EXPECT_EQ(json::parse(a.out)["r"], "14");
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"bogus"}).code, exit_usage);
  EXPECT_EQ(run({"check", "zudilin"}).code, exit_usage);
  EXPECT_EQ(run({"check", "zudilin", "--series", "nope"}).code, exit_usage);
  EXPECT_EQ(run({"check", "zudilin", "--series", "zudilin-20", "--p", "2"}).code, exit_usage);
  EXPECT_EQ(run({"check", "zhao", "--series", "zudilin-20", "--p", "11"}).code, exit_usage);
  EXPECT_EQ(run({"recover", "coeffs", "--template", "zudilin-20", "--p", "11", "--normalize", "x"}).code, exit_usage);
  EXPECT_EQ(run({"check", "zudilin", "--series", "zudilin-20", "--catalog", "/nonexistent.json"}).code, exit_usage);
  EXPECT_EQ(run({"check", "zudilin", "--series", "zudilin-20", "--nu", "1,x"}).code, exit_usage);
  auto r = run({"check", "zudilin", "--series", "guillera-5418", "--p", "5"});
  EXPECT_EQ(r.code, exit_usage);
  EXPECT_NE(r.err.find("p divides chi = 5"), std::string::npos);
}

TEST(ReportJson, ValidatorRejectsBrokenRecords) {
  json ok = to_json(zudilin_check(series("zudilin-20"), 11, 1));
  EXPECT_TRUE(validate_report_json(ok).empty());
  json lie = ok;
  lie["pass"] = false;
  EXPECT_FALSE(validate_report_json(lie).empty());
  json missing = ok;
  missing.erase("notes");
  EXPECT_FALSE(validate_report_json(missing).empty());
  json floaty = ok;
  floaty["p"] = 11.5;
  EXPECT_FALSE(validate_report_json(floaty).empty());
}
