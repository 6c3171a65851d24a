#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "nfsusy/errors.hpp"
#include "nfsusy/report.hpp"

using namespace nfsusy;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("documents start with the schema tag") {
  const Json d = document(Json{{"b", 1}, {"a", 2}});
  REQUIRE(d.is_object());
  CHECK(d.begin().key() == "schema");
  CHECK(d["schema"] == kSchema);
  CHECK(d.dump().rfind("{\"schema\":\"nfsusy/1\"", 0) == 0);
}

TEST_CASE("breaking reports serialize deterministically") {
  const auto pm = pct_map(build_model("B.rational", 2), make_profile("expdecay", {{"b", 1}}));
  const std::string a = document(to_json(classify_model(pm), Classification::parse("unbroken"))).dump(2);
  const std::string b = document(to_json(classify_model(pm), Classification::parse("unbroken"))).dump(2);
  CHECK(a == b);
  const Json j = Json::parse(a);
  CHECK(j["classification"] == "unbroken");
  CHECK(j["paper_expected"] == "unbroken");
  CHECK(j["match"] == true);
  CHECK(j["verdicts"]["minus"]["per_function"].is_array());
  const Json none = to_json(classify_model(pm));
  CHECK(none["paper_expected"].is_null());
  CHECK(none["match"].is_null());
}

TEST_CASE("non-finite numbers become null") {
  SpectrumResult s;
  s.eigenvalues = {1.0, std::numeric_limits<double>::quiet_NaN()};
  s.richardson = {1.0, std::numeric_limits<double>::infinity()};
  s.certified_error = {0.0, 0.0};
  s.order = {2.0, std::numeric_limits<double>::quiet_NaN()};
  const Json j = to_json(s);
  CHECK(j["eigenvalues"][1].is_null());
  CHECK(j["richardson"][1].is_null());
  CHECK(j["order"][0] == 2.0);
}

TEST_CASE("potential CSV carries 17 significant digits and skips the domain ends") {
  const auto pm = pct_map(build_model("B.exp", 3), make_profile("algebraic_pole"));
  std::ostringstream os;
  write_potential_csv(os, pm, -1, 1, 11);
  const auto lines = split(os.str(), '\n');
  REQUIRE(lines.size() == 10);  // header + 9 interior points
  CHECK(lines[0] == "q,U_minus,U_plus,m");
  const auto fields = split(lines[5], ',');
  REQUIRE(fields.size() == 4);
  CHECK(fields[0] == "0");
  const double u = std::stod(fields[1]);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(pm.U(Side::Minus, 0.0)));
  CHECK(fields[1] == buf);
  CHECK(u == static_cast<double>(pm.U(Side::Minus, 0.0)));  // round trip is exact
  CHECK_THROWS_AS(write_potential_csv(os, pm, -1, 1, 1), ParameterError);
}

TEST_CASE("spectrum CSV marks matched levels") {
  SpectrumResult s;
  s.eigenvalues = {0.5, 1.5};
  s.richardson = {0.5, 1.5};
  s.certified_error = {1e-9, 1e-9};
  MembershipReport m;
  m.restricted_eigenvalues = {1.0};
  m.fit.matched_index = {1};
  m.fit.mismatch = {0.0};
  m.tol = 1e-3;
  std::ostringstream os;
  write_spectrum_csv(os, s, &m);
  const auto lines = split(os.str(), '\n');
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "index,eigenvalue,richardson,certified_error,matched_restricted_eigenvalue");
  CHECK(lines[1].back() == ',');
  CHECK(split(lines[2], ',').back() == "1");
}

TEST_CASE("error lines are single-line and machine-parsable") {
  CHECK(error_line("E_PARAM", "bad\nvalue") == "error E_PARAM: bad value");
  CHECK(error_line("E_DOMAIN", "x").find('\n') == std::string::npos);
}

TEST_CASE("output goes to a file or fails with E_IO") {
  const std::string path = "report_test_output.json";
  write_output(path, "{}");
  std::ifstream f(path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  CHECK(text == "{}\n");
  std::remove(path.c_str());
  try {
    write_output("/nonexistent-dir/x.json", "{}");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.code() == "E_IO");
  }
}
