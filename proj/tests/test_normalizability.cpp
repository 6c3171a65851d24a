#include <doctest.h>

#include <cmath>

#include "nfsusy/normalizability.hpp"
#include "oracles.hpp"

using namespace nfsusy;

namespace {

Classification classify(const char* id, int N, std::map<std::string, std::string> p, const char* mass = "const",
                        std::map<std::string, double> mp = {}) {
  return classify_model(pct_map(build_model(id, N, p), make_profile(mass, mp))).classification;
}

std::function<LogValue(double)> log_of(std::function<double(double)> f) {
  return [f](double x) {
    LogValue v;
    const double y = f(x);
    if (y != 0) {
      v.log_abs = std::log(std::fabs(y));
      v.sign = y > 0 ? 1 : -1;
    }
    return v;
  };
}

EndHint asym_hint(Asym a, bool infinite) {
  EndHint h;
  h.kind = EndHint::Kind::Asymptotic;
  h.asym = a;
  h.infinite = infinite;
  return h;
}

}  // namespace

TEST_CASE("classification strings round-trip") {
  for (const char* s : {"unbroken", "broken", "partially_broken(2)", "indeterminate"})
    CHECK(Classification::parse(s).str() == s);
  CHECK(Classification::parse("partially_broken(2)") == Classification::parse("partially_broken(2)"));
  CHECK_FALSE(Classification::parse("partially_broken(1)") == Classification::parse("partially_broken(2)"));
}

TEST_CASE("exponent test at infinite and finite ends") {
  // |f|^2 at infinity: e^{2G t^2}, t^{2P}
  CHECK(exponent_verdict(asym_hint(Asym{0, 0, -0.5, 0, 3}, true)).decision == Decision::L2);
  CHECK(exponent_verdict(asym_hint(Asym{0, 0, 0.5, 0, -3}, true)).decision == Decision::NotL2);
  CHECK(exponent_verdict(asym_hint(Asym{0, 0, 0, 0, -1}, true)).decision == Decision::L2);
  CHECK(exponent_verdict(asym_hint(Asym{0, 0, 0, -0.1, 5}, true)).decision == Decision::L2);
  CHECK(exponent_verdict(asym_hint(Asym{-1, 1, 0, 9, 0}, true)).decision == Decision::L2);
  const EndVerdict edge = exponent_verdict(asym_hint(Asym{0, 0, 0, 0, -0.5}, true));
  CHECK(edge.decision == Decision::NotL2);
  CHECK(edge.marginal);
  // finite end: s^{2P}
  CHECK(exponent_verdict(asym_hint(Asym{0, 0, 0, 0, -0.4}, false)).decision == Decision::L2);
  CHECK(exponent_verdict(asym_hint(Asym{0, 0, 0, 0, -0.6}, false)).decision == Decision::NotL2);
  const EndVerdict fin = exponent_verdict(asym_hint(Asym{0, 0, 0, 0, -0.5}, false));
  CHECK(fin.decision == Decision::NotL2);
  CHECK(fin.marginal);
}

TEST_CASE("quadrature of known integrals") {
  const double pi = std::acos(-1.0);
  const QuadratureVerdict g = quadrature_verdict(log_of([](double x) { return std::exp(-x * x); }), Interval{});
  REQUIRE(g.decision == Decision::L2);
  REQUIRE(g.integral.has_value());
  CHECK(*g.integral == doctest::Approx(std::sqrt(pi / 2)).epsilon(1e-7));
  CHECK(quadrature_verdict(log_of([](double x) { return 1 / std::sqrt(1 + std::fabs(x)); }), Interval{}).decision ==
        Decision::NotL2);
  const QuadratureVerdict s = quadrature_verdict(log_of([](double x) { return std::pow(x, -0.4); }), Interval{0, 1});
  REQUIRE(s.decision == Decision::L2);
  CHECK(*s.integral == doctest::Approx(5.0).epsilon(1e-5));  // int_0^1 x^{-0.8}
  CHECK(quadrature_verdict(log_of([](double x) { return std::pow(x, -0.6); }), Interval{0, 1}).decision ==
        Decision::NotL2);
}

TEST_CASE("B.rational with constant mass: unbroken exactly for 0 < b1 < k/z0") {
  const double k = 1.5, z0 = 0.75;  // k/z0 = 2
  for (const char* b : {"-1", "-1/4", "1/4", "1", "7/4", "9/4", "3"}) {
    CAPTURE(b);
    const bool expect = oracle::ex31_unbroken(k, z0, parse_rational(b).get_d());
    const Classification c = classify("B.rational", 2, {{"k", "3/2"}, {"z0", "3/4"}, {"b1", b}});
    CHECK((c.kind == Classification::Kind::Unbroken) == expect);
  }
}

TEST_CASE("boundary exponent is marginal and counted as not normalizable") {
  const BreakingReport r = classify_model(build_model("B.rational", 2, {{"k", "1"}, {"z0", "1"}, {"b1", "1"}}));
  CHECK(r.classification.str() == "broken");
  bool any_marginal = false;
  for (const auto& f : r.verdict_minus.per_function) any_marginal = any_marginal || f.marginal;
  CHECK(any_marginal);
  CHECK_FALSE(r.diagnostics.empty());
}

TEST_CASE("B.exp with constant mass follows the partial-breaking ladder") {
  for (int N = 2; N <= 4; ++N) {
    for (const char* b : {"-7/4", "-5/4", "-3/4", "-1/4", "1/4", "3/4", "5/4", "7/4"}) {
      CAPTURE(N);
      CAPTURE(b);
      const double b1 = parse_rational(b).get_d();
      if (!(b1 > -N / 2.0)) continue;
      const int k = oracle::ex33_prefix(N, b1);
      const Classification c = classify("B.exp", N, {{"z0", "1"}, {"b1", b}});
      // k = N still leaves the rest of the infinite flag outside L2, so it is partial too
      if (k == 0) {
        CHECK(c.str() == "broken");
      } else {
        CHECK(c.str() == "partially_broken(" + std::to_string(k) + ")");
      }
    }
  }
}

TEST_CASE("B.trig with constant mass: window from the plus-sector exponents") {
  // N = 1: the tabulated window and the exponent window coincide.
  const auto p1 = oracle::ex32_window_tabulated(1, 1, 2);
  const auto e1 = oracle::ex32_window_exponents(1, 1, 2);
  CHECK(p1.first == doctest::Approx(e1.first));
  CHECK(p1.second == doctest::Approx(e1.second));
  for (int N = 1; N <= 3; ++N) {
    const auto w = oracle::ex32_window_exponents(N, 1, 2);
    for (double b1 : {w.first - 0.1, w.first + 0.1, 0.5 * (w.first + w.second), w.second - 0.1, w.second + 0.1}) {
      CAPTURE(N);
      CAPTURE(b1);
      const bool inside = b1 > w.first && b1 < w.second;
      const Classification c = classify("B.trig", N, {{"a", "1"}, {"z0", "2"}, {"b1", std::to_string(b1)}});
      CHECK((c.kind == Classification::Kind::Unbroken) == inside);
    }
  }
}

TEST_CASE("X2.exp with constant mass depends on the sign of zeta; the Gaussian mass removes it") {
  CHECK(classify("X2.exp", 2, {{"zeta_sign", "1"}}).str() == "unbroken");
  CHECK(classify("X2.exp", 2, {{"zeta_sign", "-1"}}).str() == "broken");
  CHECK(classify("X2.exp", 2, {{"zeta_sign", "1"}}, "gauss2").str() == "unbroken");
  CHECK(classify("X2.exp", 2, {{"zeta_sign", "-1"}}, "gauss2").str() == "unbroken");
}

TEST_CASE("bounded u-image: every sector function is normalizable") {
  CHECK(classify("B.trig", 2, {}, "gauss2").str() == "unbroken");
  CHECK(classify("B.exp", 3, {}, "gauss2").str() == "unbroken");
  CHECK(classify("X2.hyper", 2, {}, "sech2", {{"a", 1}}).str() == "unbroken");
  CHECK(classify("X2.hyper", 2, {}, "gauss2").str() == "unbroken");
}

TEST_CASE("no-effect masses keep the constant-mass verdict") {
  for (const char* b : {"-1/2", "1/2"}) {
    CHECK(classify("B.rational", 2, {{"b1", b}}, "expdecay", {{"b", 1}}) == classify("B.rational", 2, {{"b1", b}}));
  }
  CHECK(classify("X2.rational", 2, {}, "expdecay", {{"b", 1}}) == classify("X2.rational", 2, {}));
}

TEST_CASE("exponent and quadrature decisions agree on catalog sectors") {
  const std::vector<std::pair<const char*, const char*>> cases = {
      {"B.rational", "const"}, {"B.rational", "expdecay"}, {"B.exp", "const"}, {"X2.rational", "const"},
      {"X2.exp", "gauss2"},   {"B.trig", "gauss2"}};
  for (const auto& [id, mass] : cases) {
    CAPTURE(id);
    CAPTURE(mass);
    const BreakingReport r = classify_model(pct_map(build_model(id, 2), make_profile(mass)));
    CHECK(r.status == "ok");
    for (const auto* v : {&r.verdict_minus, &r.verdict_plus}) {
      CHECK(v->truncation_stable);
      for (const auto& f : v->per_function) {
        CHECK_FALSE(f.disagreement);
        CHECK_FALSE(f.indeterminate);
      }
    }
  }
}
