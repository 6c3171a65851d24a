#include <doctest.h>

#include <cmath>
#include <functional>

#include "nfsusy/errors.hpp"
#include "nfsusy/model_catalog.hpp"
#include "oracles.hpp"

using namespace nfsusy;

namespace {

using Ref = std::function<double(double)>;

double potential_gap(const std::function<double(double)>& got, const Ref& ref, double lo, double hi, int points = 200) {
  std::vector<double> a, b;
  for (int i = 0; i <= points; ++i) {
    const double x = lo + (hi - lo) * i / points;
    a.push_back(got(x));
    b.push_back(ref(x));
  }
  return oracle::max_rel_after_offset(a, b);
}

double model_gap(const ModelInstance& m, Side s, const Ref& ref, double lo, double hi) {
  return potential_gap([&](double x) { return static_cast<double>(m.V(s, x)); }, ref, lo, hi);
}

double pdm_gap(const PdmModelInstance& m, Side s, const Ref& ref, double lo, double hi) {
  return potential_gap([&](double q) { return static_cast<double>(m.U(s, q)); }, ref, lo, hi, 500);
}

// max |g/f - c| / |c| over the points, c the ratio at the first point.
double ratio_spread(const Ref& f, const Ref& g, const std::vector<double>& pts) {
  const double c = g(pts[0]) / f(pts[0]);
  double worst = 0;
  for (double x : pts) worst = std::max(worst, std::fabs(g(x) / f(x) - c) / std::fabs(c));
  return worst;
}

}  // namespace

TEST_CASE("parameter constraints") {
  CHECK_THROWS_AS(build_model("B.rational", 2, {{"k", "0"}}), ParameterError);
  CHECK_THROWS_AS(build_model("B.rational", 2, {{"z0", "-1"}}), ParameterError);
  CHECK_THROWS_AS(build_model("B.rational", 0), ParameterError);
  CHECK_THROWS_AS(build_model("X2.rational", 2, {{"alpha", "1"}}), ParameterError);
  CHECK_THROWS_AS(build_model("X2.exp", 2, {{"zeta_sign", "2"}}), ParameterError);
  CHECK_THROWS_AS(build_model("X2.exp", 2, {{"zeta", "0.5"}}), ParameterError);
  CHECK_THROWS_AS(build_model("B.exp", 2, {{"nonesuch", "1"}}), ParameterError);
  CHECK_THROWS_AS(build_model("C.unknown", 2), ParameterError);
  CHECK(build_model("X2.exp", 2, {{"zeta", "-1.7320508075688772"}}).params().at("zeta_sign") == -1);
  CHECK(model_id_names().size() == 6);
}

TEST_CASE("constant-mass potentials agree with the closed forms up to a constant") {
  for (int N = 1; N <= 4; ++N) {
    CAPTURE(N);
    const double k = 1.5, z0 = 2.0 / 3, b1 = 1.0 / 3;
    const auto br = build_model("B.rational", N, {{"k", "3/2"}, {"z0", "2/3"}, {"b1", "1/3"}});
    CHECK(model_gap(br, Side::Minus, [&](double x) { return oracle::ex31_vminus(x, N, k, z0, b1); }, 0.2, 4) < 1e-9);
    CHECK(model_gap(br, Side::Plus, [&](double x) { return oracle::ex31_vplus(x, N, k, z0, b1); }, 0.2, 4) < 1e-9);

    const auto bt = build_model("B.trig", N, {{"a", "3/2"}, {"z0", "2"}, {"b1", "1/5"}});
    CHECK(model_gap(bt, Side::Minus, [&](double x) { return oracle::ex32_vminus(x, N, 1.5, 2, 0.2); }, -1, 1) < 1e-9);
    CHECK(model_gap(bt, Side::Plus, [&](double x) { return oracle::ex32_vplus(x, N, 1.5, 2, 0.2); }, -1, 1) < 1e-9);

    const auto be = build_model("B.exp", N, {{"z0", "3/2"}, {"b1", "-1/3"}});
    CHECK(model_gap(be, Side::Minus, [&](double x) { return oracle::ex33_vminus(x, N, 1.5, -1.0 / 3); }, -2, 4) < 1e-9);
    CHECK(model_gap(be, Side::Plus, [&](double x) { return oracle::ex33_vplus(x, N, 1.5, -1.0 / 3); }, -2, 4) < 1e-9);

    const auto xr = build_model("X2.rational", N, {{"alpha", "5/2"}});
    CHECK(model_gap(xr, Side::Minus, [&](double x) { return oracle::ex34_vminus(x, N, 2.5); }, 0.2, 4) < 1e-9);
    CHECK(model_gap(xr, Side::Plus, [&](double x) { return oracle::ex34_vplus(x, N, 2.5); }, 0.2, 4) < 1e-9);

    for (int sg : {1, -1}) {
      CAPTURE(sg);
      const double zeta = sg * std::sqrt(1.5 * (1.5 + N));
      const auto xe = build_model("X2.exp", N, {{"alpha", "5/2"}, {"zeta_sign", std::to_string(sg)}});
      CHECK(model_gap(xe, Side::Minus, [&](double q) { return oracle::ex36_vminus(q, N, 2.5, zeta); }, -2, 3) < 1e-9);
      CHECK(model_gap(xe, Side::Plus, [&](double q) { return oracle::ex36_vplus(q, N, 2.5, zeta); }, -2, 3) < 1e-9);
    }
  }
}

TEST_CASE("X2.exp with a rational zeta takes the exact path") {
  // alpha = 2, N = 3: zeta^2 = 1 * 4
  const auto xe = build_model("X2.exp", 3, {{"alpha", "2"}});
  CHECK(xe.has_exact_operators());
  CHECK(xe.z_shift() == doctest::Approx(-2.0));
  CHECK(model_gap(xe, Side::Minus, [](double q) { return oracle::ex36_vminus(q, 3, 2, 2); }, -2, 3) < 1e-9);
  CHECK_FALSE(build_model("X2.exp", 2).has_exact_operators());
}

TEST_CASE("point canonical transformation reproduces the PDM potentials") {
  for (int N = 1; N <= 3; ++N) {
    CAPTURE(N);
    const auto e = pct_map(build_model("B.rational", N, {{"k", "3/2"}, {"z0", "2/3"}, {"b1", "1/3"}}),
                           make_profile("expdecay", {{"b", 0.8}}));
    CHECK(pdm_gap(e, Side::Minus, [&](double q) { return oracle::ex31_exp_uminus(q, N, 1.5, 2.0 / 3, 1.0 / 3, 0.8); }, -4, 6) < 1e-9);
    CHECK(pdm_gap(e, Side::Plus, [&](double q) { return oracle::ex31_exp_uplus(q, N, 1.5, 2.0 / 3, 1.0 / 3, 0.8); }, -4, 6) < 1e-9);

    const auto base = build_model("B.trig", N, {{"a", "3/2"}, {"z0", "2"}, {"b1", "1/5"}});
    const auto g = pct_map(base, make_profile("gauss2"), UConvention::Alternative);
    CHECK(pdm_gap(g, Side::Minus, [&](double q) { return oracle::ex32_gauss_uminus_literal(q, N, 1.5, 2, 0.2); }, -1.5, 1.5) < 1e-9);
    CHECK(pdm_gap(g, Side::Plus, [&](double q) { return oracle::ex32_gauss_uplus_literal(q, N, 1.5, 2, 0.2); }, -1.5, 1.5) < 1e-9);
    CHECK(pdm_gap(g, Side::Minus, [&](double q) { return oracle::ex32_gauss_uminus(q, N, 1.5, 2, 0.2); }, -1.5, 1.5) < 1e-9);

    const auto s = pct_map(base, make_profile("sech2", {{"a", 1.5}}));
    CHECK(pdm_gap(s, Side::Minus, [&](double q) { return oracle::ex32_sech_u(q, N, 1.5, 2, 0.2, -1); }, -3, 3) < 1e-9);
    CHECK(pdm_gap(s, Side::Plus, [&](double q) { return oracle::ex32_sech_u(q, N, 1.5, 2, 0.2, 1); }, -3, 3) < 1e-9);
  }
}

TEST_CASE("exponential mass turns the B.rational plus partner into the X1-Laguerre oscillator") {
  const double b = 0.8, al = 2.5;
  for (int N = 1; N <= 3; ++N) {
    const auto x = pct_map(build_model("B.rational", N, {{"k", "1/2"}, {"b1", "8/25"}, {"z0", "125/32"}}),
                           make_profile("expdecay", {{"b", b}}));
    CHECK(pdm_gap(x, Side::Plus, [&](double q) { return oracle::x1_laguerre_pdm(q, b * b / 2, al - 0.5, b); }, -4, 6) < 1e-9);
  }
}

TEST_CASE("geometry: the image of u must fit the constant-mass domain") {
  CHECK_THROWS_AS(pct_map(build_model("B.trig", 2), make_profile("expdecay")), GeometryError);
  CHECK_NOTHROW(pct_map(build_model("B.trig", 2), make_profile("gauss2")));
  CHECK_NOTHROW(pct_map(build_model("X2.rational", 2), make_profile("expdecay")));  // mirrored, model is even
  CHECK_NOTHROW(pct_map(build_model("B.exp", 3), make_profile("algebraic_pole")));
}

TEST_CASE("sector functions match the closed forms up to normalization") {
  const std::vector<double> pts = {0.3, 0.8, 1.4, 2.0, 2.9};
  for (int N = 1; N <= 3; ++N) {
    const auto m = build_model("X2.rational", N, {{"alpha", "5/2"}});
    const auto fs = sector_functions(m, Side::Minus, N);
    REQUIRE(fs.size() == static_cast<std::size_t>(N));
    for (int n = 1; n <= N; ++n) {
      CAPTURE(n);
      CHECK(ratio_spread([&](double q) { return oracle::ex34_sector_minus(n, q, 2.5); }, fs[n - 1], pts) < 1e-10);
    }
  }
  const auto e = pct_map(build_model("B.rational", 2, {{"k", "3/2"}, {"z0", "2/3"}, {"b1", "1/3"}}),
                         make_profile("expdecay", {{"b", 0.8}}));
  const auto fe = sector_functions(e, Side::Minus, 1);
  CHECK(ratio_spread([](double q) { return oracle::ex31_exp_sector_minus0(q, 2, 1.5, 2.0 / 3, 1.0 / 3, 0.8); }, fe[0],
                     {-2, -0.5, 0.5, 1.5, 3}) < 1e-10);
}

TEST_CASE("sector bookkeeping") {
  const auto b = build_model("B.exp", 3);
  const SectorBasis minus = b.sector(Side::Minus);
  const SectorBasis plus = b.sector(Side::Plus);
  CHECK(minus.truncation == 5);
  CHECK(minus.flag_invariant);
  CHECK(minus.kernel_indices == std::vector<int>{0, 1, 3});
  CHECK(plus.entries[1].poly.degree() == 2);  // z^{-1} z^2
  CHECK(plus.kernel_indices.size() == 3);
  CHECK(sector_functions(b, Side::Minus, 0).empty());
  CHECK_THROWS_AS(sector_functions(b, Side::Minus, 9), RangeError);
  CHECK_THROWS_AS(sector_functions(b, Side::Minus, -1), RangeError);
  const auto x = build_model("X2.rational", 2);
  CHECK(x.sector(Side::Minus).flag_invariant);
  CHECK_FALSE(build_model("X2.hyper", 2).sector(Side::Minus).flag_invariant);
}

TEST_CASE("log_sector splits into the gauge exponent and the rational part") {
  const auto m = build_model("X2.rational", 2, {{"alpha", "5/2"}});
  const SectorBasis s = m.sector(Side::Minus);
  for (double x : {0.4, 1.1, 2.5}) {
    const double z = x * x;
    const double direct = static_cast<double>(m.T(Side::Minus, x)) +
                          std::log(std::fabs(s.entries[0].poly.eval_double(z) * m.rho(Side::Minus).eval_double(z)));
    CHECK(m.log_sector(Side::Minus, s.entries[0], x).log_abs == doctest::Approx(direct).epsilon(1e-12));
    CHECK(m.log_sector(Side::Minus, s.entries[0], x).log_abs ==
          doctest::Approx(std::log(std::fabs(oracle::ex34_sector_minus(1, x, 2.5)))).epsilon(1e-12));
  }
}
