#include <doctest.h>

#include <cmath>

#include "nfsusy/errors.hpp"
#include "nfsusy/mass_profiles.hpp"
#include "oracles.hpp"

using namespace nfsusy;

namespace {

std::vector<double> sample_points(const Interval& d) {
  const double lo = d.lo_infinite() ? -3.0 : d.lo + 0.1;
  const double hi = d.hi_infinite() ? 3.0 : d.hi - 0.1;
  std::vector<double> pts;
  for (int i = 0; i <= 40; ++i) pts.push_back(lo + (hi - lo) * i / 40.0);
  return pts;
}

// Central difference of u against sqrt(m).
void check_u_derivative(const MassProfile& p, UConvention conv = UConvention::Standard, double scale = 1.0) {
  for (double q : sample_points(p.domain())) {
    const double h = 1e-5;
    const double du = static_cast<double>((p.u(q + h, conv) - p.u(q - h, conv)) / (2 * h));
    CHECK(du == doctest::Approx(scale * static_cast<double>(p.sqrt_m(q))).epsilon(1e-8));
  }
}

}  // namespace

TEST_CASE("closed forms of the catalog profiles") {
  const double pi = std::acos(-1.0);
  for (double q : {-1.3, -0.2, 0.0, 0.7, 2.1}) {
    CHECK(static_cast<double>(make_profile("const").m(q)) == 1.0);
    CHECK(static_cast<double>(make_profile("expdecay", {{"b", 0.7}}).u(q)) ==
          doctest::Approx(-(2 / 0.7) * std::exp(-0.35 * q)));
    CHECK(static_cast<double>(make_profile("gauss2").m(q)) == doctest::Approx(2 / pi * std::exp(-2 * q * q)));
    CHECK(static_cast<double>(make_profile("gauss2").u(q, UConvention::Alternative)) == doctest::Approx(std::erf(q)));
    CHECK(static_cast<double>(make_profile("sech2", {{"a", 1.5}}).u(q)) == doctest::Approx(oracle::gd(1.5 * q) / 1.5));
    const double s = (2 + q * q) / (1 + q * q);
    CHECK(static_cast<double>(make_profile("rational_beta").m(q)) == doctest::Approx(s * s));
  }
  CHECK(static_cast<double>(make_profile("algebraic_pole").u(0.5)) == doctest::Approx(std::asin(0.5)));
}

TEST_CASE("u' = sqrt(m) for every profile") {
  for (const auto& p : builtin_profiles()) {
    CAPTURE(p.id());
    check_u_derivative(p);
  }
  check_u_derivative(make_profile("gauss2"), UConvention::Alternative, std::sqrt(2.0));
}

TEST_CASE("u is strictly increasing") {
  for (const auto& p : builtin_profiles()) {
    CAPTURE(p.id());
    const auto pts = sample_points(p.domain());
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(p.u(pts[i]) > p.u(pts[i - 1]));
  }
}

TEST_CASE("derivatives of m agree with finite differences") {
  for (const auto& p : builtin_profiles()) {
    CAPTURE(p.id());
    for (double q : sample_points(p.domain())) {
      const double h = 1e-4;
      const double d1 = static_cast<double>((p.m(q + h) - p.m(q - h)) / (2 * h));
      const double d2 = static_cast<double>((p.m(q + h) - 2 * p.m(q) + p.m(q - h)) / (h * h));
      const double scale = std::max(1.0, std::fabs(static_cast<double>(p.m(q))));
      CHECK(std::fabs(d1 - static_cast<double>(p.dm(q))) < 1e-6 * scale * 100);
      CHECK(std::fabs(d2 - static_cast<double>(p.d2m(q))) < 1e-4 * scale * 100);
      CHECK(static_cast<double>(p.log_m(q)) == doctest::Approx(std::log(static_cast<double>(p.m(q)))));
    }
  }
}

TEST_CASE("images of u") {
  const double pi = std::acos(-1.0);
  const Interval e = make_profile("expdecay", {{"b", 2}}).u_image();
  CHECK(std::isinf(e.lo));
  CHECK(e.hi == doctest::Approx(0.0));
  const Interval g = make_profile("gauss2").u_image();
  CHECK(g.lo == doctest::Approx(-1 / std::sqrt(2.0)));
  CHECK(g.hi == doctest::Approx(1 / std::sqrt(2.0)));
  const Interval ga = make_profile("gauss2").u_image(UConvention::Alternative);
  CHECK(ga.hi == doctest::Approx(1.0));
  const Interval s = make_profile("sech2").u_image();
  CHECK(s.hi == doctest::Approx(pi / 2));
  const Interval a = make_profile("algebraic_pole").u_image();
  CHECK(a.lo == doctest::Approx(-pi / 2));
  CHECK(a.hi == doctest::Approx(pi / 2));
  CHECK(make_profile("const").u_image().lo_infinite());
}

TEST_CASE("quadrature-backed u matches the closed form") {
  for (const auto& p : builtin_profiles()) {
    CAPTURE(p.id());
    const MassProfile qv = p.quadrature_variant(0.0);
    CHECK(qv.u_kind() == UKind::Quadrature);
    for (double q : sample_points(p.domain()))
      CHECK(static_cast<double>(qv.u(q)) == doctest::Approx(static_cast<double>(p.u(q))).epsilon(1e-9));
  }
}

TEST_CASE("PDM correction term") {
  // m = e^{-bq}: m''/(8m^2) - 7m'^2/(32m^3) = -3 b^2 e^{bq} / 32
  const MassProfile p = make_profile("expdecay", {{"b", 1.3}});
  for (double q : {-1.0, 0.0, 0.8})
    CHECK(static_cast<double>(p.mass_term(q)) == doctest::Approx(-3 * 1.69 * std::exp(1.3 * q) / 32));
  CHECK(static_cast<double>(make_profile("const").mass_term(0.4)) == 0.0);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(make_profile("expdecay", {{"b", -1}}), ParameterError);
  CHECK_THROWS_AS(make_profile("sech2", {{"a", 0}}), ParameterError);
  CHECK_THROWS_AS(make_profile("nonesuch"), ParameterError);
  CHECK_THROWS_AS(make_profile("algebraic_pole").u(1.5), DomainError);
  CHECK_THROWS_AS(make_profile("algebraic_pole").u(1.0), DomainError);
  CHECK_THROWS_AS(make_profile("const").u(0.0, UConvention::Alternative), Error);
}
