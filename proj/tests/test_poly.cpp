#include <doctest.h>

#include "nfsusy/errors.hpp"
#include "nfsusy/poly.hpp"

using namespace nfsusy;

namespace {
RationalPoly P(std::initializer_list<long> c) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  return RationalPoly(v);
}
}  // namespace

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-0.25") == Rational(-1, 4));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("2.5e2") == Rational(250));
  CHECK(parse_rational("-6/8") == Rational(-3, 4));
  CHECK_THROWS_AS(parse_rational("abc"), ParameterError);
  CHECK_THROWS_AS(parse_rational("1/0"), ParameterError);
  Rational root;
  CHECK(rational_sqrt(Rational(9, 4), root));
  CHECK(root == Rational(3, 2));
  CHECK_FALSE(rational_sqrt(Rational(2), root));
}

TEST_CASE("polynomial arithmetic") {
  const RationalPoly a = P({1, 2, 1});  // (z+1)^2
  const RationalPoly b = P({1, 1});
  CHECK(a == b * b);
  CHECK((a - b * b).is_zero());
  CHECK(a.degree() == 2);
  CHECK(a.derivative() == P({2, 2}));
  CHECK(a.eval(Rational(2)) == Rational(9));
  CHECK(a.compose(P({-1, 1})) == P({0, 0, 1}));
  auto [q, r] = divmod(P({5, 0, 0, 1}), b);  // z^3 + 5 = (z+1)(z^2 - z + 1) + 4
  CHECK(q == P({1, -1, 1}));
  CHECK(r == P({4}));
  CHECK(poly_gcd(a, P({-1, 0, 1})) == b);
}

TEST_CASE("rational functions stay in lowest terms") {
  const RationalFunction f(P({-1, 0, 1}), P({2, 2}));  // (z^2-1)/(2z+2) = (z-1)/2
  CHECK(f.is_polynomial());
  CHECK(f.as_polynomial() == RationalPoly(std::vector<Rational>{Rational(-1, 2), Rational(1, 2)}));
  const RationalFunction g(P({1}), P({0, 1}));
  CHECK(g.derivative() == RationalFunction(P({-1}), P({0, 0, 1})));
  CHECK((g * RationalFunction(P({0, 1}))) == RationalFunction(P({1})));
  CHECK((g + g - g * Rational(2)).is_zero());
  CHECK_THROWS_AS(RationalFunction(P({1}), RationalPoly()), std::domain_error);
}

TEST_CASE("double conversion agrees with exact evaluation") {
  const RationalFunction f(P({1, -3, 0, 2}), P({7, 0, 1}));
  const RatFunc<double> d = to_double_func(f);
  for (int i = -5; i <= 5; ++i) {
    const Rational x(i, 3);
    CHECK(d.eval_double(x.get_d()) == doctest::Approx(f.eval(x).get_d()).epsilon(1e-14));
  }
}
