#include <doctest.h>

#include "nfsusy/gauged_space.hpp"
#include "nfsusy/model_catalog.hpp"

using namespace nfsusy;

namespace {
std::vector<Rational> R(std::initializer_list<Rational> v) { return v; }
}  // namespace

TEST_CASE("type B spaces have the expected shapes") {
  const PolySubspace b = type_b_space(4);
  REQUIRE(b.basis.size() == 4);
  CHECK(b.basis[2].degree() == 2);
  CHECK(b.basis[3].degree() == 4);  // z^{N-1} is skipped
  CHECK(basis_rank(b.basis) == 4);
  CHECK(type_a_space(3).basis.size() == 3);
  CHECK(type_b_plus_space(3).basis.size() == 3);
}

TEST_CASE("X2 building blocks") {
  const Rational a(5, 2);
  const RationalPoly f = x2_f(a);
  CHECK(f.eval(Rational(1)) == Rational(1) + 2 * (a - 1) + (a - 1) * a);
  // phi_n = (a+n-2) z^{n+1} + 2(a+n-1)(a-1) z^n + (a+n)(a-1)a z^{n-1}
  const RationalPoly p2 = x2_phi(2, a);
  CHECK(p2.coeff(3) == a);
  CHECK(p2.coeff(2) == 2 * (a + 1) * (a - 1));
  CHECK(p2.coeff(1) == (a + 2) * (a - 1) * a);
  const PolySubspace s = x2_minus_space(3, a);
  CHECK(s.basis.size() == 3);
  CHECK(basis_rank(s.basis) == 3);
}

TEST_CASE("type B operator closes on its space for random coefficients") {
  for (int N = 1; N <= 5; ++N) {
    const auto op = type_b_operator<Rational>(N, R({Rational(1, 3), Rational(-2), Rational(5, 7), Rational(3), Rational(-1, 2)}),
                                              Rational(4, 9), Rational(1, 5), Side::Minus);
    const RestrictedMatrix m = closure_certificate(op, type_b_space(N));
    CHECK(m.entries.rows == N);
    CHECK(cayley_hamilton_holds(m.entries));
  }
}

TEST_CASE("closure failure is reported with the offending column") {
  auto op = type_b_operator<Rational>(3, R({Rational(1), Rational(0), Rational(1), Rational(1), Rational(1)}), Rational(1),
                                      Rational(0), Side::Minus);
  op.C = op.C + RationalFunction(RationalPoly::monomial(3));  // a cubic C cannot keep degrees bounded
  CHECK_THROWS_AS(closure_certificate(op, type_b_space(3)), ClosureError);
  try {
    closure_certificate(op, type_b_space(3));
  } catch (const ClosureError& e) {
    CHECK(e.code() == "E_CLOSURE");
    CHECK(e.column() >= 0);
    CHECK_FALSE(e.residual().is_zero());
  }
}

TEST_CASE("X2 operator closes on both sectors") {
  for (int N = 1; N <= 4; ++N) {
    const Rational al(7, 3), a1(2), a2(0), c0(1, 4);
    const auto minus = x2_operator<Rational>(N, al, a1, a2, c0, Side::Minus);
    const auto plus = x2_operator<Rational>(N, al, a1, a2, c0, Side::Plus);
    const RestrictedMatrix mm = closure_certificate(minus, x2_minus_space(N, al));
    const RestrictedMatrix mp = closure_certificate(plus, x2_plus_space(N, al));
    CHECK(char_poly(mm) == char_poly(mp));
  }
}

TEST_CASE("characteristic polynomial and Cayley-Hamilton") {
  RationalMatrix m(2, 2);
  m(0, 0) = 1;
  m(0, 1) = 2;
  m(1, 0) = 3;
  m(1, 1) = 4;
  const RationalPoly cp = char_poly(m);  // x^2 - 5x - 2
  CHECK(cp.coeff(2) == 1);
  CHECK(cp.coeff(1) == -5);
  CHECK(cp.coeff(0) == -2);
  CHECK(eval_matrix_poly(cp, m).is_zero());
  CHECK(cayley_hamilton_holds(RationalMatrix::identity(4)));
}

TEST_CASE("catalog models: isospectral restricted matrices and exact intertwining") {
  const char* ids[] = {"B.rational", "B.trig", "B.exp", "X2.rational"};
  for (const char* id : ids) {
    for (int N = 1; N <= 3; ++N) {
      CAPTURE(id);
      CAPTURE(N);
      const ModelInstance m = build_model(id, N);
      REQUIRE(m.has_exact_operators());
      const RestrictedMatrix mm = closure_certificate(m.op(Side::Minus), m.kernel_space(Side::Minus));
      const RestrictedMatrix mp = closure_certificate(m.op(Side::Plus), m.kernel_space(Side::Plus));
      CHECK(char_poly(mm) == char_poly(mp));
      const Charge charge = is_type_b(m.id()) ? type_b_charge(N) : x2_charge(N, m.params().at("alpha"));
      const IntertwiningReport r = intertwining_check_gauged(m.op(Side::Minus), m.op(Side::Plus), charge, 8);
      CHECK(r.exact);
      CHECK(r.first_failing_degree == -1);
    }
  }
}

TEST_CASE("the charge annihilates the minus kernel") {
  for (int N = 1; N <= 4; ++N) {
    const Charge c = type_b_charge(N);
    CHECK(c.order() == N);
    for (const auto& p : type_b_space(N).basis) CHECK(c.apply(RationalFunction(p)).is_zero());
    CHECK_FALSE(c.apply(RationalFunction(RationalPoly::monomial(N + 1))).is_zero());
    const Rational al(3);
    const Charge x = x2_charge(N, al);
    const PolySubspace s = x2_minus_space(N, al);
    for (const auto& p : s.basis) CHECK(x.apply(s.prefactor * RationalFunction(p)).is_zero());
  }
}

TEST_CASE("flag structure: prefixes of type B are invariant") {
  const ModelInstance m = build_model("B.exp", 4);
  for (int k = 1; k <= 4; ++k) {
    const RestrictedMatrix r = closure_certificate(m.op(Side::Minus), m.prefix_space(Side::Minus, k));
    CHECK(r.entries.rows == k);
  }
}

TEST_CASE("randomized certificates are exact and reproducible") {
  DrawConfig cfg;
  const CertificateSummary a = certify_closure("B", 4, 20, cfg);
  const CertificateSummary b = certify_closure("B", 4, 20, cfg);
  CHECK(a.status == "exact");
  CHECK(a.failures == 0);
  CHECK(a.checks == b.checks);
  CHECK(certify_flag("B", 3, 10, cfg).status == "exact");
  CHECK(certify_closure("X2", 3, 5, cfg).status == "exact");
  CHECK(certify_intertwining("B", 3, 5, 6, cfg).status == "exact");
  CHECK(certify_intertwining("X2", 2, 3, 6, cfg).status == "exact");
}
