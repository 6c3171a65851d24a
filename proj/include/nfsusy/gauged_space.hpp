#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nfsusy/errors.hpp"
#include "nfsusy/poly.hpp"

namespace nfsusy {

enum class Side { Minus, Plus };
const char* side_name(Side s);

// ---------------------------------------------------------------------------
// Polynomial subspaces

enum class SpaceKind { TypeB, TypeA, TypeBPlus, X2Minus, X2Plus };
const char* space_kind_name(SpaceKind k);

struct PolySubspace {
  SpaceKind kind{};
  int N = 0;
  std::optional<Rational> alpha;
  std::vector<RationalPoly> basis;
  RationalFunction prefactor = RationalFunction::constant(Rational(1));  // elements are prefactor * basis[j]
};

// X2 building blocks.
RationalPoly x2_f(const Rational& alpha);
RationalPoly x2_phi(int n, const Rational& alpha);
RationalPoly x2_chibar(int n, const Rational& alpha);

PolySubspace type_b_space(int N);       // {1, z, ..., z^{N-2}, z^N}
PolySubspace type_a_space(int N);       // {1, z, ..., z^{N-1}}
PolySubspace type_b_plus_space(int N);  // z^{-1}{1, z^2, ..., z^N}
PolySubspace x2_minus_space(int N, const Rational& alpha);
PolySubspace x2_plus_space(int N, const Rational& alpha);  // chibar_n(z; alpha+N) / (f(alpha) f(alpha+N))

// Rank of the basis coefficient matrix over the rationals.
int basis_rank(const std::vector<RationalPoly>& basis);

// ---------------------------------------------------------------------------
// Operators

// L p = c2 p'' + c1 p' + c0 p with rational-function coefficients.
template <class T>
struct SecondOrderOp {
  RatFunc<T> c2, c1, c0;

  RatFunc<T> apply(const RatFunc<T>& p) const {
    RatFunc<T> d1 = p.derivative();
    return c2 * d1.derivative() + c1 * d1 + c0 * p;
  }
  // G^{-1} L G for G'/G = g.
  SecondOrderOp conjugated(const RatFunc<T>& g) const {
    SecondOrderOp r;
    r.c2 = c2;
    r.c1 = c1 + c2 * g * T(2);
    r.c0 = c0 + c2 * (g.derivative() + g * g) + c1 * g;
    return r;
  }
};

// Gauged Hamiltonian -A d^2 + ((N-2)A'/2 +- Q) d - C - (1 +- 1)[(N-1)Q'/2 - A'w/2 - A w'].
template <class T>
struct GaugedOperatorT {
  Poly<T> A;
  RatFunc<T> Q, C;
  int N = 1;
  RatFunc<T> wshift;
  Side side = Side::Minus;

  SecondOrderOp<T> as_second_order() const {
    const T sgn = side == Side::Minus ? T(-1) : T(1);
    RatFunc<T> Ap = A.derivative();
    SecondOrderOp<T> op;
    op.c2 = RatFunc<T>(-A);
    op.c1 = Ap * (T(N - 2) / T(2)) + Q * sgn;
    op.c0 = -C;
    if (side == Side::Plus) {
      RatFunc<T> bracket = Q.derivative() * (T(N - 1) / T(2)) - Ap * wshift * (T(1) / T(2)) -
                           RatFunc<T>(A) * wshift.derivative();
      op.c0 = op.c0 - bracket * T(2);
    }
    return op;
  }
};

using GaugedOperator = GaugedOperatorT<Rational>;

// Type B: A = a4 z^4 + ... + a0, 2Q = -N a3 z^2 + 2 b1 z - N a1, C = N(N-3)a4 z^2 + N(N-2)a3 z + c0.
template <class T>
GaugedOperatorT<T> type_b_operator(int N, const std::vector<T>& a, const T& b1, const T& c0, Side side) {
  if (a.size() != 5) throw ParameterError("type B operator needs a0..a4");
  GaugedOperatorT<T> op;
  op.N = N;
  op.side = side;
  op.A = Poly<T>(a);
  const T n(N);
  op.Q = RatFunc<T>(Poly<T>(std::vector<T>{-n * a[1] / T(2), b1, -n * a[3] / T(2)}));
  op.C = RatFunc<T>(Poly<T>(std::vector<T>{c0, n * T(N - 2) * a[3], n * T(N - 3) * a[4]}));
  op.wshift = RatFunc<T>(Poly<T>::constant(T(-1)), Poly<T>::z());
  return op;
}

template <class T>
Poly<T> x2_f_t(const T& alpha) {
  return Poly<T>(std::vector<T>{(alpha - T(1)) * alpha, T(2) * (alpha - T(1)), T(1)});
}

// X2 family with a3 = a4 = 0. The linear coefficient of C is (N+1) a2, which is what exact closure requires.
template <class T>
GaugedOperatorT<T> x2_operator(int N, const T& alpha, const T& a1, const T& a2, const T& c0, Side side) {
  GaugedOperatorT<T> op;
  op.N = N;
  op.side = side;
  const T n(N);
  const T one(1);
  op.A = Poly<T>(std::vector<T>{(alpha - one) * (alpha + n - one) * a2, a1, a2});
  const Poly<T> fa = x2_f_t<T>(alpha);
  const Poly<T> fan = x2_f_t<T>(alpha + n);
  const Poly<T> D(std::vector<T>{-(alpha - one) * (T(2) * alpha + n - one) * a2 + alpha * a1,
                                 -((T(2) * alpha + n - T(3)) * a2 - a1)});
  const RatFunc<T> Dterm(D * (T(4) * (alpha - one)), fa);
  const Poly<T> qpoly(std::vector<T>{
      -(alpha - one) * (T(3) * alpha + T(3) * n - T(7)) * a2 + (T(2) * alpha + n - T(8)) / T(2) * a1,
      -(T(3) * a2 + a1), -a2});
  op.Q = RatFunc<T>(qpoly) + Dterm;
  op.C = RatFunc<T>(Poly<T>(std::vector<T>{c0, (n + one) * a2})) - Dterm;
  op.wshift = RatFunc<T>(fa.derivative() * (-(n - one)), fa) + RatFunc<T>(-fan.derivative(), fan);
  return op;
}

RationalFunction apply_gauged(const GaugedOperator& op, const RationalFunction& p);
inline RationalFunction apply_gauged(const GaugedOperator& op, const RationalPoly& p) {
  return apply_gauged(op, RationalFunction(p));
}

// ---------------------------------------------------------------------------
// Restricted matrices and certificates

struct RationalMatrix {
  int rows = 0, cols = 0;
  std::vector<Rational> a;
  RationalMatrix() = default;
  RationalMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r * c), Rational(0)) {}
  static RationalMatrix identity(int n);
  Rational& operator()(int i, int j) { return a[static_cast<std::size_t>(i * cols + j)]; }
  const Rational& operator()(int i, int j) const { return a[static_cast<std::size_t>(i * cols + j)]; }
  bool is_zero() const;
};
RationalMatrix operator*(const RationalMatrix& x, const RationalMatrix& y);
RationalMatrix operator+(const RationalMatrix& x, const RationalMatrix& y);
RationalMatrix operator*(const Rational& s, const RationalMatrix& x);

struct RestrictedMatrix {
  RationalMatrix entries;  // op(element_j) = sum_i entries(i, j) element_i
  PolySubspace basis_ref;
};

class ClosureError : public Error {
 public:
  ClosureError(const std::string& what, int column, RationalFunction residual)
      : Error("E_CLOSURE", what), column_(column), residual_(std::move(residual)) {}
  int column() const noexcept { return column_; }
  const RationalFunction& residual() const noexcept { return residual_; }

 private:
  int column_;
  RationalFunction residual_;
};

RestrictedMatrix closure_certificate(const GaugedOperator& op, const PolySubspace& space);

// Monic det(xI - M) via Faddeev-LeVerrier.
RationalPoly char_poly(const RationalMatrix& m);
inline RationalPoly char_poly(const RestrictedMatrix& m) { return char_poly(m.entries); }
RationalMatrix eval_matrix_poly(const RationalPoly& p, const RationalMatrix& m);
bool cayley_hamilton_holds(const RationalMatrix& m);

// ---------------------------------------------------------------------------
// Supercharges and intertwining

// p -> scale * (p' - shift * p)
struct FirstOrderFactor {
  RationalFunction scale;
  RationalFunction shift;
};

struct Charge {
  std::vector<FirstOrderFactor> factors;  // applied first to last
  RationalFunction post = RationalFunction::constant(Rational(1));
  RationalFunction apply(const RationalFunction& p) const;
  int order() const { return static_cast<int>(factors.size()); }
};

Charge type_b_charge(int N);                       // (d - 1/z) d^{N-1}
Charge x2_charge(int N, const Rational& alpha);    // f-ratio product

struct IntertwiningReport {
  bool exact = false;
  int maxdeg = 0;
  int first_failing_degree = -1;
  double max_residual_coefficient = 0.0;
  std::string first_residual;
  bool literal_identity_holds = false;  // without the conformal conjugation
  int literal_first_failing_degree = -1;
};

// Checks P H~- z^k = (G^{-1} H~+ G) P z^k for k = 0..maxdeg, G'/G = Q/A + N A'/(2A).
// The conjugation is what the z'(q)^N factor and the two different gauges leave behind
// once the physical relation is written in z.
IntertwiningReport intertwining_check_gauged(const GaugedOperator& minus, const GaugedOperator& plus,
                                             const Charge& charge, int maxdeg);

SecondOrderOp<Rational> plus_in_charge_frame(const GaugedOperator& minus, const GaugedOperator& plus);

// ---------------------------------------------------------------------------
// Random parameter draws for certificates

struct DrawConfig {
  std::uint64_t seed = 20240601;
  int max_numerator = 9;
  int max_denominator = 7;
};

struct CertificateSummary {
  int checks = 0;
  int failures = 0;
  std::string status;  // "exact" or "violated"
  std::string first_failure;
  double residual_max = 0.0;
};

CertificateSummary certify_closure(const std::string& type, int N, int draws, const DrawConfig& cfg);
CertificateSummary certify_flag(const std::string& type, int N, int draws, const DrawConfig& cfg);
CertificateSummary certify_intertwining(const std::string& type, int N, int draws, int maxdeg,
                                        const DrawConfig& cfg);

}  // namespace nfsusy
