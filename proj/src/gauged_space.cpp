#include "nfsusy/gauged_space.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nfsusy {

const char* side_name(Side s) { return s == Side::Minus ? "minus" : "plus"; }

const char* space_kind_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::TypeB: return "typeB";
    case SpaceKind::TypeA: return "typeA";
    case SpaceKind::TypeBPlus: return "typeB_plus";
    case SpaceKind::X2Minus: return "X2_minus";
    case SpaceKind::X2Plus: return "X2_plus";
  }
  return "?";
}

RationalPoly x2_f(const Rational& alpha) { return x2_f_t<Rational>(alpha); }

RationalPoly x2_phi(int n, const Rational& a) {
  std::vector<Rational> c(static_cast<std::size_t>(n) + 2, Rational(0));
  c[static_cast<std::size_t>(n + 1)] = a + n - 2;
  c[static_cast<std::size_t>(n)] = 2 * (a + n - 1) * (a - 1);
  c[static_cast<std::size_t>(n - 1)] = (a + n) * (a - 1) * a;
  return RationalPoly(std::move(c));
}

RationalPoly x2_chibar(int n, const Rational& a) {
  std::vector<Rational> c(static_cast<std::size_t>(n) + 2, Rational(0));
  c[static_cast<std::size_t>(n + 1)] = (a - n) * (a - n + 1);
  c[static_cast<std::size_t>(n)] = 2 * (a - n - 1) * (a - n + 1) * (a - 1);
  c[static_cast<std::size_t>(n - 1)] = (a - n - 1) * (a - n) * (a - 1) * a;
  return RationalPoly(std::move(c));
}

namespace {

void require_positive(int N) {
  if (N < 1) throw ParameterError("N must be a positive integer");
}

}  // namespace

PolySubspace type_b_space(int N) {
  require_positive(N);
  PolySubspace s;
  s.kind = SpaceKind::TypeB;
  s.N = N;
  for (int j = 0; j <= N - 2; ++j) s.basis.push_back(RationalPoly::monomial(j));
  s.basis.push_back(RationalPoly::monomial(N));
  return s;
}

PolySubspace type_a_space(int N) {
  require_positive(N);
  PolySubspace s;
  s.kind = SpaceKind::TypeA;
  s.N = N;
  for (int j = 0; j < N; ++j) s.basis.push_back(RationalPoly::monomial(j));
  return s;
}

PolySubspace type_b_plus_space(int N) {
  require_positive(N);
  PolySubspace s;
  s.kind = SpaceKind::TypeBPlus;
  s.N = N;
  s.basis.push_back(RationalPoly::monomial(0));
  for (int j = 2; j <= N; ++j) s.basis.push_back(RationalPoly::monomial(j));
  s.prefactor = RationalFunction(RationalPoly::constant(Rational(1)), RationalPoly::z());
  return s;
}

PolySubspace x2_minus_space(int N, const Rational& alpha) {
  require_positive(N);
  PolySubspace s;
  s.kind = SpaceKind::X2Minus;
  s.N = N;
  s.alpha = alpha;
  for (int n = 1; n <= N; ++n) s.basis.push_back(x2_phi(n, alpha));
  return s;
}

PolySubspace x2_plus_space(int N, const Rational& alpha) {
  require_positive(N);
  PolySubspace s;
  s.kind = SpaceKind::X2Plus;
  s.N = N;
  s.alpha = alpha;
  const Rational an = alpha + N;
  for (int n = 1; n <= N; ++n) s.basis.push_back(x2_chibar(n, an));
  s.prefactor = RationalFunction(RationalPoly::constant(Rational(1)), x2_f(alpha) * x2_f(an));
  return s;
}

namespace {

// Solves sum_j x_j basis_j = target exactly. Returns false if target is outside the span;
// x then holds the pivot solution so that target - sum x_j basis_j is the residual.
bool solve_in_span(const std::vector<RationalPoly>& basis, const RationalPoly& target, std::vector<Rational>& x) {
  int nrows = target.degree() + 1;
  for (const auto& b : basis) nrows = std::max(nrows, b.degree() + 1);
  const int n = static_cast<int>(basis.size());
  std::vector<std::vector<Rational>> m(static_cast<std::size_t>(nrows),
                                       std::vector<Rational>(static_cast<std::size_t>(n + 1), Rational(0)));
  for (int i = 0; i < nrows; ++i) {
    for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = basis[static_cast<std::size_t>(j)].coeff(i);
    m[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] = target.coeff(i);
  }
  std::vector<int> pivcol;
  int r = 0;
  for (int c = 0; c < n && r < nrows; ++c) {
    int p = -1;
    for (int i = r; i < nrows; ++i) {
      if (sgn(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]) != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    std::swap(m[static_cast<std::size_t>(p)], m[static_cast<std::size_t>(r)]);
    auto& pr = m[static_cast<std::size_t>(r)];
    const Rational inv = 1 / pr[static_cast<std::size_t>(c)];
    for (auto& v : pr) v *= inv;
    for (int i = 0; i < nrows; ++i) {
      if (i == r) continue;
      auto& row = m[static_cast<std::size_t>(i)];
      const Rational f = row[static_cast<std::size_t>(c)];
      if (sgn(f) == 0) continue;
      for (int k = c; k <= n; ++k) row[static_cast<std::size_t>(k)] -= f * pr[static_cast<std::size_t>(k)];
    }
    pivcol.push_back(c);
    ++r;
  }
  x.assign(static_cast<std::size_t>(n), Rational(0));
  for (int i = 0; i < r; ++i) x[static_cast<std::size_t>(pivcol[static_cast<std::size_t>(i)])] = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)];
  for (int i = r; i < nrows; ++i) {
    if (sgn(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)]) != 0) return false;
  }
  return true;
}

double max_abs_coeff(const RationalPoly& p) {
  double m = 0.0;
  for (const auto& v : p.coeffs()) m = std::max(m, std::fabs(v.get_d()));
  return m;
}

}  // namespace

int basis_rank(const std::vector<RationalPoly>& basis) {
  int nrows = 0;
  for (const auto& b : basis) nrows = std::max(nrows, b.degree() + 1);
  std::vector<std::vector<Rational>> m(static_cast<std::size_t>(nrows));
  for (int i = 0; i < nrows; ++i) {
    for (const auto& b : basis) m[static_cast<std::size_t>(i)].push_back(b.coeff(i));
  }
  int r = 0;
  const int n = static_cast<int>(basis.size());
  for (int c = 0; c < n && r < nrows; ++c) {
    int p = -1;
    for (int i = r; i < nrows; ++i) {
      if (sgn(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]) != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    std::swap(m[static_cast<std::size_t>(p)], m[static_cast<std::size_t>(r)]);
    for (int i = r + 1; i < nrows; ++i) {
      const Rational f = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] / m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (sgn(f) == 0) continue;
      for (int k = c; k < n; ++k) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] -= f * m[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
    }
    ++r;
  }
  return r;
}

RationalFunction apply_gauged(const GaugedOperator& op, const RationalFunction& p) {
  return op.as_second_order().apply(p);
}

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool RationalMatrix::is_zero() const {
  return std::all_of(a.begin(), a.end(), [](const Rational& v) { return sgn(v) == 0; });
}

RationalMatrix operator*(const RationalMatrix& x, const RationalMatrix& y) {
  RationalMatrix r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int k = 0; k < x.cols; ++k) {
      const Rational& v = x(i, k);
      if (sgn(v) == 0) continue;
      for (int j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
    }
  }
  return r;
}

RationalMatrix operator+(const RationalMatrix& x, const RationalMatrix& y) {
  RationalMatrix r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
  return r;
}

RationalMatrix operator*(const Rational& s, const RationalMatrix& x) {
  RationalMatrix r = x;
  for (auto& v : r.a) v *= s;
  return r;
}

RestrictedMatrix closure_certificate(const GaugedOperator& op, const PolySubspace& space) {
  const auto L = op.as_second_order();
  const int n = static_cast<int>(space.basis.size());
  RestrictedMatrix out;
  out.entries = RationalMatrix(n, n);
  out.basis_ref = space;
  for (int j = 0; j < n; ++j) {
    const RationalFunction elem = space.prefactor * RationalFunction(space.basis[static_cast<std::size_t>(j)]);
    const RationalFunction image = L.apply(elem) / space.prefactor;
    if (!image.is_polynomial()) {
      throw ClosureError("operator maps basis element " + std::to_string(j) +
                             " outside the polynomial space (non-polynomial image " + image.str() + ")",
                         j, image);
    }
    const RationalPoly target = image.as_polynomial();
    std::vector<Rational> coeffs;
    if (!solve_in_span(space.basis, target, coeffs)) {
      RationalPoly residual = target;
      for (int i = 0; i < n; ++i) residual -= space.basis[static_cast<std::size_t>(i)] * coeffs[static_cast<std::size_t>(i)];
      throw ClosureError("operator does not preserve the space: basis element " + std::to_string(j) +
                             " leaves residual " + residual.str(),
                         j, RationalFunction(residual));
    }
    for (int i = 0; i < n; ++i) out.entries(i, j) = coeffs[static_cast<std::size_t>(i)];
  }
  return out;
}

RationalPoly char_poly(const RationalMatrix& a) {
  if (a.rows != a.cols) throw ParameterError("characteristic polynomial needs a square matrix");
  const int n = a.rows;
  std::vector<Rational> c(static_cast<std::size_t>(n) + 1, Rational(0));
  c[static_cast<std::size_t>(n)] = 1;
  RationalMatrix mk(n, n);
  const RationalMatrix id = RationalMatrix::identity(n);
  for (int k = 1; k <= n; ++k) {
    mk = a * mk + c[static_cast<std::size_t>(n - k + 1)] * id;
    const RationalMatrix am = a * mk;
    Rational tr = 0;
    for (int i = 0; i < n; ++i) tr += am(i, i);
    c[static_cast<std::size_t>(n - k)] = -tr / k;
  }
  return RationalPoly(std::move(c));
}

RationalMatrix eval_matrix_poly(const RationalPoly& p, const RationalMatrix& m) {
  const int n = m.rows;
  RationalMatrix acc(n, n);
  const RationalMatrix id = RationalMatrix::identity(n);
  for (int i = p.degree(); i >= 0; --i) acc = acc * m + p.coeff(i) * id;
  return acc;
}

bool cayley_hamilton_holds(const RationalMatrix& m) { return eval_matrix_poly(char_poly(m), m).is_zero(); }

RationalFunction Charge::apply(const RationalFunction& p) const {
  RationalFunction r = p;
  for (const auto& f : factors) r = f.scale * (r.derivative() - f.shift * r);
  return post * r;
}

Charge type_b_charge(int N) {
  require_positive(N);
  Charge c;
  const RationalFunction one = RationalFunction::constant(Rational(1));
  for (int i = 0; i < N - 1; ++i) c.factors.push_back({one, RationalFunction()});
  c.factors.push_back({one, RationalFunction(RationalPoly::constant(Rational(1)), RationalPoly::z())});
  return c;
}

Charge x2_charge(int N, const Rational& alpha) {
  require_positive(N);
  Charge c;
  for (int k = 0; k < N; ++k) {
    const RationalPoly fk = x2_f(alpha + k);
    const RationalPoly fk1 = x2_f(alpha + k + 1);
    c.factors.push_back({RationalFunction(fk1, fk), RationalFunction(fk1.derivative(), fk1)});
  }
  c.post = RationalFunction(x2_f(alpha), x2_f(alpha + N));
  return c;
}

SecondOrderOp<Rational> plus_in_charge_frame(const GaugedOperator& minus, const GaugedOperator& plus) {
  const RationalFunction A(minus.A);
  const RationalFunction g = minus.Q / A + RationalFunction(minus.A.derivative()) * Rational(minus.N, 2) / A;
  return plus.as_second_order().conjugated(g);
}

IntertwiningReport intertwining_check_gauged(const GaugedOperator& minus, const GaugedOperator& plus,
                                             const Charge& charge, int maxdeg) {
  IntertwiningReport rep;
  rep.maxdeg = maxdeg;
  const auto Lm = minus.as_second_order();
  const auto Lp_frame = plus_in_charge_frame(minus, plus);
  const auto Lp_literal = plus.as_second_order();
  rep.literal_identity_holds = true;
  for (int k = 0; k <= maxdeg; ++k) {
    const RationalFunction zk(RationalPoly::monomial(k));
    const RationalFunction lhs = charge.apply(Lm.apply(zk));
    const RationalFunction pz = charge.apply(zk);
    const RationalFunction res = lhs - Lp_frame.apply(pz);
    if (!res.is_zero()) {
      const double m = max_abs_coeff(res.num()) / std::max(1e-300, max_abs_coeff(res.den()));
      rep.max_residual_coefficient = std::max(rep.max_residual_coefficient, m);
      if (rep.first_failing_degree < 0) {
        rep.first_failing_degree = k;
        rep.first_residual = res.str();
      }
    }
    if (rep.literal_identity_holds && !(lhs - Lp_literal.apply(pz)).is_zero()) {
      rep.literal_identity_holds = false;
      rep.literal_first_failing_degree = k;
    }
  }
  rep.exact = rep.first_failing_degree < 0;
  return rep;
}

namespace {

Rational random_rational(std::mt19937_64& rng, const DrawConfig& cfg, bool nonzero = false) {
  std::uniform_int_distribution<int> num(-cfg.max_numerator, cfg.max_numerator);
  std::uniform_int_distribution<int> den(1, cfg.max_denominator);
  for (;;) {
    Rational r(num(rng), den(rng));
    r.canonicalize();
    if (!nonzero || sgn(r) != 0) return r;
  }
}

// alpha > 1, rational.
Rational random_alpha(std::mt19937_64& rng, const DrawConfig& cfg) {
  std::uniform_int_distribution<int> num(1, cfg.max_numerator * 2);
  std::uniform_int_distribution<int> den(1, cfg.max_denominator);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r + 1;
}

struct Draw {
  GaugedOperator minus, plus;
  PolySubspace vminus, vplus;
  Charge charge;
  std::string text;
};

Draw draw_model(const std::string& type, int N, bool solvable, std::mt19937_64& rng, const DrawConfig& cfg) {
  Draw d;
  if (type == "B") {
    std::vector<Rational> a(5);
    for (auto& v : a) v = random_rational(rng, cfg);
    if (sgn(a[0]) == 0 && sgn(a[1]) == 0 && sgn(a[2]) == 0) a[2] = 1;
    if (solvable) a[3] = a[4] = 0;
    const Rational b1 = random_rational(rng, cfg);
    const Rational c0 = random_rational(rng, cfg);
    d.minus = type_b_operator<Rational>(N, a, b1, c0, Side::Minus);
    d.plus = type_b_operator<Rational>(N, a, b1, c0, Side::Plus);
    d.vminus = type_b_space(N);
    d.vplus = type_b_plus_space(N);
    d.charge = type_b_charge(N);
    d.text = "a=[" + to_string(a[0]) + "," + to_string(a[1]) + "," + to_string(a[2]) + "," + to_string(a[3]) +
             "," + to_string(a[4]) + "] b1=" + to_string(b1) + " c0=" + to_string(c0);
  } else if (type == "X2") {
    const Rational alpha = random_alpha(rng, cfg);
    Rational a1 = random_rational(rng, cfg);
    Rational a2 = solvable ? Rational(0) : random_rational(rng, cfg);
    if (sgn(a1) == 0 && sgn(a2) == 0) a1 = 1;
    const Rational c0 = random_rational(rng, cfg);
    d.minus = x2_operator<Rational>(N, alpha, a1, a2, c0, Side::Minus);
    d.plus = x2_operator<Rational>(N, alpha, a1, a2, c0, Side::Plus);
    d.vminus = x2_minus_space(N, alpha);
    d.vplus = x2_plus_space(N, alpha);
    d.charge = x2_charge(N, alpha);
    d.text = "alpha=" + to_string(alpha) + " a1=" + to_string(a1) + " a2=" + to_string(a2) + " c0=" + to_string(c0);
  } else {
    throw ParameterError("unknown operator type '" + type + "' (expected B or X2)");
  }
  return d;
}

void finish(CertificateSummary& s) { s.status = s.failures == 0 ? "exact" : "violated"; }

}  // namespace

CertificateSummary certify_closure(const std::string& type, int N, int draws, const DrawConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(N) * 7919u);
  CertificateSummary s;
  for (int i = 0; i < draws; ++i) {
    Draw d = draw_model(type, N, false, rng, cfg);
    for (int side = 0; side < 2; ++side) {
      ++s.checks;
      try {
        auto m = closure_certificate(side == 0 ? d.minus : d.plus, side == 0 ? d.vminus : d.vplus);
        if (!cayley_hamilton_holds(m.entries)) throw StructuralError("Cayley-Hamilton failed");
      } catch (const Error& e) {
        ++s.failures;
        s.residual_max = std::max(s.residual_max, 1.0);
        if (s.first_failure.empty()) s.first_failure = d.text + ": " + e.what();
      }
    }
  }
  finish(s);
  return s;
}

CertificateSummary certify_flag(const std::string& type, int N, int draws, const DrawConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(N) * 104729u);
  CertificateSummary s;
  for (int i = 0; i < draws; ++i) {
    Draw d = draw_model(type, N, true, rng, cfg);
    for (int k = 1; k <= N; ++k) {
      std::vector<std::pair<const GaugedOperator*, PolySubspace>> jobs;
      if (type == "B") {
        jobs.emplace_back(&d.minus, type_a_space(k));
        jobs.emplace_back(&d.plus, type_b_plus_space(k));
      } else {
        // Solvable X2 operators preserve every leading block of the minus basis and of the plus basis.
        PolySubspace vm = d.vminus;
        vm.basis.resize(static_cast<std::size_t>(k));
        PolySubspace vp = d.vplus;
        vp.basis.resize(static_cast<std::size_t>(k));
        jobs.emplace_back(&d.minus, vm);
        jobs.emplace_back(&d.plus, vp);
      }
      for (auto& job : jobs) {
        ++s.checks;
        try {
          closure_certificate(*job.first, job.second);
        } catch (const Error& e) {
          ++s.failures;
          s.residual_max = std::max(s.residual_max, 1.0);
          if (s.first_failure.empty()) s.first_failure = d.text + " k=" + std::to_string(k) + ": " + e.what();
        }
      }
    }
  }
  finish(s);
  return s;
}

CertificateSummary certify_intertwining(const std::string& type, int N, int draws, int maxdeg,
                                        const DrawConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(N) * 1299709u);
  CertificateSummary s;
  for (int i = 0; i < draws; ++i) {
    Draw d = draw_model(type, N, false, rng, cfg);
    ++s.checks;
    auto rep = intertwining_check_gauged(d.minus, d.plus, d.charge, maxdeg);
    if (!rep.exact) {
      ++s.failures;
      s.residual_max = std::max(s.residual_max, rep.max_residual_coefficient);
      if (s.first_failure.empty()) {
        s.first_failure = d.text + ": first failing degree " + std::to_string(rep.first_failing_degree);
      }
    }
  }
  finish(s);
  return s;
}

}  // namespace nfsusy
