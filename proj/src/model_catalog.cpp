#include "nfsusy/model_catalog.hpp"

#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <sstream>

#include "nfsusy/errors.hpp"

namespace nfsusy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const real kPi = boost::math::constants::pi<real>();

struct ModelSpec {
  ModelId id;
  const char* name;
  std::vector<std::pair<const char*, const char*>> defaults;
};

const std::vector<ModelSpec>& specs() {
  static const std::vector<ModelSpec> s = {
      {ModelId::BRational, "B.rational", {{"k", "1"}, {"z0", "1"}, {"b1", "1/2"}, {"c0", "0"}}},
      {ModelId::BTrig, "B.trig", {{"a", "1"}, {"z0", "2"}, {"b1", "1/5"}, {"c0", "0"}}},
      {ModelId::BExp, "B.exp", {{"z0", "1"}, {"b1", "-1/2"}, {"c0", "0"}}},
      {ModelId::X2Rational, "X2.rational", {{"alpha", "2"}, {"c0", "0"}}},
      {ModelId::X2Hyper, "X2.hyper", {{"alpha", "2"}, {"zeta_sign", "1"}, {"c0", "0"}}},
      {ModelId::X2Exp, "X2.exp", {{"alpha", "2"}, {"zeta_sign", "1"}, {"c0", "0"}}},
  };
  return s;
}

const ModelSpec& spec_for(const std::string& id) {
  for (const auto& s : specs())
    if (id == s.name) return s;
  throw ParameterError("unknown model id '" + id + "'");
}

// log|cosh x| without overflow.
real log_cosh(real x) {
  const real ax = std::fabs(x);
  return ax + std::log1p(std::exp(-2 * ax)) - std::log(real(2));
}

// log((1+s)/(1-s)) for s = sin(t), c = cos(t), accurate near both ends.
real log_sin_ratio(real s, real c) {
  const real ac = std::fabs(c);
  if (s >= 0) return 2 * (std::log1p(s) - std::log(ac));
  return 2 * (std::log(ac) - std::log1p(-s));
}

// log|p(y)| and its sign, falling back to the leading term when the value overflows.
LogValue log_abs_poly(const Poly<double>& p, real y) {
  LogValue r;
  if (p.is_zero()) return r;
  const real v = p.eval<real>(y);
  if (std::isfinite(static_cast<double>(v)) && v != 0 && std::isfinite(v)) {
    r.log_abs = static_cast<double>(std::log(std::fabs(v)));
    r.sign = v > 0 ? 1 : -1;
    return r;
  }
  if (v == 0) return r;
  const real lead = p.leading();
  const int deg = p.degree();
  r.log_abs = static_cast<double>(std::log(std::fabs(lead)) + deg * std::log(std::fabs(y)));
  const bool neg = (lead < 0) != (y < 0 && deg % 2 == 1);
  r.sign = neg ? -1 : 1;
  return r;
}

// a + b sqrt(d) with rational a, b and a non-square d. Values built from integers carry d = 0 and
// adopt the radicand of the other operand. Used for X2.exp when zeta is irrational, so that the
// potential is simplified exactly before its coefficients are rounded.
struct Surd {
  Rational a, b, d;
  Surd(long v = 0) : a(v), b(0), d(0) {}  // NOLINT: integer literals inside the templates
  Surd(Rational a_, Rational b_, Rational d_) : a(std::move(a_)), b(std::move(b_)), d(std::move(d_)) {}

  static Rational radicand(const Surd& x, const Surd& y) { return sgn(x.d) != 0 ? x.d : y.d; }
  friend Surd operator+(const Surd& x, const Surd& y) { return {x.a + y.a, x.b + y.b, radicand(x, y)}; }
  friend Surd operator-(const Surd& x, const Surd& y) { return {x.a - y.a, x.b - y.b, radicand(x, y)}; }
  friend Surd operator*(const Surd& x, const Surd& y) {
    const Rational d = radicand(x, y);
    return {x.a * y.a + x.b * y.b * d, x.a * y.b + x.b * y.a, d};
  }
  friend Surd operator/(const Surd& x, const Surd& y) {
    const Rational d = radicand(x, y);
    const Rational norm = y.a * y.a - y.b * y.b * d;
    if (sgn(norm) == 0) throw std::domain_error("division by zero in Q(sqrt d)");
    return x * Surd(y.a / norm, -y.b / norm, d);
  }
  Surd operator-() const { return {-a, -b, d}; }
  Surd& operator+=(const Surd& y) { return *this = *this + y; }
  Surd& operator-=(const Surd& y) { return *this = *this - y; }
  Surd& operator*=(const Surd& y) { return *this = *this * y; }
  Surd& operator/=(const Surd& y) { return *this = *this / y; }
  friend bool operator==(const Surd& x, const Surd& y) { return x.a == y.a && x.b == y.b; }
  double value() const {
    return static_cast<double>(static_cast<long double>(a.get_d()) +
                               static_cast<long double>(b.get_d()) * std::sqrt(static_cast<long double>(d.get_d())));
  }
  friend std::ostream& operator<<(std::ostream& os, const Surd& x) {
    return os << x.a << " + " << x.b << " sqrt(" << x.d << ")";
  }
};

}  // namespace

template <>
struct ScalarTraits<Surd> {
  static constexpr bool exact = true;
  static bool is_zero(const Surd& v) { return sgn(v.a) == 0 && sgn(v.b) == 0; }
  static double to_double(const Surd& v) { return v.value(); }
  static Surd from_int(long v) { return Surd(v); }
};

namespace {

RatFunc<double> surd_to_double(const RatFunc<Surd>& f) {
  auto conv = [](const Poly<Surd>& p) {
    std::vector<double> c;
    for (const auto& v : p.coeffs()) c.push_back(v.value());
    return Poly<double>(std::move(c));
  };
  return RatFunc<double>(conv(f.num()), conv(f.den()));
}

template <class T>
RatFunc<T> compose_func(const RatFunc<T>& f, const Poly<T>& q) {
  return RatFunc<T>(f.num().compose(q), f.den().compose(q));
}

// V = A w1^2 - A' w1 / 2 - A w1' - C - (1 +- 1)[(N-1)Q'/2 - A' w/2 - A w'], w1 = (N-1)A'/(4A) +- Q/(2A).
template <class T>
RatFunc<T> physical_potential(const GaugedOperatorT<T>& op) {
  const RatFunc<T> A(op.A);
  const RatFunc<T> Ap(op.A.derivative());
  const T sgn = op.side == Side::Minus ? T(-1) : T(1);
  const RatFunc<T> w1 = Ap * (T(op.N - 1) / T(4)) / A + op.Q * (sgn / T(2)) / A;
  RatFunc<T> V = A * w1 * w1 - Ap * w1 * (T(1) / T(2)) - A * w1.derivative() - op.C;
  if (op.side == Side::Plus) {
    const RatFunc<T> bracket = op.Q.derivative() * (T(op.N - 1) / T(2)) - Ap * op.wshift * (T(1) / T(2)) -
                               A * op.wshift.derivative();
    V = V - bracket * T(2);
  }
  return V;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

bool same_limit(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(b));
}

}  // namespace

const char* model_id_name(ModelId id) {
  for (const auto& s : specs())
    if (s.id == id) return s.name;
  return "?";
}

ModelId parse_model_id(const std::string& s) { return spec_for(s).id; }

std::vector<std::string> model_id_names() {
  std::vector<std::string> r;
  for (const auto& s : specs()) r.emplace_back(s.name);
  return r;
}

bool is_type_b(ModelId id) { return id == ModelId::BRational || id == ModelId::BTrig || id == ModelId::BExp; }

Asym& Asym::operator+=(const Asym& o) {
  if (o.D != 0) {
    if (D == 0 || o.lambda > lambda) {
      D = o.D;
      lambda = o.lambda;
    } else if (o.lambda == lambda) {
      D += o.D;
    }
  }
  G += o.G;
  L += o.L;
  P += o.P;
  return *this;
}

Asym operator+(Asym a, const Asym& b) { return a += b; }

std::string Asym::str() const {
  std::ostringstream os;
  bool any = false;
  auto term = [&](double c, const std::string& what) {
    if (c == 0) return;
    os << (any ? (c < 0 ? " - " : " + ") : (c < 0 ? "-" : "")) << fmt_double(std::fabs(c)) << what;
    any = true;
  };
  term(D, " e^{" + fmt_double(lambda) + " t}");
  term(G, " t^2");
  term(L, " t");
  term(P, " ln t");
  return any ? os.str() : "0";
}

int vanishing_order(const RationalPoly& p, const ZEnd& end) {
  if (p.is_zero()) return 1 << 20;
  RationalPoly factor = end.zstar_is_rational
                            ? RationalPoly(std::vector<Rational>{-end.zstar_rational, Rational(1)})
                            : RationalPoly(std::vector<Rational>{-end.zstar_square, Rational(0), Rational(1)});
  // An irrational root of a rational polynomial comes with its conjugate, so (z^2 - s) divides exactly.
  int order = 0;
  RationalPoly cur = p;
  while (cur.degree() >= factor.degree()) {
    auto [q, r] = divmod(cur, factor);
    if (!r.is_zero()) break;
    cur = q;
    ++order;
  }
  return order;
}

// ---------------------------------------------------------------------------
// ModelInstance

std::map<std::string, std::string> ModelInstance::param_strings() const {
  std::map<std::string, std::string> r;
  for (const auto& [k, v] : params_) r[k] = to_string(v);
  return r;
}

const GaugedOperator& ModelInstance::op(Side s) const {
  if (!exact_minus_) {
    throw ParameterError(name() + ": operator coefficients are irrational for these parameters (zeta^2 is not a square)");
  }
  return s == Side::Minus ? *exact_minus_ : *exact_plus_;
}

PolySubspace ModelInstance::kernel_space(Side s) const {
  if (is_type_b(id_)) return s == Side::Minus ? type_b_space(N_) : type_b_plus_space(N_);
  const Rational& alpha = params_.at("alpha");
  return s == Side::Minus ? x2_minus_space(N_, alpha) : x2_plus_space(N_, alpha);
}

PolySubspace ModelInstance::prefix_space(Side s, int k) const {
  if (k < 1) throw RangeError("prefix size must be positive");
  if (is_type_b(id_)) return s == Side::Minus ? type_a_space(k) : type_b_plus_space(k);
  if (k > N_) throw RangeError("X2 prefix larger than N");
  PolySubspace full = kernel_space(s);
  full.basis.resize(static_cast<std::size_t>(k));
  return full;
}

real ModelInstance::y(real x) const {
  switch (id_) {
    case ModelId::BRational: return k_ * x * x / 2;
    case ModelId::BTrig: return std::sin(a_ * x);
    case ModelId::BExp: return std::exp(x);
    case ModelId::X2Rational: return x * x;
    case ModelId::X2Hyper: return zeta_ * std::sinh(x);
    case ModelId::X2Exp: return std::exp(x);
  }
  return 0;
}

real ModelInstance::z(real x) const { return y(x) + shift_; }

real ModelInstance::zx(real x) const {
  switch (id_) {
    case ModelId::BRational: return k_ * x;
    case ModelId::BTrig: return a_ * std::cos(a_ * x);
    case ModelId::BExp: return std::exp(x);
    case ModelId::X2Rational: return 2 * x;
    case ModelId::X2Hyper: return zeta_ * std::cosh(x);
    case ModelId::X2Exp: return std::exp(x);
  }
  return 0;
}

real ModelInstance::zxx(real x) const {
  switch (id_) {
    case ModelId::BRational: return k_;
    case ModelId::BTrig: return -a_ * a_ * std::sin(a_ * x);
    case ModelId::BExp: return std::exp(x);
    case ModelId::X2Rational: return 2;
    case ModelId::X2Hyper: return zeta_ * std::sinh(x);
    case ModelId::X2Exp: return std::exp(x);
  }
  return 0;
}

real ModelInstance::T(Side s, real x) const {
  const real n = N_;
  const bool minus = s == Side::Minus;
  switch (id_) {
    case ModelId::BRational: {
      const real lx = std::log(std::fabs(x));
      const real c = z0_ * b1_ / k_;
      return minus ? (c - n + real(0.5)) * lx + b1_ * x * x / 4 : (real(0.5) - c) * lx - b1_ * x * x / 4;
    }
    case ModelId::BTrig: {
      const real sn = std::sin(a_ * x), cs = std::cos(a_ * x);
      const real a2 = real(a_) * a_;
      const real c = (2 * b1_ - n * a2) * z0_ / (4 * a2);
      const real lc = std::log(std::fabs(cs));
      const real lr = log_sin_ratio(sn, cs);
      if (minus) return (-(n - 1) / 2 - b1_ / a2) * lc + c * lr;
      return (-(n - 1) / 2 + b1_ / a2) * lc - c * lr;
    }
    case ModelId::BExp: {
      const real g = (2 * b1_ + n) * z0_ * std::exp(-x) / 2;
      return minus ? -(n - 1) * x / 2 + b1_ * x - g : -(n - 1) * x / 2 - b1_ * x + g;
    }
    case ModelId::X2Rational: {
      const real lx = std::log(std::fabs(x));
      return minus ? (alpha_ + real(0.5)) * lx - x * x / 2 : (-alpha_ - n + real(0.5)) * lx + x * x / 2;
    }
    case ModelId::X2Hyper: {
      const real sh = zeta_ * std::sinh(x) / 2 + zeta_ * std::atan(std::sinh(x));
      return minus ? -sh - (n / 2 - 1) * log_cosh(x) : sh - (n / 2) * log_cosh(x);
    }
    case ModelId::X2Exp: {
      const real kappa = (2 * zeta_ - 2 * alpha_ - n + 1) / 2;
      const real g = -std::exp(x) / 2 + kappa * zeta_ * std::exp(-x);
      return minus ? g - (n - 2) * x / 2 : -g - n * x / 2;
    }
  }
  return 0;
}

double ModelInstance::gauge_derivative_z(Side s, double zv) const {
  const auto& o = op_double(s);
  const double A = o.A.eval(zv);
  const double Ap = o.A.derivative().eval(zv);
  const double sgn = s == Side::Minus ? -1.0 : 1.0;
  return (N_ - 1) * Ap / (4 * A) + sgn * o.Q.eval(zv) / (2 * A);
}

real ModelInstance::V(Side s, real x) const {
  const auto& vx = s == Side::Minus ? vxd_minus_ : vxd_plus_;
  if (vx) return vx->eval<real>(x);
  const auto& vy = s == Side::Minus ? vy_minus_ : vy_plus_;
  return vy.eval<real>(y(x));
}

SectorEntry ModelInstance::make_entry(Side s, int index, const RationalPoly& poly, std::string description) const {
  SectorEntry e;
  e.index = index;
  e.poly = poly;
  e.poly_y = to_double_poly(poly).compose(Poly<double>(std::vector<double>{shift_, 1.0}));
  e.description = std::move(description);
  const RationalFunction& r = rho(s);
  for (int end = 0; end < 2; ++end) {
    const ZEnd& ze = z_ends_[static_cast<std::size_t>(end)];
    Asym a = gauge_asym(s, end);
    if (ze.z_infinite) {
      const int d = poly.degree() + r.num().degree() - r.den().degree();
      a += ze.log_z.scaled(d);
    } else {
      const int ord = vanishing_order(poly, ze) + vanishing_order(r.num(), ze) - vanishing_order(r.den(), ze);
      a += ze.log_z.scaled(ord);
    }
    e.endpoint_exponents[static_cast<std::size_t>(end)] = a;
  }
  return e;
}

SectorBasis ModelInstance::sector(Side s, int truncation) const {
  SectorBasis b;
  b.side = s;
  b.gauge_factor = gauge_description(s);
  if (is_type_b(id_)) {
    b.infinite_flag = true;
    b.flag_invariant = true;
    b.truncation = truncation < 0 ? N_ + 2 : truncation;
    for (int j = 0; j < b.truncation; ++j) {
      const int deg = (s == Side::Minus || j == 0) ? j : j + 1;
      b.entries.push_back(make_entry(s, j, RationalPoly::monomial(deg), "z^" + std::to_string(deg)));
    }
    // Kernel: minus {1, ..., z^{N-2}, z^N}; plus z^{-1}{1, z^2, ..., z^N}.
    for (int j = 0; j < b.truncation; ++j) {
      const int deg = b.entries[static_cast<std::size_t>(j)].poly.degree();
      const bool in = s == Side::Minus ? (deg <= N_ - 2 || deg == N_) : deg <= N_;
      if (in) b.kernel_indices.push_back(j);
    }
  } else {
    const PolySubspace sp = kernel_space(s);
    b.truncation = N_;
    b.flag_invariant = id_ == ModelId::X2Rational;  // a2 = 0
    for (int n = 0; n < N_; ++n) {
      const std::string d = s == Side::Minus ? "phi_" + std::to_string(n + 1) : "chibar_" + std::to_string(n + 1);
      b.entries.push_back(make_entry(s, n, sp.basis[static_cast<std::size_t>(n)], d));
      b.kernel_indices.push_back(n);
    }
  }
  return b;
}

LogValue ModelInstance::log_sector(Side s, const SectorEntry& entry, real x) const {
  const RatFunc<double>& r = s == Side::Minus ? rho_y_minus_ : rho_y_plus_;
  const real yv = y(x);
  const LogValue pv = log_abs_poly(entry.poly_y, yv);
  const LogValue rn = log_abs_poly(r.num(), yv);
  const LogValue rd = log_abs_poly(r.den(), yv);
  LogValue out;
  if (pv.sign == 0 || rn.sign == 0) return out;
  if (rd.sign == 0) {
    out.log_abs = kInf;
    out.sign = pv.sign * rn.sign;
    return out;
  }
  out.log_abs = static_cast<double>(T(s, x)) + pv.log_abs + rn.log_abs - rd.log_abs;
  out.sign = pv.sign * rn.sign * rd.sign;
  return out;
}

std::string ModelInstance::gauge_description(Side s) const {
  const bool minus = s == Side::Minus;
  switch (id_) {
    case ModelId::BRational:
      return minus ? "x^{z0 b1/k - N + 1/2} exp(b1 x^2/4)" : "z^{-1} x^{1/2 - z0 b1/k} exp(-b1 x^2/4)";
    case ModelId::BTrig:
      return minus ? "|cos ax|^{-(N-1)/2 - b1/a^2} ((1+sin ax)/(1-sin ax))^{c}"
                   : "z^{-1} |cos ax|^{-(N-1)/2 + b1/a^2} ((1+sin ax)/(1-sin ax))^{-c}";
    case ModelId::BExp:
      return minus ? "exp(-(N-1)x/2 + b1 x - (2b1+N) z0 e^{-x}/2)"
                   : "z^{-1} exp(-(N-1)x/2 - b1 x + (2b1+N) z0 e^{-x}/2)";
    case ModelId::X2Rational:
      return minus ? "x^{alpha+1/2} e^{-x^2/2} / f(z;alpha)" : "x^{-alpha-N+1/2} e^{x^2/2} / f(z;alpha+N)";
    case ModelId::X2Hyper:
      return minus ? "cosh^{1-N/2} x exp(-zeta sinh x/2 - zeta gd x)" : "cosh^{-N/2} x exp(zeta sinh x/2 + zeta gd x)";
    case ModelId::X2Exp:
      return minus ? "exp(-e^x/2 + kappa zeta e^{-x} - (N-2)x/2)" : "exp(e^x/2 - kappa zeta e^{-x} - N x/2)";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Construction

std::map<std::string, std::string> default_model_params(const std::string& id) {
  std::map<std::string, std::string> r;
  for (const auto& [k, v] : spec_for(id).defaults) r[k] = v;
  return r;
}

ModelInstance build_model(const std::string& id, int N, const std::map<std::string, std::string>& given) {
  const ModelSpec& spec = spec_for(id);
  if (N < 1) throw ParameterError("N must be a positive integer");

  ModelInstance m;
  m.id_ = spec.id;
  m.N_ = N;
  for (const auto& [k, v] : spec.defaults) m.params_[k] = parse_rational(v);
  std::optional<double> zeta_value;
  for (const auto& [k, v] : given) {
    if (k == "zeta" && (spec.id == ModelId::X2Hyper || spec.id == ModelId::X2Exp)) {
      zeta_value = std::stod(v);
      continue;
    }
    if (!m.params_.count(k)) throw ParameterError(id + " has no parameter '" + k + "'");
    m.params_[k] = parse_rational(v);
  }
  auto P = [&](const char* k) { return m.params_.at(k); };
  const Rational one(1), zero(0);
  const Rational c0 = P("c0");
  const Rational n(N);

  std::vector<Rational> a(5, zero);
  Rational b1;
  bool type_b = is_type_b(spec.id);
  RationalPoly ymap;  // z - shift as a polynomial in x, when polynomial
  Rational shift(0);
  bool exact = true;
  Rational alpha, zeta2;

  switch (spec.id) {
    case ModelId::BRational: {
      const Rational k = P("k"), z0 = P("z0");
      if (!(k > 0)) throw ParameterError("B.rational requires k > 0");
      if (!(z0 > 0)) throw ParameterError("B.rational requires z0 > 0");
      b1 = P("b1");
      a[0] = -k * z0;
      a[1] = k;
      shift = z0;
      ymap = RationalPoly(std::vector<Rational>{zero, zero, k / 2});
      m.domain0_ = Interval{0.0, kInf};
      m.even_ = true;
      m.k_ = to_double(k);
      m.z0_ = to_double(z0);
      m.b1_ = to_double(b1);
      break;
    }
    case ModelId::BTrig: {
      const Rational aa = P("a"), z0 = P("z0");
      if (!(z0 > 1)) throw ParameterError("B.trig requires z0 > 1");
      if (!(aa > 0)) throw ParameterError("B.trig requires a > 0");
      b1 = P("b1");
      const Rational a2 = aa * aa;
      a[0] = a2 * (one - z0 * z0) / 2;
      a[1] = a2 * z0;
      a[2] = -a2 / 2;
      shift = z0;
      const double ad = to_double(aa);
      m.domain0_ = Interval{-static_cast<double>(kPi) / (2 * ad), static_cast<double>(kPi) / (2 * ad)};
      m.a_ = ad;
      m.z0_ = to_double(z0);
      m.b1_ = to_double(b1);
      break;
    }
    case ModelId::BExp: {
      const Rational z0 = P("z0");
      if (!(z0 > 0)) throw ParameterError("B.exp requires z0 > 0");
      b1 = P("b1");
      a[0] = z0 * z0 / 2;
      a[1] = -z0;
      a[2] = one / 2;
      shift = z0;
      m.domain0_ = Interval{-kInf, kInf};
      m.z0_ = to_double(z0);
      m.b1_ = to_double(b1);
      break;
    }
    case ModelId::X2Rational:
    case ModelId::X2Hyper:
    case ModelId::X2Exp: {
      alpha = P("alpha");
      if (!(alpha > 1)) throw ParameterError(id + " requires alpha > 1");
      m.alpha_ = to_double(alpha);
      zeta2 = (alpha - 1) * (alpha + n - 1);
      if (spec.id != ModelId::X2Rational) {
        if (!(zeta2 > 0)) throw ParameterError(id + " requires zeta^2 = (alpha-1)(alpha+N-1) > 0");
        const Rational sgn = P("zeta_sign");
        if (sgn != 1 && sgn != -1) throw ParameterError(id + " requires zeta_sign = +1 or -1");
        double zabs = std::sqrt(to_double(zeta2));
        if (zeta_value) {
          if (std::fabs(std::fabs(*zeta_value) - zabs) > 1e-9 * std::max(1.0, zabs) || *zeta_value == 0) {
            throw ParameterError(id + " requires zeta = +-sqrt((alpha-1)(alpha+N-1)) = +-" + fmt_double(zabs));
          }
          m.params_["zeta_sign"] = Rational(*zeta_value > 0 ? 1 : -1);
        }
        m.zeta_ = to_double(m.params_["zeta_sign"]) * zabs;
      }
      if (spec.id == ModelId::X2Rational) {
        m.domain0_ = Interval{0.0, kInf};
        m.even_ = true;
        ymap = RationalPoly(std::vector<Rational>{zero, zero, one});
      } else {
        m.domain0_ = Interval{-kInf, kInf};
      }
      if (spec.id == ModelId::X2Exp) {
        Rational root;
        if (rational_sqrt(zeta2, root)) {
          shift = -root * P("zeta_sign");
        } else {
          exact = false;
        }
      }
      break;
    }
  }

  // Operators and potentials.
  const Rational a1x = spec.id == ModelId::X2Rational ? Rational(2) : zero;
  const Rational a2x = spec.id == ModelId::X2Rational ? zero : one / 2;
  if (exact) {
    for (Side s : {Side::Minus, Side::Plus}) {
      GaugedOperator op;
      if (type_b) {
        op = type_b_operator<Rational>(N, a, b1, c0, s);
      } else {
        const Rational a1 = spec.id == ModelId::X2Exp ? -shift : a1x;  // a1 = zeta
        op = x2_operator<Rational>(N, alpha, a1, a2x, c0, s);
      }
      const RationalFunction Vz = physical_potential(op);
      const RationalFunction Vy = compose_func(Vz, RationalPoly(std::vector<Rational>{shift, one}));
      GaugedOperatorT<double> od;
      od.A = to_double_poly(op.A);
      od.Q = to_double_func(op.Q);
      od.C = to_double_func(op.C);
      od.N = N;
      od.wshift = to_double_func(op.wshift);
      od.side = s;
      std::optional<RationalFunction> vx;
      if (!ymap.is_zero()) vx = compose_func(Vy, ymap);
      if (s == Side::Minus) {
        m.exact_minus_ = op;
        m.dbl_minus_ = od;
        m.vz_minus_ = to_double_func(Vz);
        m.vy_minus_ = to_double_func(Vy);
        m.vx_minus_ = vx;
        if (vx) m.vxd_minus_ = to_double_func(*vx);
      } else {
        m.exact_plus_ = op;
        m.dbl_plus_ = od;
        m.vz_plus_ = to_double_func(Vz);
        m.vy_plus_ = to_double_func(Vy);
        m.vx_plus_ = vx;
        if (vx) m.vxd_plus_ = to_double_func(*vx);
      }
    }
    m.shift_ = to_double(shift);
  } else {
    // X2.exp with irrational zeta: the potential is built in Q(sqrt(zeta^2)), the operator in double.
    const double zt = m.zeta_;
    m.shift_ = -zt;
    const Surd zs(Rational(0), P("zeta_sign"), zeta2);
    for (Side s : {Side::Minus, Side::Plus}) {
      auto od = x2_operator<double>(N, m.alpha_, zt, 0.5, to_double(c0), s);
      const auto os = x2_operator<Surd>(N, Surd(alpha, 0, zeta2), zs, Surd(Rational(1, 2), 0, zeta2),
                                        Surd(c0, 0, zeta2), s);
      const RatFunc<Surd> vzs = physical_potential(os);
      const RatFunc<double> Vz = surd_to_double(vzs);
      const RatFunc<double> Vy = surd_to_double(compose_func(vzs, Poly<Surd>(std::vector<Surd>{-zs, Surd(1)})));
      if (s == Side::Minus) {
        m.dbl_minus_ = od;
        m.vz_minus_ = Vz;
        m.vy_minus_ = Vy;
      } else {
        m.dbl_plus_ = od;
        m.vz_plus_ = Vz;
        m.vy_plus_ = Vy;
      }
    }
  }

  // rho and prefactors.
  const RationalFunction unit = RationalFunction::constant(one);
  const RationalFunction inv_z(RationalPoly::constant(one), RationalPoly::z());
  if (type_b) {
    m.rho_minus_ = unit;
    m.rho_plus_ = inv_z;
    m.pref_minus_ = unit;
    m.pref_plus_ = inv_z;
  } else {
    const RationalPoly fa = x2_f(alpha), fan = x2_f(alpha + n);
    m.rho_minus_ = RationalFunction(RationalPoly::constant(one), fa);
    m.rho_plus_ = RationalFunction(RationalPoly::constant(one), fan);
    m.pref_minus_ = unit;
    m.pref_plus_ = RationalFunction(RationalPoly::constant(one), fa * fan);
  }
  const Poly<double> ysub(std::vector<double>{m.shift_, 1.0});
  m.rho_y_minus_ = compose_func(to_double_func(m.rho_minus_), ysub);
  m.rho_y_plus_ = compose_func(to_double_func(m.rho_plus_), ysub);

  // Endpoint data: z behaviour and gauge-factor asymptotics [side][end].
  auto finite_end = [](const Rational& zs, Asym la) {
    ZEnd e;
    e.z_infinite = false;
    e.zstar_rational = zs;
    e.zstar = to_double(zs);
    e.log_z = la;
    return e;
  };
  auto infinite_end = [](Asym la) {
    ZEnd e;
    e.z_infinite = true;
    e.log_z = la;
    return e;
  };
  const Asym P2{0, 0, 0, 0, 2}, Lp{0, 0, 0, 1, 0}, Lm{0, 0, 0, -1, 0};
  const double Nd = N;
  auto& ga = m.gauge_asym_;
  switch (spec.id) {
    case ModelId::BRational: {
      m.z_ends_ = {finite_end(shift, P2), infinite_end(P2)};
      const double c = m.z0_ * m.b1_ / m.k_;
      ga[0] = {Asym{0, 0, 0, 0, c - Nd + 0.5}, Asym{0, 0, m.b1_ / 4, 0, c - Nd + 0.5}};
      ga[1] = {Asym{0, 0, 0, 0, 0.5 - c}, Asym{0, 0, -m.b1_ / 4, 0, 0.5 - c}};
      break;
    }
    case ModelId::BTrig: {
      m.z_ends_ = {finite_end(shift - 1, P2), finite_end(shift + 1, P2)};
      const double a2 = m.a_ * m.a_;
      const double c = (2 * m.b1_ - Nd * a2) * m.z0_ / (4 * a2);
      const double e1 = -(Nd - 1) / 2 - m.b1_ / a2, e2 = -(Nd - 1) / 2 + m.b1_ / a2;
      ga[0] = {Asym{0, 0, 0, 0, e1 + 2 * c}, Asym{0, 0, 0, 0, e1 - 2 * c}};
      ga[1] = {Asym{0, 0, 0, 0, e2 - 2 * c}, Asym{0, 0, 0, 0, e2 + 2 * c}};
      break;
    }
    case ModelId::BExp: {
      m.z_ends_ = {finite_end(shift, Lm), infinite_end(Lp)};
      const double D = (2 * m.b1_ + Nd) * m.z0_ / 2;
      ga[0] = {Asym{-D, 1, 0, (Nd - 1) / 2 - m.b1_, 0}, Asym{0, 0, 0, -(Nd - 1) / 2 + m.b1_, 0}};
      ga[1] = {Asym{D, 1, 0, (Nd - 1) / 2 + m.b1_, 0}, Asym{0, 0, 0, -(Nd - 1) / 2 - m.b1_, 0}};
      break;
    }
    case ModelId::X2Rational: {
      m.z_ends_ = {finite_end(zero, P2), infinite_end(P2)};
      const double pm = m.alpha_ + 0.5, pp = -m.alpha_ - Nd + 0.5;
      ga[0] = {Asym{0, 0, 0, 0, pm}, Asym{0, 0, -0.5, 0, pm}};
      ga[1] = {Asym{0, 0, 0, 0, pp}, Asym{0, 0, 0.5, 0, pp}};
      break;
    }
    case ModelId::X2Hyper: {
      m.z_ends_ = {infinite_end(Lp), infinite_end(Lp)};
      const double q = m.zeta_ / 4;
      ga[0] = {Asym{q, 1, 0, -(Nd / 2 - 1), 0}, Asym{-q, 1, 0, -(Nd / 2 - 1), 0}};
      ga[1] = {Asym{-q, 1, 0, -Nd / 2, 0}, Asym{q, 1, 0, -Nd / 2, 0}};
      break;
    }
    case ModelId::X2Exp: {
      ZEnd lo;
      lo.z_infinite = false;
      lo.log_z = Lm;
      lo.zstar = -m.zeta_;
      if (exact) {
        lo.zstar_rational = shift;
      } else {
        lo.zstar_is_rational = false;
        lo.zstar_square = zeta2;
        lo.zstar_sign = m.zeta_ > 0 ? -1 : 1;
      }
      m.z_ends_ = {lo, infinite_end(Lp)};
      const double kz = (2 * m.zeta_ - 2 * m.alpha_ - Nd + 1) / 2 * m.zeta_;
      ga[0] = {Asym{kz, 1, 0, (Nd - 2) / 2, 0}, Asym{-0.5, 1, 0, -(Nd - 2) / 2, 0}};
      ga[1] = {Asym{-kz, 1, 0, Nd / 2, 0}, Asym{0.5, 1, 0, -Nd / 2, 0}};
      break;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// PCT

PdmModelInstance::PdmModelInstance(ModelInstance base, MassProfile mass, UConvention conv, int mirror,
                                   Interval domain, std::array<EndMap, 2> ends)
    : base_(std::move(base)),
      mass_(std::move(mass)),
      conv_(conv),
      mirror_(mirror),
      domain_(domain),
      ends_(ends) {}

real PdmModelInstance::x_of_q(real q) const {
  if (constant_mass()) return q;
  return mirror_ * mass_.u(q, conv_);
}

real PdmModelInstance::dx_dq(real q) const {
  if (constant_mass()) return 1;
  return mirror_ * mass_.du(q, conv_);
}

real PdmModelInstance::d2x_dq2(real q) const {
  if (constant_mass()) return 0;
  const real s = mass_.du(q, conv_) / mass_.sqrt_m(q);  // convention scale
  return mirror_ * s * mass_.dm(q) / (2 * mass_.sqrt_m(q));
}

real PdmModelInstance::U(Side s, real q) const {
  if (constant_mass()) return base_.V(s, q);
  return base_.V(s, x_of_q(q)) + mass_.mass_term(q);
}

LogValue PdmModelInstance::log_sector(Side s, const SectorEntry& entry, real q) const {
  if (constant_mass()) return base_.log_sector(s, entry, q);
  LogValue v = base_.log_sector(s, entry, x_of_q(q));
  if (v.sign != 0) v.log_abs += static_cast<double>(mass_.log_m(q) / 4);
  return v;
}

PdmModelInstance pct_map(const ModelInstance& base, const MassProfile& mass, UConvention conv) {
  const Interval& d0 = base.domain0();
  if (mass.id() == "const") {
    std::array<EndMap, 2> ends{EndMap{false, 0, d0.lo}, EndMap{false, 1, d0.hi}};
    return PdmModelInstance(base, mass, conv, 1, d0, ends);
  }
  if (conv == UConvention::Alternative && !mass.has_alternative_u()) {
    throw ParameterError("mass profile '" + mass.id() + "' has no alternative u convention");
  }
  const Interval img = mass.u_image(conv);
  auto fits = [&](double lo, double hi) {
    const double tol = 1e-12;
    return lo >= d0.lo - tol * std::max(1.0, std::fabs(d0.lo)) && hi <= d0.hi + tol * std::max(1.0, std::fabs(d0.hi));
  };
  int mirror = 0;
  if (fits(img.lo, img.hi)) {
    mirror = 1;
  } else if (base.even() && fits(-img.hi, -img.lo)) {
    mirror = -1;
  } else {
    throw GeometryError("u maps the domain of mass '" + mass.id() + "' onto " + img.str() +
                        ", which does not lie in the domain " + d0.str() + " of " + base.name() +
                        (base.even() ? " (or its mirror image)" : ""));
  }
  std::array<EndMap, 2> ends{};
  const double lims[2] = {mirror * img.lo, mirror * img.hi};
  for (int e = 0; e < 2; ++e) {
    EndMap em;
    em.x_limit = lims[e];
    if (same_limit(lims[e], d0.lo)) {
      em.base_end = 0;
    } else if (same_limit(lims[e], d0.hi)) {
      em.base_end = 1;
    } else {
      em.regular = true;
    }
    ends[static_cast<std::size_t>(e)] = em;
  }
  return PdmModelInstance(base, mass, conv, mirror, mass.domain(), ends);
}

std::vector<std::function<double(double)>> sector_functions(const PdmModelInstance& model, Side side, int count,
                                                            int truncation) {
  if (count < 0) throw RangeError("count must be non-negative");
  const SectorBasis b = model.sector(side, truncation);
  if (count > static_cast<int>(b.entries.size())) {
    throw RangeError("requested " + std::to_string(count) + " sector functions but only " +
                     std::to_string(b.entries.size()) + " are available");
  }
  std::vector<std::function<double(double)>> r;
  for (int j = 0; j < count; ++j) {
    SectorEntry e = b.entries[static_cast<std::size_t>(j)];
    r.emplace_back([model, side, e](double q) { return model.log_sector(side, e, q).value(); });
  }
  return r;
}

std::vector<std::function<double(double)>> sector_functions(const ModelInstance& model, Side side, int count,
                                                            int truncation) {
  return sector_functions(pct_map(model, make_profile("const")), side, count, truncation);
}

}  // namespace nfsusy
