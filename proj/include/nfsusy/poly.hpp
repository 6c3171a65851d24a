#pragma once

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nfsusy/rational.hpp"

namespace nfsusy {

// Dense univariate polynomial in z; coefficient i multiplies z^i.
template <class T>
class Poly {
 public:
  using Traits = ScalarTraits<T>;

  Poly() = default;
  explicit Poly(std::vector<T> c) : c_(std::move(c)) { trim(); }

  static Poly constant(const T& v) { return Poly(std::vector<T>{v}); }
  static Poly monomial(int deg, const T& coef = T(1)) {
    std::vector<T> c(static_cast<std::size_t>(deg) + 1, T(0));
    c.back() = coef;
    return Poly(std::move(c));
  }
  static Poly z() { return monomial(1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coeffs() const { return c_; }
  T coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(i)] : T(0);
  }
  T leading() const { return c_.empty() ? T(0) : c_.back(); }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<T> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * T(static_cast<long>(i));
    return Poly(std::move(d));
  }

  template <class X>
  X eval(const X& x) const {
    X acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + X(*it);
    return acc;
  }
  double eval_double(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Traits::to_double(*it);
    return acc;
  }

  Poly operator-() const {
    Poly r(*this);
    for (auto& v : r.c_) v = -v;
    return r;
  }
  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  Poly& operator*=(const T& s) {
    for (auto& v : c_) v *= s;
    trim();
    return *this;
  }
  Poly& operator/=(const T& s) {
    for (auto& v : c_) v /= s;
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const T& s) { return a *= s; }
  friend Poly operator*(const T& s, Poly a) { return a *= s; }
  friend Poly operator/(Poly a, const T& s) { return a /= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (Traits::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  // Euclidean division: a = q*b + r with deg r < deg b.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<T> rem = a.c_;
    const int db = b.degree();
    const int da = a.degree();
    if (da < db) return {Poly(), a};
    std::vector<T> quo(static_cast<std::size_t>(da - db) + 1, T(0));
    const T lb = b.leading();
    for (int k = da - db; k >= 0; --k) {
      T f = rem[static_cast<std::size_t>(k + db)] / lb;
      quo[static_cast<std::size_t>(k)] = f;
      if (Traits::is_zero(f)) continue;
      for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k + j)] -= f * b.c_[static_cast<std::size_t>(j)];
      rem[static_cast<std::size_t>(k + db)] = T(0);
    }
    rem.resize(static_cast<std::size_t>(db));
    return {Poly(std::move(quo)), Poly(std::move(rem))};
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return *this / leading();
  }

  // Composition p(q(z)).
  Poly compose(const Poly& q) const {
    Poly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * q + constant(*it);
    return acc;
  }

  std::string str(const std::string& var = "z") const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      const T& v = c_[static_cast<std::size_t>(i)];
      if (Traits::is_zero(v)) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << v << ")";
      if (i >= 1) os << "*" << var;
      if (i >= 2) os << "^" << i;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && Traits::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<T> c_;
};

template <class T>
Poly<T> poly_gcd(Poly<T> a, Poly<T> b) {
  while (!b.is_zero()) {
    auto qr = divmod(a, b);
    a = std::move(b);
    b = std::move(qr.second);
  }
  return a.monic();
}

// Quotient num/den of polynomials. Exact scalars are kept in lowest terms with a monic denominator.
template <class T>
class RatFunc {
 public:
  using P = Poly<T>;
  using Traits = ScalarTraits<T>;

  RatFunc() : num_(), den_(P::constant(T(1))) {}
  RatFunc(const P& p) : num_(p), den_(P::constant(T(1))) {}  // NOLINT: implicit lift is intended
  RatFunc(P n, P d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
    normalize();
  }
  static RatFunc constant(const T& v) { return RatFunc(P::constant(v)); }

  const P& num() const { return num_; }
  const P& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }
  P as_polynomial() const {
    if (!is_polynomial()) throw std::domain_error("rational function is not a polynomial");
    return num_ / den_.leading();
  }

  RatFunc derivative() const {
    return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  template <class X>
  X eval(const X& x) const {
    return num_.eval(x) / den_.eval(x);
  }
  double eval_double(double x) const { return num_.eval_double(x) / den_.eval_double(x); }

  RatFunc operator-() const { return RatFunc(-num_, den_, NoNormalize{}); }
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw std::domain_error("rational function division by zero");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend RatFunc operator*(const RatFunc& a, const T& s) { return RatFunc(a.num_ * s, a.den_); }
  friend RatFunc operator*(const T& s, const RatFunc& a) { return RatFunc(a.num_ * s, a.den_); }
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }

  // Equality of exact forms; both operands are in lowest terms.
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::string str(const std::string& var = "z") const {
    if (is_polynomial()) return (num_ / den_.leading()).str(var);
    return "[" + num_.str(var) + "] / [" + den_.str(var) + "]";
  }

 private:
  struct NoNormalize {};
  RatFunc(P n, P d, NoNormalize) : num_(std::move(n)), den_(std::move(d)) {}

  void normalize() {
    if (num_.is_zero()) {
      den_ = P::constant(T(1));
      return;
    }
    if constexpr (Traits::exact) {
      if (den_.degree() > 0) {
        P g = poly_gcd(num_, den_);
        if (g.degree() > 0) {
          num_ = divmod(num_, g).first;
          den_ = divmod(den_, g).first;
        }
      }
      T lead = den_.leading();
      num_ /= lead;
      den_ /= lead;
    }
  }

  P num_;
  P den_;
};

using RationalPoly = Poly<Rational>;
using RationalFunction = RatFunc<Rational>;

// Converts exact coefficients to double for fast evaluation.
inline Poly<double> to_double_poly(const RationalPoly& p) {
  std::vector<double> c;
  c.reserve(p.coeffs().size());
  for (const auto& v : p.coeffs()) c.push_back(v.get_d());
  return Poly<double>(std::move(c));
}
inline RatFunc<double> to_double_func(const RationalFunction& f) {
  return RatFunc<double>(to_double_poly(f.num()), to_double_poly(f.den()));
}

}  // namespace nfsusy
