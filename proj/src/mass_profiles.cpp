#include "nfsusy/mass_profiles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/constants/constants.hpp>
#include <sstream>

#include "nfsusy/errors.hpp"

namespace nfsusy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const real kPi = boost::math::constants::pi<real>();

double param_or(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void reject_unknown(const std::map<std::string, double>& p, std::initializer_list<const char*> allowed,
                    const std::string& id) {
  for (const auto& kv : p) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || kv.first == a;
    if (!ok) throw ParameterError("mass profile '" + id + "' has no parameter '" + kv.first + "'");
  }
}

// log(sech x) without overflow.
real log_sech(real x) {
  const real ax = std::fabs(x);
  return -(ax + std::log1p(std::exp(-2 * ax)) - std::log(real(2)));
}

// Integral of sqrt(m) over [a, b] with an absolute tolerance scaled to the result.
real integrate_sqrt_m(const MassProfile::Fn& m, real a, real b) {
  if (a == b) return 0;
  real err = 0;
  auto f = [&](real q) { return std::sqrt(m(q)); };
  const real val =
      boost::math::quadrature::gauss_kronrod<real, 61>::integrate(f, a, b, 15, real(1e-14), &err);
  const real bound = real(1e-10) * std::max(real(1), std::fabs(val));
  if (!(err <= bound) || !std::isfinite(static_cast<double>(val))) {
    throw NumericError("quadrature for u(q) did not reach the requested accuracy", static_cast<double>(err));
  }
  return val;
}

}  // namespace

std::string Interval::str() const {
  auto fmt = [](double v) {
    if (std::isinf(v)) return std::string(v < 0 ? "-inf" : "inf");
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  return "(" + fmt(lo) + ", " + fmt(hi) + ")";
}

const char* u_kind_name(UKind k) { return k == UKind::ClosedForm ? "closed_form" : "quadrature"; }

MassProfile::MassProfile(std::string id, std::map<std::string, double> params, Interval domain, Fn m, Fn dm,
                         Fn d2m, Fn log_m, Fn u_closed, std::array<EndpointBehavior, 2> ends)
    : id_(std::move(id)),
      params_(std::move(params)),
      domain_(domain),
      kind_(UKind::ClosedForm),
      m_(std::move(m)),
      dm_(std::move(dm)),
      d2m_(std::move(d2m)),
      log_m_(std::move(log_m)),
      u_(std::move(u_closed)),
      ends_(ends) {}

void MassProfile::check_inside(real q) const {
  const double qd = static_cast<double>(q);
  if (!(qd > domain_.lo && qd < domain_.hi)) {
    std::ostringstream os;
    os.precision(17);
    os << "q = " << qd << " is outside the domain " << domain_.str() << " of mass profile '" << id_ << "'";
    throw DomainError(os.str());
  }
}

real MassProfile::u(real q, UConvention conv) const {
  check_inside(q);
  if (conv == UConvention::Alternative) {
    if (!u_alt_) throw ParameterError("mass profile '" + id_ + "' has no alternative u convention");
    return u_alt_(q);
  }
  if (kind_ == UKind::ClosedForm) return u_(q);
  return anchor_value_ + integrate_sqrt_m(m_, anchor_, q);
}

real MassProfile::du(real q, UConvention conv) const {
  check_inside(q);
  const real s = std::sqrt(m_(q));
  return conv == UConvention::Alternative ? alt_scale_ * s : s;
}

Interval MassProfile::u_image(UConvention conv) const {
  Interval r{ends_[0].u_limit, ends_[1].u_limit};
  if (conv == UConvention::Alternative) {
    if (!u_alt_) throw ParameterError("mass profile '" + id_ + "' has no alternative u convention");
    r.lo = std::isinf(r.lo) ? r.lo : static_cast<double>(alt_scale_ * r.lo);
    r.hi = std::isinf(r.hi) ? r.hi : static_cast<double>(alt_scale_ * r.hi);
  }
  return r;
}

real MassProfile::mass_term(real q) const {
  const real mv = m_(q);
  const real d1 = dm_(q);
  const real d2 = d2m_(q);
  return d2 / (8 * mv * mv) - 7 * d1 * d1 / (32 * mv * mv * mv);
}

void MassProfile::set_alternative_u(Fn u_alt, real scale, std::string note) {
  u_alt_ = std::move(u_alt);
  alt_scale_ = scale;
  alt_note_ = std::move(note);
}

MassProfile MassProfile::quadrature_variant(double anchor) const {
  MassProfile r = *this;
  r.kind_ = UKind::Quadrature;
  r.anchor_ = anchor;
  r.anchor_value_ = u(anchor);
  return r;
}

MassProfile MassProfile::from_function(std::string id, Interval domain, Fn m, Fn dm, Fn d2m) {
  double mid = 0.0;
  if (!domain.lo_infinite() && !domain.hi_infinite()) mid = 0.5 * (domain.lo + domain.hi);
  else if (!domain.lo_infinite()) mid = domain.lo + 1.0;
  else if (!domain.hi_infinite()) mid = domain.hi - 1.0;
  auto mm = m;
  Fn logm = [mm](real q) { return std::log(mm(q)); };
  MassProfile p(std::move(id), {}, domain, std::move(m), std::move(dm), std::move(d2m), std::move(logm), nullptr,
                {});
  p.kind_ = UKind::Quadrature;
  p.anchor_ = mid;
  p.anchor_value_ = 0;
  // End limits of u by quadrature towards each end (best effort; infinite if it keeps growing).
  for (int e = 0; e < 2; ++e) {
    const double end = e == 0 ? domain.lo : domain.hi;
    double lim;
    try {
      if (std::isinf(end)) {
        const real far = mid + (e == 0 ? -1 : 1) * real(1e3);
        const real v1 = p.u(far);
        const real v2 = p.u(mid + (e == 0 ? -1 : 1) * real(2e3));
        lim = std::fabs(v2 - v1) < 1e-8 ? static_cast<double>(v2) : (e == 0 ? -kInf : kInf);
      } else {
        lim = static_cast<double>(p.u(end + (e == 0 ? 1 : -1) * 1e-12));
      }
    } catch (const NumericError&) {
      lim = e == 0 ? -kInf : kInf;
    }
    p.ends_[static_cast<std::size_t>(e)].u_limit = lim;
  }
  return p;
}

MassProfile make_profile(const std::string& id, const std::map<std::string, double>& params) {
  if (id == "const") {
    reject_unknown(params, {}, id);
    return MassProfile(
        id, params, Interval{}, [](real) { return real(1); }, [](real) { return real(0); },
        [](real) { return real(0); }, [](real) { return real(0); }, [](real q) { return q; },
        {EndpointBehavior{"1", -kInf, false}, EndpointBehavior{"1", kInf, false}});
  }
  if (id == "expdecay") {
    reject_unknown(params, {"b"}, id);
    const real b = param_or(params, "b", 1.0);
    if (!(b > 0)) throw ParameterError("expdecay mass requires b > 0");
    std::map<std::string, double> p{{"b", static_cast<double>(b)}};
    return MassProfile(
        id, p, Interval{}, [b](real q) { return std::exp(-b * q); }, [b](real q) { return -b * std::exp(-b * q); },
        [b](real q) { return b * b * std::exp(-b * q); }, [b](real q) { return -b * q; },
        [b](real q) { return -(2 / b) * std::exp(-b * q / 2); },
        {EndpointBehavior{"e^{-bq} -> inf", -kInf, true}, EndpointBehavior{"e^{-bq} -> 0", 0.0, false}});
  }
  if (id == "gauss2") {
    reject_unknown(params, {}, id);
    const real c = 2 / kPi;
    const double lim = static_cast<double>(1 / std::sqrt(real(2)));
    MassProfile p(
        id, params, Interval{}, [c](real q) { return c * std::exp(-2 * q * q); },
        [c](real q) { return -4 * q * c * std::exp(-2 * q * q); },
        [c](real q) { return (16 * q * q - 4) * c * std::exp(-2 * q * q); },
        [c](real q) { return std::log(c) - 2 * q * q; }, [](real q) { return std::erf(q) / std::sqrt(real(2)); },
        {EndpointBehavior{"(2/pi) e^{-2q^2} -> 0", -lim, false}, EndpointBehavior{"(2/pi) e^{-2q^2} -> 0", lim, false}});
    p.set_alternative_u([](real q) { return std::erf(q); }, std::sqrt(real(2)),
                        "u = erf q, a factor sqrt(2) larger than int sqrt(m) dq");
    return p;
  }
  if (id == "sech2") {
    reject_unknown(params, {"a"}, id);
    const real a = param_or(params, "a", 1.0);
    if (!(a > 0)) throw ParameterError("sech2 mass requires a > 0");
    std::map<std::string, double> p{{"a", static_cast<double>(a)}};
    const double lim = static_cast<double>(kPi / (2 * a));
    return MassProfile(
        id, p, Interval{},
        [a](real q) {
          const real s = 1 / std::cosh(a * q);
          return s * s;
        },
        [a](real q) {
          const real s = 1 / std::cosh(a * q);
          return -2 * a * s * s * std::tanh(a * q);
        },
        [a](real q) {
          const real s = 1 / std::cosh(a * q);
          const real t = std::tanh(a * q);
          return 2 * a * a * s * s * (3 * t * t - 1);
        },
        [a](real q) { return 2 * log_sech(a * q); }, [a](real q) { return std::atan(std::sinh(a * q)) / a; },
        {EndpointBehavior{"4 e^{2aq} -> 0", -lim, false}, EndpointBehavior{"4 e^{-2aq} -> 0", lim, false}});
  }
  if (id == "algebraic_pole") {
    reject_unknown(params, {}, id);
    const double lim = static_cast<double>(kPi / 2);
    return MassProfile(
        id, params, Interval{-1.0, 1.0}, [](real q) { return 1 / (1 - q * q); },
        [](real q) {
          const real d = 1 - q * q;
          return 2 * q / (d * d);
        },
        [](real q) {
          const real d = 1 - q * q;
          return (2 + 6 * q * q) / (d * d * d);
        },
        [](real q) { return -std::log1p(-q * q); }, [](real q) { return std::asin(q); },
        {EndpointBehavior{"(2(1+q))^{-1} -> inf", -lim, true}, EndpointBehavior{"(2(1-q))^{-1} -> inf", lim, true}});
  }
  if (id == "rational_beta") {
    reject_unknown(params, {"beta"}, id);
    const real beta = param_or(params, "beta", 2.0);
    if (!(beta > 0)) throw ParameterError("rational_beta mass requires beta > 0");
    std::map<std::string, double> p{{"beta", static_cast<double>(beta)}};
    auto s = [beta](real q) { return (beta + q * q) / (1 + q * q); };
    auto s1 = [beta](real q) {
      const real d = 1 + q * q;
      return 2 * q * (1 - beta) / (d * d);
    };
    auto s2 = [beta](real q) {
      const real d = 1 + q * q;
      return 2 * (1 - beta) * (1 - 3 * q * q) / (d * d * d);
    };
    return MassProfile(
        id, p, Interval{}, [s](real q) { return s(q) * s(q); }, [s, s1](real q) { return 2 * s(q) * s1(q); },
        [s, s1, s2](real q) { return 2 * s1(q) * s1(q) + 2 * s(q) * s2(q); },
        [s](real q) { return 2 * std::log(s(q)); }, [beta](real q) { return q + (beta - 1) * std::atan(q); },
        {EndpointBehavior{"-> 1", -kInf, false}, EndpointBehavior{"-> 1", kInf, false}});
  }
  throw ParameterError("unknown mass profile '" + id +
                       "' (expected const|expdecay|gauss2|sech2|algebraic_pole|rational_beta)");
}

std::vector<std::string> builtin_profile_ids() {
  return {"const", "expdecay", "gauss2", "sech2", "algebraic_pole", "rational_beta"};
}

std::vector<MassProfile> builtin_profiles() {
  std::vector<MassProfile> out;
  for (const auto& id : builtin_profile_ids()) out.push_back(make_profile(id));
  return out;
}

real change_of_variable(const MassProfile& profile, real q) { return profile.u(q); }

}  // namespace nfsusy
