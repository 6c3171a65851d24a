#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace nfsusy {

using real = long double;

// Open interval (lo, hi); infinite ends are stored as +-infinity.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool lo_infinite() const { return std::isinf(lo); }
  bool hi_infinite() const { return std::isinf(hi); }
  bool contains(double x) const { return x > lo && x < hi; }
  std::string str() const;
};

enum class UKind { ClosedForm, Quadrature };
const char* u_kind_name(UKind k);

// Leading behaviour of m and u at one end of the domain.
struct EndpointBehavior {
  std::string m_leading;  // e.g. "e^{-bq}", "(1-q)^{-1}"
  double u_limit = 0.0;   // limit of u(q) at this end (may be infinite)
  bool m_blows_up = false;
};

enum class UConvention { Standard, Alternative };

class MassProfile {
 public:
  using Fn = std::function<real(real)>;

  MassProfile() = default;
  MassProfile(std::string id, std::map<std::string, double> params, Interval domain, Fn m, Fn dm, Fn d2m,
              Fn log_m, Fn u_closed, std::array<EndpointBehavior, 2> ends);

  const std::string& id() const { return id_; }
  const std::map<std::string, double>& params() const { return params_; }
  const Interval& domain() const { return domain_; }
  UKind u_kind() const { return kind_; }
  const std::array<EndpointBehavior, 2>& ends() const { return ends_; }
  bool has_alternative_u() const { return static_cast<bool>(u_alt_); }

  real m(real q) const { return m_(q); }
  real dm(real q) const { return dm_(q); }
  real d2m(real q) const { return d2m_(q); }
  real log_m(real q) const { return log_m_(q); }
  real sqrt_m(real q) const { return std::sqrt(m_(q)); }

  // u(q) = int sqrt(m) dq. Throws DomainError outside the open domain, NumericError if quadrature fails.
  real u(real q, UConvention conv = UConvention::Standard) const;
  // u'(q) for the chosen convention.
  real du(real q, UConvention conv = UConvention::Standard) const;
  // Image of the domain under u.
  Interval u_image(UConvention conv = UConvention::Standard) const;

  // m''/(8 m^2) - 7 m'^2/(32 m^3).
  real mass_term(real q) const;

  // Registers a second anchoring/scaling of u (used for the Gaussian profile).
  void set_alternative_u(Fn u_alt, real scale, std::string note);
  const std::string& alternative_note() const { return alt_note_; }

  // Copy whose u is evaluated by adaptive quadrature, anchored to the closed form at `anchor`.
  MassProfile quadrature_variant(double anchor = 0.0) const;
  // Profile from m and its derivatives alone; u is quadrature-backed and anchored at u(midpoint) = 0.
  static MassProfile from_function(std::string id, Interval domain, Fn m, Fn dm, Fn d2m);

 private:
  std::string id_;
  std::map<std::string, double> params_;
  Interval domain_;
  UKind kind_ = UKind::ClosedForm;
  Fn m_, dm_, d2m_, log_m_, u_;
  Fn u_alt_;
  real alt_scale_ = 1;  // u_alt' = alt_scale * sqrt(m)
  std::string alt_note_;
  std::array<EndpointBehavior, 2> ends_{};
  double anchor_ = 0.0;
  real anchor_value_ = 0;

  void check_inside(real q) const;
};

// Catalog ids: const, expdecay (b), gauss2, sech2 (a), algebraic_pole, rational_beta (beta).
MassProfile make_profile(const std::string& id, const std::map<std::string, double>& params = {});
std::vector<MassProfile> builtin_profiles();
std::vector<std::string> builtin_profile_ids();

real change_of_variable(const MassProfile& profile, real q);

}  // namespace nfsusy
