#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nfsusy/gauged_space.hpp"
#include "nfsusy/mass_profiles.hpp"

namespace nfsusy {

enum class ModelId { BRational, BTrig, BExp, X2Rational, X2Hyper, X2Exp };
const char* model_id_name(ModelId id);
ModelId parse_model_id(const std::string& s);
std::vector<std::string> model_id_names();
bool is_type_b(ModelId id);

// Leading asymptotics of log|f| at one end of an interval.
// Infinite end, t = |x|:      D e^{lambda t} + G t^2 + L t + P ln t.
// Finite end, s = |x - end|:  P ln s (the other fields stay zero).
struct Asym {
  double D = 0, lambda = 0, G = 0, L = 0, P = 0;
  Asym scaled(double c) const { return Asym{D * c, lambda, G * c, L * c, P * c}; }
  Asym& operator+=(const Asym& o);
  std::string str() const;
};
Asym operator+(Asym a, const Asym& b);

// Behaviour of z at one end of the constant-mass domain.
struct ZEnd {
  bool z_infinite = false;
  Asym log_z;  // asymptotics of log|z| if z_infinite, else of log|z - z*|
  // z* = zstar_rational, or zstar_sign * sqrt(zstar_square) when irrational.
  bool zstar_is_rational = true;
  Rational zstar_rational;
  Rational zstar_square;
  int zstar_sign = 1;
  double zstar = 0.0;
};

// Vanishing order of an exact polynomial at z* as described by a ZEnd.
int vanishing_order(const RationalPoly& p, const ZEnd& end);

struct SectorEntry {
  int index = 0;
  RationalPoly poly;  // gauged polynomial part; the full element is prefactor * poly
  Poly<double> poly_y;  // the same polynomial in the local variable y = z - shift
  std::string description;
  std::array<Asym, 2> endpoint_exponents;  // log|psi| at the two ends of the constant-mass domain
};

struct SectorBasis {
  Side side = Side::Minus;
  std::vector<SectorEntry> entries;
  int truncation = 0;
  bool infinite_flag = false;      // type B solvable sectors
  bool flag_invariant = false;     // every prefix is preserved (partial breaking is meaningful)
  std::vector<int> kernel_indices;  // entries spanning the N-dimensional kernel of the charge
  std::string gauge_factor;
};

struct LogValue {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

class ModelInstance {
 public:
  ModelId id() const { return id_; }
  std::string name() const { return model_id_name(id_); }
  int N() const { return N_; }
  const std::map<std::string, Rational>& params() const { return params_; }
  std::map<std::string, std::string> param_strings() const;
  const Interval& domain0() const { return domain0_; }
  bool even() const { return even_; }

  // Gauged operators; exact ones exist when every coefficient is rational.
  bool has_exact_operators() const { return exact_minus_.has_value(); }
  const GaugedOperator& op(Side s) const;
  const GaugedOperatorT<double>& op_double(Side s) const { return s == Side::Minus ? dbl_minus_ : dbl_plus_; }
  PolySubspace kernel_space(Side s) const;
  // Leading k elements of the flag (type B or solvable X2).
  PolySubspace prefix_space(Side s, int k) const;

  // Potentials as rational functions of z, and of x when z(x) is polynomial.
  const RatFunc<double>& potential_z(Side s) const { return s == Side::Minus ? vz_minus_ : vz_plus_; }
  const std::optional<RationalFunction>& potential_x_exact(Side s) const {
    return s == Side::Minus ? vx_minus_ : vx_plus_;
  }
  real V(Side s, real x) const;

  real z(real x) const;
  // Local variable y = z - shift, chosen so that y -> 0 is resolved without cancellation.
  real y(real x) const;
  double z_shift() const { return shift_; }
  real zx(real x) const;
  real zxx(real x) const;
  // Log of the gauge factor without the rational part rho; e^{-W} * prefactor = exp(T) * rho(z).
  real T(Side s, real x) const;
  const RationalFunction& rho(Side s) const { return s == Side::Minus ? rho_minus_ : rho_plus_; }
  const RationalFunction& prefactor(Side s) const { return s == Side::Minus ? pref_minus_ : pref_plus_; }
  // dW/dz for the chosen side: (N-1)A'/(4A) +- Q/(2A).
  double gauge_derivative_z(Side s, double z) const;

  const ZEnd& z_end(int end) const { return z_ends_[static_cast<std::size_t>(end)]; }
  const Asym& gauge_asym(Side s, int end) const {
    return gauge_asym_[s == Side::Minus ? 0 : 1][static_cast<std::size_t>(end)];
  }

  SectorBasis sector(Side s, int truncation = -1) const;
  SectorEntry make_entry(Side s, int index, const RationalPoly& poly, std::string description) const;
  LogValue log_sector(Side s, const SectorEntry& entry, real x) const;
  std::string gauge_description(Side s) const;

  friend ModelInstance build_model(const std::string& id, int N, const std::map<std::string, std::string>& params);

 private:
  ModelId id_{};
  int N_ = 1;
  std::map<std::string, Rational> params_;
  Interval domain0_;
  bool even_ = false;
  std::optional<GaugedOperator> exact_minus_, exact_plus_;
  GaugedOperatorT<double> dbl_minus_, dbl_plus_;
  RatFunc<double> vz_minus_, vz_plus_;
  RatFunc<double> vy_minus_, vy_plus_;
  std::optional<RationalFunction> vx_minus_, vx_plus_;
  std::optional<RatFunc<double>> vxd_minus_, vxd_plus_;
  RationalFunction rho_minus_, rho_plus_, pref_minus_, pref_plus_;
  RatFunc<double> rho_y_minus_, rho_y_plus_;
  double shift_ = 0.0;
  std::array<ZEnd, 2> z_ends_{};
  std::array<std::array<Asym, 2>, 2> gauge_asym_{};
  // double copies of the parameters used in the closed forms
  double k_ = 0, z0_ = 0, b1_ = 0, a_ = 0, alpha_ = 0, zeta_ = 0;
};

// Builds one of B.rational, B.trig, B.exp, X2.rational, X2.hyper, X2.exp.
// Parameter values are parsed exactly ("1/2", "0.25", "-3").
ModelInstance build_model(const std::string& id, int N, const std::map<std::string, std::string>& params = {});
std::map<std::string, std::string> default_model_params(const std::string& id);

// Where one end of the PDM domain lands in the constant-mass domain.
struct EndMap {
  bool regular = false;  // u tends to an interior point of the constant-mass domain
  int base_end = 0;      // otherwise: which end of domain0 it reaches
  double x_limit = 0.0;
};

class PdmModelInstance {
 public:
  PdmModelInstance(ModelInstance base, MassProfile mass, UConvention conv, int mirror, Interval domain,
                   std::array<EndMap, 2> ends);

  const ModelInstance& base() const { return base_; }
  const MassProfile& mass() const { return mass_; }
  UConvention convention() const { return conv_; }
  int mirror() const { return mirror_; }
  const Interval& domain() const { return domain_; }
  const EndMap& end_map(int e) const { return ends_[static_cast<std::size_t>(e)]; }
  bool constant_mass() const { return mass_.id() == "const"; }

  real x_of_q(real q) const;
  real dx_dq(real q) const;
  real d2x_dq2(real q) const;
  // U(q) = V(u(q)) + m''/(8m^2) - 7m'^2/(32m^3).
  real U(Side s, real q) const;
  // log|m^{1/4} Psi(u(q))|.
  LogValue log_sector(Side s, const SectorEntry& entry, real q) const;
  SectorBasis sector(Side s, int truncation = -1) const { return base_.sector(s, truncation); }

 private:
  ModelInstance base_;
  MassProfile mass_;
  UConvention conv_;
  int mirror_;
  Interval domain_;
  std::array<EndMap, 2> ends_;
};

// Point canonical transformation. Throws GeometryError when u(domain) does not fit in domain0
// (or in its mirror image for models even in x).
PdmModelInstance pct_map(const ModelInstance& base, const MassProfile& mass,
                         UConvention conv = UConvention::Standard);

// Evaluable sector functions of q (value, including gauge and m^{1/4} factors).
std::vector<std::function<double(double)>> sector_functions(const PdmModelInstance& model, Side side, int count,
                                                            int truncation = -1);
std::vector<std::function<double(double)>> sector_functions(const ModelInstance& model, Side side, int count,
                                                            int truncation = -1);

}  // namespace nfsusy
