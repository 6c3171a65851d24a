#include "nfsusy/spectral_check.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "nfsusy/errors.hpp"

namespace nfsusy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The potential in x has no pole at x = 0 (only meaningful for even models).
bool regular_at_origin(const ModelInstance& base, Side side) {
  const auto& vx = base.potential_x_exact(side);
  if (!vx) return false;
  return sgn(vx->den().coeff(0)) != 0;
}

}  // namespace

PdmHamiltonian pdm_hamiltonian(const PdmModelInstance& model, Side side) {
  PdmHamiltonian h;
  h.mass = model.mass();
  h.domain = model.domain();
  h.U = [model, side](real q) { return model.U(side, q); };
  h.coordinate = "q";
  return h;
}

PdmHamiltonian u_form_hamiltonian(const PdmModelInstance& model, Side side) {
  PdmHamiltonian h;
  h.mass = make_profile("const");
  const ModelInstance& base = model.base();
  if (model.constant_mass()) {
    h.domain = base.domain0();
  } else {
    const Interval img = model.mass().u_image(model.convention());
    h.domain = model.mirror() > 0 ? img : Interval{-img.hi, -img.lo};
  }
  h.U = [base, side](real x) { return base.V(side, x); };
  h.coordinate = "u";
  return h;
}

PdmHamiltonian spectral_hamiltonian(const PdmModelInstance& model, Side side) {
  if (model.mass().u_kind() != UKind::ClosedForm) return pdm_hamiltonian(model, side);
  PdmHamiltonian h = u_form_hamiltonian(model, side);
  const ModelInstance& base = model.base();
  if (base.even() && h.domain.lo == 0.0 && regular_at_origin(base, side)) {
    // Smooth even potential: the half-line model is the even part of the full-line one.
    h.domain.lo = -h.domain.hi;
  }
  return h;
}

std::vector<double> fd_eigenvalues(const PdmHamiltonian& h, double lo, double hi, int intervals, int count,
                                   double* symmetry_error) {
  if (!(hi > lo) || intervals < 4) throw NumericError("invalid finite-difference grid", 0.0);
  const int n = intervals - 1;
  const real step = (real(hi) - real(lo)) / intervals;
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 0)), super(std::max(n - 1, 0));
  const real c = 1 / (2 * step * step);
  auto inv_m = [&](int half_index2) {  // 1/m at lo + (half_index2/2) * step
    return 1 / h.mass.m(real(lo) + real(half_index2) / 2 * step);
  };
  for (int i = 1; i <= n; ++i) {
    const real q = real(lo) + i * step;
    const real left = inv_m(2 * i - 1), right = inv_m(2 * i + 1);
    const real d = c * (left + right) + h.U(q);
    if (!std::isfinite(static_cast<double>(d))) {
      throw NumericError("Hamiltonian is not finite on the grid at q = " + std::to_string(static_cast<double>(q)), 0.0);
    }
    diag(i - 1) = static_cast<double>(d);
    // Row i couples to i+1 through the right half-point; row i+1 to i through its left one.
    if (i < n) super(i - 1) = static_cast<double>(-c * right);
    if (i > 1) sub(i - 2) = static_cast<double>(-c * left);
  }
  if (symmetry_error) *symmetry_error = n > 1 ? (sub - super).cwiseAbs().maxCoeff() : 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("tridiagonal eigensolver did not converge", 0.0);
  const Eigen::VectorXd& ev = es.eigenvalues();
  std::vector<double> out;
  for (int i = 0; i < std::min<int>(count, static_cast<int>(ev.size())); ++i) out.push_back(ev(i));
  return out;
}

std::pair<double, double> auto_box(const PdmHamiltonian& h, double energy, double decay) {
  double lo = h.domain.lo, hi = h.domain.hi;
  double origin = 0.0;
  if (!h.domain.lo_infinite() && !h.domain.hi_infinite()) return {lo, hi};
  if (!h.domain.lo_infinite()) origin = h.domain.lo + 1.0;
  if (!h.domain.hi_infinite()) origin = h.domain.hi - 1.0;
  // The walk also stops once U - E or 1/m passes `stiff`: the levels no longer feel a wall placed there,
  // and going further only inflates the matrix norm and with it the eigensolver's absolute error.
  const double step = 0.01, cap = 1000.0, stiff = 1e8 * (1.0 + std::fabs(energy));
  for (int e = 0; e < 2; ++e) {
    const bool infinite = e == 0 ? h.domain.lo_infinite() : h.domain.hi_infinite();
    if (!infinite) continue;
    const double dir = e == 0 ? -1.0 : 1.0;
    double acc = 0.0, x = origin;
    while (std::fabs(x - origin) < cap) {
      x += dir * step;
      const real v = h.U(x);
      const real mx = h.mass.m(x);
      const real kin = 2 * mx * (v - energy);
      if (std::isfinite(static_cast<double>(v)) && (v - energy > stiff || 1 / mx > stiff)) break;
      if (!std::isfinite(static_cast<double>(v)) || kin <= 0) {
        acc = 0.0;
      } else {
        acc += static_cast<double>(std::sqrt(kin)) * step;
        if (acc >= decay) break;
      }
    }
    (e == 0 ? lo : hi) = x;
  }
  return {lo, hi};
}

SpectrumResult fd_spectrum(const PdmHamiltonian& h, const GridSpec& grid) {
  SpectrumResult r;
  r.coordinate = h.coordinate;
  double lo, hi;
  if (grid.lo && grid.hi) {
    lo = *grid.lo;
    hi = *grid.hi;
  } else {
    double ceiling;
    if (grid.energy_ceiling) {
      ceiling = *grid.energy_ceiling;
    } else {
      // Coarse pass on a provisional box to estimate the highest tracked level.
      auto box = auto_box(h, 0.0, 10.0);
      const std::vector<double> coarse = fd_eigenvalues(h, box.first, box.second, 800, grid.count);
      ceiling = coarse.empty() ? 0.0 : coarse.back();
    }
    std::tie(lo, hi) = auto_box(h, ceiling, grid.decay);
    if (grid.lo) lo = *grid.lo;
    if (grid.hi) hi = *grid.hi;
  }
  r.lo = lo;
  r.hi = hi;
  std::vector<std::vector<double>> lv;
  int M = grid.intervals;
  r.symmetry_error = 0.0;
  for (int l = 0; l < std::max(2, grid.levels); ++l, M *= 2) {
    double sym = 0.0;
    lv.push_back(fd_eigenvalues(h, lo, hi, M, grid.count, &sym));
    r.symmetry_error = std::max(r.symmetry_error, sym);
  }
  r.intervals = M / 2;
  const auto& fine = lv.back();
  const auto& mid = lv[lv.size() - 2];
  const std::size_t n = std::min(fine.size(), mid.size());
  r.eigenvalues.assign(fine.begin(), fine.begin() + static_cast<long>(n));
  for (std::size_t i = 0; i < n; ++i) {
    r.richardson.push_back(fine[i] + (fine[i] - mid[i]) / 3.0);
    r.certified_error.push_back(std::fabs(fine[i] - mid[i]) / 3.0);
    double order = std::numeric_limits<double>::quiet_NaN();
    if (lv.size() >= 3 && i < lv[lv.size() - 3].size()) {
      const double d1 = std::fabs(lv[lv.size() - 3][i] - mid[i]);
      const double d2 = std::fabs(mid[i] - fine[i]);
      if (d1 > 0 && d2 > 0) order = std::log2(d1 / d2);
    }
    r.order.push_back(order);
  }
  return r;
}

OffsetFit fit_offset(const std::vector<double>& restricted, const std::vector<double>& fd) {
  OffsetFit best;
  best.max_mismatch = kInf;
  if (restricted.empty() || fd.empty()) return best;
  // Each restricted eigenvalue takes its own FD level, so a repeated value needs a repeated level.
  std::vector<std::size_t> order(restricted.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return restricted[a] < restricted[b]; });
  for (std::size_t anchor = 0; anchor < fd.size(); ++anchor) {
    OffsetFit f;
    f.offset = fd[anchor] - restricted[order.front()];
    f.mismatch.assign(restricted.size(), kInf);
    f.matched_index.assign(restricted.size(), -1);
    std::size_t next = anchor;
    for (std::size_t r : order) {
      if (next >= fd.size()) {
        f.max_mismatch = kInf;
        break;
      }
      std::size_t pick = next;
      for (std::size_t j = next; j < fd.size(); ++j) {
        if (std::fabs(restricted[r] + f.offset - fd[j]) < std::fabs(restricted[r] + f.offset - fd[pick])) pick = j;
      }
      f.mismatch[r] = std::fabs(restricted[r] + f.offset - fd[pick]);
      f.matched_index[r] = static_cast<int>(pick);
      f.max_mismatch = std::max(f.max_mismatch, f.mismatch[r]);
      next = pick + 1;
    }
    // Near-ties (equally spaced spectra) go to the smallest shift.
    const bool tie = std::fabs(f.max_mismatch - best.max_mismatch) <= 1e-7;
    if (best.mismatch.empty() || (!tie && f.max_mismatch < best.max_mismatch) ||
        (tie && std::fabs(f.offset) < std::fabs(best.offset))) {
      best = f;
    }
  }
  return best;
}

std::vector<double> restricted_eigenvalues(const RationalMatrix& m, double* max_imag) {
  Eigen::MatrixXd a(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) a(i, j) = m(i, j).get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  std::vector<double> out;
  double imag = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const auto v = es.eigenvalues()(i);
    imag = std::max(imag, std::fabs(v.imag()));
    out.push_back(v.real());
  }
  if (max_imag) *max_imag = imag;
  std::sort(out.begin(), out.end());
  return out;
}

MembershipReport verify_eigen_membership(const PdmModelInstance& model, Side side, double tol, const GridSpec& grid) {
  MembershipReport rep;
  const ModelInstance& base = model.base();
  rep.model = base.name();
  rep.mass = model.mass().id();
  rep.side = side;
  rep.N = base.N();
  rep.tol = tol;

  ClassifyOptions copts;
  copts.check_truncation = false;
  const NormVerdict nv = classify_sector(model, side, copts);
  PolySubspace space;
  if (nv.kernel_in_L2) {
    space = base.kernel_space(side);
    rep.subspace = "kernel";
    rep.sector_normalizable = true;
  } else if (nv.flag_invariant && nv.max_normalizable_prefix >= 1) {
    const int k = std::min(nv.max_normalizable_prefix, base.N());
    space = base.prefix_space(side, k);
    rep.subspace = "prefix(" + std::to_string(k) + ")";
    rep.sector_normalizable = true;
  } else {
    space = base.kernel_space(side);
    rep.subspace = "none";
    rep.sector_normalizable = false;
  }
  const RestrictedMatrix rm = closure_certificate(base.op(side), space);
  rep.restricted_eigenvalues = restricted_eigenvalues(rm.entries, &rep.restricted_max_imag);
  rep.dimension = static_cast<int>(rep.restricted_eigenvalues.size());

  GridSpec g = grid;
  if (!g.energy_ceiling) g.energy_ceiling = rep.restricted_eigenvalues.back();
  rep.spectrum = fd_spectrum(spectral_hamiltonian(model, side), g);
  rep.fit = fit_offset(rep.restricted_eigenvalues, rep.spectrum.richardson);
  // A complex pair cannot belong to the spectrum of a self-adjoint operator.
  rep.all_present = rep.fit.max_mismatch <= tol && rep.restricted_max_imag <= tol;
  rep.hard_failure = rep.sector_normalizable && !rep.all_present;
  if (!rep.sector_normalizable) {
    rep.note = "sector not normalizable; presence recorded without being required";
  } else if (rep.restricted_max_imag > tol) {
    rep.note = "restricted matrix has complex eigenvalues; the normalizable sector is not an invariant subspace of "
               "any self-adjoint realization";
  } else if (!rep.all_present) {
    rep.note = "normalizable sector eigenvalue missing from the finite-difference spectrum";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Physical intertwining

namespace {

// Coefficients c_k(z) of the charge P^ = sum_k c_k d^k.
std::vector<RatFunc<double>> charge_coefficients(const ModelInstance& base) {
  const Charge ch = is_type_b(base.id()) ? type_b_charge(base.N()) : x2_charge(base.N(), base.params().at("alpha"));
  std::vector<RationalFunction> c{RationalFunction::constant(Rational(1))};
  for (const FirstOrderFactor& f : ch.factors) {
    std::vector<RationalFunction> nc(c.size() + 1);
    for (std::size_t k = 0; k < c.size(); ++k) {
      nc[k] = nc[k] + f.scale * (c[k].derivative() - f.shift * c[k]);
      nc[k + 1] = nc[k + 1] + f.scale * c[k];
    }
    c = std::move(nc);
  }
  std::vector<RatFunc<double>> out;
  for (auto& ck : c) out.push_back(to_double_func(ch.post * ck));
  return out;
}

struct Grid {
  real lo, step;
  int M;
  real q(int i) const { return lo + i * step; }
};

// Conservative -1/2 d(1/m)d + U at interior points 1..M-1 (others left at 0).
std::vector<real> apply_h(const PdmModelInstance& model, Side side, const Grid& g, const std::vector<real>& f) {
  std::vector<real> out(f.size(), 0);
  const real c = 1 / (2 * g.step * g.step);
  const MassProfile& mp = model.mass();
  const bool cm = model.constant_mass();
  for (int i = 1; i < g.M; ++i) {
    const real ml = cm ? 1 : mp.m(g.q(i) - g.step / 2);
    const real mr = cm ? 1 : mp.m(g.q(i) + g.step / 2);
    out[static_cast<std::size_t>(i)] =
        -c * ((f[i + 1] - f[i]) / mr - (f[i] - f[i - 1]) / ml) + model.U(side, g.q(i)) * f[i];
  }
  return out;
}

// The conjugation by e^{W0} m^{-1/4} is folded into the coefficients, so P acts on f directly:
// P f = z_x^N sum_k c_k (d_z + s)^k f with s = dW0/dz - m_q / (4 m z_q).
struct ChargeData {
  std::vector<real> zx_pow, zq, zqq, s, sz;
  std::vector<std::vector<real>> coef;  // coef[k][i]
};

ChargeData charge_data(const PdmModelInstance& model, const Grid& g) {
  const ModelInstance& base = model.base();
  const auto coefs = charge_coefficients(base);
  const GaugedOperator& op = base.op(Side::Minus);
  const RationalFunction A(op.A);
  const RationalFunction w1 = RationalFunction(op.A.derivative()) * Rational(base.N() - 1, 4) / A -
                              op.Q * Rational(1, 2) / A;
  const RatFunc<double> w = to_double_func(w1), wz = to_double_func(w1.derivative());
  const MassProfile& mp = model.mass();
  const bool cm = model.constant_mass();
  ChargeData d;
  const std::size_t n = static_cast<std::size_t>(g.M + 1);
  for (auto* v : {&d.zx_pow, &d.zq, &d.zqq, &d.s, &d.sz}) v->assign(n, 0);
  d.coef.assign(coefs.size(), std::vector<real>(n));
  for (int i = 1; i < g.M; ++i) {
    const real q = g.q(i);
    const real x = model.x_of_q(q);
    const real z = base.z(x);
    const real zx = base.zx(x), zxx = base.zxx(x);
    const real xq = model.dx_dq(q), xqq = model.d2x_dq2(q);
    const real zq = zx * xq, zqq = zxx * xq * xq + zx * xqq;
    // l1 = m_q/m, l2 = m_qq/m
    const real l1 = cm ? 0 : mp.dm(q) / mp.m(q), l2 = cm ? 0 : mp.d2m(q) / mp.m(q);
    const real mu = -l1 / (4 * zq);
    const real mu_q = -((l2 - l1 * l1) * zq - l1 * zqq) / (4 * zq * zq);
    d.zx_pow[i] = std::pow(zx, base.N());
    d.zq[i] = zq;
    d.zqq[i] = zqq;
    d.s[i] = w.eval<real>(z) + mu;
    d.sz[i] = wz.eval<real>(z) + mu_q / zq;
    for (std::size_t k = 0; k < coefs.size(); ++k) d.coef[k][i] = coefs[k].eval<real>(z);
  }
  return d;
}

// P f at points 1..M-1 (N <= 2).
std::vector<real> apply_charge(const ChargeData& d, const Grid& g, const std::vector<real>& f) {
  std::vector<real> out(f.size(), 0);
  const std::size_t order = d.coef.size() - 1;
  if (order > 2) throw RangeError("physical charges are realized for N <= 2");
  for (int i = 1; i < g.M; ++i) {
    const real fq = (f[i + 1] - f[i - 1]) / (2 * g.step);
    const real fqq = (f[i + 1] - 2 * f[i] + f[i - 1]) / (g.step * g.step);
    const real fz = fq / d.zq[i];
    const real fzz = (fqq - d.zqq[i] / d.zq[i] * fq) / (d.zq[i] * d.zq[i]);
    const real s = d.s[i];
    real v = d.coef[0][i] * f[i];
    if (order >= 1) v += d.coef[1][i] * (fz + s * f[i]);
    if (order >= 2) v += d.coef[2][i] * (fzz + 2 * s * fz + (d.sz[i] + s * s) * f[i]);
    out[i] = d.zx_pow[i] * v;
  }
  return out;
}

std::vector<real> sample(const TestFunction& f, const Grid& g) {
  std::vector<real> v(static_cast<std::size_t>(g.M + 1));
  for (int i = 0; i <= g.M; ++i) v[i] = f.f(g.q(i));
  return v;
}

real l2(const std::vector<real>& v, int from, int to, real step) {
  real s = 0;
  for (int i = from; i <= to; ++i) s += v[i] * v[i];
  return std::sqrt(s * step);
}

}  // namespace

IntertwineResult intertwine_residual_physical(const PdmModelInstance& model, double lo, double hi,
                                              const TestFunction& f, const std::vector<int>& intervals) {
  if (model.base().N() > 2) throw RangeError("physical intertwining is checked for N = 1 and 2");
  if (!model.base().has_exact_operators()) {
    throw ParameterError("physical intertwining needs rational operator coefficients");
  }
  IntertwineResult res;
  res.test_function = f.name;
  for (int M : intervals) {
    Grid g{real(lo), (real(hi) - real(lo)) / M, M};
    const ChargeData cd = charge_data(model, g);
    const std::vector<real> fv = sample(f, g);
    const std::vector<real> Hf = apply_h(model, Side::Minus, g, fv);
    const std::vector<real> PHf = apply_charge(cd, g, Hf);
    const std::vector<real> Pf = apply_charge(cd, g, fv);
    const std::vector<real> HPf = apply_h(model, Side::Plus, g, Pf);
    std::vector<real> r(fv.size(), 0);
    for (int i = 2; i <= M - 2; ++i) r[i] = PHf[i] - HPf[i];
    IntertwineLevel lv;
    lv.intervals = M;
    lv.h = static_cast<double>(g.step);
    lv.residual = static_cast<double>(l2(r, 2, M - 2, g.step) / l2(fv, 0, M, g.step));
    res.levels.push_back(lv);
  }
  res.converged = !res.levels.empty() && res.levels.back().residual < 1e-5;
  for (std::size_t i = 1; i < res.levels.size(); ++i) {
    const double red = res.levels[i - 1].residual / res.levels[i].residual;
    res.reduction.push_back(red);
    if (!(red >= 3.5)) res.converged = false;
  }
  return res;
}

double charge_norm_ratio(const PdmModelInstance& model, double lo, double hi, const TestFunction& f, int intervals) {
  Grid g{real(lo), (real(hi) - real(lo)) / intervals, intervals};
  const ChargeData cd = charge_data(model, g);
  const std::vector<real> fv = sample(f, g);
  const std::vector<real> Pf = apply_charge(cd, g, fv);
  return static_cast<double>(l2(Pf, 1, intervals - 1, g.step) / l2(fv, 0, intervals, g.step));
}

}  // namespace nfsusy
