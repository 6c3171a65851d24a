#include "nfsusy/normalizability.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "nfsusy/errors.hpp"

namespace nfsusy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroTol = 1e-12;

bool is_zero(double v) { return std::fabs(v) <= kZeroTol; }

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double gk(const std::function<double(double)>& g, double a, double b) {
  double err = 0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, a, b, 6, 1e-9, &err);
  return v;
}

struct TailResult {
  Decision decision = Decision::Indeterminate;
  double sum = 0;  // scaled by exp(-shift)
  std::string note;
};

// pieces[k] are successive tail integrals moving towards the end.
TailResult decide_tail(const std::vector<double>& pieces, double interior, double rel) {
  TailResult r;
  double total = interior;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const double p = pieces[k];
    if (std::isnan(p)) {
      r.note = "non-finite piece";
      return r;
    }
    if (std::isinf(p)) {
      r.decision = Decision::NotL2;
      r.sum = kInf;
      r.note = "overflow in piece " + std::to_string(k);
      return r;
    }
    total += p;
  }
  r.sum = total - interior;
  const std::size_t n = pieces.size();
  if (n == 0) return r;
  const double last = pieces[n - 1];
  if (total > 0 && last / total < rel) {
    r.decision = Decision::L2;
    r.note = "relative increment " + num(total > 0 ? last / total : 0.0);
    return r;
  }
  if (last == 0.0 && total == 0.0) {
    r.note = "function vanishes numerically";
    return r;
  }
  if (n >= 4) {
    bool all_small = true, all_large = true;
    double worst = 0;
    for (std::size_t k = n - 3; k < n; ++k) {
      const double ratio = pieces[k - 1] > 0 ? pieces[k] / pieces[k - 1] : kInf;
      worst = std::max(worst, ratio);
      all_small = all_small && ratio <= 0.95;
      all_large = all_large && ratio >= 1.0;
    }
    if (all_small) {
      // Geometric remainder of the remaining tail.
      r.sum += last * worst / (1 - worst);
      r.decision = Decision::L2;
      r.note = "geometric piece ratio " + num(worst);
      return r;
    }
    if (all_large) {
      // Early pieces may grow while a steep factor settles; only the final trend counts.
      r.decision = Decision::NotL2;
      r.note = worst > 1.5 ? "piece growth above 1.5 at the end of the ladder" : "non-decreasing pieces";
      return r;
    }
  }
  r.note = "no clear trend in tail pieces";
  return r;
}

}  // namespace

const char* decision_name(Decision d) {
  switch (d) {
    case Decision::L2: return "L2";
    case Decision::NotL2: return "not_L2";
    case Decision::Indeterminate: return "indeterminate";
  }
  return "?";
}

const char* method_name(Method m) {
  switch (m) {
    case Method::Exponent: return "exponent";
    case Method::Quadrature: return "quadrature";
    case Method::Both: return "both";
  }
  return "?";
}

EndVerdict exponent_verdict(const EndHint& hint) {
  EndVerdict v;
  switch (hint.kind) {
    case EndHint::Kind::None:
      v.reason = "no asymptotic data";
      return v;
    case EndHint::Kind::Regular:
      v.decision = Decision::L2;
      v.reason = "maps to an interior point; |f|^2 integrates to a finite x-interval";
      return v;
    case EndHint::Kind::Asymptotic:
      break;
  }
  const Asym& a = hint.asym;
  auto decide = [&](double c, const char* what) {
    v.decision = c < 0 ? Decision::L2 : Decision::NotL2;
    v.reason = std::string(what) + " coefficient " + num(c);
  };
  if (hint.infinite) {
    if (!is_zero(a.D) && a.lambda > 0) return decide(a.D, "exponential"), v;
    if (!is_zero(a.G)) return decide(a.G, "Gaussian"), v;
    if (!is_zero(a.L)) return decide(a.L, "linear"), v;
    const double e = 2 * a.P + 1;
    if (std::fabs(e) <= kZeroTol) {
      v.decision = Decision::NotL2;
      v.marginal = true;
      v.reason = "power t^{-1/2}: boundary case, logarithmically divergent";
      return v;
    }
    v.decision = e < 0 ? Decision::L2 : Decision::NotL2;
    v.reason = "power exponent 2P = " + num(2 * a.P);
    return v;
  }
  const double e = 2 * a.P + 1;
  if (std::fabs(e) <= kZeroTol) {
    v.decision = Decision::NotL2;
    v.marginal = true;
    v.reason = "power s^{-1/2}: boundary case, logarithmically divergent";
    return v;
  }
  v.decision = e > 0 ? Decision::L2 : Decision::NotL2;
  v.reason = "power exponent 2P = " + num(2 * a.P);
  return v;
}

QuadratureVerdict quadrature_verdict(const std::function<LogValue(double)>& logf, const Interval& dom,
                                     const QuadratureOptions& opts) {
  QuadratureVerdict out;
  double qa, qb;
  if (dom.lo_infinite() && dom.hi_infinite()) {
    qa = -1;
    qb = 1;
  } else if (dom.hi_infinite()) {
    qa = dom.lo + 1;
    qb = dom.lo + 2;
  } else if (dom.lo_infinite()) {
    qa = dom.hi - 2;
    qb = dom.hi - 1;
  } else {
    const double w = dom.hi - dom.lo;
    qa = dom.lo + w / 4;
    qb = dom.hi - w / 4;
  }
  // Scale by the interior maximum so that exp() stays in range.
  double shift = -kInf;
  for (int i = 0; i <= 64; ++i) {
    const LogValue v = logf(qa + (qb - qa) * i / 64.0);
    if (v.sign != 0 && std::isfinite(v.log_abs)) shift = std::max(shift, 2 * v.log_abs);
  }
  if (!std::isfinite(shift)) shift = 0;
  auto g = [&](double q) {
    const LogValue v = logf(q);
    if (v.sign == 0) return 0.0;
    return std::exp(2 * v.log_abs - shift);
  };
  const double interior = gk(g, qa, qb);
  if (!std::isfinite(interior)) {
    out.end_notes = {"interior integral not finite", "interior integral not finite"};
    return out;
  }
  std::array<TailResult, 2> tails;
  for (int e = 0; e < 2; ++e) {
    const bool hi = e == 1;
    const double edge = hi ? qb : qa;
    const double end = hi ? dom.hi : dom.lo;
    std::vector<double> pieces;
    if (std::isinf(end)) {
      const double dir = hi ? 1.0 : -1.0;
      double a = edge, len = 1.0;
      for (int k = 0; k < opts.infinite_pieces; ++k) {
        const double b = a + dir * len;
        double p = hi ? gk(g, a, b) : gk(g, b, a);
        pieces.push_back(p);
        if (!std::isfinite(p)) break;
        a = b;
        len *= 2;
      }
    } else {
      double eps = std::fabs(end - edge);
      double a = edge;
      for (int k = 0; k < opts.finite_pieces; ++k) {
        eps /= 4;
        const double b = hi ? end - eps : end + eps;
        if (b == a) break;
        double p = hi ? gk(g, a, b) : gk(g, b, a);
        pieces.push_back(p);
        if (!std::isfinite(p)) break;
        a = b;
      }
    }
    tails[static_cast<std::size_t>(e)] = decide_tail(pieces, interior, opts.convergence_rel);
    out.end_notes[static_cast<std::size_t>(e)] = tails[static_cast<std::size_t>(e)].note;
  }
  if (tails[0].decision == Decision::NotL2 || tails[1].decision == Decision::NotL2) {
    out.decision = Decision::NotL2;
  } else if (tails[0].decision == Decision::L2 && tails[1].decision == Decision::L2) {
    out.decision = Decision::L2;
    out.integral = std::exp(shift) * (interior + tails[0].sum + tails[1].sum);
  }
  return out;
}

FunctionVerdict classify_function(const std::function<LogValue(double)>& logf, const Interval& domain,
                                  const std::array<EndHint, 2>& hints, const QuadratureOptions& opts) {
  FunctionVerdict fv;
  bool any_none = false, all_l2 = true, any_not = false;
  for (int e = 0; e < 2; ++e) {
    // For PDM ends the hint carries the shape of the matching constant-mass end, not of the q-end.
    const EndVerdict ev = exponent_verdict(hints[static_cast<std::size_t>(e)]);
    fv.ends[static_cast<std::size_t>(e)] = ev;
    fv.marginal = fv.marginal || ev.marginal;
    if (ev.decision == Decision::Indeterminate) any_none = true;
    if (ev.decision != Decision::L2) all_l2 = false;
    if (ev.decision == Decision::NotL2) any_not = true;
  }
  fv.exponent_decision = any_not ? Decision::NotL2 : (all_l2 && !any_none ? Decision::L2 : Decision::Indeterminate);

  if (opts.enabled) {
    const QuadratureVerdict qv = quadrature_verdict(logf, domain, opts);
    fv.quadrature_decision = qv.decision;
    fv.integral_estimate = qv.integral;
    fv.quadrature_notes = qv.end_notes;
  }

  const bool ex = fv.exponent_decision != Decision::Indeterminate;
  const bool qu = fv.quadrature_decision != Decision::Indeterminate;
  if (ex && qu) {
    fv.method = Method::Both;
    fv.disagreement = fv.exponent_decision != fv.quadrature_decision;
    fv.is_L2 = fv.exponent_decision == Decision::L2;
  } else if (ex) {
    fv.method = Method::Exponent;
    fv.is_L2 = fv.exponent_decision == Decision::L2;
  } else if (qu) {
    fv.method = Method::Quadrature;
    fv.is_L2 = fv.quadrature_decision == Decision::L2;
  } else {
    fv.method = Method::Both;
    fv.indeterminate = true;
    fv.is_L2 = false;
  }
  return fv;
}

// ---------------------------------------------------------------------------
// Models

std::array<EndHint, 2> sector_end_hints(const PdmModelInstance& model, const SectorEntry& entry) {
  std::array<EndHint, 2> h{};
  const Interval& d0 = model.base().domain0();
  for (int e = 0; e < 2; ++e) {
    const EndMap& em = model.end_map(e);
    EndHint& hint = h[static_cast<std::size_t>(e)];
    if (em.regular) {
      hint.kind = EndHint::Kind::Regular;
      continue;
    }
    hint.kind = EndHint::Kind::Asymptotic;
    hint.asym = entry.endpoint_exponents[static_cast<std::size_t>(em.base_end)];
    hint.infinite = std::isinf(em.base_end == 0 ? d0.lo : d0.hi);
  }
  return h;
}

namespace {

// True when log|f| keeps rising towards the end of the domain.
bool grows_towards_end(const PdmModelInstance& model, Side side, const SectorEntry& entry, int e) {
  const Interval& d = model.domain();
  const double end = e == 0 ? d.lo : d.hi;
  std::vector<double> pts;
  if (std::isinf(end)) {
    for (double t : {10.0, 100.0, 1000.0}) pts.push_back(e == 0 ? -t : t);
  } else {
    for (double s : {1e-3, 1e-5, 1e-7}) pts.push_back(e == 0 ? end + s : end - s);
  }
  std::vector<double> vals;
  for (double q : pts) {
    const LogValue v = model.log_sector(side, entry, q);
    if (v.sign == 0) return false;
    vals.push_back(v.log_abs);
  }
  return vals[1] > vals[0] && vals[2] > vals[1] && vals[2] > vals[0] + 1;
}

NormVerdict classify_sector_at(const PdmModelInstance& model, Side side, int truncation, const ClassifyOptions& opts) {
  NormVerdict nv;
  nv.side = side;
  const SectorBasis basis = model.sector(side, truncation);
  nv.truncation = basis.truncation;
  nv.flag_invariant = basis.flag_invariant;
  bool all = true, prefix_open = true;
  for (const SectorEntry& entry : basis.entries) {
    auto logf = [&model, side, &entry](double q) { return model.log_sector(side, entry, q); };
    FunctionVerdict fv = classify_function(logf, model.domain(), sector_end_hints(model, entry), opts.quadrature);
    fv.index = entry.index;
    fv.description = entry.description;
    if (fv.indeterminate) nv.indeterminate = true;
    if (!fv.is_L2) all = false;
    if (prefix_open && fv.is_L2 && !fv.indeterminate) {
      ++nv.max_normalizable_prefix;
    } else {
      prefix_open = false;
    }
    if (fv.is_L2) {
      for (int e = 0; e < 2; ++e) {
        if (grows_towards_end(model, side, entry, e)) {
          const std::string tag = e == 0 ? "lo" : "hi";
          if (std::find(nv.unbounded_ends.begin(), nv.unbounded_ends.end(), tag) == nv.unbounded_ends.end())
            nv.unbounded_ends.push_back(tag);
        }
      }
    }
    nv.per_function.push_back(std::move(fv));
  }
  nv.sector_in_L2 = all && !nv.per_function.empty();
  nv.kernel_in_L2 = !basis.kernel_indices.empty();
  for (int k : basis.kernel_indices) nv.kernel_in_L2 = nv.kernel_in_L2 && nv.per_function[static_cast<std::size_t>(k)].is_L2;
  return nv;
}

}  // namespace

NormVerdict classify_sector(const PdmModelInstance& model, Side side, const ClassifyOptions& opts) {
  NormVerdict nv = classify_sector_at(model, side, opts.truncation, opts);
  if (opts.check_truncation && model.sector(side, opts.truncation).infinite_flag) {
    ClassifyOptions more = opts;
    more.quadrature.enabled = false;
    const NormVerdict wider = classify_sector_at(model, side, nv.truncation + 2, more);
    nv.truncation_stable = wider.sector_in_L2 == nv.sector_in_L2;
  }
  return nv;
}

std::string Classification::str() const {
  switch (kind) {
    case Kind::Unbroken: return "unbroken";
    case Kind::Broken: return "broken";
    case Kind::PartiallyBroken: return "partially_broken(" + std::to_string(k) + ")";
    case Kind::Indeterminate: return "indeterminate";
  }
  return "?";
}

Classification Classification::parse(const std::string& s) {
  Classification c;
  if (s == "unbroken") {
    c.kind = Kind::Unbroken;
  } else if (s == "broken") {
    c.kind = Kind::Broken;
  } else if (s == "indeterminate") {
    c.kind = Kind::Indeterminate;
  } else if (s.rfind("partially_broken(", 0) == 0 && s.back() == ')') {
    c.kind = Kind::PartiallyBroken;
    c.k = std::stoi(s.substr(17, s.size() - 18));
  } else {
    throw ParameterError("unknown classification '" + s + "'");
  }
  return c;
}

BreakingReport classify_model(const PdmModelInstance& model, const ClassifyOptions& opts) {
  BreakingReport r;
  r.model = model.base().name();
  r.mass = model.mass().id();
  r.N = model.base().N();
  r.params = model.base().param_strings();
  r.mass_params = model.mass().params();
  r.u_convention = model.convention() == UConvention::Standard ? "standard" : "alternative";
  r.verdict_minus = classify_sector(model, Side::Minus, opts);
  r.verdict_plus = classify_sector(model, Side::Plus, opts);

  for (const NormVerdict* v : {&r.verdict_minus, &r.verdict_plus}) {
    const std::string side = v == &r.verdict_minus ? "minus" : "plus";
    for (const auto& f : v->per_function) {
      if (f.disagreement)
        r.diagnostics.push_back(side + " entry " + std::to_string(f.index) + ": exponent and quadrature disagree");
      if (f.marginal)
        r.diagnostics.push_back(side + " entry " + std::to_string(f.index) + ": boundary exponent, counted as not L2");
    }
    if (!v->truncation_stable)
      r.diagnostics.push_back(side + " sector verdict changes when two more flag entries are included");
    for (const auto& e : v->unbounded_ends)
      r.diagnostics.push_back(side + " sector: L2 functions are unbounded at the " + e + " end of the q-domain");
  }

  if (r.verdict_minus.indeterminate || r.verdict_plus.indeterminate) {
    r.status = "indeterminate";
    r.classification.kind = Classification::Kind::Indeterminate;
    return r;
  }
  r.status = "ok";
  if (r.verdict_minus.sector_in_L2 || r.verdict_plus.sector_in_L2) {
    r.classification.kind = Classification::Kind::Unbroken;
    return r;
  }
  int k = 0;
  for (const NormVerdict* v : {&r.verdict_minus, &r.verdict_plus})
    if (v->flag_invariant) k = std::max(k, v->max_normalizable_prefix);
  if (k >= 1) {
    r.classification.kind = Classification::Kind::PartiallyBroken;
    r.classification.k = k;
  } else {
    r.classification.kind = Classification::Kind::Broken;
  }
  return r;
}

BreakingReport classify_model(const ModelInstance& model, const ClassifyOptions& opts) {
  return classify_model(pct_map(model, make_profile("const")), opts);
}

}  // namespace nfsusy
