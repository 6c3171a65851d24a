#include "nfsusy/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nfsusy/errors.hpp"

namespace nfsusy {

namespace {

Json optional_number(const std::optional<double>& v) {
  if (v && std::isfinite(*v)) return *v;
  return nullptr;
}

Json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number_or_null(x));
  return a;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Json document(Json body) {
  Json out;
  out["schema"] = kSchema;
  for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
  return out;
}

Json to_json(const FunctionVerdict& v) {
  Json j;
  j["index"] = v.index;
  j["description"] = v.description;
  j["is_L2"] = v.is_L2;
  j["indeterminate"] = v.indeterminate;
  j["method"] = method_name(v.method);
  j["integral_estimate"] = optional_number(v.integral_estimate);
  j["exponent_decision"] = decision_name(v.exponent_decision);
  j["quadrature_decision"] = decision_name(v.quadrature_decision);
  j["disagreement"] = v.disagreement;
  j["marginal"] = v.marginal;
  Json ends = Json::array();
  for (int e = 0; e < 2; ++e) {
    Json ej;
    ej["decision"] = decision_name(v.ends[e].decision);
    ej["marginal"] = v.ends[e].marginal;
    ej["reason"] = v.ends[e].reason;
    ej["quadrature"] = v.quadrature_notes[e];
    ends.push_back(ej);
  }
  j["ends"] = ends;
  return j;
}

Json to_json(const NormVerdict& v) {
  Json j;
  j["side"] = side_name(v.side);
  j["sector_in_L2"] = v.sector_in_L2;
  j["kernel_in_L2"] = v.kernel_in_L2;
  j["max_normalizable_prefix"] = v.max_normalizable_prefix;
  j["flag_invariant"] = v.flag_invariant;
  j["truncation"] = v.truncation;
  j["truncation_stable"] = v.truncation_stable;
  j["indeterminate"] = v.indeterminate;
  j["unbounded_ends"] = v.unbounded_ends;
  Json per = Json::array();
  for (const auto& f : v.per_function) per.push_back(to_json(f));
  j["per_function"] = per;
  return j;
}

Json to_json(const BreakingReport& r, const std::optional<Classification>& expected) {
  Json j;
  j["model"] = r.model;
  j["mass"] = r.mass;
  j["N"] = r.N;
  j["params"] = r.params;
  j["mass_params"] = r.mass_params;
  j["u_convention"] = r.u_convention;
  j["verdicts"] = {{"minus", to_json(r.verdict_minus)}, {"plus", to_json(r.verdict_plus)}};
  j["classification"] = r.classification.str();
  j["status"] = r.status;
  j["diagnostics"] = r.diagnostics;
  if (expected) {
    j["paper_expected"] = expected->str();
    j["match"] = r.classification == *expected;
  } else {
    j["paper_expected"] = nullptr;
    j["match"] = nullptr;
  }
  return j;
}

Json to_json(const Table1Result& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json jr;
    jr["model"] = row.row.model;
    jr["table_entry"] = row.row.table_entry;
    jr["no_effect"] = row.row.no_effect;
    if (row.row.no_effect) jr["no_effect_holds"] = row.no_effect_holds;
    jr["match"] = row.match;
    Json cells = Json::array();
    for (const auto& c : row.cells) {
      Json jc;
      jc["mass"] = c.cell.mass;
      jc["mass_params"] = c.cell.mass_params;
      jc["N"] = c.cell.N;
      jc["params"] = c.cell.params;
      jc["classification"] = c.error.empty() ? Json(c.report.classification.str()) : Json(nullptr);
      jc["paper_expected"] = c.cell.expected;
      jc["match"] = c.match;
      if (!c.error.empty()) jc["error"] = c.error;
      if (!c.report.diagnostics.empty()) jc["diagnostics"] = c.report.diagnostics;
      cells.push_back(jc);
    }
    jr["cells"] = cells;
    rows.push_back(jr);
  }
  Json j;
  j["rows"] = rows;
  j["cells"] = r.cells;
  j["mismatches"] = r.mismatches;
  j["all_match"] = r.all_match;
  return j;
}

Json to_json(const SpectrumResult& s) {
  Json j;
  j["scheme"] = s.scheme;
  j["coordinate"] = s.coordinate;
  j["box"] = {s.lo, s.hi};
  j["intervals"] = s.intervals;
  j["eigenvalues"] = numbers(s.eigenvalues);
  j["richardson"] = numbers(s.richardson);
  j["certified_error"] = numbers(s.certified_error);
  j["order"] = numbers(s.order);
  j["symmetry_error"] = s.symmetry_error;
  return j;
}

Json to_json(const MembershipReport& m) {
  Json j;
  j["model"] = m.model;
  j["mass"] = m.mass;
  j["side"] = side_name(m.side);
  j["N"] = m.N;
  j["sector_normalizable"] = m.sector_normalizable;
  j["subspace"] = m.subspace;
  j["restricted_eigenvalues"] = numbers(m.restricted_eigenvalues);
  j["restricted_max_imag"] = m.restricted_max_imag;
  j["offset"] = number_or_null(m.fit.offset);
  j["max_mismatch"] = number_or_null(m.fit.max_mismatch);
  j["matched_index"] = m.fit.matched_index;
  j["tol"] = m.tol;
  j["all_present"] = m.all_present;
  j["hard_failure"] = m.hard_failure;
  j["note"] = m.note;
  j["spectrum"] = to_json(m.spectrum);
  return j;
}

Json to_json(const IntertwineResult& r) {
  Json j;
  j["test_function"] = r.test_function;
  Json lv = Json::array();
  for (const auto& l : r.levels) lv.push_back({{"intervals", l.intervals}, {"h", l.h}, {"residual", l.residual}});
  j["levels"] = lv;
  j["reduction"] = numbers(r.reduction);
  j["converged"] = r.converged;
  return j;
}

Json to_json(const CertificateSummary& c) {
  Json j;
  j["checks"] = c.checks;
  j["failures"] = c.failures;
  j["residual_max"] = c.residual_max;
  j["status"] = c.status;
  if (!c.first_failure.empty()) j["first_failure"] = c.first_failure;
  return j;
}

Json to_json(const IntertwiningReport& r) {
  Json j;
  j["exact"] = r.exact;
  j["maxdeg"] = r.maxdeg;
  j["first_failing_degree"] = r.first_failing_degree;
  j["max_residual_coefficient"] = r.max_residual_coefficient;
  j["literal_identity_holds"] = r.literal_identity_holds;
  j["literal_first_failing_degree"] = r.literal_first_failing_degree;
  return j;
}

void write_potential_csv(std::ostream& os, const PdmModelInstance& model, double lo, double hi, int points) {
  if (points < 2) throw ParameterError("need at least 2 grid points");
  os << "q,U_minus,U_plus,m\n";
  for (int i = 0; i < points; ++i) {
    const double q = lo + (hi - lo) * i / (points - 1);
    if (!model.domain().contains(q)) continue;  // endpoints of a finite domain are excluded
    os << fmt17(q) << ',' << fmt17(static_cast<double>(model.U(Side::Minus, q))) << ','
       << fmt17(static_cast<double>(model.U(Side::Plus, q))) << ',' << fmt17(static_cast<double>(model.mass().m(q)))
       << '\n';
  }
}

void write_spectrum_csv(std::ostream& os, const SpectrumResult& s, const MembershipReport* membership) {
  os << "index,eigenvalue,richardson,certified_error,matched_restricted_eigenvalue\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    os << i << ',' << fmt17(s.eigenvalues[i]) << ',' << fmt17(s.richardson[i]) << ',' << fmt17(s.certified_error[i])
       << ',';
    if (membership) {
      for (std::size_t r = 0; r < membership->fit.matched_index.size(); ++r) {
        if (membership->fit.matched_index[r] == static_cast<int>(i) && membership->fit.mismatch[r] <= membership->tol) {
          os << fmt17(membership->restricted_eigenvalues[r]);
          break;
        }
      }
    }
    os << '\n';
  }
}

std::string error_line(const std::string& code, const std::string& message) {
  std::string flat = message;
  for (char& c : flat)
    if (c == '\n' || c == '\r') c = ' ';
  return "error " + code + ": " + flat;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("E_IO", "cannot open " + path + " for writing");
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
  if (!f) throw Error("E_IO", "write failed for " + path);
}

}  // namespace nfsusy
