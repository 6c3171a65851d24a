#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nfsusy/model_catalog.hpp"

namespace nfsusy {

enum class Decision { L2, NotL2, Indeterminate };
const char* decision_name(Decision d);

enum class Method { Exponent, Quadrature, Both };
const char* method_name(Method m);

// What is known about a function near one end of its domain.
struct EndHint {
  enum class Kind { None, Regular, Asymptotic };
  Kind kind = Kind::None;
  Asym asym;
  bool infinite = false;  // whether asym is in the infinite-end or the finite-end form
};

struct EndVerdict {
  Decision decision = Decision::Indeterminate;
  bool marginal = false;  // exponent exactly at the integrability boundary
  std::string reason;
};

struct QuadratureVerdict {
  Decision decision = Decision::Indeterminate;
  std::optional<double> integral;  // of |f|^2, when convergent
  std::array<std::string, 2> end_notes;
};

struct FunctionVerdict {
  int index = 0;
  std::string description;
  bool is_L2 = false;
  bool indeterminate = false;
  Method method = Method::Both;
  std::optional<double> integral_estimate;
  Decision exponent_decision = Decision::Indeterminate;
  Decision quadrature_decision = Decision::Indeterminate;
  bool disagreement = false;
  bool marginal = false;
  std::array<EndVerdict, 2> ends;
  std::array<std::string, 2> quadrature_notes;
};

struct QuadratureOptions {
  int infinite_pieces = 12;
  int finite_pieces = 20;
  double convergence_rel = 1e-8;
  bool enabled = true;
};

// Exponent test for one end.
EndVerdict exponent_verdict(const EndHint& hint);

// Adaptive quadrature of |f|^2 with tail ladders; f is supplied as log|f|.
QuadratureVerdict quadrature_verdict(const std::function<LogValue(double)>& logf, const Interval& domain,
                                     const QuadratureOptions& opts = {});

FunctionVerdict classify_function(const std::function<LogValue(double)>& logf, const Interval& domain,
                                  const std::array<EndHint, 2>& hints, const QuadratureOptions& opts = {});

struct NormVerdict {
  Side side = Side::Minus;
  std::vector<FunctionVerdict> per_function;
  bool sector_in_L2 = false;  // every materialized entry
  bool kernel_in_L2 = false;  // the N entries spanning ker P
  int max_normalizable_prefix = 0;
  bool indeterminate = false;
  int truncation = 0;
  bool truncation_stable = true;  // sector_in_L2 unchanged at truncation + 2
  bool flag_invariant = false;
  std::vector<std::string> unbounded_ends;  // q-ends where an L2 sector function blows up
};

struct Classification {
  enum class Kind { Unbroken, Broken, PartiallyBroken, Indeterminate };
  Kind kind = Kind::Indeterminate;
  int k = 0;
  std::string str() const;
  static Classification parse(const std::string& s);
  friend bool operator==(const Classification& a, const Classification& b) {
    return a.kind == b.kind && (a.kind != Kind::PartiallyBroken || a.k == b.k);
  }
};

struct BreakingReport {
  std::string model;
  std::string mass;
  int N = 0;
  std::map<std::string, std::string> params;
  std::map<std::string, double> mass_params;
  std::string u_convention;
  NormVerdict verdict_minus, verdict_plus;
  Classification classification;
  std::string status;  // "ok" or "indeterminate"
  std::vector<std::string> diagnostics;
};

struct ClassifyOptions {
  int truncation = -1;  // default N+2 for type B
  bool check_truncation = true;
  QuadratureOptions quadrature;
};

std::array<EndHint, 2> sector_end_hints(const PdmModelInstance& model, const SectorEntry& entry);
NormVerdict classify_sector(const PdmModelInstance& model, Side side, const ClassifyOptions& opts = {});
BreakingReport classify_model(const PdmModelInstance& model, const ClassifyOptions& opts = {});
BreakingReport classify_model(const ModelInstance& model, const ClassifyOptions& opts = {});

}  // namespace nfsusy
