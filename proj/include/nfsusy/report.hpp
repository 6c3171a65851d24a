#pragma once

#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>

#include "nfsusy/gauged_space.hpp"
#include "nfsusy/normalizability.hpp"
#include "nfsusy/spectral_check.hpp"
#include "nfsusy/table1.hpp"

namespace nfsusy {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "nfsusy/1";

// Every document carries "schema" first; no wall-clock fields, so equal inputs give identical bytes.
Json to_json(const FunctionVerdict& v);
Json to_json(const NormVerdict& v);
Json to_json(const BreakingReport& r, const std::optional<Classification>& expected = std::nullopt);
Json to_json(const Table1Result& r);
Json to_json(const SpectrumResult& s);
Json to_json(const MembershipReport& m);
Json to_json(const IntertwineResult& r);
Json to_json(const CertificateSummary& c);
Json to_json(const IntertwiningReport& r);

Json document(Json body);  // prepends the schema tag

// CSV: q,U_minus,U_plus,m with 17 significant digits.
void write_potential_csv(std::ostream& os, const PdmModelInstance& model, double lo, double hi, int points);
// CSV: index,eigenvalue,richardson,certified_error,matched_restricted_eigenvalue (empty when unmatched).
void write_spectrum_csv(std::ostream& os, const SpectrumResult& s, const MembershipReport* membership = nullptr);

// One machine-parsable line: "error E_CODE: message".
std::string error_line(const std::string& code, const std::string& message);

// Writes text to path, or to stdout when path is empty or "-". Throws Error("E_IO") on failure.
void write_output(const std::string& path, const std::string& text);

}  // namespace nfsusy
