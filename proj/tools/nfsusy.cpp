#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nfsusy/errors.hpp"
#include "nfsusy/report.hpp"

using namespace nfsusy;

namespace {

enum class LogLevel { Error, Warn, Info, Debug };
LogLevel g_log = LogLevel::Warn;

void log(LogLevel level, const std::string& msg) {
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (level <= g_log) std::cerr << "[" << names[static_cast<int>(level)] << "] " << msg << '\n';
}

// JSON has no infinities; unbounded ends are written as strings.
Json number_or_string(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

constexpr int kExitOk = 0, kExitMismatch = 1, kExitError = 2;

std::map<std::string, std::string> parse_kv(const std::vector<std::string>& items, const char* flag) {
  std::map<std::string, std::string> out;
  for (const auto& s : items) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == s.size()) {
      throw ParameterError(std::string(flag) + " expects key=value, got '" + s + "'");
    }
    out[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return out;
}

std::map<std::string, double> parse_kv_double(const std::vector<std::string>& items, const char* flag) {
  std::map<std::string, double> out;
  for (const auto& [k, v] : parse_kv(items, flag)) {
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(d)) {
      throw ParameterError(std::string(flag) + " value for '" + k + "' is not a number");
    }
    out[k] = d;
  }
  return out;
}

std::pair<double, double> parse_range(const std::string& s) {
  const auto c = s.find(':');
  if (c == std::string::npos) throw ParameterError("--range expects a:b");
  char* e1 = nullptr;
  char* e2 = nullptr;
  const std::string a = s.substr(0, c), b = s.substr(c + 1);
  const double lo = std::strtod(a.c_str(), &e1), hi = std::strtod(b.c_str(), &e2);
  if (e1 == a.c_str() || *e1 != '\0' || e2 == b.c_str() || *e2 != '\0' || !(hi > lo)) {
    throw ParameterError("--range expects a:b with a < b");
  }
  return {lo, hi};
}

UConvention parse_convention(const std::string& s) {
  if (s == "standard") return UConvention::Standard;
  if (s == "alternative") return UConvention::Alternative;
  throw ParameterError("--u-convention must be standard or alternative");
}

// Options shared by the model-bound commands.
struct ModelOpts {
  std::string id;
  int N = 1;
  std::vector<std::string> params;
  std::string mass = "const";
  std::vector<std::string> mass_params;
  std::string convention = "standard";

  void add(CLI::App* app) {
    app->add_option("--id", id, "model id")->required()->check(CLI::IsMember(model_id_names()));
    app->add_option("--N", N, "order of the supercharge")->check(CLI::PositiveNumber);
    app->add_option("--param", params, "model parameter key=value (exact: 1/2, 0.25)");
    app->add_option("--mass", mass, "mass profile id")->check(CLI::IsMember(builtin_profile_ids()));
    app->add_option("--mass-param", mass_params, "mass parameter key=value");
    app->add_option("--u-convention", convention, "standard | alternative (u = erf q for gauss2)");
  }
  PdmModelInstance build() const {
    const ModelInstance base = build_model(id, N, parse_kv(params, "--param"));
    return pct_map(base, make_profile(mass, parse_kv_double(mass_params, "--mass-param")),
                   parse_convention(convention));
  }
};

std::optional<Classification> table_expectation(const PdmModelInstance& pm, const std::map<std::string, double>& mp) {
  const auto given = pm.base().param_strings();
  for (const auto& row : table1_default_rows()) {
    for (const auto& cell : row.cells) {
      if (cell.model != pm.base().name() || cell.mass != pm.mass().id() || cell.N != pm.base().N()) continue;
      if (cell.mass_params != mp) continue;
      // Compare after the model's own normalization of the parameters.
      const ModelInstance ref = build_model(cell.model, cell.N, cell.params);
      if (ref.param_strings() == given) return Classification::parse(cell.expected);
    }
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"N-fold supersymmetric models with position-dependent mass"};
  app.require_subcommand(1);
  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "error | warn | info | debug")
      ->check(CLI::IsMember({"error", "warn", "info", "debug"}));
  std::string out;

  // model
  auto* cmd_model = app.add_subcommand("model", "describe a model and optionally dump its PDM potentials");
  ModelOpts mo_model;
  mo_model.add(cmd_model);
  std::string dump_path;
  std::string range_model;
  int dump_points = 1001;
  cmd_model->add_option("--dump-potential", dump_path, "CSV output for q,U_minus,U_plus,m");
  cmd_model->add_option("--range", range_model, "q-range a:b for the dump (default: a window inside the domain)");
  cmd_model->add_option("--grid", dump_points, "points in the dump")->check(CLI::Range(2, 10000000));
  cmd_model->add_option("--out", out, "JSON output path (default stdout)");

  // analyze
  auto* cmd_analyze = app.add_subcommand("analyze", "classify dynamical breaking");
  ModelOpts mo_analyze;
  mo_analyze.add(cmd_analyze);
  bool expect_paper_analyze = false;
  std::string expect_label;
  int truncation = -1;
  cmd_analyze->add_flag("--expect-paper", expect_paper_analyze, "compare with the shipped Table-1 cell if one matches");
  cmd_analyze->add_option("--expect", expect_label, "expected classification label");
  cmd_analyze->add_option("--truncation", truncation, "entries materialized from infinite flags");
  cmd_analyze->add_option("--out", out, "JSON output path");

  // table1
  auto* cmd_table = app.add_subcommand("table1", "reproduce the breaking table");
  bool expect_paper_table = false;
  std::string defaults_path;
  int threads = 0;
  cmd_table->add_flag("--expect-paper", expect_paper_table, "exit 1 unless every cell matches");
  cmd_table->add_option("--defaults", defaults_path, "alternative defaults JSON");
  cmd_table->add_option("--threads", threads, "worker threads (default NFSUSY_THREADS or all cores)");
  cmd_table->add_option("--out", out, "JSON output path");

  // spectrum
  auto* cmd_spec = app.add_subcommand("spectrum", "finite-difference spectrum and sector membership");
  ModelOpts mo_spec;
  mo_spec.add(cmd_spec);
  std::string side_name_opt = "minus";
  int grid = 2000, count = 20;
  std::string range_spec;
  double tol = 1e-3;
  std::string json_path;
  cmd_spec->add_option("--side", side_name_opt, "minus | plus")->check(CLI::IsMember({"minus", "plus"}));
  cmd_spec->add_option("--grid", grid, "intervals on the coarsest of three grids")->check(CLI::Range(8, 100000000));
  cmd_spec->add_option("--count", count, "eigenvalues reported")->check(CLI::Range(1, 10000));
  cmd_spec->add_option("--range", range_spec, "box a:b (default: chosen from decay of the tracked levels)");
  cmd_spec->add_option("--tol", tol, "membership tolerance")->check(CLI::PositiveNumber);
  cmd_spec->add_option("--out", out, "CSV output path");
  cmd_spec->add_option("--json", json_path, "full membership report as JSON");

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "exact algebra certificates");
  std::string what, type;
  int vN = 2, draws = 10, maxdeg = 10;
  std::uint64_t seed = DrawConfig{}.seed;
  cmd_verify->add_option("--what", what, "closure | flag | intertwine")
      ->required()
      ->check(CLI::IsMember({"closure", "flag", "intertwine"}));
  cmd_verify->add_option("--type", type, "B | X2")->required()->check(CLI::IsMember({"B", "X2"}));
  cmd_verify->add_option("--N", vN, "order")->check(CLI::PositiveNumber);
  cmd_verify->add_option("--draws", draws, "random parameter draws")->check(CLI::PositiveNumber);
  cmd_verify->add_option("--maxdeg", maxdeg, "highest monomial degree for intertwining")->check(CLI::NonNegativeNumber);
  cmd_verify->add_option("--seed", seed, "seed for parameter draws");
  cmd_verify->add_option("--out", out, "JSON output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_line("E_USAGE", e.what()) << '\n';
    return kExitError;
  }
  g_log = log_level == "error" ? LogLevel::Error
          : log_level == "info" ? LogLevel::Info
          : log_level == "debug" ? LogLevel::Debug
                                  : LogLevel::Warn;

  try {
    if (cmd_model->parsed()) {
      const PdmModelInstance pm = mo_model.build();
      const ModelInstance& b = pm.base();
      Json j;
      j["model"] = b.name();
      j["N"] = b.N();
      j["params"] = b.param_strings();
      j["domain0"] = {number_or_string(b.domain0().lo), number_or_string(b.domain0().hi)};
      j["mass"] = pm.mass().id();
      j["mass_params"] = pm.mass().params();
      j["u_convention"] = mo_model.convention;
      j["domain"] = {number_or_string(pm.domain().lo), number_or_string(pm.domain().hi)};
      j["mirror"] = pm.mirror() < 0;
      for (Side s : {Side::Minus, Side::Plus}) {
        const SectorBasis sb = pm.sector(s);
        Json js;
        js["gauge_factor"] = b.gauge_description(s);
        js["truncation"] = sb.truncation;
        js["infinite_flag"] = sb.infinite_flag;
        Json entries = Json::array();
        for (const auto& e : sb.entries) entries.push_back(e.description);
        js["entries"] = entries;
        j["sector_" + std::string(side_name(s))] = js;
      }
      if (!dump_path.empty()) {
        double lo, hi;
        if (!range_model.empty()) {
          std::tie(lo, hi) = parse_range(range_model);
        } else {
          const Interval& d = pm.domain();
          lo = d.lo_infinite() ? -5.0 : d.lo;
          hi = d.hi_infinite() ? 5.0 : d.hi;
          if (d.lo_infinite() && !d.hi_infinite()) lo = d.hi - 10.0;
          if (d.hi_infinite() && !d.lo_infinite()) hi = d.lo + 10.0;
        }
        std::ostringstream csv;
        write_potential_csv(csv, pm, lo, hi, dump_points);
        write_output(dump_path, csv.str());
        j["potential_csv"] = dump_path;
        log(LogLevel::Info, "potentials written to " + dump_path);
      }
      write_output(out, document(j).dump(2));
      return kExitOk;
    }

    if (cmd_analyze->parsed()) {
      const PdmModelInstance pm = mo_analyze.build();
      ClassifyOptions opts;
      opts.truncation = truncation;
      const BreakingReport r = classify_model(pm, opts);
      std::optional<Classification> expected;
      if (!expect_label.empty()) expected = Classification::parse(expect_label);
      if (expect_paper_analyze) {
        const auto t = table_expectation(pm, parse_kv_double(mo_analyze.mass_params, "--mass-param"));
        if (!t) throw ParameterError("no shipped table cell matches this model, mass and parameters");
        expected = t;
      }
      write_output(out, document(to_json(r, expected)).dump(2));
      if (r.status == "indeterminate") return kExitError;
      if (expected && !(r.classification == *expected)) return kExitMismatch;
      return kExitOk;
    }

    if (cmd_table->parsed()) {
      std::vector<Table1Row> rows;
      if (defaults_path.empty()) {
        rows = table1_default_rows();
      } else {
        std::ifstream f(defaults_path);
        if (!f) throw Error("E_IO", "cannot read " + defaults_path);
        std::stringstream ss;
        ss << f.rdbuf();
        rows = table1_rows_from_json(ss.str());
      }
      const Table1Result r = run_table1(rows, threads);
      log(LogLevel::Info, "table evaluated in " + std::to_string(r.seconds) + " s");
      write_output(out, document(to_json(r)).dump(2));
      for (const auto& row : r.rows)
        for (const auto& c : row.cells)
          if (!c.error.empty()) {
            std::cerr << error_line("E_CELL", row.row.model + "/" + c.cell.mass + ": " + c.error) << '\n';
            return kExitError;
          }
      if (expect_paper_table && !r.all_match) return kExitMismatch;
      return kExitOk;
    }

    if (cmd_spec->parsed()) {
      const PdmModelInstance pm = mo_spec.build();
      const Side side = side_name_opt == "plus" ? Side::Plus : Side::Minus;
      GridSpec g;
      g.intervals = grid;
      g.count = count;
      if (!range_spec.empty()) std::tie(g.lo, g.hi) = parse_range(range_spec);
      const MembershipReport m = verify_eigen_membership(pm, side, tol, g);
      std::ostringstream csv;
      write_spectrum_csv(csv, m.spectrum, &m);
      write_output(out, csv.str());
      if (!json_path.empty()) write_output(json_path, document(to_json(m)).dump(2));
      if (m.hard_failure) {
        std::cerr << error_line("E_MEMBERSHIP", m.note) << '\n';
        return kExitMismatch;
      }
      return kExitOk;
    }

    if (cmd_verify->parsed()) {
      DrawConfig cfg;
      cfg.seed = seed;
      CertificateSummary c;
      if (what == "closure") c = certify_closure(type, vN, draws, cfg);
      else if (what == "flag") c = certify_flag(type, vN, draws, cfg);
      else c = certify_intertwining(type, vN, draws, maxdeg, cfg);
      Json j;
      j["what"] = what;
      j["type"] = type;
      j["N"] = vN;
      j["draws"] = draws;
      if (what == "intertwine") j["maxdeg"] = maxdeg;
      j["seed"] = seed;
      const Json cj = to_json(c);
      for (auto it = cj.begin(); it != cj.end(); ++it) j[it.key()] = it.value();
      write_output(out, document(j).dump(2));
      return c.status == "exact" ? kExitOk : kExitMismatch;
    }
  } catch (const Error& e) {
    std::cerr << error_line(e.code(), e.what()) << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << error_line("E_INTERNAL", e.what()) << '\n';
    return kExitError;
  }
  return kExitError;
}
