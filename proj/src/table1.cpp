#include "nfsusy/table1.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <json.hpp>
#include <thread>

#include "nfsusy/errors.hpp"
#include "nfsusy/table1_defaults.hpp"

namespace nfsusy {

std::vector<Table1Row> table1_rows_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("table defaults are not valid JSON: ") + e.what());
  }
  std::vector<Table1Row> rows;
  for (const auto& jr : j.at("rows")) {
    Table1Row r;
    r.model = jr.at("model").get<std::string>();
    r.table_entry = jr.value("table_entry", "");
    r.no_effect = jr.value("no_effect", false);
    for (const auto& jc : jr.at("cells")) {
      Table1Cell c;
      c.model = r.model;
      c.mass = jc.at("mass").get<std::string>();
      c.N = jc.at("N").get<int>();
      if (jc.contains("mass_params"))
        for (const auto& [k, v] : jc["mass_params"].items()) c.mass_params[k] = v.get<double>();
      if (jc.contains("params"))
        for (const auto& [k, v] : jc["params"].items()) c.params[k] = v.get<std::string>();
      c.expected = jc.at("expected").get<std::string>();
      Classification::parse(c.expected);  // validates the label
      r.cells.push_back(std::move(c));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<Table1Row> table1_default_rows() { return table1_rows_from_json(detail::kTable1DefaultsJson); }

int thread_count_from_env(int fallback) {
  if (const char* env = std::getenv("NFSUSY_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
    throw ParameterError("NFSUSY_THREADS must be a positive integer");
  }
  return fallback;
}

Table1Result run_table1(const std::vector<Table1Row>& rows, int threads, const ClassifyOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::pair<std::size_t, std::size_t>> index;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].cells.size(); ++c) index.emplace_back(r, c);

  std::vector<Table1CellResult> results(index.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < index.size(); i = next++) {
      const Table1Cell& cell = rows[index[i].first].cells[index[i].second];
      Table1CellResult& out = results[i];
      out.cell = cell;
      try {
        const ModelInstance m = build_model(cell.model, cell.N, cell.params);
        const PdmModelInstance pm = pct_map(m, make_profile(cell.mass, cell.mass_params));
        out.report = classify_model(pm, opts);
        out.match = out.report.classification == Classification::parse(cell.expected);
      } catch (const Error& e) {
        out.error = e.code() + ": " + e.what();
        out.match = false;
      }
    }
  };
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = thread_count_from_env(hw == 0 ? 1 : static_cast<int>(hw));
  }
  threads = std::max(1, std::min<int>(threads, static_cast<int>(index.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  Table1Result res;
  res.all_match = true;
  std::size_t i = 0;
  for (const Table1Row& row : rows) {
    Table1RowResult rr;
    rr.row = row;
    rr.match = true;
    for (std::size_t c = 0; c < row.cells.size(); ++c, ++i) {
      rr.cells.push_back(results[i]);
      rr.match = rr.match && results[i].match;
      ++res.cells;
      if (!results[i].match) ++res.mismatches;
    }
    if (row.no_effect) {
      // Each PDM cell must agree with the constant-mass cell at the same parameters.
      for (const auto& pdm : rr.cells) {
        if (pdm.cell.mass == "const") continue;
        bool found = false;
        for (const auto& cst : rr.cells) {
          if (cst.cell.mass != "const" || cst.cell.params != pdm.cell.params || cst.cell.N != pdm.cell.N) continue;
          found = true;
          if (!(cst.report.classification == pdm.report.classification)) rr.no_effect_holds = false;
        }
        if (!found) rr.no_effect_holds = false;
      }
      rr.match = rr.match && rr.no_effect_holds;
    }
    res.all_match = res.all_match && rr.match;
    res.rows.push_back(std::move(rr));
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace nfsusy
