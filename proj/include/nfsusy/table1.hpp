#pragma once

#include <map>
#include <string>
#include <vector>

#include "nfsusy/normalizability.hpp"

namespace nfsusy {

struct Table1Cell {
  std::string model;
  std::string mass;
  std::map<std::string, double> mass_params;
  int N = 1;
  std::map<std::string, std::string> params;
  std::string expected;  // classification string
};

struct Table1Row {
  std::string model;
  std::string table_entry;  // the tabulated wording
  bool no_effect = false;   // every PDM cell must match the constant-mass cell with the same parameters
  std::vector<Table1Cell> cells;
};

struct Table1CellResult {
  Table1Cell cell;
  BreakingReport report;
  std::string error;  // set when the cell could not be evaluated
  bool match = false;
};

struct Table1RowResult {
  Table1Row row;
  std::vector<Table1CellResult> cells;
  bool no_effect_holds = true;
  bool match = false;
};

struct Table1Result {
  std::vector<Table1RowResult> rows;
  bool all_match = false;
  int cells = 0;
  int mismatches = 0;
  double seconds = 0.0;
};

// The shipped defaults (embedded at build time).
std::vector<Table1Row> table1_default_rows();
std::vector<Table1Row> table1_rows_from_json(const std::string& text);

// Evaluates every cell; threads <= 0 reads NFSUSY_THREADS (default: hardware concurrency).
// Results do not depend on the thread count.
Table1Result run_table1(const std::vector<Table1Row>& rows, int threads = 0, const ClassifyOptions& opts = {});

int thread_count_from_env(int fallback);

}  // namespace nfsusy
