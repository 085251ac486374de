#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uncertlab/report.hpp"

namespace uncertlab::cli {

// Configuration problems (unknown experiment, unknown key, bad value) are
// distinguished from execution failures; the CLI maps them to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::uint64_t seed = 1;
  std::uint64_t trials = 0;  // 0 = experiment default
  unsigned workers = 1;
  bool fast = false;         // tenfold fewer trials, widened tolerances
  std::string out_dir;       // empty = no files written
};

// Known experiment kinds, in CLI order.
std::vector<std::string> experiment_kinds();

// Runs one experiment. `params_json` is a single JSON object; unknown keys
// are errors (fail-closed). Writes CSV and JSON reports when out_dir is set.
ExperimentReport run_experiment(const std::string& kind,
                                const std::string& params_json,
                                const RunOptions& options);

// Full configuration document:
// {"experiment": ..., "params": {...}, "trials": ..., "seed": ...,
//  "workers": ..., "fast": ..., "out": ...}. CLI flag overrides win.
ExperimentReport run_from_document(const std::string& document_json,
                                   const RunOptions& overrides,
                                   const std::vector<std::string>& set_keys);

// Fixed-column CSV: experiment_id, named params, trials, estimate, stderr,
// ci95_lo, ci95_hi, seed. One row per estimate; the estimate name is echoed
// as the `metric` parameter column.
std::string report_csv(const ExperimentReport& report);
std::string report_json(const ExperimentReport& report);

void write_report_files(const ExperimentReport& report,
                        const std::string& out_dir);

}  // namespace uncertlab::cli
