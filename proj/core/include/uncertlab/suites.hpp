#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace uncertlab::cli {

struct CheckResult {
  std::string id;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteOptions {
  unsigned workers = 2;
  bool fast = false;          // tenfold fewer trials, widened tolerances
  std::string out_dir;        // calibration suite writes tables here
  std::uint64_t seed = 2718281828459045235ull;  // master seed for the batteries
};

// The acceptance battery: one entry per criterion, run at the pinned
// parameters and tolerances.
std::vector<CheckResult> run_acceptance(const SuiteOptions& options);

// Cross-module property batteries.
std::vector<CheckResult> run_invariants(const SuiteOptions& options);

// Regenerates the verifier calibration tables deterministically.
std::vector<CheckResult> run_calibration(const SuiteOptions& options);

std::vector<CheckResult> run_suite(const std::string& name,
                                   const SuiteOptions& options);

// Prints one pass/fail line per check; returns true when all passed.
bool print_suite_results(const std::vector<CheckResult>& results);

}  // namespace uncertlab::cli
