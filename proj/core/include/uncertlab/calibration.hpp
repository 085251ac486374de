#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace uncertlab::verifiers {

// Measured sign-agreement rates of the block-sum sketch, used to invert
// agreement into inner-product estimates.
struct CalibrationRow {
  double rho;
  double target;     // exact inner product of the synthetic pair
  double agreement;  // measured agreement probability
};

struct CalibrationTable {
  std::vector<double> rho_grid;
  std::uint32_t d = 0;
  std::uint64_t repetitions = 0;
  std::uint64_t seed = 0;
  std::vector<CalibrationRow> rows;
};

// For each grid rho and each target inner product, measures the agreement
// rate of the sketch on synthetic +-1 vectors with that exact inner product.
// d must be a multiple of 8 and at least 64 so the target grid is exact.
CalibrationTable sheppard_calibration(const std::vector<double>& rho_grid,
                                      std::uint32_t d,
                                      std::uint64_t repetitions,
                                      std::uint64_t seed);

// Versioned text persistence: header lines, then one row per line.
void save_calibration(const CalibrationTable& table, std::ostream& out);
CalibrationTable load_calibration(std::istream& in);

// Least-squares fit of cos(pi*(1-agreement)) against the target, pooled over
// the nonzero targets of a table restricted to one rho.
double fit_effective_correlation(const CalibrationTable& table, double rho);

// Effective correlation used by the estimator's inversion, calibrated once
// per rho from a fixed internal seed and memoized.
double effective_correlation(double rho);

}  // namespace uncertlab::verifiers
