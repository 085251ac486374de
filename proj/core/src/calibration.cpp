#include "uncertlab/calibration.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "uncertlab/gip.hpp"

namespace uncertlab::verifiers {

namespace {

const std::vector<double>& target_grid() {
  static const std::vector<double> g = {-1.0, -0.75, -0.5, -0.25, 0.0,
                                        0.25, 0.5,   0.75, 1.0};
  return g;
}

// u all +1; v with exactly (1-c)/2 * d entries flipped, so <u,v>/d = c.
std::vector<std::uint64_t> mask_for_target(double c, std::uint32_t d) {
  const double flips_real = (1.0 - c) / 2.0 * d;
  const auto flips = static_cast<std::uint32_t>(std::llround(flips_real));
  if (std::abs(flips_real - flips) > 1e-9)
    throw std::invalid_argument("calibration target not exact at dimension d");
  std::vector<std::uint64_t> mask(d, 0ull);
  for (std::uint32_t i = 0; i < flips; ++i) mask[i] = ~0ull;
  return mask;
}

double measure_agreement(double rho, double target, std::uint32_t d,
                         std::uint64_t repetitions, std::uint64_t seed) {
  protocols::IsrBlockKernel kernel(rho, seed, d);
  const std::vector<std::uint64_t> alice_mask(d, 0ull);  // u = all +1
  const std::vector<std::vector<std::uint64_t>> targets = {
      mask_for_target(target, d)};
  std::uint64_t agree = 0;
  int sign = 0;
  for (std::uint64_t rep = 0; rep < repetitions; ++rep) {
    const int ab = kernel.run_rep(rep, alice_mask, targets, &sign);
    if (ab == sign) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(repetitions);
}

}  // namespace

CalibrationTable sheppard_calibration(const std::vector<double>& rho_grid,
                                      std::uint32_t d,
                                      std::uint64_t repetitions,
                                      std::uint64_t seed) {
  if (d < 64 || d % 8 != 0)
    throw std::invalid_argument("sheppard_calibration: d >= 64, multiple of 8");
  if (repetitions == 0)
    throw std::invalid_argument("sheppard_calibration: repetitions >= 1");
  CalibrationTable table;
  table.rho_grid = rho_grid;
  table.d = d;
  table.repetitions = repetitions;
  table.seed = seed;
  for (double rho : rho_grid) {
    for (double c : target_grid()) {
      const std::uint64_t sub = Rng::derive_key(
          seed, {tag_hash("calibration"),
                 static_cast<std::uint64_t>(std::llround(rho * 1e9)),
                 static_cast<std::uint64_t>(std::llround((c + 2.0) * 1e9))});
      table.rows.push_back({rho, c, measure_agreement(rho, c, d, repetitions, sub)});
    }
  }
  return table;
}

void save_calibration(const CalibrationTable& table, std::ostream& out) {
  out << "# uncertlab-calibration v1\n";
  out << "# d=" << table.d << " repetitions=" << table.repetitions
      << " seed=" << table.seed << "\n";
  out << "# rho_grid=";
  for (std::size_t i = 0; i < table.rho_grid.size(); ++i)
    out << (i ? "," : "") << table.rho_grid[i];
  out << "\n";
  out << "rho target agreement\n";
  out.precision(17);
  for (const auto& r : table.rows)
    out << r.rho << " " << r.target << " " << r.agreement << "\n";
}

CalibrationTable load_calibration(std::istream& in) {
  CalibrationTable table;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# uncertlab-calibration", 0) != 0)
    throw std::runtime_error("calibration file: bad header");
  if (!std::getline(in, line) ||
      std::sscanf(line.c_str(), "# d=%u repetitions=%llu seed=%llu", &table.d,
                  reinterpret_cast<unsigned long long*>(&table.repetitions),
                  reinterpret_cast<unsigned long long*>(&table.seed)) != 3)
    throw std::runtime_error("calibration file: bad parameter line");
  if (!std::getline(in, line) || line.rfind("# rho_grid=", 0) != 0)
    throw std::runtime_error("calibration file: bad grid line");
  {
    std::stringstream ss(line.substr(11));
    std::string tok;
    while (std::getline(ss, tok, ',')) table.rho_grid.push_back(std::stod(tok));
  }
  std::getline(in, line);  // column header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CalibrationRow r{};
    std::stringstream ss(line);
    if (!(ss >> r.rho >> r.target >> r.agreement))
      throw std::runtime_error("calibration file: bad row");
    table.rows.push_back(r);
  }
  return table;
}

double fit_effective_correlation(const CalibrationTable& table, double rho) {
  double num = 0.0, den = 0.0;
  for (const auto& r : table.rows) {
    if (std::abs(r.rho - rho) > 1e-12) continue;
    if (r.target == 0.0 || std::abs(r.target) == 1.0) continue;  // no slope / saturated
    num += r.target * std::cos(M_PI * (1.0 - r.agreement));
    den += r.target * r.target;
  }
  if (den == 0.0)
    throw std::invalid_argument("fit_effective_correlation: rho not in table");
  return num / den;
}

double effective_correlation(double rho) {
  static std::mutex mu;
  static std::map<long long, double> cache;
  const long long key = std::llround(rho * 1e12);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  constexpr std::uint64_t kInternalSeed = 0x5ca1ab1e5eedull;
  constexpr std::uint64_t kInternalReps = 1ull << 17;
  const CalibrationTable t =
      sheppard_calibration({rho}, 64, kInternalReps, kInternalSeed);
  const double eff = fit_effective_correlation(t, rho);
  cache.emplace(key, eff);
  return eff;
}

}  // namespace uncertlab::verifiers
