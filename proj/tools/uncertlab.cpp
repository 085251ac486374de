// Experiment runner for the uncertain-communication lab. Every subcommand
// maps to one experiment kind; `suite` runs the acceptance, invariants, or
// calibration battery. Exit codes: 0 ok, 2 configuration error, 3 check or
// assertion failure.

#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "uncertlab/experiments.hpp"
#include "uncertlab/suites.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 1;
  std::uint64_t trials = 0;
  unsigned workers = 2;
  bool fast = false;
  std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON configuration file");
  cmd->add_option("--seed", flags.seed, "master seed");
  cmd->add_option("--trials", flags.trials, "trial count (0 = default)");
  cmd->add_option("--workers", flags.workers, "worker threads");
  cmd->add_flag("--fast", flags.fast,
                "tenfold fewer trials with widened tolerances");
  cmd->add_option("--out", flags.out_dir, "report output directory");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw uncertlab::cli::ConfigError("cannot read config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_kind(const std::string& kind, const CLI::App* cmd,
             const CommonFlags& flags) {
  uncertlab::cli::RunOptions opt;
  opt.seed = flags.seed;
  opt.trials = flags.trials;
  opt.workers = flags.workers;
  opt.fast = flags.fast;
  opt.out_dir = flags.out_dir;

  uncertlab::ExperimentReport rep;
  if (!flags.config_path.empty()) {
    std::vector<std::string> overridden;
    for (const char* name : {"--seed", "--trials", "--workers", "--fast", "--out"})
      if (cmd->count(name)) overridden.push_back(name + 2);
    rep = uncertlab::cli::run_from_document(slurp(flags.config_path), opt,
                                            overridden);
  } else {
    rep = uncertlab::cli::run_experiment(kind, "{}", opt);
  }
  std::fputs(uncertlab::cli::report_csv(rep).c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uncertlab: protocol and distance experiments for one-way "
               "communication under contextual uncertainty"};
  app.require_subcommand(1);

  std::vector<std::pair<CLI::App*, CommonFlags>> subs;
  subs.reserve(16);
  for (const auto& kind : uncertlab::cli::experiment_kinds()) {
    auto* cmd = app.add_subcommand(kind, "run the " + kind + " experiment");
    subs.emplace_back(cmd, CommonFlags{});
    add_common(cmd, subs.back().second);
  }

  CommonFlags suite_flags;
  std::string suite_name;
  auto* suite_cmd =
      app.add_subcommand("suite", "run a named battery of checks");
  suite_cmd->add_option("name", suite_name, "acceptance | invariants | calibration")
      ->required();
  add_common(suite_cmd, suite_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (suite_cmd->parsed()) {
      uncertlab::cli::SuiteOptions so;
      so.workers = suite_flags.workers;
      so.fast = suite_flags.fast;
      so.out_dir = suite_flags.out_dir;
      if (suite_cmd->count("--seed")) so.seed = suite_flags.seed;
      const auto results = uncertlab::cli::run_suite(suite_name, so);
      return uncertlab::cli::print_suite_results(results) ? 0 : 3;
    }
    const auto kinds = uncertlab::cli::experiment_kinds();
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      if (subs[i].first->parsed())
        return run_kind(kinds[i], subs[i].first, subs[i].second);
    }
    std::fprintf(stderr, "no subcommand selected\n");
    return 2;
  } catch (const uncertlab::cli::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
