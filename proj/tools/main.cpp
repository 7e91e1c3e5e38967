#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "dqed/cli_runner.hpp"
#include "dqed/core/errors.hpp"

using namespace dqed;

// Exit codes: 0 all checks as expected, 1 a check failed, 2 invalid input,
// 3 a computation raised an error.
int main(int argc, char** argv) {
  CLI::App app{"Dissipative QED kernels: scenarios, sweeps and named verifications"};
  app.require_subcommand(1);

  std::string out_dir = "out";
  int threads = 1;
  std::string units;
  app.add_option("--out-dir", out_dir, "Directory for CSV/JSON outputs and the kernel cache");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--units", units, "Override the scenario's input units")->check(CLI::IsMember({"si", "natural"}));

  std::string scenario_file;
  CLI::App* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario_file, "Scenario TOML")->required()->check(CLI::ExistingFile);

  std::string check_name;
  std::uint64_t seed = 12345;
  CLI::App* check = app.add_subcommand("check", "Run one named check");
  check->add_option("name", check_name, "Check name (see list-checks)")->required();
  check->add_option("--seed", seed, "Seed for randomized checks");

  std::string filter;
  CLI::App* list = app.add_subcommand("list-checks", "List named checks, optionally filtered by name or module");
  list->add_option("filter", filter, "Substring of a check or module name");

  CLI11_PARSE(app, argc, argv);

  std::optional<cli::UnitSystem> unit_override;
  if (units == "si") unit_override = cli::UnitSystem::si;
  if (units == "natural") unit_override = cli::UnitSystem::natural;

  try {
    if (*list) {
      for (const cli::CheckInfo* c : cli::list_checks(filter))
        std::cout << std::left << std::setw(22) << c->name << std::setw(19) << c->module << c->description
                  << "  [" << c->anchor << "]\n";
      return 0;
    }
    if (*check) {
      const cli::CheckInfo* c = cli::find_check(check_name);
      if (!c) {
        std::cerr << "unknown check '" << check_name << "'; see list-checks\n";
        return 2;
      }
      const cli::CheckResult r = cli::run_check(*c, seed);
      std::cout << c->name << ": " << cli::status_name(r.status) << "  measured " << r.measured << "  threshold "
                << r.threshold << "\n  " << r.detail << "\n";
      if (r.status == cli::Status::error) return 3;
      return (r.status == cli::Status::pass) == c->expect_pass ? 0 : 1;
    }
    cli::RunOptions opt;
    opt.out_dir = out_dir;
    opt.threads = threads;
    opt.units = unit_override;
    const cli::Scenario s = cli::load_scenario(scenario_file, unit_override);
    const cli::RunReport rep = cli::run_scenario(s, opt, std::cout);
    return rep.as_expected() ? 0 : 1;
  } catch (const ValidationError& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
