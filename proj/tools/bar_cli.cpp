// bar: run experiments, self-checks and the likelihood-ratio audit.
// Exit codes: 0 pass, 1 a gate or check failed, 2 bad config or I/O.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bar/audit.hpp"
#include "bar/config.hpp"
#include "bar/errors.hpp"
#include "bar/experiment.hpp"
#include "verify.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kGateFailure = 1;
constexpr int kConfigError = 2;

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> parallelism;
};

int cmd_run(const RunOptions& opts) {
  auto config = bar::load_experiment_config(opts.config);
  if (opts.seed) config.seed = *opts.seed;
  if (opts.out) config.output_path = *opts.out;
  if (opts.parallelism) config.parallelism = *opts.parallelism;
  config.validate();
  const auto summary = bar::run_experiment(config);
  bar::print_summary(std::cout, summary);
  return summary.passed() ? kPass : kGateFailure;
}

int cmd_verify(const std::string& suite) {
  bool ok = true;
  if (suite == "kl" || suite == "all") {
    std::cout << "== kl ==\n";
    const auto checks = bar::verify::kl_suite();
    bar::verify::print_checks(std::cout, checks);
    ok = ok && bar::verify::all_passed(checks);
  }
  if (suite == "osmd" || suite == "all") {
    std::cout << "== osmd ==\n";
    const auto checks = bar::verify::osmd_suite();
    bar::verify::print_checks(std::cout, checks);
    ok = ok && bar::verify::all_passed(checks);
  }
  return ok ? kPass : kGateFailure;
}

int cmd_audit(const std::string& path) {
  const auto result = bar::run_audit(bar::load_audit_config(path));
  bar::print_audit(std::cout, result);
  return result.passed() ? kPass : kGateFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit best-arm retention experiments"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run->add_option("--config", run_opts.config, "Experiment config")->required();
  run->add_option("--seed", run_opts.seed, "Override the config seed");
  run->add_option("--out", run_opts.out, "Override the CSV output path");
  run->add_option("--parallelism", run_opts.parallelism, "Worker threads")
      ->check(CLI::PositiveNumber);

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "Run numeric self-checks");
  verify->add_option("suite", suite, "kl, osmd or all")->check(CLI::IsMember({"kl", "osmd", "all"}));

  std::string audit_path;
  auto* audit = app.add_subcommand("audit-lb", "Monte Carlo change-of-measure audit");
  audit->add_option("--config", audit_path, "Audit config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*verify) return cmd_verify(suite);
    if (*audit) return cmd_audit(audit_path);
  } catch (const bar::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const bar::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kConfigError;
  } catch (const bar::InputError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}
