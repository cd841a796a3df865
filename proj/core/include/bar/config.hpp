#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bar/env.hpp"
#include "bar/osmd.hpp"

namespace bar {

enum class Algorithm {
  osmd,
  median_elimination,
  pac_bar,
  find_best,
  rbar_sample,
  rbar_regret,
};

/// CLI/config names: osmd, median-elimination, pac-bar, find-best, rbar-sample, rbar-regret.
std::string_view to_string(Algorithm a) noexcept;
Algorithm parse_algorithm(std::string_view name);

/// The hard family: j is 1-based as written in configs (j = 1 is not allowed;
/// leave it out for the unperturbed instance).
struct HardFamilySpec {
  std::size_t n = 0;
  double eps = 0.0;
  std::optional<std::size_t> j;
};

using InstanceSpec = std::variant<std::vector<double>, HardFamilySpec>;

BernoulliInstance build_instance(const InstanceSpec& spec);

/*
Declarative experiment. JSON layout (unknown keys are rejected at every level):

  {
    "algorithm": "pac-bar",
    "instance": [0.6, 0.5, ...]  |  {"family": "H", "n": 10, "eps": 0.1, "j": 3},
    "params": {"eps": 0.1, "delta": 0.2, "m": 4, "r": 0.1, "rounds": 1000},
    "osmd": {"eta": 0.05, "estimator_variant": "centered-importance-weighted",
             "projection_tol": 1e-10},
    "trials": 2000, "seed": 7, "parallelism": 4, "output_path": "out.csv"
  }

Required params: osmd/find-best need rounds; median-elimination needs eps and
delta; pac-bar needs eps, delta and m; rbar-sample/rbar-regret need m and r.
find-best may also carry eps (used only for the contains_eps_optimal column).
Any other param is a config error.
*/
struct ExperimentConfig {
  Algorithm algorithm = Algorithm::osmd;
  InstanceSpec instance;
  std::optional<double> eps;
  std::optional<double> delta;
  std::optional<std::size_t> m;
  std::optional<double> r;
  std::optional<std::uint64_t> rounds;
  OsmdConfig osmd;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  unsigned parallelism = 1;
  std::string output_path;

  /// Throws ConfigError when params are missing, superfluous or out of range.
  void validate() const;
};

ExperimentConfig parse_experiment_config(std::string_view json_text);
/// Throws IoError if the file cannot be read, ConfigError if it is malformed.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/*
Likelihood-ratio audit description:

  {
    "mu": <instance>, "mu_alt": <instance>,
    "policy": {"kind": "round-robin", "pulls_per_arm": 100},
    "event": {"kind": "mean-exceeds", "arm": 3, "other": 1}  |  {"kind": "always"},
    "trials": 10000, "seed": 11, "parallelism": 1
  }

Arm numbers in "event" are 1-based.
*/
struct AuditConfig {
  InstanceSpec mu;
  InstanceSpec mu_alt;
  std::uint64_t pulls_per_arm = 0;
  enum class EventKind { mean_exceeds, always } event = EventKind::always;
  std::size_t event_arm = 0;    // 0-based after parsing
  std::size_t event_other = 0;  // 0-based after parsing
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  unsigned parallelism = 1;
};

AuditConfig parse_audit_config(std::string_view json_text);
AuditConfig load_audit_config(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace bar
