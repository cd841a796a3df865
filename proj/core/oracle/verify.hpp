#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bar::verify {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::uint64_t cases = 0;
  /// Smallest lhs - rhs (or largest error, for tolerance checks) seen.
  double worst = 0.0;
  std::string detail;
};

/// Calibrated constant for the d((1-delta)/2 + 1/(2n), 1-delta) >= c ((1-delta)/2 - 1/(2n))
/// bound on the domain (1-delta) n >= 2, 3 <= n <= n_max.
struct BaiCalibration {
  double constant = 0.0;
  std::size_t argmin_n = 0;
  double argmin_delta = 0.0;
};
BaiCalibration calibrate_bai_constant(std::size_t n_max = 10000);

/// KL facts and lemmas on exhaustive 0.01 grids plus `draws` random draws each.
std::vector<CheckResult> kl_suite(std::uint64_t seed = 2024, std::size_t draws = 10000);

/// Mirror-step oracle equivalence on `triples` random 2- and 3-arm problems plus
/// simplex invariants and estimator cross-checks.
std::vector<CheckResult> osmd_suite(std::uint64_t seed = 2024, std::size_t triples = 100);

bool all_passed(std::span<const CheckResult> results);
void print_checks(std::ostream& out, std::span<const CheckResult> results);

}  // namespace bar::verify
