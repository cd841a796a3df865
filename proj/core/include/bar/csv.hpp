#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bar {

/// One CSV row: the outcome of a single trial.
struct TrialRecord {
  std::uint64_t trial_id = 0;
  std::string algorithm;
  std::size_t n = 0;
  std::size_t m = 0;
  double eps_or_r = 0.0;
  double delta = 0.0;
  std::uint64_t samples_used = 0;
  double realized_regret = 0.0;
  double realized_gap = 0.0;
  bool contains_eps_optimal = false;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

inline constexpr std::string_view kCsvHeader =
    "trial_id,algorithm,n,m,eps_or_r,delta,samples_used,realized_regret,realized_gap,"
    "contains_eps_optimal";

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

void write_csv(std::ostream& out, std::span<const TrialRecord> records);
std::string to_csv(std::span<const TrialRecord> records);

/// Parses a file produced by write_csv. Throws ConfigError on a malformed row
/// or a header that differs from kCsvHeader.
std::vector<TrialRecord> read_csv(std::istream& in);

}  // namespace bar
