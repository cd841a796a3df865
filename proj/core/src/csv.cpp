#include "bar/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "bar/errors.hpp"

namespace bar {

namespace {

template <typename T>
T parse_field(std::string_view text, std::size_t line, const char* column) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("csv line " + std::to_string(line) + ": bad " + column + " '" +
                      std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, std::span<const TrialRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.trial_id << ',' << r.algorithm << ',' << r.n << ',' << r.m << ','
        << format_double(r.eps_or_r) << ',' << format_double(r.delta) << ',' << r.samples_used
        << ',' << format_double(r.realized_regret) << ',' << format_double(r.realized_gap) << ','
        << (r.contains_eps_optimal ? 1 : 0) << '\n';
  }
}

std::string to_csv(std::span<const TrialRecord> records) {
  std::ostringstream out;
  write_csv(out, records);
  return out.str();
}

std::vector<TrialRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ConfigError("csv: missing or unexpected header");
  }
  std::vector<TrialRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 10) {
      throw ConfigError("csv line " + std::to_string(line_no) + ": expected 10 fields");
    }
    TrialRecord r;
    r.trial_id = parse_field<std::uint64_t>(f[0], line_no, "trial_id");
    r.algorithm = std::string(f[1]);
    r.n = parse_field<std::size_t>(f[2], line_no, "n");
    r.m = parse_field<std::size_t>(f[3], line_no, "m");
    r.eps_or_r = parse_field<double>(f[4], line_no, "eps_or_r");
    r.delta = parse_field<double>(f[5], line_no, "delta");
    r.samples_used = parse_field<std::uint64_t>(f[6], line_no, "samples_used");
    r.realized_regret = parse_field<double>(f[7], line_no, "realized_regret");
    r.realized_gap = parse_field<double>(f[8], line_no, "realized_gap");
    const auto flag = parse_field<int>(f[9], line_no, "contains_eps_optimal");
    if (flag != 0 && flag != 1) {
      throw ConfigError("csv line " + std::to_string(line_no) + ": contains_eps_optimal must be 0 or 1");
    }
    r.contains_eps_optimal = flag == 1;
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace bar
