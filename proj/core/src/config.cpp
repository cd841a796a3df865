#include "bar/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "bar/errors.hpp"

namespace bar {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_as(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
std::optional<T> get_optional(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return get_as<T>(obj, key, where);
}

std::uint64_t get_count(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned()) {
    throw ConfigError(where + "." + key + ": expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

InstanceSpec parse_instance(const json& node, const std::string& where) {
  if (node.is_array()) {
    std::vector<double> means;
    for (const auto& v : node) {
      if (!v.is_number()) throw ConfigError(where + ": means must be numbers");
      means.push_back(v.get<double>());
    }
    return means;
  }
  reject_unknown_keys(node, {"family", "n", "eps", "j"}, where);
  const auto family = get_as<std::string>(node, "family", where);
  if (family != "H") throw ConfigError(where + ": unknown instance family '" + family + "'");
  HardFamilySpec spec;
  spec.n = static_cast<std::size_t>(get_count(node, "n", where));
  spec.eps = get_as<double>(node, "eps", where);
  if (node.contains("j") && !node.at("j").is_null()) {
    spec.j = static_cast<std::size_t>(get_count(node, "j", where));
  }
  return spec;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::osmd: return "osmd";
    case Algorithm::median_elimination: return "median-elimination";
    case Algorithm::pac_bar: return "pac-bar";
    case Algorithm::find_best: return "find-best";
    case Algorithm::rbar_sample: return "rbar-sample";
    case Algorithm::rbar_regret: return "rbar-regret";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::osmd, Algorithm::median_elimination, Algorithm::pac_bar,
                 Algorithm::find_best, Algorithm::rbar_sample, Algorithm::rbar_regret}) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

BernoulliInstance build_instance(const InstanceSpec& spec) {
  try {
    if (const auto* means = std::get_if<std::vector<double>>(&spec)) {
      return BernoulliInstance(*means);
    }
    const auto& h = std::get<HardFamilySpec>(spec);
    std::optional<ArmIndex> j;
    if (h.j) {
      if (*h.j == 0) throw ConfigError("instance: j is 1-based; 0 is not a valid arm");
      j = *h.j - 1;
    }
    return hard_instance(h.n, h.eps, j);
  } catch (const InputError& e) {
    throw ConfigError(std::string("instance: ") + e.what());
  }
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
  const auto instance_size = build_instance(instance).size();

  const bool wants_eps = algorithm == Algorithm::median_elimination || algorithm == Algorithm::pac_bar;
  const bool allows_eps = wants_eps || algorithm == Algorithm::find_best;
  const bool wants_delta = wants_eps;
  const bool wants_m = algorithm == Algorithm::pac_bar || algorithm == Algorithm::rbar_sample ||
                       algorithm == Algorithm::rbar_regret;
  const bool wants_r = algorithm == Algorithm::rbar_sample || algorithm == Algorithm::rbar_regret;
  const bool wants_rounds = algorithm == Algorithm::osmd || algorithm == Algorithm::find_best;
  const std::string who(to_string(algorithm));

  auto check = [&](bool present, bool wanted, bool allowed, const char* name) {
    if (wanted && !present) throw ConfigError(who + " requires params." + name);
    if (present && !allowed) throw ConfigError(who + " does not take params." + name);
  };
  check(eps.has_value(), wants_eps, allows_eps, "eps");
  check(delta.has_value(), wants_delta, wants_delta, "delta");
  check(m.has_value(), wants_m, wants_m, "m");
  check(r.has_value(), wants_r, wants_r, "r");
  check(rounds.has_value(), wants_rounds, wants_rounds, "rounds");

  if (eps && !(*eps > 0.0 && *eps < 1.0)) throw ConfigError("params.eps must be in (0,1)");
  if (delta && !(*delta > 0.0 && *delta < 1.0)) throw ConfigError("params.delta must be in (0,1)");
  if (m && (*m < 1 || *m > instance_size)) throw ConfigError("params.m must be in [1, n]");
  if (r && !(*r > 0.0)) throw ConfigError("params.r must be positive");
  try {
    osmd.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  const json root = parse_json(json_text);
  reject_unknown_keys(root,
                      {"algorithm", "instance", "params", "osmd", "trials", "seed", "parallelism",
                       "output_path"},
                      "config");
  ExperimentConfig cfg;
  cfg.algorithm = parse_algorithm(get_as<std::string>(root, "algorithm", "config"));
  if (!root.contains("instance")) throw ConfigError("config: missing 'instance'");
  cfg.instance = parse_instance(root.at("instance"), "config.instance");

  if (root.contains("params")) {
    const auto& p = root.at("params");
    reject_unknown_keys(p, {"eps", "delta", "m", "r", "rounds"}, "config.params");
    cfg.eps = get_optional<double>(p, "eps", "config.params");
    cfg.delta = get_optional<double>(p, "delta", "config.params");
    cfg.r = get_optional<double>(p, "r", "config.params");
    if (p.contains("m")) cfg.m = static_cast<std::size_t>(get_count(p, "m", "config.params"));
    if (p.contains("rounds")) cfg.rounds = get_count(p, "rounds", "config.params");
  }
  if (root.contains("osmd")) {
    const auto& o = root.at("osmd");
    reject_unknown_keys(o, {"eta", "estimator_variant", "projection_tol"}, "config.osmd");
    cfg.osmd.learning_rate = get_optional<double>(o, "eta", "config.osmd");
    if (o.contains("estimator_variant")) {
      try {
        cfg.osmd.estimator =
            parse_estimator_variant(get_as<std::string>(o, "estimator_variant", "config.osmd"));
      } catch (const InputError& e) {
        throw ConfigError(e.what());
      }
    }
    if (auto tol = get_optional<double>(o, "projection_tol", "config.osmd")) {
      cfg.osmd.projection_tol = *tol;
    }
  }
  if (root.contains("trials")) cfg.trials = get_count(root, "trials", "config");
  if (root.contains("seed")) cfg.seed = get_count(root, "seed", "config");
  if (root.contains("parallelism")) {
    cfg.parallelism = static_cast<unsigned>(get_count(root, "parallelism", "config"));
  }
  if (root.contains("output_path")) {
    cfg.output_path = get_as<std::string>(root, "output_path", "config");
  }
  if (cfg.rounds) cfg.osmd.rounds = *cfg.rounds;
  cfg.validate();
  return cfg;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_text_file(path));
}

AuditConfig parse_audit_config(std::string_view json_text) {
  const json root = parse_json(json_text);
  reject_unknown_keys(root, {"mu", "mu_alt", "policy", "event", "trials", "seed", "parallelism"},
                      "audit");
  AuditConfig cfg;
  if (!root.contains("mu") || !root.contains("mu_alt")) {
    throw ConfigError("audit: 'mu' and 'mu_alt' are required");
  }
  cfg.mu = parse_instance(root.at("mu"), "audit.mu");
  cfg.mu_alt = parse_instance(root.at("mu_alt"), "audit.mu_alt");
  const auto n = build_instance(cfg.mu).size();
  if (build_instance(cfg.mu_alt).size() != n) {
    throw ConfigError("audit: mu and mu_alt must have the same number of arms");
  }

  if (!root.contains("policy") || !root.contains("event")) {
    throw ConfigError("audit: 'policy' and 'event' are required");
  }
  const auto& policy = root.at("policy");
  reject_unknown_keys(policy, {"kind", "pulls_per_arm"}, "audit.policy");
  if (get_as<std::string>(policy, "kind", "audit.policy") != "round-robin") {
    throw ConfigError("audit.policy: only 'round-robin' is supported");
  }
  cfg.pulls_per_arm = get_count(policy, "pulls_per_arm", "audit.policy");

  const auto& event = root.at("event");
  reject_unknown_keys(event, {"kind", "arm", "other"}, "audit.event");
  const auto kind = get_as<std::string>(event, "kind", "audit.event");
  if (kind == "always") {
    cfg.event = AuditConfig::EventKind::always;
  } else if (kind == "mean-exceeds") {
    cfg.event = AuditConfig::EventKind::mean_exceeds;
    const auto arm = get_count(event, "arm", "audit.event");
    const auto other = get_count(event, "other", "audit.event");
    if (arm < 1 || arm > n || other < 1 || other > n) {
      throw ConfigError("audit.event: arms are 1-based and must be within the instance");
    }
    cfg.event_arm = static_cast<std::size_t>(arm - 1);
    cfg.event_other = static_cast<std::size_t>(other - 1);
  } else {
    throw ConfigError("audit.event: unknown kind '" + kind + "'");
  }
  if (root.contains("trials")) cfg.trials = get_count(root, "trials", "audit");
  if (cfg.trials < 1) throw ConfigError("audit: trials must be >= 1");
  if (root.contains("seed")) cfg.seed = get_count(root, "seed", "audit");
  if (root.contains("parallelism")) {
    cfg.parallelism = static_cast<unsigned>(get_count(root, "parallelism", "audit"));
  }
  if (cfg.parallelism < 1) throw ConfigError("audit: parallelism must be >= 1");
  return cfg;
}

AuditConfig load_audit_config(const std::filesystem::path& path) {
  return parse_audit_config(read_text_file(path));
}

}  // namespace bar
