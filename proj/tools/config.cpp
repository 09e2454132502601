#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace lvs::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void check_known(const std::string& key) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError(key, "unknown configuration key");
  }
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (trim(text.substr(used)).empty() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key, "expected a number, got '" + text + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

// "u,v; u,v; ..."
std::vector<Point2D> parse_points(const std::string& key, const std::string& text) {
  std::vector<Point2D> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (trim(item).empty()) continue;
    const auto comma = item.find(',');
    if (comma == std::string::npos) {
      throw ConfigError(key, "expected 'u,v' pairs separated by ';'");
    }
    out.push_back({parse_double(key, item.substr(0, comma)),
                   parse_double(key, item.substr(comma + 1))});
  }
  return out;
}

template <class Fn>
void guarded(const std::string& key, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace

KeyValues KeyValues::from_file(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("--config", e.what());
  }
  KeyValues kv;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ConfigError(section, "key outside of a [section]");
    }
    for (const auto& [name, value] : body) {
      kv.put(section + "." + name, value.get_value<std::string>());
    }
  }
  return kv;
}

void KeyValues::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError(assignment, "override must look like section.key=value");
  }
  put(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void KeyValues::put(const std::string& key, const std::string& value) {
  check_known(key);
  values_[key] = trim(value);
}

std::optional<std::string> KeyValues::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> KeyValues::get_double(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  return parse_double(key, *v);
}

std::optional<std::size_t> KeyValues::get_count(const std::string& key) const {
  const auto v = get_u64(key);
  if (!v) return std::nullopt;
  return static_cast<std::size_t>(*v);
}

std::optional<std::uint64_t> KeyValues::get_u64(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  return parse_u64(key, *v);
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "geometry.count",          "geometry.side_m",
      "geometry.claimed_u",      "geometry.claimed_v",
      "geometry.stations",       "geometry.collinearity_tolerance_m",
      "channel.sigma_dB",        "channel.path_loss_exponent",
      "channel.ref_power_dB",    "channel.ref_distance_m",
      "priors.p0",               "threat.model",
      "threat.radius_m",         "threat.inner_m",
      "threat.outer_m",          "threat.rho_factor",
      "threat.outer_ratio",      "rule.kind",
      "rule.integration",        "rule.radial_nodes",
      "rule.angular_nodes",      "rule.mc_samples",
      "rule.mc_seed",            "sim.L",
      "sim.trials",              "sim.seed",
      "sim.repeats",             "sim.threads",
      "sim.lnT_min",             "sim.lnT_max",
      "sim.lnT_points",
  };
  return keys;
}

const std::vector<std::string>& required_keys() {
  static const std::vector<std::string> keys = {"channel.sigma_dB",
                                                "channel.path_loss_exponent"};
  return keys;
}

void require_keys(const KeyValues& kv, const std::vector<std::string>& keys) {
  for (const auto& k : keys) {
    if (!kv.has(k)) throw ConfigError(k, "required key is missing");
  }
}

ExperimentConfig apply(const KeyValues& kv, ExperimentConfig c) {
  auto& g = c.geometry;
  if (auto v = kv.get_count("geometry.count")) g.count = *v;
  if (auto v = kv.get_double("geometry.side_m")) g.side_m = *v;
  if (auto v = kv.get_double("geometry.claimed_u")) g.claimed.u = *v;
  if (auto v = kv.get_double("geometry.claimed_v")) g.claimed.v = *v;
  if (auto v = kv.get_double("geometry.collinearity_tolerance_m")) {
    g.collinearity_tolerance_m = *v;
  }
  if (auto v = kv.get("geometry.stations")) {
    g.base_stations = parse_points("geometry.stations", *v);
  }

  if (auto v = kv.get_double("channel.sigma_dB")) c.channel.shadowing_sigma_dB = *v;
  if (auto v = kv.get_double("channel.path_loss_exponent")) c.channel.path_loss_exponent = *v;
  if (auto v = kv.get_double("channel.ref_power_dB")) c.channel.ref_power_dB = *v;
  if (auto v = kv.get_double("channel.ref_distance_m")) c.channel.ref_distance_m = *v;
  if (auto v = kv.get_double("priors.p0")) c.priors.prior_legitimate = *v;

  auto& t = c.threat;
  if (auto v = kv.get("threat.model")) {
    if (*v == "ffa") {
      t.kind = ThreatSpec::Kind::kFarField;
    } else if (*v == "circle" || *v == "uda") {
      t.kind = ThreatSpec::Kind::kCircle;
    } else if (*v == "annulus" || *v == "md") {
      t.kind = ThreatSpec::Kind::kAnnulus;
    } else {
      throw ConfigError("threat.model", "expected ffa, circle or annulus, got '" + *v + "'");
    }
  }
  if (auto v = kv.get_double("threat.radius_m")) t.radius_m = *v;
  if (auto v = kv.get_double("threat.inner_m")) t.inner_m = *v;
  if (auto v = kv.get_double("threat.outer_m")) t.outer_m = *v;
  if (auto v = kv.get_double("threat.outer_ratio")) t.outer_ratio = *v;
  if (auto v = kv.get_double("threat.rho_factor")) {
    guarded("threat.rho_factor", [&] {
      if (!(*v > 0.0)) throw std::invalid_argument("must be positive");
    });
    t.rho = *v * rho_star(c.channel);
  }

  if (auto v = kv.get("rule.kind")) {
    const auto kind = parse_statistic_kind(*v);
    if (!kind) throw ConfigError("rule.kind", "unknown rule '" + *v + "'");
    c.rule = *kind;
  }
  if (auto v = kv.get("rule.integration")) {
    if (*v == "polar") {
      c.integration.method = IntegrationMethod::kPolarQuadrature;
    } else if (*v == "monte-carlo") {
      c.integration.method = IntegrationMethod::kMonteCarloPrior;
    } else {
      throw ConfigError("rule.integration", "expected polar or monte-carlo");
    }
  }
  if (auto v = kv.get_count("rule.radial_nodes")) c.integration.radial_nodes = *v;
  if (auto v = kv.get_count("rule.angular_nodes")) c.integration.angular_nodes = *v;
  if (auto v = kv.get_count("rule.mc_samples")) c.integration.sample_count = *v;
  if (auto v = kv.get_u64("rule.mc_seed")) c.integration.rng_seed = *v;

  if (auto v = kv.get_count("sim.L")) c.samples_per_station = *v;
  if (auto v = kv.get_count("sim.trials")) c.trials = *v;
  if (auto v = kv.get_u64("sim.seed")) c.seed = *v;
  if (auto v = kv.get_count("sim.repeats")) c.geometry_repeats = *v;
  if (auto v = kv.get_count("sim.threads")) c.threads = static_cast<unsigned>(*v);
  if (kv.has("sim.lnT_min") || kv.has("sim.lnT_max") || kv.has("sim.lnT_points")) {
    const double lo = kv.get_double("sim.lnT_min").value_or(-25.0);
    const double hi = kv.get_double("sim.lnT_max").value_or(25.0);
    const std::size_t n = kv.get_count("sim.lnT_points").value_or(201);
    if (!(hi > lo) || n < 2) {
      throw ConfigError("sim.lnT_points", "threshold grid needs lnT_max > lnT_min and >= 2 points");
    }
    c.threshold_grid = uniform_grid(lo, hi, n);
  }

  // Range checks, reported against the key that owns the value.
  guarded("channel.sigma_dB", [&] {
    if (!(c.channel.shadowing_sigma_dB > 0.0)) throw std::invalid_argument("must be positive");
  });
  guarded("channel.path_loss_exponent", [&] {
    if (!(c.channel.path_loss_exponent > 0.0)) throw std::invalid_argument("must be positive");
  });
  guarded("channel.ref_distance_m", [&] { c.channel.validate(); });
  guarded("priors.p0", [&] { c.priors.validate(); });
  guarded("sim.trials", [&] {
    if (c.trials < 1000) throw std::invalid_argument("must be at least 1000");
  });
  guarded("geometry.count", [&] {
    const std::size_t k = g.base_stations.empty() ? g.count : g.base_stations.size();
    if (k < 4 || k > 64) throw std::invalid_argument("station count must be in [4, 64]");
  });
  guarded("sim.L", [&] {
    if (c.samples_per_station < 1) throw std::invalid_argument("must be at least 1");
  });
  return c;
}

}  // namespace lvs::cli
