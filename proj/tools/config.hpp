#pragma once

// Flat-sectioned key/value configuration for the lvs runner.
//
//   [channel]
//   sigma_dB = 5
//   path_loss_exponent = 3
//
// Keys are addressed as "section.key". `--set` overrides are applied on top of
// the file before the experiment configuration is built.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lvs/simulator.hpp"

namespace lvs::cli {

/// Bad input named by the offending key; exit status 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class KeyValues {
 public:
  static KeyValues from_file(const std::string& path);
  /// Applies one "section.key=value" override.
  void set(const std::string& assignment);
  void put(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<std::size_t> get_count(const std::string& key) const;
  std::optional<std::uint64_t> get_u64(const std::string& key) const;

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// All keys the runner understands, in "section.key" form.
const std::vector<std::string>& known_keys();

/// Throws ConfigError naming the first missing key.
void require_keys(const KeyValues& kv, const std::vector<std::string>& keys);

/// Keys that must be present whenever a config file is used or the scenario
/// is `custom`.
const std::vector<std::string>& required_keys();

/// Overlays `kv` on `base`. Range errors surface as ConfigError with the key.
ExperimentConfig apply(const KeyValues& kv, ExperimentConfig base);

}  // namespace lvs::cli
