// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "y00/harness/pipeline.hpp"

namespace y00 {

/// Raised for malformed or out-of-range configuration, carrying the dotted
/// key path of the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key_path, const std::string& message);
  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

struct PresetInfo {
  std::string_view name;
  std::string_view summary;
};
const std::vector<PresetInfo>& presets();
bool is_preset(std::string_view name);

struct SweepConfig {
  std::vector<double> osnr_db;        // fig5_b2b
  std::vector<int> template_bits;     // per quadrature; fig1b, fig6
  std::vector<double> power_dbm;      // fig1b
  std::vector<TapPoint> taps;         // fig6
};

struct AnalysisConfig {
  double fec_threshold = 3.9e-3;
  /// Extra per-quadrature variance at Eve's receiver (photon units).
  double eve_extra_noise_var = 0.0;
  /// Symbols per polarization for the integrate-and-dump AWGN series.
  std::int64_t awgn_symbols = std::int64_t{1} << 18;
};

struct OutputConfig {
  std::string dir = "results";
  bool dump_waveform = false;
  bool dump_taps = false;
};

struct ExperimentConfig {
  std::string preset;
  SeedKey seed;
  std::uint64_t trials = 1000000;      // Monte Carlo trials per point
  std::int64_t symbols = 11 * 8192;    // symbols per polarization per link run
  int parallel = 1;
  int template_bits = 16;
  TxConfig tx;
  SubsetReplayConfig replay;
  LinkConfig link;
  /// When set, link.noise_figure_db is calibrated to reach this OSNR.
  std::optional<double> link_target_osnr_db;
  bool amplifier_noise = true;
  LoConfig lo;
  RxConfig rx;
  SweepConfig sweep;
  AnalysisConfig analysis;
  OutputConfig output;
};

SeedKey default_seed();

/// Preset defaults; throws ConfigError("preset", ...) for unknown names.
ExperimentConfig default_config(std::string_view preset);

/// Builds a configuration from a preset name or a YAML file, then applies
/// `key.path=value` overrides, resolves derived values and validates.
/// Unknown keys are rejected with their path.
ExperimentConfig load_config(const std::string& preset_or_path,
                             const std::vector<std::string>& overrides = {});
ExperimentConfig parse_config(const std::string& yaml_text,
                              const std::vector<std::string>& overrides = {});

/// Resolves `link.noise_figure_db: auto` and checks every block against the
/// modules' preconditions.
void resolve_and_validate(ExperimentConfig& cfg);

/// Fully resolved configuration as YAML; parse_config accepts it back.
std::string to_yaml(const ExperimentConfig& cfg);

/// Parses "A"/"B" and "ideal"/"hardware" style enumerations.
TapPoint parse_tap(std::string_view s);
std::string_view tap_name(TapPoint t);

}  // namespace y00
