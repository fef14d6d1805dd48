// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "y00/harness/config.hpp"
#include "y00/harness/csv.hpp"

namespace y00 {

/// Per-point seed: derived from the master seed, the experiment id, the
/// series name and the point's position in the sweep.
SeedKey point_seed(const SeedKey& master, std::string_view experiment, std::string_view series,
                   std::uint64_t index);

/// Link-run settings implied by an experiment configuration.
LinkRunConfig link_run_config(const ExperimentConfig& cfg, bool fiber, std::optional<int> template_bits,
                              double osnr_db);

struct PresetArtifacts {
  std::optional<Waveform> tx_waveform;
  std::optional<SymbolEstimates> estimates;
};

/// Rows in sweep order; identical for any `cfg.parallel`.
std::vector<ResultRow> compute_preset(const ExperimentConfig& cfg, PresetArtifacts* artifacts = nullptr);

struct PresetOutput {
  std::vector<ResultRow> rows;
  std::filesystem::path csv;
  std::filesystem::path manifest;
  std::vector<std::filesystem::path> dumps;
};

/// Computes the preset and writes <dir>/<preset>.csv, <dir>/<preset>.manifest.yaml
/// and any requested dumps.
PresetOutput run_preset(const ExperimentConfig& cfg);

std::string manifest_yaml(const ExperimentConfig& cfg, std::size_t row_count);

}  // namespace y00
