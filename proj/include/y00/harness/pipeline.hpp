// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "y00/analysis.hpp"
#include "y00/channel.hpp"
#include "y00/rxdsp.hpp"
#include "y00/txfront.hpp"

namespace y00 {

/// Finite-DAC-memory emulation: the first pattern_length_samples worth of
/// symbols is replayed cyclically.
struct SubsetReplayConfig {
  bool enabled = false;
  std::int64_t pattern_length_samples = std::int64_t{1} << 18;

  std::int64_t pattern_symbols(int samples_per_symbol) const;
};

template <typename T>
std::vector<T> subset_replay(std::span<const T> stream, const SubsetReplayConfig& cfg,
                             int samples_per_symbol = 4) {
  if (!cfg.enabled) return {stream.begin(), stream.end()};
  const std::int64_t period = cfg.pattern_symbols(samples_per_symbol);
  std::vector<T> out(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) out[i] = stream[i % static_cast<std::size_t>(period)];
  return out;
}

struct TxConfig {
  ModulationMode mode = ModulationMode::Ideal;
  PdmMode pdm = PdmMode::Independent;
  std::int64_t pdm_delay_symbols = 1199;
  DacModel dac;
  ModulatorConfig modulator;
};

struct RxConfig {
  RxFrontendConfig frontend;
  EqualizerConfig equalizer;
  double rx_power_dbm = -10.0;
  bool shot_noise = true;
  double extra_noise_var = 0.0;
  bool freq_recovery = true;
  bool frame_sync = true;
};

/// One end-to-end frame: transmitter, B2B noise loading or the fiber link,
/// LO impairments, detection, ADC, and the receiver DSP chain.
struct LinkRunConfig {
  std::optional<int> template_bits = 16;  // empty: plain 16-QAM
  std::int64_t symbols = 11 * 8192;       // rounded up to a multiple of 11
  TxConfig tx;
  bool fiber = false;
  LinkConfig link;
  bool amplifier_noise = true;
  double osnr_db = std::numeric_limits<double>::infinity();
  LoConfig lo;
  RxConfig rx;
  SubsetReplayConfig replay;
  /// Swap x/y between detection and DSP (exercises MIMO source separation).
  bool swap_polarizations = false;
  /// Skip synchronize/apply_sync and feed the equalizer the raw frame.
  bool keep_raw_alignment = false;
};

struct LinkRunResult {
  BerReport bob;
  /// Eve's nearest-level SER evaluated on Bob's equalized estimates.
  SerReport dense_ser;
  double measured_osnr_db = std::numeric_limits<double>::infinity();
  double equalizer_snr_db = 0.0;
  FrequencyEstimate freq;  // waveform member left empty
  SyncResult sync;
  SymbolEstimates estimates;
  std::int64_t frame_symbols = 0;
  std::int64_t cycle_slips = 0;
  /// Transmitted dense (or plain) symbols per polarization.
  std::vector<Eigen::VectorXcd> transmitted;
  Waveform tx_waveform;  // kept only when requested
};

std::int64_t frame_symbols_for(std::int64_t requested);

LinkRunResult run_link(const LinkRunConfig& cfg, const SeedKey& seed, bool keep_tx_waveform = false);

/// Symbol-level B2B AWGN: rectangular pulses at 4 samples/symbol, OSNR
/// loading, integrate-and-dump, then key-aided decryption (or plain
/// slicing). No equalizer, so the only loss is the template geometry.
struct AwgnRunConfig {
  std::optional<int> template_bits = 16;
  std::int64_t symbols = 1 << 18;  // per polarization
  double osnr_db = 20.0;
  SubsetReplayConfig replay;
};
BerReport run_b2b_awgn(const AwgnRunConfig& cfg, const SeedKey& seed);

/// Windowed residual-phase slip count: the equalized output is compared
/// with the true symbols over `window`-symbol blocks, and each entry into a
/// block whose mean rotation exceeds pi/4 counts as one slip.
std::int64_t count_cycle_slips(const Eigen::VectorXcd& estimates, const Eigen::VectorXcd& truth,
                               Eigen::Index start, Eigen::Index window = 64);

/// Runs fn(i) for i in [0, n) on up to `threads` workers; results keep
/// index order.
template <typename R>
std::vector<R> parallel_map(std::size_t n, int threads, const std::function<R(std::size_t)>& fn);

}  // namespace y00

#include "y00/harness/parallel_impl.hpp"
