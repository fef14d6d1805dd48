// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <stdexcept>
#include <vector>

#include "y00/channel.hpp"
#include "y00/cipher.hpp"
#include "y00/waveform.hpp"

namespace y00 {

enum class EqualizerMode { DecisionDirected, PilotOnly };

struct EqualizerConfig {
  int taps = 121;                   // half-symbol spaced
  double step_size = 1e-3;          // preconvergence, normalized input power
  double tracking_step_size = 2e-4; // after preconvergence
  double pilot_ratio = 0.03;
  int preconvergence_symbols = 5000;
  int preconvergence_passes = 3;    // LMS sweeps over the preamble
  bool lowpass_init = true;         // [1/4 1/2 1/4] centre taps instead of a unit impulse
  double pll_bandwidth = 1e-3;      // fraction of the symbol rate
  EqualizerMode mode = EqualizerMode::DecisionDirected;
  double convergence_mse = 0.2;     // above this after preconvergence -> flagged

  void validate() const;
  int pilot_period() const;
  /// True for preamble symbols and every pilot_period-th symbol after it.
  bool is_training(Eigen::Index symbol) const;
};

/// Produces the LMS target for a non-training symbol from the equalized
/// estimate `z` (normalized dense coordinates).
class SymbolDecider {
 public:
  virtual ~SymbolDecider() = default;
  virtual std::complex<double> decide(int pol, Eigen::Index symbol,
                                      std::complex<double> z) const = 0;
};

class PlainDecider final : public SymbolDecider {
 public:
  std::complex<double> decide(int, Eigen::Index, std::complex<double> z) const override {
    return plain_symbol_amplitude(plain_decide(z));
  }
};

/// Key-aided decision: four-candidate decryption with the running key, then
/// re-encryption onto the dense template.
class KeyAidedDecider final : public SymbolDecider {
 public:
  KeyAidedDecider(const RunningKeys& keys, TemplateConfig tpl) : keys_(keys), tpl_(tpl) {}
  std::complex<double> decide(int pol, Eigen::Index symbol,
                              std::complex<double> z) const override;

 private:
  const RunningKeys& keys_;
  TemplateConfig tpl_;
};

struct SymbolEstimates {
  /// Symbol-rate estimates per polarization over the whole frame.
  std::vector<Eigen::VectorXcd> symbols;
  /// Edge discard: estimates in [first_valid, first_valid + valid_count).
  Eigen::Index first_valid = 0;
  Eigen::Index valid_count = 0;
  std::int64_t sync_offset = 0;
  bool swapped = false;
  double residual_freq_hz = 0.0;
  /// PLL phase per polarization per symbol.
  std::vector<Eigen::VectorXd> pll_phase;
  /// Filters h[out][in], each `taps` long.
  std::vector<std::vector<Eigen::VectorXcd>> taps;
  double preconvergence_mse = 0.0;
  double tracking_mse = 0.0;
  bool converged = false;
};

/// inverse CD with the link's accumulated dispersion
Waveform cdc(const Waveform& w, const LinkConfig& link);

struct FrequencyEstimate {
  Waveform waveform;  // de-rotated
  double f_est_hz = 0.0;
  bool locked = false;
  double peak_ratio = 0.0;
};

/// Fourth-power spectral peak search over |4f| < Rs/2, with parabolic
/// refinement between bins.
FrequencyEstimate freq_recover(const Waveform& w);

/// 2x2 butterfly of `taps`-long T/2 filters, LMS-adapted against
/// `reference` at training positions (only those entries are read) and
/// against `decider` elsewhere, with a first-order PLL per output.
/// Input must be at 2 samples/symbol with the frame start aligned.
SymbolEstimates mimo_lms_pll(const Waveform& w, const std::vector<Eigen::VectorXcd>& reference,
                             const SymbolDecider& decider, const EqualizerConfig& cfg);

class SyncError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SyncResult {
  std::int64_t offset = 0;  // received lags the reference by this many symbols
  bool swapped = false;     // received x carries reference y
  double peak_metric = 0.0; // normalized block-noncoherent correlation, [0, 1]
};

/// Cross-correlation frame sync of symbol-rate sequences against the known
/// preamble. Correlation is coherent within 256-symbol blocks and
/// noncoherent across blocks, so residual carrier rotation is tolerated.
SyncResult synchronize(const std::vector<Eigen::VectorXcd>& received,
                       const std::vector<Eigen::VectorXcd>& preamble,
                       double threshold = 0.25);

/// Symbol-rate samples (the mid-symbol sample) of a 2 samples/symbol stream.
std::vector<Eigen::VectorXcd> symbol_rate_samples(const Waveform& w);

/// Advances the waveform by `sync.offset` symbols and undoes a swap.
Waveform apply_sync(const Waveform& w, const SyncResult& sync);

/// Rows "out_pol,in_pol,tap,re,im"; see docs/formats.md.
void write_taps(const SymbolEstimates& est, const std::filesystem::path& path);

}  // namespace y00
