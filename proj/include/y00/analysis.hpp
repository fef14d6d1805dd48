// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "y00/channel.hpp"
#include "y00/cipher.hpp"
#include "y00/keystream.hpp"

namespace y00 {

/// Error ratio with its counts. `ci95` is the normal-approximation 95%
/// half-width 1.96 sqrt(p(1-p)/n).
struct ErrorReport {
  double value = 0.0;
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
  double ci95 = 0.0;

  static ErrorReport from_counts(std::uint64_t errors, std::uint64_t trials);
  double standard_error() const;
  ErrorReport& operator+=(const ErrorReport& other);
};
using SerReport = ErrorReport;
using BerReport = ErrorReport;

double q_function(double x);

struct SecurityBudget {
  double power_dbm = -10.0;
  double symbol_rate = phys::kSymbolRate;
  double wavelength = phys::kWavelength;
  std::uint64_t levels = 256;  // per quadrature
  double extra_noise_var = 0.0;

  double mean_photons() const;
};

/// Nearest-level SER of a uniform L-level square template under Gaussian
/// quadrature noise of variance 1/2 + extra (photon units).
double eve_ser_theory(const SecurityBudget& b);

/// Gray-coded 4-PAM bit error probability per quadrature at spacing d and
/// per-quadrature noise sigma: (3Q(x) + 2Q(3x) - Q(5x)) / 4 with x = d / 2 sigma.
double pam4_gray_ber(double spacing, double sigma);

/// Bob's closed-form BER on an AWGN channel at per-polarization symbol SNR
/// (linear Es/N0, unit-energy symbols) for plain 16-QAM (template empty)
/// or a dense template.
double bob_ber_theory(double snr_linear, const TemplateConfig* tpl);
/// SNR (dB) at which bob_ber_theory crosses `ber`.
double bob_required_snr_db(double ber, const TemplateConfig* tpl);

struct EveResult {
  SerReport ser;
  BerReport ber;
};

struct EveMonteCarloConfig {
  NoiseBudget budget;           // detected power and extra variance
  int template_bits = 16;
  std::uint64_t trials = 1000000;
  SeedKey seed;                 // master key; all draws derive from it
  /// Replays the first `pattern_symbols` symbols cyclically when > 0.
  std::int64_t pattern_symbols = 0;
};

/// Draws random plaintext and running keys, detects at the tap with shot
/// noise plus extras, decides by nearest fine level (SER) and decrypts with
/// an independently drawn key (BER). Reproducible from the seed regardless
/// of how blocks are scheduled.
EveResult eve_montecarlo(const EveMonteCarloConfig& cfg);
SerReport eve_ser_montecarlo(const EveMonteCarloConfig& cfg);
BerReport eve_ber_montecarlo(const EveMonteCarloConfig& cfg);

/// Bit mismatches between two aligned bit streams (one bit per element).
BerReport bob_ber(std::span<const std::uint8_t> transmitted, std::span<const std::uint8_t> received);

class OutOfRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Log-linear interpolation of log10(BER) against OSNR at the threshold
/// crossing. Points with zero BER are ignored.
double required_osnr(std::vector<std::pair<double, double>> curve, double threshold = 3.9e-3);

double net_rate(double baud, int bits_per_symbol, int polarizations, double fec_overhead,
                double pilot_overhead);

}  // namespace y00
