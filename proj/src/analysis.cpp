// SPDX-License-Identifier: Apache-2.0
#include "y00/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "y00/random.hpp"

namespace y00 {

ErrorReport ErrorReport::from_counts(std::uint64_t errors, std::uint64_t trials) {
  ErrorReport r;
  r.errors = errors;
  r.trials = trials;
  r.value = trials ? static_cast<double>(errors) / static_cast<double>(trials) : 0.0;
  r.ci95 = 1.96 * r.standard_error();
  return r;
}

double ErrorReport::standard_error() const {
  if (trials == 0) return 0.0;
  return std::sqrt(value * (1.0 - value) / static_cast<double>(trials));
}

ErrorReport& ErrorReport::operator+=(const ErrorReport& other) {
  *this = from_counts(errors + other.errors, trials + other.trials);
  return *this;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double SecurityBudget::mean_photons() const {
  return dbm_to_watt(power_dbm) / (phys::photon_energy(wavelength) * symbol_rate);
}

double eve_ser_theory(const SecurityBudget& b) {
  if (b.levels < 1) throw std::invalid_argument("template needs at least one level");
  if (b.levels == 1) return 0.0;
  const double L = static_cast<double>(b.levels);
  const double nbar = b.mean_photons();
  const double spacing = std::sqrt(6.0 * nbar / (L * L - 1.0));
  const double sigma = std::sqrt(0.5 + b.extra_noise_var);
  const double pe_quad = 2.0 * (1.0 - 1.0 / L) * q_function(spacing / (2.0 * sigma));
  return 1.0 - (1.0 - pe_quad) * (1.0 - pe_quad);
}

double pam4_gray_ber(double spacing, double sigma) {
  const double x = spacing / (2.0 * sigma);
  return (3.0 * q_function(x) + 2.0 * q_function(3.0 * x) - q_function(5.0 * x)) / 4.0;
}

double bob_ber_theory(double snr_linear, const TemplateConfig* tpl) {
  // unit-energy symbols: per-quadrature noise variance N0/2 = 1/(2 SNR)
  const double sigma = std::sqrt(1.0 / (2.0 * snr_linear));
  const double spacing = tpl ? tpl->bases() * tpl->delta() : 2.0 / std::sqrt(10.0);
  return pam4_gray_ber(spacing, sigma);
}

double bob_required_snr_db(double ber, const TemplateConfig* tpl) {
  double lo = -10.0;
  double hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (bob_ber_theory(std::pow(10.0, mid / 10.0), tpl) > ber) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

constexpr std::int64_t kBlockSymbols = 1 << 16;

struct TrafficSource {
  TrafficSource(const SeedKey& master, const TemplateConfig& tpl)
      : key_seed(derive_key(master, "eve.keys", 0)),
        plain_seed(derive_key(master, "eve.plaintext", 0)),
        tpl(tpl) {}

  void fill(std::int64_t first, std::int64_t count, std::vector<PlainSymbol>& plain,
            std::vector<RunningKey>& keys) const {
    keys = std::move(running_keys(key_seed, tpl, 1, count, first)[0]);
    KeystreamReader reader(plain_seed, StreamId::XorStream, static_cast<std::uint64_t>(first) * 4);
    plain.resize(static_cast<std::size_t>(count));
    for (auto& p : plain) p.bits = static_cast<std::uint8_t>(reader.take(4));
  }

  SeedKey key_seed;
  SeedKey plain_seed;
  TemplateConfig tpl;
};

}  // namespace

EveResult eve_montecarlo(const EveMonteCarloConfig& cfg) {
  if (cfg.trials < 10000) throw std::invalid_argument("Monte Carlo needs at least 1e4 trials");
  const TemplateConfig tpl(cfg.template_bits);
  const TrafficSource source(cfg.seed, tpl);
  const double nbar = cfg.budget.mean_photons();
  if (!(nbar > 0.0)) throw std::invalid_argument("mean photon number must be positive");
  const double scale = std::sqrt(nbar);
  const double sigma = std::sqrt(0.5 + cfg.budget.extra_noise_var);

  std::vector<PlainSymbol> pattern_plain;
  std::vector<RunningKey> pattern_keys;
  if (cfg.pattern_symbols > 0) source.fill(0, cfg.pattern_symbols, pattern_plain, pattern_keys);

  std::uint64_t symbol_errors = 0;
  std::uint64_t bit_errors = 0;
  const auto total = static_cast<std::int64_t>(cfg.trials);
  std::vector<PlainSymbol> plain;
  std::vector<RunningKey> keys;

  for (std::int64_t block = 0; block * kBlockSymbols < total; ++block) {
    const std::int64_t first = block * kBlockSymbols;
    const std::int64_t count = std::min(kBlockSymbols, total - first);
    if (cfg.pattern_symbols > 0) {
      plain.resize(count);
      keys.resize(count);
      for (std::int64_t i = 0; i < count; ++i) {
        const auto src = static_cast<std::size_t>((first + i) % cfg.pattern_symbols);
        plain[i] = pattern_plain[src];
        keys[i] = pattern_keys[src];
      }
    } else {
      source.fill(first, count, plain, keys);
    }
    Rng rng(derive_key(cfg.seed, "eve.noise", static_cast<std::uint64_t>(block)));

    for (std::int64_t i = 0; i < count; ++i) {
      const CipherPoint pt = encrypt_symbol(plain[i], keys[i], tpl);
      const double a_i = scale * level_amplitude(pt.l_i, tpl) + sigma * rng.normal();
      const double a_q = scale * level_amplitude(pt.l_q, tpl) + sigma * rng.normal();
      const double n_i = a_i / scale;
      const double n_q = a_q / scale;
      if (eve_nearest_level(n_i, tpl) != pt.l_i || eve_nearest_level(n_q, tpl) != pt.l_q) {
        ++symbol_errors;
      }
      // a guessed key: independent of the true running key
      const std::uint64_t g = rng.bits();
      RunningKey guess;
      guess.r_i = static_cast<std::uint8_t>(g & 3u);
      guess.r_q = static_cast<std::uint8_t>((g >> 2) & 3u);
      guess.k_i = static_cast<std::uint32_t>((g >> 4) % tpl.bases());
      guess.k_q = static_cast<std::uint32_t>((g >> 24) % tpl.bases());
      const PlainSymbol eve_plain = decrypt_symbol({n_i, n_q}, guess, tpl);
      bit_errors += static_cast<std::uint64_t>(std::popcount(
          static_cast<unsigned>((eve_plain.bits ^ plain[i].bits) & 0xFu)));
    }
  }
  return {ErrorReport::from_counts(symbol_errors, cfg.trials),
          ErrorReport::from_counts(bit_errors, 4 * cfg.trials)};
}

SerReport eve_ser_montecarlo(const EveMonteCarloConfig& cfg) { return eve_montecarlo(cfg).ser; }
BerReport eve_ber_montecarlo(const EveMonteCarloConfig& cfg) { return eve_montecarlo(cfg).ber; }

BerReport bob_ber(std::span<const std::uint8_t> transmitted, std::span<const std::uint8_t> received) {
  if (transmitted.size() != received.size()) {
    throw std::invalid_argument("bit streams differ in length");
  }
  std::uint64_t errors = 0;
  for (std::size_t i = 0; i < transmitted.size(); ++i) errors += (transmitted[i] ^ received[i]) & 1u;
  return ErrorReport::from_counts(errors, transmitted.size());
}

double required_osnr(std::vector<std::pair<double, double>> curve, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
  std::erase_if(curve, [](const auto& p) { return !(p.second > 0.0) || !std::isfinite(p.first); });
  std::sort(curve.begin(), curve.end());
  for (const auto& [osnr, ber] : curve) {
    if (ber == threshold) return osnr;
  }
  const double lt = std::log10(threshold);
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const auto [x0, b0] = curve[i];
    const auto [x1, b1] = curve[i + 1];
    if (b0 >= threshold && b1 <= threshold) {
      const double y0 = std::log10(b0);
      const double y1 = std::log10(b1);
      if (y0 == y1) return x0;
      return x0 + (lt - y0) * (x1 - x0) / (y1 - y0);
    }
  }
  throw OutOfRangeError("BER threshold is not bracketed by the curve");
}

double net_rate(double baud, int bits_per_symbol, int polarizations, double fec_overhead,
                double pilot_overhead) {
  if (fec_overhead < 0.0 || pilot_overhead < 0.0) throw std::invalid_argument("negative overhead");
  return baud * bits_per_symbol * polarizations / (1.0 + fec_overhead + pilot_overhead);
}

}  // namespace y00
