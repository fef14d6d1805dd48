// SPDX-License-Identifier: Apache-2.0
#include "y00/harness/pipeline.hpp"

#include <bit>
#include <cmath>
#include <memory>

namespace y00 {

std::int64_t SubsetReplayConfig::pattern_symbols(int samples_per_symbol) const {
  if (samples_per_symbol < 1) throw std::invalid_argument("samples per symbol must be positive");
  const std::int64_t n = pattern_length_samples / samples_per_symbol;
  if (n < 1) throw std::invalid_argument("replay pattern shorter than one symbol");
  return n;
}

std::int64_t frame_symbols_for(std::int64_t requested) {
  if (requested < 11) requested = 11;
  return (requested + 10) / 11 * 11;
}

namespace {

struct Traffic {
  std::vector<std::vector<PlainSymbol>> plain;  // [pol][symbol]
  RunningKeys keys;                             // empty for plain 16-QAM
  std::vector<Eigen::VectorXcd> symbols;        // unit-energy references
};

std::vector<PlainSymbol> draw_plaintext(const SeedKey& seed, int pol, std::int64_t count) {
  KeystreamReader reader(derive_key(seed, "plaintext", static_cast<std::uint64_t>(pol)),
                         StreamId::XorStream);
  std::vector<PlainSymbol> out(static_cast<std::size_t>(count));
  for (auto& p : out) p.bits = static_cast<std::uint8_t>(reader.take(4));
  return out;
}

template <typename T>
std::vector<T> delayed(const std::vector<T>& v, std::int64_t delay) {
  const auto n = static_cast<std::int64_t>(v.size());
  std::vector<T> out(v.size());
  for (std::int64_t i = 0; i < n; ++i) out[i] = v[static_cast<std::size_t>(((i - delay) % n + n) % n)];
  return out;
}

Traffic make_traffic(const SeedKey& seed, const std::optional<TemplateConfig>& tpl,
                     std::int64_t symbols, PdmMode pdm, std::int64_t pdm_delay,
                     const SubsetReplayConfig& replay, int pols) {
  Traffic t;
  const int unique = pdm == PdmMode::DelayedCopy ? 1 : pols;
  for (int p = 0; p < unique; ++p) t.plain.push_back(draw_plaintext(seed, p, symbols));
  if (tpl) t.keys = running_keys(derive_key(seed, "cipher", 0), *tpl, unique, symbols);
  for (int p = 0; p < unique; ++p) {
    t.plain[p] = subset_replay<PlainSymbol>(t.plain[p], replay);
    if (tpl) t.keys[p] = subset_replay<RunningKey>(t.keys[p], replay);
  }
  if (unique < pols) {
    t.plain.push_back(delayed(t.plain[0], pdm_delay));
    if (tpl) t.keys.push_back(delayed(t.keys[0], pdm_delay));
  }
  for (int p = 0; p < pols; ++p) {
    Eigen::VectorXcd s(symbols);
    for (std::int64_t n = 0; n < symbols; ++n) {
      s[n] = tpl ? point_amplitude(encrypt_symbol(t.plain[p][n], t.keys[p][n], *tpl), *tpl)
                 : plain_symbol_amplitude(t.plain[p][n]);
    }
    t.symbols.push_back(std::move(s));
  }
  return t;
}

Waveform transmit(const Traffic& t, const std::optional<TemplateConfig>& tpl, const TxConfig& tx) {
  std::vector<Waveform> per_pol;
  for (std::size_t p = 0; p < t.symbols.size(); ++p) {
    if (tpl && tx.mode == ModulationMode::Hardware) {
      std::vector<CipherPoint> pts(t.plain[p].size());
      for (std::size_t n = 0; n < pts.size(); ++n) pts[n] = encrypt_symbol(t.plain[p][n], t.keys[p][n], *tpl);
      per_pol.push_back(modulate(pts, *tpl, tx.mode, tx.dac, tx.modulator));
    } else {
      const auto& s = t.symbols[p];
      per_pol.push_back(modulate_symbols({s.data(), static_cast<std::size_t>(s.size())},
                                         tx.dac.sample_rate));
    }
  }
  if (per_pol.size() == 1) return per_pol[0];
  return pdm_combine(per_pol[0], per_pol[1]);
}

Waveform amplify(const Waveform& w, const AmplifierConfig& amp, Rng& rng, bool noise) {
  if (noise) return amplify_with_ase(w, amp, rng);
  Waveform out = w;
  out.scale(std::pow(10.0, amp.gain_db / 20.0));
  return out;
}

int popcount4(unsigned v) { return std::popcount(v & 0xFu); }

// A replayed pattern repeats the preamble every `period` symbols, so the
// correlation peak may land on any copy. Keep the smallest lag consistent
// with either the circular frame or the pattern period.
std::int64_t unwrap_replay_offset(std::int64_t offset, std::int64_t frame, std::int64_t period) {
  if (period >= frame) return offset;
  const auto centered = [](std::int64_t v, std::int64_t m) {
    v = ((v % m) + m) % m;
    return v >= m - m / 2 ? v - m : v;
  };
  const std::int64_t direct = centered(offset, frame);
  const std::int64_t reduced = centered(offset, period);
  const std::int64_t lag = std::abs(reduced) < std::abs(direct) ? reduced : direct;
  return (lag + frame) % frame;
}

}  // namespace

LinkRunResult run_link(const LinkRunConfig& cfg, const SeedKey& seed, bool keep_tx_waveform) {
  cfg.rx.equalizer.validate();
  std::optional<TemplateConfig> tpl;
  if (cfg.template_bits) tpl.emplace(*cfg.template_bits);
  const std::int64_t k = frame_symbols_for(cfg.symbols);
  if (k < cfg.rx.equalizer.preconvergence_symbols + cfg.rx.equalizer.taps) {
    throw std::invalid_argument("frame shorter than the equalizer preamble");
  }
  constexpr int kPols = 2;

  const Traffic traffic = make_traffic(seed, tpl, k, cfg.tx.pdm, cfg.tx.pdm_delay_symbols, cfg.replay, kPols);
  Waveform w = transmit(traffic, tpl, cfg.tx);

  LinkRunResult res;
  res.frame_symbols = k;
  res.transmitted = traffic.symbols;
  if (keep_tx_waveform) res.tx_waveform = w;

  Rng amp_rng(derive_key(seed, "noise.amplifier", 0));
  Rng load_rng(derive_key(seed, "noise.loading", 0));
  Rng lo_rng(derive_key(seed, "noise.lo", 0));
  Rng shot_rng(derive_key(seed, "noise.shot", 0));

  w.wavelength = cfg.link.wavelength;
  if (cfg.fiber) {
    w = set_power(std::move(w), cfg.link.tx_power_dbm);
    w = amplify(w, cfg.link.booster(), amp_rng, cfg.amplifier_noise);
    for (int s = 0; s < cfg.link.spans; ++s) {
      w = apply_loss(w, cfg.link.span.loss_db());
      w = apply_cd(w, cfg.link.span.dispersion_ps_nm(), CdSign::Forward);
      w = amplify(w, cfg.link.inline_amp(), amp_rng, cfg.amplifier_noise);
    }
  } else {
    w = set_power(std::move(w), cfg.link.launch_power_dbm);
  }
  w = load_osnr(w, cfg.osnr_db, load_rng);
  res.measured_osnr_db = measure_osnr(w);

  w = lo_impairments(w, cfg.lo, lo_rng);
  NoiseBudget rx_budget;
  rx_budget.power_dbm = cfg.rx.rx_power_dbm;
  rx_budget.symbol_rate = w.symbol_rate;
  rx_budget.wavelength = w.wavelength;
  rx_budget.extra_noise_var = cfg.rx.extra_noise_var;
  w = cfg.rx.shot_noise ? detect_waveform(w, rx_budget, shot_rng) : set_power(std::move(w), cfg.rx.rx_power_dbm);
  if (cfg.swap_polarizations) std::swap(w.pol[0], w.pol[1]);

  w = rx_frontend(w, cfg.rx.frontend);
  w = resample(w, 2.0 * w.symbol_rate);
  if (cfg.fiber) w = cdc(w, cfg.link);
  if (cfg.rx.freq_recovery) {
    FrequencyEstimate fe = freq_recover(w);
    w = std::move(fe.waveform);
    fe.waveform = {};
    res.freq = std::move(fe);
  }

  const EqualizerConfig& eq = cfg.rx.equalizer;
  if (cfg.rx.frame_sync && !cfg.keep_raw_alignment) {
    std::vector<Eigen::VectorXcd> preamble;
    for (const auto& s : traffic.symbols) preamble.push_back(s.head(eq.preconvergence_symbols));
    res.sync = synchronize(symbol_rate_samples(w), preamble);
    if (cfg.replay.enabled) {
      res.sync.offset = unwrap_replay_offset(res.sync.offset, k, cfg.replay.pattern_symbols(4));
    }
    w = apply_sync(w, res.sync);
  }

  std::unique_ptr<SymbolDecider> decider;
  if (tpl) {
    decider = std::make_unique<KeyAidedDecider>(traffic.keys, *tpl);
  } else {
    decider = std::make_unique<PlainDecider>();
  }
  res.estimates = mimo_lms_pll(w, traffic.symbols, *decider, eq);
  res.estimates.sync_offset = res.sync.offset;
  res.estimates.swapped = res.sync.swapped;

  std::uint64_t bit_errors = 0, bits = 0, dense_errors = 0, payload = 0;
  double err_power = 0.0;
  const Eigen::Index first = res.estimates.first_valid;
  const Eigen::Index last = first + res.estimates.valid_count;
  for (int p = 0; p < kPols; ++p) {
    const Eigen::VectorXcd& z = res.estimates.symbols[p];
    for (Eigen::Index n = std::max<Eigen::Index>(first, eq.preconvergence_symbols); n < last; ++n) {
      if (eq.is_training(n)) continue;
      const PlainSymbol truth = traffic.plain[p][n];
      const PlainSymbol got = tpl ? decrypt_symbol(z[n], traffic.keys[p][n], *tpl) : plain_decide(z[n]);
      bit_errors += popcount4(truth.bits ^ got.bits);
      bits += 4;
      ++payload;
      err_power += std::norm(z[n] - traffic.symbols[p][n]);
      if (tpl) {
        const CipherPoint pt = encrypt_symbol(truth, traffic.keys[p][n], *tpl);
        if (eve_nearest_level(z[n].real(), *tpl) != pt.l_i || eve_nearest_level(z[n].imag(), *tpl) != pt.l_q) {
          ++dense_errors;
        }
      }
    }
    res.cycle_slips += count_cycle_slips(z, traffic.symbols[p], std::max<Eigen::Index>(first, eq.preconvergence_symbols));
  }
  res.bob = ErrorReport::from_counts(bit_errors, bits);
  res.dense_ser = ErrorReport::from_counts(dense_errors, tpl ? payload : 0);
  res.equalizer_snr_db = payload && err_power > 0.0
                             ? -10.0 * std::log10(err_power / static_cast<double>(payload))
                             : std::numeric_limits<double>::infinity();
  return res;
}

BerReport run_b2b_awgn(const AwgnRunConfig& cfg, const SeedKey& seed) {
  std::optional<TemplateConfig> tpl;
  if (cfg.template_bits) tpl.emplace(*cfg.template_bits);
  constexpr int kPols = 2;
  const Traffic traffic = make_traffic(seed, tpl, cfg.symbols, PdmMode::Independent, 0, cfg.replay, kPols);
  Waveform w = transmit(traffic, tpl, TxConfig{});
  Rng rng(derive_key(seed, "noise.loading", 0));
  w = load_osnr(w, cfg.osnr_db, rng);

  const int sps = w.samples_per_symbol();
  std::uint64_t errors = 0;
  for (int p = 0; p < kPols; ++p) {
    for (std::int64_t n = 0; n < cfg.symbols; ++n) {
      const std::complex<double> z = w.pol[p].segment(n * sps, sps).mean();
      const PlainSymbol got = tpl ? decrypt_symbol(z, traffic.keys[p][n], *tpl) : plain_decide(z);
      errors += popcount4(got.bits ^ traffic.plain[p][n].bits);
    }
  }
  return ErrorReport::from_counts(errors, static_cast<std::uint64_t>(4 * kPols * cfg.symbols));
}

std::int64_t count_cycle_slips(const Eigen::VectorXcd& estimates, const Eigen::VectorXcd& truth,
                               Eigen::Index start, Eigen::Index window) {
  if (estimates.size() != truth.size()) throw std::invalid_argument("cycle-slip inputs differ in length");
  if (window < 1) throw std::invalid_argument("cycle-slip window must be positive");
  std::int64_t slips = 0;
  bool slipped = false;
  for (Eigen::Index s = start; s + window <= estimates.size(); s += window) {
    const std::complex<double> c = estimates.segment(s, window).dot(truth.segment(s, window));
    // dot() conjugates the first argument: c = sum conj(z) d
    const bool now = std::abs(std::arg(c)) > phys::kPi / 4.0;
    if (now && !slipped) ++slips;
    slipped = now;
  }
  return slips;
}

}  // namespace y00
