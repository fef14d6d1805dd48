// SPDX-License-Identifier: Apache-2.0
#include "y00/harness/presets.hpp"

#include <yaml-cpp/yaml.h>

#include <array>
#include <cmath>
#include <fstream>
#include <limits>

namespace y00 {

SeedKey point_seed(const SeedKey& master, std::string_view experiment, std::string_view series,
                   std::uint64_t index) {
  std::string label(experiment);
  label += '/';
  label += series;
  return derive_key(master, label, index);
}

LinkRunConfig link_run_config(const ExperimentConfig& cfg, bool fiber, std::optional<int> template_bits,
                              double osnr_db) {
  LinkRunConfig r;
  r.template_bits = template_bits;
  r.symbols = cfg.symbols;
  r.tx = cfg.tx;
  r.fiber = fiber;
  r.link = cfg.link;
  r.amplifier_noise = cfg.amplifier_noise;
  r.osnr_db = osnr_db;
  r.lo = cfg.lo;
  r.rx = cfg.rx;
  r.replay = cfg.replay;
  return r;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string power_series(double dbm) { return "power_dbm=" + format_number(dbm); }

std::vector<ResultRow> fig1b(const ExperimentConfig& cfg) {
  std::vector<ResultRow> rows;
  for (double p : cfg.sweep.power_dbm) {
    for (int n : cfg.sweep.template_bits) {
      SecurityBudget b;
      b.power_dbm = p;
      b.wavelength = cfg.link.wavelength;
      b.levels = std::uint64_t{1} << n;
      b.extra_noise_var = cfg.analysis.eve_extra_noise_var;
      rows.push_back(ResultRow::closed_form("fig1b", power_series(p), "template_total_bits", 2.0 * n,
                                            "eve_ser_theory", eve_ser_theory(b)));
    }
  }
  return rows;
}

void required_row(std::vector<ResultRow>& rows, const std::string& series,
                  const std::vector<std::pair<double, double>>& curve, double threshold, double& out) {
  try {
    out = required_osnr(curve, threshold);
  } catch (const OutOfRangeError&) {
    out = std::numeric_limits<double>::quiet_NaN();
  }
  rows.push_back(ResultRow::closed_form("fig5_b2b", series, "ber_threshold", threshold, "required_osnr_db", out));
}

std::vector<ResultRow> fig5_b2b(const ExperimentConfig& cfg, PresetArtifacts* artifacts) {
  const std::vector<double>& osnr = cfg.sweep.osnr_db;
  const TemplateConfig tpl(cfg.template_bits);
  const std::array<std::optional<int>, 2> kinds = {std::nullopt, cfg.template_bits};
  const std::array<std::string, 2> names = {"plain", "encrypted"};

  struct Point {
    LinkRunResult dsp;
    BerReport awgn;
  };
  const std::size_t jobs = 2 * osnr.size();
  const bool keep = artifacts != nullptr;
  auto results = parallel_map<Point>(jobs, cfg.parallel, [&](std::size_t j) {
    const std::size_t kind = j / osnr.size();
    const std::size_t i = j % osnr.size();
    Point pt;
    const bool last_encrypted = kind == 1 && i + 1 == osnr.size();
    pt.dsp = run_link(link_run_config(cfg, false, kinds[kind], osnr[i]),
                      point_seed(cfg.seed, "fig5_b2b", names[kind], i), keep && last_encrypted);
    AwgnRunConfig a;
    a.template_bits = kinds[kind];
    a.symbols = cfg.analysis.awgn_symbols;
    a.osnr_db = osnr[i];
    a.replay = cfg.replay;
    pt.awgn = run_b2b_awgn(a, point_seed(cfg.seed, "fig5_b2b", names[kind] + "_awgn", i));
    if (!last_encrypted || !keep) pt.dsp.tx_waveform = {};
    pt.dsp.transmitted.clear();
    return pt;
  });

  std::vector<ResultRow> rows;
  std::array<std::vector<std::pair<double, double>>, 2> dsp_curve, awgn_curve;
  for (std::size_t kind = 0; kind < 2; ++kind) {
    const TemplateConfig* t = kind == 1 ? &tpl : nullptr;
    for (std::size_t i = 0; i < osnr.size(); ++i) {
      const Point& pt = results[kind * osnr.size() + i];
      rows.push_back(ResultRow::measured("fig5_b2b", names[kind], "osnr_db", osnr[i], "bob_ber", pt.dsp.bob));
      rows.push_back(ResultRow::closed_form("fig5_b2b", names[kind], "osnr_db", osnr[i], "equalizer_snr_db",
                                            pt.dsp.equalizer_snr_db));
      if (kind == 1) {
        rows.push_back(
            ResultRow::measured("fig5_b2b", names[kind], "osnr_db", osnr[i], "eve_dense_ser", pt.dsp.dense_ser));
      }
      rows.push_back(
          ResultRow::measured("fig5_b2b", names[kind] + "_awgn", "osnr_db", osnr[i], "bob_ber", pt.awgn));
      const double theory =
          std::isinf(osnr[i]) ? 0.0 : bob_ber_theory(std::pow(10.0, osnr_to_snr_db(osnr[i]) / 10.0), t);
      rows.push_back(
          ResultRow::closed_form("fig5_b2b", names[kind] + "_theory", "osnr_db", osnr[i], "bob_ber", theory));
      dsp_curve[kind].emplace_back(osnr[i], pt.dsp.bob.value);
      awgn_curve[kind].emplace_back(osnr[i], pt.awgn.value);
    }
  }
  const double thr = cfg.analysis.fec_threshold;
  std::array<double, 2> req_dsp{}, req_awgn{};
  for (std::size_t kind = 0; kind < 2; ++kind) {
    required_row(rows, names[kind], dsp_curve[kind], thr, req_dsp[kind]);
    required_row(rows, names[kind] + "_awgn", awgn_curve[kind], thr, req_awgn[kind]);
    const TemplateConfig* t = kind == 1 ? &tpl : nullptr;
    const double theory_req = snr_to_osnr_db(bob_required_snr_db(thr, t));
    rows.push_back(
        ResultRow::closed_form("fig5_b2b", names[kind] + "_theory", "ber_threshold", thr, "required_osnr_db", theory_req));
  }
  rows.push_back(ResultRow::closed_form("fig5_b2b", "dsp", "ber_threshold", thr, "dense_penalty_db",
                                        req_dsp[1] - req_dsp[0]));
  rows.push_back(ResultRow::closed_form("fig5_b2b", "awgn", "ber_threshold", thr, "dense_penalty_db",
                                        req_awgn[1] - req_awgn[0]));
  rows.push_back(ResultRow::closed_form("fig5_b2b", "theory", "ber_threshold", thr, "dense_penalty_db",
                                        10.0 * std::log10(0.8 / bob_decision_ratio(tpl))));

  if (artifacts) {
    LinkRunResult& last = results.back().dsp;
    artifacts->tx_waveform = std::move(last.tx_waveform);
    artifacts->estimates = std::move(last.estimates);
  }
  return rows;
}

std::vector<ResultRow> fig5_tx(const ExperimentConfig& cfg, PresetArtifacts* artifacts) {
  const std::array<std::optional<int>, 2> kinds = {cfg.template_bits, std::nullopt};
  const std::array<std::string, 2> names = {"encrypted", "plain"};
  const bool keep = artifacts != nullptr;
  auto results = parallel_map<LinkRunResult>(2, cfg.parallel, [&](std::size_t k) {
    LinkRunResult r = run_link(link_run_config(cfg, true, kinds[k], kInf),
                               point_seed(cfg.seed, "fig5_tx", names[k], 0), keep && k == 0);
    r.transmitted.clear();
    return r;
  });

  const double x = cfg.link.launch_power_dbm;
  const char* xn = "launch_power_dbm";
  std::vector<ResultRow> rows;
  rows.push_back(ResultRow::closed_form("fig5_tx", "link", xn, x, "noise_figure_db", cfg.link.noise_figure_db));
  rows.push_back(ResultRow::closed_form("fig5_tx", "link", xn, x, "booster_osnr_db", booster_osnr_db(cfg.link)));
  rows.push_back(ResultRow::closed_form("fig5_tx", "link", xn, x, "link_osnr_db", link_osnr_db(cfg.link)));
  rows.push_back(ResultRow::closed_form("fig5_tx", "link", xn, x, "net_rate_bps",
                                        net_rate(phys::kSymbolRate, 4, 2, 0.07, cfg.rx.equalizer.pilot_ratio)));
  for (std::size_t k = 0; k < 2; ++k) {
    const LinkRunResult& r = results[k];
    rows.push_back(ResultRow::measured("fig5_tx", names[k], xn, x, "bob_ber", r.bob));
    rows.push_back(ResultRow::closed_form("fig5_tx", names[k], xn, x, "osnr_db", r.measured_osnr_db));
    rows.push_back(ResultRow::closed_form("fig5_tx", names[k], xn, x, "equalizer_snr_db", r.equalizer_snr_db));
    rows.push_back(ResultRow::closed_form("fig5_tx", names[k], xn, x, "freq_offset_est_hz", r.freq.f_est_hz));
    rows.push_back(ResultRow::closed_form("fig5_tx", names[k], xn, x, "cycle_slips",
                                          static_cast<double>(r.cycle_slips)));
    if (k == 0) rows.push_back(ResultRow::measured("fig5_tx", names[k], xn, x, "eve_dense_ser", r.dense_ser));
  }
  for (TapPoint tap : {TapPoint::A, TapPoint::B}) {
    const NoiseBudget nb = tap_budget(tap, cfg.link, cfg.analysis.eve_extra_noise_var);
    SecurityBudget b;
    b.power_dbm = nb.power_dbm;
    b.wavelength = nb.wavelength;
    b.levels = std::uint64_t{1} << cfg.template_bits;
    b.extra_noise_var = nb.extra_noise_var;
    rows.push_back(ResultRow::closed_form("fig5_tx", "tap_" + std::string(tap_name(tap)), xn, x,
                                          "eve_ser_theory", eve_ser_theory(b)));
  }
  if (artifacts) {
    artifacts->tx_waveform = std::move(results[0].tx_waveform);
    artifacts->estimates = std::move(results[0].estimates);
  }
  return rows;
}

std::vector<ResultRow> fig6(const ExperimentConfig& cfg) {
  const auto& bits = cfg.sweep.template_bits;
  const auto& taps = cfg.sweep.taps;
  const std::size_t jobs = taps.size() * bits.size();
  auto results = parallel_map<EveResult>(jobs, cfg.parallel, [&](std::size_t j) {
    const TapPoint tap = taps[j / bits.size()];
    const std::size_t i = j % bits.size();
    EveMonteCarloConfig mc;
    mc.budget = tap_budget(tap, cfg.link, cfg.analysis.eve_extra_noise_var);
    mc.template_bits = bits[i];
    mc.trials = cfg.trials;
    mc.seed = point_seed(cfg.seed, "fig6", "tap_" + std::string(tap_name(tap)), i);
    if (cfg.replay.enabled) mc.pattern_symbols = cfg.replay.pattern_symbols(static_cast<int>(cfg.tx.dac.sample_rate / phys::kSymbolRate));
    return eve_montecarlo(mc);
  });
  std::vector<ResultRow> rows;
  for (std::size_t t = 0; t < taps.size(); ++t) {
    const std::string series = "tap_" + std::string(tap_name(taps[t]));
    const NoiseBudget nb = tap_budget(taps[t], cfg.link, cfg.analysis.eve_extra_noise_var);
    for (std::size_t i = 0; i < bits.size(); ++i) {
      const EveResult& r = results[t * bits.size() + i];
      const double x = 2.0 * bits[i];
      rows.push_back(ResultRow::measured("fig6", series, "template_total_bits", x, "eve_ser", r.ser));
      rows.push_back(ResultRow::measured("fig6", series, "template_total_bits", x, "eve_ber", r.ber));
      SecurityBudget b;
      b.power_dbm = nb.power_dbm;
      b.wavelength = nb.wavelength;
      b.levels = std::uint64_t{1} << bits[i];
      b.extra_noise_var = nb.extra_noise_var;
      rows.push_back(
          ResultRow::closed_form("fig6", series, "template_total_bits", x, "eve_ser_theory", eve_ser_theory(b)));
    }
  }
  return rows;
}

}  // namespace

std::vector<ResultRow> compute_preset(const ExperimentConfig& cfg, PresetArtifacts* artifacts) {
  if (cfg.preset == "fig1b") return fig1b(cfg);
  if (cfg.preset == "fig5_b2b") return fig5_b2b(cfg, artifacts);
  if (cfg.preset == "fig5_tx") return fig5_tx(cfg, artifacts);
  if (cfg.preset == "fig6") return fig6(cfg);
  throw ConfigError("preset", "unknown preset '" + cfg.preset + "'");
}

std::string manifest_yaml(const ExperimentConfig& cfg, std::size_t row_count) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "schema" << YAML::Value << "y00-manifest/1";
  out << YAML::Key << "results_schema" << YAML::Value << std::string(kResultsSchema);
  out << YAML::Key << "results" << YAML::Value << cfg.preset + ".csv";
  out << YAML::Key << "rows" << YAML::Value << row_count;
  out << YAML::Key << "seed" << YAML::Value << cfg.seed.to_hex();
  out << YAML::Key << "config" << YAML::Value << YAML::Load(to_yaml(cfg));
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

PresetOutput run_preset(const ExperimentConfig& cfg) {
  const std::filesystem::path dir(cfg.output.dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());

  PresetArtifacts artifacts;
  const bool want = cfg.output.dump_waveform || cfg.output.dump_taps;
  PresetOutput out;
  out.rows = compute_preset(cfg, want ? &artifacts : nullptr);
  out.csv = dir / (cfg.preset + ".csv");
  emit_csv(out.rows, kResultsSchema, out.csv);
  out.manifest = dir / (cfg.preset + ".manifest.yaml");
  {
    std::ofstream m(out.manifest, std::ios::binary | std::ios::trunc);
    if (!m) throw std::runtime_error("cannot open '" + out.manifest.string() + "' for writing");
    m << manifest_yaml(cfg, out.rows.size());
  }
  if (cfg.output.dump_waveform && artifacts.tx_waveform && artifacts.tx_waveform->samples() > 0) {
    out.dumps.push_back(dir / (cfg.preset + ".tx.y00w"));
    write_waveform(*artifacts.tx_waveform, out.dumps.back());
  }
  if (cfg.output.dump_taps && artifacts.estimates) {
    out.dumps.push_back(dir / (cfg.preset + ".taps.csv"));
    write_taps(*artifacts.estimates, out.dumps.back());
  }
  return out;
}

}  // namespace y00
