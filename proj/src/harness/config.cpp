// SPDX-License-Identifier: Apache-2.0
#include "y00/harness/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace y00 {

ConfigError::ConfigError(std::string key_path, const std::string& message)
    : std::invalid_argument(key_path + ": " + message), key_path_(std::move(key_path)) {}

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> list = {
      {"fig1b", "closed-form Eve SER vs template size at -10 and -2 dBm"},
      {"fig5_b2b", "Bob BER vs OSNR back-to-back, plain and encrypted"},
      {"fig5_tx", "4 x 80 km transmission at -2 dBm launch"},
      {"fig6", "Monte Carlo Eve SER vs total template size at taps A and B"},
  };
  return list;
}

bool is_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return true;
  }
  return false;
}

SeedKey default_seed() {
  return SeedKey::from_hex("5930305f7365656400000000000000000000000000000000000000000000002a");
}

TapPoint parse_tap(std::string_view s) {
  if (s == "A" || s == "a") return TapPoint::A;
  if (s == "B" || s == "b") return TapPoint::B;
  throw std::invalid_argument("tap must be A or B");
}

std::string_view tap_name(TapPoint t) { return t == TapPoint::A ? "A" : "B"; }

ExperimentConfig default_config(std::string_view preset) {
  if (!is_preset(preset)) throw ConfigError("preset", "unknown preset '" + std::string(preset) + "'");
  ExperimentConfig c;
  c.preset = std::string(preset);
  c.seed = default_seed();
  c.output.dir = "results";
  c.link_target_osnr_db = 29.3;
  if (preset == "fig1b") {
    for (int n = 4; n <= 16; ++n) c.sweep.template_bits.push_back(n);
    c.sweep.power_dbm = {-10.0, -2.0};
  } else if (preset == "fig5_b2b") {
    for (double o = 14.0; o <= 26.0; o += 1.0) c.sweep.osnr_db.push_back(o);
    c.sweep.osnr_db.push_back(std::numeric_limits<double>::infinity());
  } else if (preset == "fig6") {
    for (int n = 4; n <= 16; ++n) c.sweep.template_bits.push_back(n);
    c.sweep.taps = {TapPoint::A, TapPoint::B};
  }
  return c;
}

namespace {

// Strict view of one YAML mapping: every key must be consumed.
class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(path_or_root(), "expected a mapping");
  }

  bool has(const std::string& key) const { return node_ && node_.IsMap() && node_[key]; }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  YAML::Node take(const std::string& key) {
    used_.insert(key);
    return node_[key];
  }

  Section child(const std::string& key) {
    if (!has(key)) return Section(YAML::Node(), key_path(key));
    return Section(take(key), key_path(key));
  }

  void get(const std::string& key, double& out) {
    if (has(key)) out = to_double(take(key), key_path(key));
  }
  void get(const std::string& key, int& out) {
    if (has(key)) out = static_cast<int>(to_int(take(key), key_path(key)));
  }
  void get(const std::string& key, std::int64_t& out) {
    if (has(key)) out = to_int(take(key), key_path(key));
  }
  void get(const std::string& key, std::uint64_t& out) {
    if (has(key)) {
      const std::int64_t v = to_int(take(key), key_path(key));
      if (v < 0) throw ConfigError(key_path(key), "must be non-negative");
      out = static_cast<std::uint64_t>(v);
    }
  }
  void get(const std::string& key, bool& out) {
    if (!has(key)) return;
    const YAML::Node n = take(key);
    try {
      out = n.as<bool>();
    } catch (const YAML::Exception&) {
      throw ConfigError(key_path(key), "expected true or false");
    }
  }
  void get(const std::string& key, std::string& out) {
    if (has(key)) out = to_string(take(key), key_path(key));
  }

  template <typename T, typename Conv>
  void get_list(const std::string& key, std::vector<T>& out, Conv conv) {
    if (!has(key)) return;
    const YAML::Node n = take(key);
    const std::string p = key_path(key);
    if (!n.IsSequence()) throw ConfigError(p, "expected a list");
    out.clear();
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(conv(n[i], p + "[" + std::to_string(i) + "]"));
  }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!used_.count(key)) throw ConfigError(key_path(key), "unknown key");
    }
  }

  static std::string to_string(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) throw ConfigError(path, "expected a scalar");
    return n.Scalar();
  }

  static double to_double(const YAML::Node& n, const std::string& path) {
    const std::string s = to_string(n, path);
    if (s == "inf" || s == "+inf" || s == ".inf" || s == "+.inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf" || s == "-.inf") return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || std::isnan(v)) throw ConfigError(path, "expected a number, got '" + s + "'");
    return v;
  }

  static std::int64_t to_int(const YAML::Node& n, const std::string& path) {
    const double v = to_double(n, path);
    if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 9.0e15) {
      throw ConfigError(path, "expected an integer");
    }
    return static_cast<std::int64_t>(v);
  }

 private:
  std::string path_or_root() const { return path_.empty() ? "<root>" : path_; }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

template <typename E>
E parse_enum(const std::string& s, const std::string& path,
             std::initializer_list<std::pair<const char*, E>> options) {
  std::string allowed;
  for (const auto& [name, value] : options) {
    if (s == name) return value;
    allowed += allowed.empty() ? name : std::string(", ") + name;
  }
  throw ConfigError(path, "expected one of " + allowed + ", got '" + s + "'");
}

const std::initializer_list<std::pair<const char*, ModulationMode>> kModes = {
    {"ideal", ModulationMode::Ideal}, {"hardware", ModulationMode::Hardware}};
const std::initializer_list<std::pair<const char*, PdmMode>> kPdm = {
    {"independent", PdmMode::Independent}, {"delayed_copy", PdmMode::DelayedCopy}};
const std::initializer_list<std::pair<const char*, Transfer>> kTransfer = {
    {"linear", Transfer::Linear}, {"sinusoidal", Transfer::Sinusoidal}};
const std::initializer_list<std::pair<const char*, EqualizerMode>> kEqModes = {
    {"decision_directed", EqualizerMode::DecisionDirected}, {"pilot_only", EqualizerMode::PilotOnly}};

template <typename E>
const char* enum_name(E value, std::initializer_list<std::pair<const char*, E>> options) {
  for (const auto& [name, v] : options) {
    if (v == value) return name;
  }
  return "?";
}

template <typename E>
void get_enum(Section& s, const std::string& key, E& out,
              std::initializer_list<std::pair<const char*, E>> options) {
  std::string v;
  s.get(key, v);
  if (!v.empty()) out = parse_enum(v, s.key_path(key), options);
}

void apply_yaml(ExperimentConfig& c, const YAML::Node& root) {
  Section top(root, "");
  if (top.has("preset")) top.take("preset");
  if (top.has("seed")) {
    const std::string hex = Section::to_string(top.take("seed"), "seed");
    try {
      c.seed = SeedKey::from_hex(hex);
    } catch (const std::exception& e) {
      throw ConfigError("seed", e.what());
    }
  }
  top.get("trials", c.trials);
  top.get("symbols", c.symbols);
  top.get("parallel", c.parallel);

  {
    Section t = top.child("template");
    t.get("bits", c.template_bits);
    t.finish();
  }
  {
    Section t = top.child("tx");
    get_enum(t, "mode", c.tx.mode, kModes);
    get_enum(t, "pdm", c.tx.pdm, kPdm);
    t.get("pdm_delay_symbols", c.tx.pdm_delay_symbols);
    {
      Section d = t.child("dac");
      d.get("bits", c.tx.dac.resolution_bits);
      d.get("sample_rate", c.tx.dac.sample_rate);
      d.get("full_scale", c.tx.dac.full_scale);
      if (d.has("memory_samples")) {
        const YAML::Node m = d.take("memory_samples");
        if (m.IsNull()) {
          c.tx.dac.memory_samples.reset();
        } else {
          c.tx.dac.memory_samples = Section::to_int(m, d.key_path("memory_samples"));
        }
      }
      d.finish();
    }
    {
      Section m = t.child("modulator");
      m.get("v_pi", c.tx.modulator.v_pi);
      m.get("segment_voltage_ratio", c.tx.modulator.segment_voltage_ratio);
      get_enum(m, "transfer", c.tx.modulator.transfer, kTransfer);
      m.finish();
    }
    {
      Section r = t.child("replay");
      r.get("enabled", c.replay.enabled);
      r.get("pattern_length_samples", c.replay.pattern_length_samples);
      r.finish();
    }
    t.finish();
  }
  {
    Section l = top.child("link");
    l.get("spans", c.link.spans);
    l.get("span_length_km", c.link.span.length_km);
    l.get("attenuation_db_per_km", c.link.span.attenuation_db_per_km);
    l.get("dispersion_ps_nm_km", c.link.span.dispersion_ps_nm_km);
    l.get("tx_power_dbm", c.link.tx_power_dbm);
    l.get("launch_power_dbm", c.link.launch_power_dbm);
    double wavelength_nm = c.link.wavelength * 1e9;
    l.get("wavelength_nm", wavelength_nm);
    c.link.wavelength = wavelength_nm * 1e-9;
    l.get("amplifier_noise", c.amplifier_noise);
    double target = c.link_target_osnr_db.value_or(29.3);
    l.get("target_osnr_db", target);
    if (l.has("noise_figure_db")) {
      const YAML::Node nf = l.take("noise_figure_db");
      if (nf.IsScalar() && nf.Scalar() == "auto") {
        c.link_target_osnr_db = target;
      } else {
        c.link.noise_figure_db = Section::to_double(nf, "link.noise_figure_db");
        c.link_target_osnr_db.reset();
      }
    } else if (c.link_target_osnr_db) {
      c.link_target_osnr_db = target;
    }
    l.finish();
  }
  {
    Section lo = top.child("lo");
    lo.get("freq_offset_hz", c.lo.freq_offset_hz);
    lo.get("linewidth_hz", c.lo.linewidth_hz);
    lo.finish();
  }
  {
    Section r = top.child("rx");
    r.get("power_dbm", c.rx.rx_power_dbm);
    r.get("shot_noise", c.rx.shot_noise);
    r.get("extra_noise_var", c.rx.extra_noise_var);
    r.get("freq_recovery", c.rx.freq_recovery);
    r.get("frame_sync", c.rx.frame_sync);
    {
      Section f = r.child("frontend");
      f.get("bandwidth_hz", c.rx.frontend.bandwidth_hz);
      f.get("filter_order", c.rx.frontend.filter_order);
      f.get("adc_rate", c.rx.frontend.adc_rate);
      f.get("adc_bits", c.rx.frontend.adc_bits);
      f.get("quantize", c.rx.frontend.quantize);
      f.get("full_scale_sigma", c.rx.frontend.full_scale_sigma);
      f.finish();
    }
    {
      Section e = r.child("equalizer");
      EqualizerConfig& q = c.rx.equalizer;
      e.get("taps", q.taps);
      e.get("step_size", q.step_size);
      e.get("tracking_step_size", q.tracking_step_size);
      e.get("pilot_ratio", q.pilot_ratio);
      e.get("preconvergence_symbols", q.preconvergence_symbols);
      e.get("preconvergence_passes", q.preconvergence_passes);
      e.get("lowpass_init", q.lowpass_init);
      e.get("pll_bandwidth", q.pll_bandwidth);
      get_enum(e, "mode", q.mode, kEqModes);
      e.get("convergence_mse", q.convergence_mse);
      e.finish();
    }
    r.finish();
  }
  {
    Section s = top.child("sweep");
    s.get_list("osnr_db", c.sweep.osnr_db, Section::to_double);
    s.get_list("template_bits", c.sweep.template_bits,
               [](const YAML::Node& n, const std::string& p) { return static_cast<int>(Section::to_int(n, p)); });
    s.get_list("power_dbm", c.sweep.power_dbm, Section::to_double);
    s.get_list("taps", c.sweep.taps, [](const YAML::Node& n, const std::string& p) {
      try {
        return parse_tap(Section::to_string(n, p));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(p, e.what());
      }
    });
    s.finish();
  }
  {
    Section a = top.child("analysis");
    a.get("fec_threshold", c.analysis.fec_threshold);
    a.get("eve_extra_noise_var", c.analysis.eve_extra_noise_var);
    a.get("awgn_symbols", c.analysis.awgn_symbols);
    a.finish();
  }
  {
    Section o = top.child("output");
    o.get("dir", c.output.dir);
    o.get("dump_waveform", c.output.dump_waveform);
    o.get("dump_taps", c.output.dump_taps);
    o.finish();
  }
  top.finish();
}

void apply_override(YAML::Node& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(assignment, "override must look like key.path=value");
  }
  const std::string path = assignment.substr(0, eq);
  YAML::Node value;
  try {
    value = YAML::Load(assignment.substr(eq + 1));
  } catch (const YAML::Exception& e) {
    throw ConfigError(path, std::string("unparsable value: ") + e.what());
  }
  std::vector<std::string> keys;
  std::stringstream ss(path);
  for (std::string k; std::getline(ss, k, '.');) {
    if (k.empty()) throw ConfigError(path, "empty key segment");
    keys.push_back(k);
  }
  // walk by reassignment so every level is a handle into `root`
  std::vector<YAML::Node> chain{root};
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    YAML::Node next = chain.back()[keys[i]];
    if (next && !next.IsMap() && !next.IsNull()) {
      throw ConfigError(path, "'" + keys[i] + "' is not a mapping");
    }
    if (!next || next.IsNull()) {
      chain.back()[keys[i]] = YAML::Node(YAML::NodeType::Map);
      next = chain.back()[keys[i]];
    }
    chain.push_back(next);
  }
  chain.back()[keys.back()] = value;
}

ExperimentConfig build(YAML::Node root, const std::vector<std::string>& overrides) {
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ConfigError("<root>", "config must be a mapping");
  for (const auto& o : overrides) apply_override(root, o);
  if (!root["preset"]) throw ConfigError("preset", "missing");
  const std::string preset = Section::to_string(root["preset"], "preset");
  ExperimentConfig c = default_config(preset);
  apply_yaml(c, root);
  resolve_and_validate(c);
  return c;
}

}  // namespace

ExperimentConfig parse_config(const std::string& yaml_text, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<root>", std::string("YAML syntax error: ") + e.what());
  }
  return build(root, overrides);
}

ExperimentConfig load_config(const std::string& preset_or_path, const std::vector<std::string>& overrides) {
  if (is_preset(preset_or_path)) {
    YAML::Node root(YAML::NodeType::Map);
    root["preset"] = preset_or_path;
    return build(root, overrides);
  }
  std::ifstream in(preset_or_path);
  if (!in) {
    throw ConfigError("preset", "'" + preset_or_path + "' is neither a preset nor a readable config file");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

void resolve_and_validate(ExperimentConfig& c) {
  auto check = [](bool ok, const char* path, const std::string& msg) {
    if (!ok) throw ConfigError(path, msg);
  };
  check(is_preset(c.preset), "preset", "unknown preset");
  try {
    TemplateConfig tpl(c.template_bits);
  } catch (const std::exception& e) {
    throw ConfigError("template.bits", e.what());
  }
  check(c.parallel >= 1, "parallel", "must be at least 1");
  check(c.trials >= 10000, "trials", "Monte Carlo needs at least 1e4 trials");
  check(c.trials <= 1000000000ULL, "trials", "at most 1e9 trials");
  check(c.tx.mode == ModulationMode::Ideal || c.template_bits == 16, "tx.mode",
        "hardware mode requires template.bits = 16");
  check(c.tx.pdm_delay_symbols >= 0, "tx.pdm_delay_symbols", "must be non-negative");
  check(c.tx.dac.resolution_bits >= 1 && c.tx.dac.resolution_bits <= 16, "tx.dac.bits", "must lie in [1, 16]");
  check(c.tx.dac.sample_rate > 0.0, "tx.dac.sample_rate", "must be positive");
  check(c.tx.dac.full_scale > 0.0, "tx.dac.full_scale", "must be positive");
  {
    const double ratio = c.tx.dac.sample_rate / phys::kSymbolRate;
    check(ratio == std::round(ratio), "tx.dac.sample_rate", "must be an integer multiple of the symbol rate");
  }
  check(c.tx.modulator.v_pi > 0.0, "tx.modulator.v_pi", "must be positive");
  check(c.tx.modulator.segment_voltage_ratio > 0.0, "tx.modulator.segment_voltage_ratio", "must be positive");
  check(c.replay.pattern_length_samples >= c.tx.dac.sample_rate / phys::kSymbolRate,
        "tx.replay.pattern_length_samples", "pattern must hold at least one symbol");

  check(c.link.spans >= 1, "link.spans", "must be at least 1");
  check(c.link.span.length_km > 0.0, "link.span_length_km", "must be positive");
  check(c.link.span.attenuation_db_per_km >= 0.0, "link.attenuation_db_per_km", "must be non-negative");
  check(c.link.wavelength > 0.0, "link.wavelength_nm", "must be positive");
  check(c.link.launch_power_dbm >= c.link.tx_power_dbm, "link.launch_power_dbm",
        "booster gain would be negative");
  if (c.link_target_osnr_db) {
    check(std::isfinite(*c.link_target_osnr_db), "link.target_osnr_db", "must be finite");
    c.link.noise_figure_db = calibrate_noise_figure_db(c.link, *c.link_target_osnr_db);
    check(c.link.noise_figure_db >= 0.0, "link.target_osnr_db",
          "unreachable: needs a noise figure below 0 dB");
  }
  check(c.link.noise_figure_db >= 0.0, "link.noise_figure_db", "must be non-negative");

  check(c.lo.linewidth_hz >= 0.0, "lo.linewidth_hz", "must be non-negative");
  check(std::abs(4.0 * c.lo.freq_offset_hz) < phys::kSymbolRate / 2.0, "lo.freq_offset_hz",
        "outside the frequency-recovery range |4 df| < Rs/2");

  check(c.rx.extra_noise_var >= 0.0, "rx.extra_noise_var", "must be non-negative");
  check(c.rx.frontend.bandwidth_hz > 0.0, "rx.frontend.bandwidth_hz", "must be positive");
  check(c.rx.frontend.filter_order >= 1, "rx.frontend.filter_order", "must be at least 1");
  check(c.rx.frontend.adc_bits >= 1 && c.rx.frontend.adc_bits <= 16, "rx.frontend.adc_bits",
        "must lie in [1, 16]");
  check(c.rx.frontend.full_scale_sigma > 0.0, "rx.frontend.full_scale_sigma", "must be positive");
  {
    // frame lengths stay integral through 88 -> ADC -> 2 samples/symbol
    const double r = c.rx.frontend.adc_rate / phys::kSymbolRate;
    check(c.rx.frontend.adc_rate > 2.0 * phys::kSymbolRate && r * 11.0 == std::round(r * 11.0),
          "rx.frontend.adc_rate", "must exceed 2 Rs and be a multiple of Rs/11");
  }
  try {
    c.rx.equalizer.validate();
  } catch (const std::exception& e) {
    throw ConfigError("rx.equalizer", e.what());
  }
  check(c.symbols >= c.rx.equalizer.preconvergence_symbols + 2 * c.rx.equalizer.taps, "symbols",
        "frame too short for the equalizer preamble and edges");
  check(c.symbols <= (std::int64_t{1} << 24), "symbols", "at most 2^24 symbols per run");

  for (std::size_t i = 0; i < c.sweep.osnr_db.size(); ++i) {
    const double o = c.sweep.osnr_db[i];
    if (!(o >= -10.0) || (std::isinf(o) && o < 0)) {
      throw ConfigError("sweep.osnr_db[" + std::to_string(i) + "]", "must be >= -10 dB or inf");
    }
  }
  for (std::size_t i = 0; i < c.sweep.template_bits.size(); ++i) {
    const int n = c.sweep.template_bits[i];
    if (n < 4 || n > 16) {
      throw ConfigError("sweep.template_bits[" + std::to_string(i) + "]", "must lie in [4, 16]");
    }
  }
  check(c.analysis.fec_threshold > 0.0 && c.analysis.fec_threshold < 0.5, "analysis.fec_threshold",
        "must lie in (0, 0.5)");
  check(c.analysis.eve_extra_noise_var >= 0.0, "analysis.eve_extra_noise_var", "must be non-negative");
  check(c.analysis.awgn_symbols >= 1000 && c.analysis.awgn_symbols <= (std::int64_t{1} << 24),
        "analysis.awgn_symbols", "must lie in [1000, 2^24]");
  check(!c.output.dir.empty(), "output.dir", "must not be empty");

  if (c.preset == "fig1b") {
    check(!c.sweep.template_bits.empty(), "sweep.template_bits", "empty sweep");
    check(!c.sweep.power_dbm.empty(), "sweep.power_dbm", "empty sweep");
  } else if (c.preset == "fig5_b2b") {
    check(!c.sweep.osnr_db.empty(), "sweep.osnr_db", "empty sweep");
  } else if (c.preset == "fig6") {
    check(!c.sweep.template_bits.empty(), "sweep.template_bits", "empty sweep");
    check(!c.sweep.taps.empty(), "sweep.taps", "empty sweep");
  }
}

std::string to_yaml(const ExperimentConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "preset" << YAML::Value << c.preset;
  out << YAML::Key << "seed" << YAML::Value << c.seed.to_hex();
  out << YAML::Key << "trials" << YAML::Value << c.trials;
  out << YAML::Key << "symbols" << YAML::Value << c.symbols;
  out << YAML::Key << "parallel" << YAML::Value << c.parallel;
  out << YAML::Key << "template" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "bits" << YAML::Value << c.template_bits << YAML::EndMap;

  out << YAML::Key << "tx" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << enum_name(c.tx.mode, kModes);
  out << YAML::Key << "pdm" << YAML::Value << enum_name(c.tx.pdm, kPdm);
  out << YAML::Key << "pdm_delay_symbols" << YAML::Value << c.tx.pdm_delay_symbols;
  out << YAML::Key << "dac" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "bits" << YAML::Value << c.tx.dac.resolution_bits;
  out << YAML::Key << "sample_rate" << YAML::Value << c.tx.dac.sample_rate;
  out << YAML::Key << "full_scale" << YAML::Value << c.tx.dac.full_scale;
  out << YAML::Key << "memory_samples" << YAML::Value;
  if (c.tx.dac.memory_samples) {
    out << *c.tx.dac.memory_samples;
  } else {
    out << YAML::Null;
  }
  out << YAML::EndMap;
  out << YAML::Key << "modulator" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "v_pi" << YAML::Value << c.tx.modulator.v_pi;
  out << YAML::Key << "segment_voltage_ratio" << YAML::Value << c.tx.modulator.segment_voltage_ratio;
  out << YAML::Key << "transfer" << YAML::Value << enum_name(c.tx.modulator.transfer, kTransfer);
  out << YAML::EndMap;
  out << YAML::Key << "replay" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << c.replay.enabled;
  out << YAML::Key << "pattern_length_samples" << YAML::Value << c.replay.pattern_length_samples;
  out << YAML::EndMap << YAML::EndMap;

  out << YAML::Key << "link" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "spans" << YAML::Value << c.link.spans;
  out << YAML::Key << "span_length_km" << YAML::Value << c.link.span.length_km;
  out << YAML::Key << "attenuation_db_per_km" << YAML::Value << c.link.span.attenuation_db_per_km;
  out << YAML::Key << "dispersion_ps_nm_km" << YAML::Value << c.link.span.dispersion_ps_nm_km;
  out << YAML::Key << "tx_power_dbm" << YAML::Value << c.link.tx_power_dbm;
  out << YAML::Key << "launch_power_dbm" << YAML::Value << c.link.launch_power_dbm;
  out << YAML::Key << "wavelength_nm" << YAML::Value << c.link.wavelength * 1e9;
  out << YAML::Key << "noise_figure_db" << YAML::Value << c.link.noise_figure_db;
  out << YAML::Key << "amplifier_noise" << YAML::Value << c.amplifier_noise;
  out << YAML::EndMap;

  out << YAML::Key << "lo" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "freq_offset_hz" << YAML::Value << c.lo.freq_offset_hz;
  out << YAML::Key << "linewidth_hz" << YAML::Value << c.lo.linewidth_hz;
  out << YAML::EndMap;

  const EqualizerConfig& q = c.rx.equalizer;
  out << YAML::Key << "rx" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "power_dbm" << YAML::Value << c.rx.rx_power_dbm;
  out << YAML::Key << "shot_noise" << YAML::Value << c.rx.shot_noise;
  out << YAML::Key << "extra_noise_var" << YAML::Value << c.rx.extra_noise_var;
  out << YAML::Key << "freq_recovery" << YAML::Value << c.rx.freq_recovery;
  out << YAML::Key << "frame_sync" << YAML::Value << c.rx.frame_sync;
  out << YAML::Key << "frontend" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "bandwidth_hz" << YAML::Value << c.rx.frontend.bandwidth_hz;
  out << YAML::Key << "filter_order" << YAML::Value << c.rx.frontend.filter_order;
  out << YAML::Key << "adc_rate" << YAML::Value << c.rx.frontend.adc_rate;
  out << YAML::Key << "adc_bits" << YAML::Value << c.rx.frontend.adc_bits;
  out << YAML::Key << "quantize" << YAML::Value << c.rx.frontend.quantize;
  out << YAML::Key << "full_scale_sigma" << YAML::Value << c.rx.frontend.full_scale_sigma;
  out << YAML::EndMap;
  out << YAML::Key << "equalizer" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "taps" << YAML::Value << q.taps;
  out << YAML::Key << "step_size" << YAML::Value << q.step_size;
  out << YAML::Key << "tracking_step_size" << YAML::Value << q.tracking_step_size;
  out << YAML::Key << "pilot_ratio" << YAML::Value << q.pilot_ratio;
  out << YAML::Key << "preconvergence_symbols" << YAML::Value << q.preconvergence_symbols;
  out << YAML::Key << "preconvergence_passes" << YAML::Value << q.preconvergence_passes;
  out << YAML::Key << "lowpass_init" << YAML::Value << q.lowpass_init;
  out << YAML::Key << "pll_bandwidth" << YAML::Value << q.pll_bandwidth;
  out << YAML::Key << "mode" << YAML::Value << enum_name(q.mode, kEqModes);
  out << YAML::Key << "convergence_mse" << YAML::Value << q.convergence_mse;
  out << YAML::EndMap << YAML::EndMap;

  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "osnr_db" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double o : c.sweep.osnr_db) out << o;
  out << YAML::EndSeq;
  out << YAML::Key << "template_bits" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (int n : c.sweep.template_bits) out << n;
  out << YAML::EndSeq;
  out << YAML::Key << "power_dbm" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double p : c.sweep.power_dbm) out << p;
  out << YAML::EndSeq;
  out << YAML::Key << "taps" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (TapPoint t : c.sweep.taps) out << std::string(tap_name(t));
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "fec_threshold" << YAML::Value << c.analysis.fec_threshold;
  out << YAML::Key << "eve_extra_noise_var" << YAML::Value << c.analysis.eve_extra_noise_var;
  out << YAML::Key << "awgn_symbols" << YAML::Value << c.analysis.awgn_symbols;
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dir" << YAML::Value << c.output.dir;
  out << YAML::Key << "dump_waveform" << YAML::Value << c.output.dump_waveform;
  out << YAML::Key << "dump_taps" << YAML::Value << c.output.dump_taps;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace y00
