// SPDX-License-Identifier: Apache-2.0
#include "y00/waveform.hpp"

#include <unsupported/Eigen/FFT>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace y00 {

int Waveform::samples_per_symbol() const {
  const double ratio = sample_rate / symbol_rate;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    throw std::logic_error("sample rate is not an integer multiple of the symbol rate");
  }
  return static_cast<int>(rounded);
}

double Waveform::power_dbm() const { return watt_to_dbm(signal_power); }

double Waveform::measured_power() const {
  double p = 0.0;
  for (const auto& x : pol) p += x.squaredNorm() / static_cast<double>(x.size());
  return p;
}

void Waveform::scale(double amplitude_gain) {
  for (auto& x : pol) x *= amplitude_gain;
  const double g2 = amplitude_gain * amplitude_gain;
  signal_power *= g2;
  ase_psd *= g2;
}

double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt / 1e-3); }

Waveform set_power(Waveform w, double dbm) {
  if (!(w.signal_power > 0.0)) throw std::logic_error("set_power: waveform has no signal power");
  w.scale(std::sqrt(dbm_to_watt(dbm) / w.signal_power));
  return w;
}

Eigen::VectorXcd fft(const Eigen::VectorXcd& x) {
  Eigen::FFT<double> engine;
  Eigen::VectorXcd out;
  engine.fwd(out, x);
  return out;
}

Eigen::VectorXcd ifft(const Eigen::VectorXcd& x) {
  Eigen::FFT<double> engine;
  Eigen::VectorXcd out;
  engine.inv(out, x);
  return out;
}

Eigen::VectorXd fft_frequencies(Eigen::Index n, double sample_rate) {
  Eigen::VectorXd f(n);
  const double df = sample_rate / static_cast<double>(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index signed_k = (k <= (n - 1) / 2) ? k : k - n;
    f[k] = df * static_cast<double>(signed_k);
  }
  return f;
}

namespace {

Eigen::VectorXcd resample_spectrum(const Eigen::VectorXcd& spec, Eigen::Index n_out) {
  const Eigen::Index n_in = spec.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n_out);
  const Eigen::Index n_min = std::min(n_in, n_out);
  const Eigen::Index pos = (n_min + 1) / 2;  // bins 0 .. pos-1
  const Eigen::Index neg = n_min / 2;        // bins -1 .. -(neg)
  out.head(pos) = spec.head(pos);
  if (neg > 0) out.tail(neg) = spec.tail(neg);
  if (n_min % 2 == 0 && neg > 0) {
    // the shared Nyquist bin: split it when growing, drop when shrinking
    if (n_out > n_in) {
      const std::complex<double> nyq = spec[n_in / 2];
      out[n_min / 2] = 0.5 * nyq;
      out[n_out - n_min / 2] = 0.5 * nyq;
    } else {
      out[n_out / 2] = 0.0;
    }
  }
  return out;
}

}  // namespace

Waveform resample(const Waveform& w, double new_rate) {
  if (!(new_rate > 0.0)) throw std::invalid_argument("resample: rate must be positive");
  const double exact = static_cast<double>(w.samples()) * new_rate / w.sample_rate;
  const double n_out_d = std::round(exact);
  if (std::abs(exact - n_out_d) > 1e-6) {
    throw std::invalid_argument("resample: output length is not an integer number of samples");
  }
  const auto n_out = static_cast<Eigen::Index>(n_out_d);
  Waveform out = w;
  const double amp = static_cast<double>(n_out) / static_cast<double>(w.samples());
  for (auto& x : out.pol) x = ifft(resample_spectrum(fft(x), n_out)) * amp;
  out.sample_rate = new_rate;
  return out;
}

Eigen::VectorXcd circular_delay(const Eigen::VectorXcd& x, Eigen::Index samples) {
  const Eigen::Index n = x.size();
  if (n == 0) return x;
  const Eigen::Index s = ((samples % n) + n) % n;
  Eigen::VectorXcd out(n);
  out.tail(n - s) = x.head(n - s);
  if (s > 0) out.head(s) = x.tail(s);
  return out;
}

namespace {

constexpr char kMagic[4] = {'Y', '0', '0', 'W'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "waveform dump assumes a little-endian host");

template <typename T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("waveform file truncated");
  return v;
}

}  // namespace

void write_waveform(const Waveform& w, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open waveform file for writing: " + path.string());
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(w.pol_count()));
  put<std::uint32_t>(os, 0);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(w.samples()));
  put<double>(os, w.sample_rate);
  put<double>(os, w.symbol_rate);
  put<double>(os, w.signal_power > 0.0 ? w.power_dbm() : -INFINITY);
  put<double>(os, w.wavelength);
  for (const auto& x : w.pol) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      put<double>(os, x[i].real());
      put<double>(os, x[i].imag());
    }
  }
  if (!os) throw std::runtime_error("failed writing waveform file: " + path.string());
}

Waveform read_waveform(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open waveform file: " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("not a Y00W file");
  if (get<std::uint32_t>(is) != kVersion) throw std::runtime_error("unsupported Y00W version");
  const auto n_pol = get<std::uint32_t>(is);
  get<std::uint32_t>(is);
  const auto n = static_cast<Eigen::Index>(get<std::uint64_t>(is));
  Waveform w;
  w.sample_rate = get<double>(is);
  w.symbol_rate = get<double>(is);
  const double dbm = get<double>(is);
  w.wavelength = get<double>(is);
  w.signal_power = std::isfinite(dbm) ? dbm_to_watt(dbm) : 0.0;
  w.pol.assign(n_pol, Eigen::VectorXcd(n));
  for (auto& x : w.pol) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      x[i] = {re, im};
    }
  }
  return w;
}

}  // namespace y00
