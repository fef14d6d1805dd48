// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "y00/cipher.hpp"
#include "y00/random.hpp"

using namespace y00;

TEST_CASE("template geometry") {
  for (int n = 4; n <= 16; ++n) {
    const TemplateConfig t(n);
    const double L = std::ldexp(1.0, n);
    CHECK(t.levels() == (1u << n));
    CHECK(t.bases() == (1u << n) / 4);
    CHECK(t.delta() == doctest::Approx(std::sqrt(6.0 / (L * L - 1.0))).epsilon(1e-15));
    CHECK(t.total_bits() == 2 * n);
  }
  CHECK_THROWS(TemplateConfig(3));
  CHECK_THROWS(TemplateConfig(17));
}

TEST_CASE("level amplitudes are symmetric with unit symbol energy") {
  const TemplateConfig t4(4);
  CHECK(level_amplitude(0, t4) == doctest::Approx(-7.5 * t4.delta()));
  CHECK(level_amplitude(15, t4) == doctest::Approx(7.5 * t4.delta()));
  CHECK_THROWS_AS(level_amplitude(16, t4), std::out_of_range);
  for (int n : {4, 8, 12, 16}) {
    const TemplateConfig t(n);
    long double sum = 0.0L, sum2 = 0.0L;
    for (std::uint32_t l = 0; l < t.levels(); ++l) {
      const long double a = level_amplitude<long double>(l, t);
      sum += a;
      sum2 += a * a;
    }
    CHECK(std::abs(static_cast<double>(sum)) < 1e-9);
    // both quadratures: 2 * per-quadrature mean square
    CHECK(std::abs(static_cast<double>(2.0L * sum2 / t.levels()) - 1.0) < 1e-12);
  }
}

TEST_CASE("gray map") {
  CHECK(gray_to_level(0b00) == 0);
  CHECK(gray_to_level(0b01) == 1);
  CHECK(gray_to_level(0b11) == 2);
  CHECK(gray_to_level(0b10) == 3);
  for (int l = 0; l < 4; ++l) CHECK(gray_to_level(level_to_gray(l)) == l);
  for (int l = 0; l + 1 < 4; ++l) {
    const int diff = level_to_gray(l) ^ level_to_gray(l + 1);
    CHECK((diff == 1 || diff == 2));
  }
}

TEST_CASE("encrypt quadrature examples") {
  const TemplateConfig t16(16);
  CHECK(t16.bases() == 16384);
  CHECK(encrypt_quadrature(1, 3, 5, t16) == 49157u);
  CHECK(encrypt_quadrature(0, 0, 0, t16) == 0u);
  CHECK(decrypt_quadrature(level_amplitude(49157, t16), 3, 5, t16) == 1);
  CHECK_THROWS(encrypt_quadrature(4, 0, 0, t16));
  CHECK_THROWS(encrypt_quadrature(0, -1, 0, t16));
  CHECK_THROWS(encrypt_quadrature(0, 0, 16384, t16));
  CHECK_THROWS(decrypt_quadrature(std::nan(""), 0, 0, t16));
  CHECK_THROWS(decrypt_quadrature(INFINITY, 0, 0, t16));
}

TEST_CASE("n = 4 pairs (p', k) cover every level exactly once") {
  const TemplateConfig t(4);
  std::vector<int> hits(16, 0);
  for (int pm = 0; pm < 4; ++pm) {
    for (std::uint32_t k = 0; k < 4; ++k) ++hits[encrypt_quadrature(pm, 0, k, t)];
  }
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("bijection and round trip are exhaustive for n <= 8") {
  for (int n = 4; n <= 8; ++n) {
    const TemplateConfig t(n);
    for (int r = 0; r < 4; ++r) {
      std::vector<int> hits(t.levels(), 0);
      for (int p = 0; p < 4; ++p) {
        for (std::uint32_t k = 0; k < t.bases(); ++k) {
          const std::uint32_t l = encrypt_quadrature(p, r, k, t);
          REQUIRE(l < t.levels());
          ++hits[l];
          REQUIRE(decrypt_quadrature(level_amplitude(l, t), r, k, t) == p);
        }
      }
      for (int h : hits) REQUIRE(h == 1);
    }
  }
}

TEST_CASE("fixed basis decodes four distinct dibits, adjacent levels never share a band assignment") {
  const TemplateConfig t(10);
  for (std::uint32_t k = 0; k < t.bases(); ++k) {
    int seen = 0;
    for (int m = 0; m < 4; ++m) seen |= 1 << decrypt_quadrature(level_amplitude(k + t.bases() * m, t), 0, k, t);
    REQUIRE(seen == 0xF);
  }
  for (int pm = 0; pm < 4; ++pm) {
    for (std::uint32_t k = 0; k + 1 < t.bases(); ++k) {
      const std::uint32_t a = encrypt_quadrature(pm, 0, k, t);
      const std::uint32_t b = encrypt_quadrature(pm, 0, k + 1, t);
      CHECK((b % t.bases()) == (a % t.bases()) + 1);
      CHECK((b / t.bases()) == ((a / t.bases()) + 1) % 4);
    }
  }
}

TEST_CASE("candidate decisions switch at the band midpoint") {
  const TemplateConfig t(6);
  const std::uint32_t k = 3;
  const double mid = 0.5 * (level_amplitude(k, t) + level_amplitude(k + t.bases(), t));
  const double eps = 1e-9 * t.delta();
  // p = ((m - k) mod 4) xor r
  CHECK(decrypt_quadrature(mid - eps, 0, k, t) == 1);
  CHECK(decrypt_quadrature(mid + eps, 0, k, t) == 2);
  CHECK(decrypt_quadrature(-10.0, 0, k, t) == 1);
  CHECK(decrypt_quadrature(10.0, 0, k, t) == 0);
}

TEST_CASE("decryption tolerates noise well below the band spacing") {
  const TemplateConfig t(16);
  Rng rng(2024);
  const double spacing = t.bases() * t.delta();
  const double sigma = 0.01 * spacing;
  int errors = 0;
  for (int i = 0; i < 100000; ++i) {
    const int p = static_cast<int>(rng.bits() & 3);
    const int r = static_cast<int>(rng.bits() & 3);
    const auto k = static_cast<std::uint32_t>(rng.bits() % t.bases());
    const double a = level_amplitude(encrypt_quadrature(p, r, k, t), t) + sigma * rng.normal();
    errors += decrypt_quadrature(a, r, k, t) != p;
  }
  CHECK(errors == 0);
}

TEST_CASE("symbol round trip over all plaintexts and random keys") {
  const TemplateConfig t(16);
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    RunningKey rk;
    rk.r_i = static_cast<std::uint8_t>(rng.bits() & 3);
    rk.r_q = static_cast<std::uint8_t>(rng.bits() & 3);
    rk.k_i = static_cast<std::uint32_t>(rng.bits() % t.bases());
    rk.k_q = static_cast<std::uint32_t>(rng.bits() % t.bases());
    for (int b = 0; b < 16; ++b) {
      const PlainSymbol s{static_cast<std::uint8_t>(b)};
      const CipherPoint c = encrypt_symbol(s, rk, t);
      REQUIRE(decrypt_symbol(point_amplitude(c, t), rk, t) == s);
    }
  }
  const CipherPoint zero = encrypt_symbol(PlainSymbol{0}, RunningKey{}, t);
  CHECK(zero == CipherPoint{0, 0});
}

TEST_CASE("the high dibit drives I and the low dibit Q") {
  const PlainSymbol s{0b1101};
  CHECK(s.p_i() == gray_to_level(0b11));
  CHECK(s.p_q() == gray_to_level(0b01));
  CHECK(PlainSymbol::from_levels(s.p_i(), s.p_q()) == s);
}

TEST_CASE("uniform keys give uniform levels for a fixed plaintext") {
  const TemplateConfig t(8);
  Rng rng(99);
  std::vector<double> counts(256, 0.0);
  const int trials = 1000000;
  for (int i = 0; i < trials; ++i) {
    RunningKey rk;
    rk.r_i = static_cast<std::uint8_t>(rng.bits() & 3);
    rk.k_i = static_cast<std::uint32_t>(rng.bits() % t.bases());
    ++counts[encrypt_symbol(PlainSymbol{0b0110}, rk, t).l_i];
  }
  const double e = trials / 256.0;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - e) * (c - e) / e;
  // 255 dof, critical value at significance 1e-4 is 347.7
  CHECK(chi2 < 347.7);
}

TEST_CASE("eve nearest level") {
  for (int n : {4, 10, 16}) {
    const TemplateConfig t(n);
    const std::uint32_t step = n == 16 ? 37 : 1;
    for (std::uint32_t l = 0; l < t.levels(); l += step) REQUIRE(eve_nearest_level(level_amplitude(l, t), t) == l);
    CHECK(eve_nearest_level(-10.0, t) == 0);
    CHECK(eve_nearest_level(10.0, t) == t.levels() - 1);
  }
  const TemplateConfig t(4);
  const double mid = 0.5 * (level_amplitude(5, t) + level_amplitude(6, t));
  CHECK(eve_nearest_level(mid, t) == 5);
  CHECK_THROWS(eve_nearest_level(std::nan(""), t));
}

TEST_CASE("decision distance ratio") {
  const TemplateConfig t(16);
  CHECK(std::abs(bob_decision_ratio(t) - 0.75) < 1e-9);
  // (M delta)^2 relative to the per-quadrature mean energy 1/2
  const double m_delta = t.bases() * t.delta();
  CHECK(m_delta * m_delta / 0.5 == doctest::Approx(bob_decision_ratio(t)).epsilon(1e-12));
  CHECK(10.0 * std::log10(0.8 / bob_decision_ratio(t)) == doctest::Approx(0.2803).epsilon(1e-3));
  // plain 16-QAM spacing^2 / per-quadrature energy is 0.4 / 0.5 = 4/5
  const double d = plain_level_amplitude(1) - plain_level_amplitude(0);
  CHECK(d * d / 0.5 == doctest::Approx(0.8));
}

TEST_CASE("plain 16-QAM mapping and decisions") {
  double energy = 0.0;
  for (int b = 0; b < 16; ++b) {
    const PlainSymbol s{static_cast<std::uint8_t>(b)};
    const auto z = plain_symbol_amplitude(s);
    energy += std::norm(z) / 16.0;
    CHECK(plain_decide(z) == s);
    CHECK(plain_decide(z + std::complex<double>(0.3, -0.3) / std::sqrt(10.0)) == s);
  }
  CHECK(energy == doctest::Approx(1.0));
  // threshold at 0 goes to the lower level
  CHECK(plain_decide({0.0, 0.0}).p_i() == 1);
  CHECK_THROWS(plain_level_amplitude(4));
}
