// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <vector>

#include "y00/cipher.hpp"
#include "y00/keystream.hpp"

using namespace y00;

namespace {

// Reference RFC 8439 block function over a 32-bit counter and 96-bit nonce.
std::array<std::uint8_t, 64> ref_block(const std::array<std::uint8_t, 32>& key, std::uint32_t counter,
                                       const std::array<std::uint8_t, 12>& nonce) {
  auto le = [](const std::uint8_t* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
  };
  std::uint32_t s[16];
  s[0] = 0x61707865;
  s[1] = 0x3320646e;
  s[2] = 0x79622d32;
  s[3] = 0x6b206574;
  for (int i = 0; i < 8; ++i) s[4 + i] = le(&key[4 * i]);
  s[12] = counter;
  for (int i = 0; i < 3; ++i) s[13 + i] = le(&nonce[4 * i]);
  std::uint32_t x[16];
  std::memcpy(x, s, sizeof s);
  auto rotl = [](std::uint32_t v, int c) { return (v << c) | (v >> (32 - c)); };
  auto qr = [&](int a, int b, int c, int d) {
    x[a] += x[b]; x[d] ^= x[a]; x[d] = rotl(x[d], 16);
    x[c] += x[d]; x[b] ^= x[c]; x[b] = rotl(x[b], 12);
    x[a] += x[b]; x[d] ^= x[a]; x[d] = rotl(x[d], 8);
    x[c] += x[d]; x[b] ^= x[c]; x[b] = rotl(x[b], 7);
  };
  for (int r = 0; r < 10; ++r) {
    qr(0, 4, 8, 12); qr(1, 5, 9, 13); qr(2, 6, 10, 14); qr(3, 7, 11, 15);
    qr(0, 5, 10, 15); qr(1, 6, 11, 12); qr(2, 7, 8, 13); qr(3, 4, 9, 14);
  }
  std::array<std::uint8_t, 64> out{};
  for (int i = 0; i < 16; ++i) {
    const std::uint32_t v = x[i] + s[i];
    for (int b = 0; b < 4; ++b) out[4 * i + b] = static_cast<std::uint8_t>(v >> (8 * b));
  }
  return out;
}

std::vector<std::uint8_t> ref_stream_bits(const SeedKey& seed, std::uint32_t tag, std::size_t nbits) {
  std::array<std::uint8_t, 12> nonce{};
  for (int b = 0; b < 4; ++b) nonce[8 + b] = static_cast<std::uint8_t>(tag >> (8 * b));
  std::vector<std::uint8_t> bits;
  for (std::uint32_t blk = 0; bits.size() < nbits; ++blk) {
    const auto block = ref_block(seed.bytes, blk, nonce);
    for (std::uint8_t byte : block) {
      for (int i = 7; i >= 0 && bits.size() < nbits; --i) bits.push_back((byte >> i) & 1u);
    }
  }
  return bits;
}

std::vector<std::uint8_t> bytes_to_bits(const std::vector<std::uint8_t>& bytes) {
  std::vector<std::uint8_t> bits;
  for (std::uint8_t b : bytes) {
    for (int i = 7; i >= 0; --i) bits.push_back((b >> i) & 1u);
  }
  return bits;
}

std::vector<std::uint8_t> hex_bytes(const char* hex) {
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; hex[i] && hex[i + 1]; i += 2) {
    auto nib = [](char c) { return c <= '9' ? c - '0' : c - 'a' + 10; };
    out.push_back(static_cast<std::uint8_t>(nib(hex[i]) * 16 + nib(hex[i + 1])));
  }
  return out;
}

SeedKey counting_key() {
  SeedKey k;
  for (int i = 0; i < 32; ++i) k.bytes[i] = static_cast<std::uint8_t>(i);
  return k;
}

std::uint32_t bits_to_word(const std::vector<std::uint8_t>& bits, std::size_t at, int n) {
  std::uint32_t v = 0;
  for (int i = 0; i < n; ++i) v = (v << 1) | bits[at + i];
  return v;
}

}  // namespace

TEST_CASE("chacha20 block matches the RFC 8439 block-function vector") {
  // key 00..1f, nonce 00:00:00:09:00:00:00:4a:00:00:00:00, counter 1
  const auto block = chacha20_block(counting_key(), (std::uint64_t{0x09000000} << 32) | 1u, 0x4a000000u, 0u);
  const auto expect = hex_bytes(
      "10f1e7e4d13b5915500fdd1fa32071c4c7d1f4c733c068030422aa9ac3d46c4e"
      "d2826446079faa0914c2d705d98b02a2b5129cd1de164eb9cbd083e8a2503c4e");
  REQUIRE(expect.size() == 64);
  for (int i = 0; i < 64; ++i) CHECK(block[i] == expect[i]);
}

TEST_CASE("library block agrees with the reference implementation") {
  const SeedKey k = counting_key();
  for (std::uint32_t counter : {0u, 1u, 7u, 0xfffffffeu}) {
    std::array<std::uint8_t, 12> nonce{0, 0, 0, 0, 0x11, 0x22, 0x33, 0x44, 1, 0, 0, 0};
    const auto ref = ref_block(k.bytes, counter, nonce);
    const auto got = chacha20_block(k, counter, 0x44332211u, 1u);
    CHECK(ref == got);
  }
}

TEST_CASE("zero-key XorStream equals the frozen independent keystream") {
  SeedKey zero;
  const auto expect = bytes_to_bits(hex_bytes(
      "76b8e0ada0f13d90405d6ae55386bd28bdd219b8a08ded1aa836efcc8b770dc7"
      "da41597c5157488d7724e03fb8d84a376a43b8f41518a11cc387b669b2ee6586"));
  CHECK(keystream_bits(zero, StreamId::XorStream, 0, 512) == expect);
  CHECK(keystream_bits(zero, StreamId::XorStream, 0, 64) ==
        std::vector<std::uint8_t>(expect.begin(), expect.begin() + 64));
}

TEST_CASE("zero-key BasisStream equals the frozen independent keystream") {
  SeedKey zero;
  const auto expect = bytes_to_bits(hex_bytes("065d067df4ebbedc9c879663d45d3a31"));
  CHECK(keystream_bits(zero, StreamId::BasisStream, 0, 128) == expect);
}

TEST_CASE("keystream bits agree with the reference across block boundaries") {
  const SeedKey k = SeedKey::from_hex("9f3c1b2a4d5e6f708192a3b4c5d6e7f8091a2b3c4d5e6f708192a3b4c5d6e7f8");
  for (std::uint32_t tag : {0u, 1u}) {
    const auto ref = ref_stream_bits(k, tag, 4096);
    const auto stream = tag ? StreamId::BasisStream : StreamId::XorStream;
    CHECK(keystream_bits(k, stream, 0, 4096) == ref);
    for (std::uint64_t off : {1u, 7u, 500u, 511u, 512u, 513u, 3000u}) {
      const auto part = keystream_bits(k, stream, off, 64);
      CHECK(part == std::vector<std::uint8_t>(ref.begin() + off, ref.begin() + off + 64));
    }
  }
}

TEST_CASE("keystream is deterministic and streams differ") {
  const SeedKey k = SeedKey::from_hex("a1b2c3d4e5f60718293a4b5c6d7e8f90a1b2c3d4e5f60718293a4b5c6d7e8f90");
  CHECK(keystream_bits(k, StreamId::XorStream, 123, 300) == keystream_bits(k, StreamId::XorStream, 123, 300));
  CHECK(keystream_bits(k, StreamId::XorStream, 0, 64) != keystream_bits(k, StreamId::BasisStream, 0, 64));
  CHECK(keystream_bits(k, StreamId::XorStream, 10, 0).empty());
}

TEST_CASE("reader seeks and takes big-endian words") {
  const SeedKey k = counting_key();
  const auto bits = keystream_bits(k, StreamId::BasisStream, 0, 2048);
  KeystreamReader r(k, StreamId::BasisStream);
  std::size_t at = 0;
  for (int n : {1, 3, 14, 32, 0, 7, 32, 28, 2}) {
    CHECK(r.take(n) == bits_to_word(bits, at, n));
    at += n;
    CHECK(r.position() == at);
  }
  r.seek(1000);
  CHECK(r.take(20) == bits_to_word(bits, 1000, 20));
  CHECK_THROWS(r.take(33));
}

TEST_CASE("running keys consume 4 xor bits and 2(n-2) basis bits per record") {
  const SeedKey k = counting_key();
  const TemplateConfig t16(16);
  CHECK(xor_bits_per_symbol() == 4);
  CHECK(basis_bits_per_symbol(t16) == 28);
  CHECK(xor_bits_per_symbol() + basis_bits_per_symbol(t16) == 32);

  for (int n : {4, 9, 16}) {
    const TemplateConfig tpl(n);
    const int kb = n - 2;
    const auto keys = running_keys(k, tpl, 2, 50);
    const auto xb = keystream_bits(k, StreamId::XorStream, 0, 4 * 100);
    const auto bb = keystream_bits(k, StreamId::BasisStream, 0, 2 * kb * 100);
    REQUIRE(keys.size() == 2);
    for (int t = 0; t < 50; ++t) {
      for (int p = 0; p < 2; ++p) {
        const std::size_t rec = 2 * t + p;
        const RunningKey& rk = keys[p][t];
        CHECK(rk.r_i == bits_to_word(xb, 4 * rec, 2));
        CHECK(rk.r_q == bits_to_word(xb, 4 * rec + 2, 2));
        CHECK(rk.k_i == bits_to_word(bb, 2 * kb * rec, kb));
        CHECK(rk.k_q == bits_to_word(bb, 2 * kb * rec + kb, kb));
        CHECK(rk.k_i < tpl.bases());
        CHECK(rk.k_q < tpl.bases());
      }
    }
  }
}

TEST_CASE("running keys have the prefix property and support offsets") {
  const SeedKey k = counting_key();
  const TemplateConfig tpl(12);
  const auto a = running_keys(k, tpl, 2, 10);
  const auto b = running_keys(k, tpl, 2, 20);
  for (int p = 0; p < 2; ++p) {
    for (int t = 0; t < 10; ++t) CHECK(a[p][t] == b[p][t]);
  }
  const auto c = running_keys(k, tpl, 2, 5, 15);
  for (int p = 0; p < 2; ++p) {
    for (int t = 0; t < 5; ++t) CHECK(c[p][t] == b[p][15 + t]);
  }
  CHECK(running_keys(k, TemplateConfig(4), 1, 0)[0].empty());
  CHECK_THROWS(running_keys(k, tpl, 3, 5));
  CHECK_THROWS(running_keys(k, tpl, 0, 5));
  CHECK_THROWS(running_keys(k, tpl, 1, -1));
}

TEST_CASE("n = 4 basis indices are uniform 2-bit values") {
  const TemplateConfig tpl(4);
  const auto keys = running_keys(counting_key(), tpl, 1, 40000)[0];
  std::array<double, 4> k_count{}, r_count{};
  for (const auto& rk : keys) {
    REQUIRE(rk.k_i < 4);
    ++k_count[rk.k_i];
    ++k_count[rk.k_q];
    ++r_count[rk.r_i];
    ++r_count[rk.r_q];
  }
  // chi-squared, 3 dof; 16.27 is the 0.1% critical value
  auto chi2 = [](const std::array<double, 4>& c) {
    const double e = (c[0] + c[1] + c[2] + c[3]) / 4.0;
    double s = 0.0;
    for (double v : c) s += (v - e) * (v - e) / e;
    return s;
  };
  CHECK(chi2(k_count) < 16.27);
  CHECK(chi2(r_count) < 16.27);
}

TEST_CASE("keystream bytes are uniform") {
  const auto bits = keystream_bits(counting_key(), StreamId::XorStream, 0, 8 * 256 * 400);
  std::array<double, 256> counts{};
  for (std::size_t i = 0; i < bits.size(); i += 8) ++counts[bits_to_word(bits, i, 8)];
  double s = 0.0;
  for (double c : counts) s += (c - 400.0) * (c - 400.0) / 400.0;
  // 255 dof, 0.1% critical value 330.5
  CHECK(s < 330.5);
}

TEST_CASE("seed hex round trip and validation") {
  const std::string hex = "00112233445566778899aabbccddeeff00112233445566778899aabbccddeeff";
  CHECK(SeedKey::from_hex(hex).to_hex() == hex);
  CHECK(SeedKey::from_hex("00112233445566778899AABBCCDDEEFF00112233445566778899AABBCCDDEEFF").to_hex() == hex);
  CHECK_THROWS(SeedKey::from_hex("abcd"));
  CHECK_THROWS(SeedKey::from_hex(hex + "00"));
  CHECK_THROWS(SeedKey::from_hex("zz112233445566778899aabbccddeeff00112233445566778899aabbccddeeff"));
}

TEST_CASE("derived keys are position based and distinct") {
  const SeedKey m = counting_key();
  CHECK(derive_key(m, "a", 0) == derive_key(m, "a", 0));
  CHECK(derive_key(m, "a", 0) != derive_key(m, "a", 1));
  CHECK(derive_key(m, "a", 0) != derive_key(m, "b", 0));
  CHECK(derive_key(m, "a", 0) != m);
  SeedKey other = m;
  other.bytes[31] ^= 1;
  CHECK(derive_key(m, "a", 0) != derive_key(other, "a", 0));
}
