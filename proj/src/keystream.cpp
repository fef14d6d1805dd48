// SPDX-License-Identifier: Apache-2.0
#include "y00/keystream.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "y00/cipher.hpp"

namespace y00 {
namespace {

constexpr std::uint32_t load_le32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
         (std::uint32_t{p[3]} << 24);
}

inline void quarter_round(std::uint32_t& a, std::uint32_t& b, std::uint32_t& c, std::uint32_t& d) {
  a += b; d ^= a; d = std::rotl(d, 16);
  c += d; b ^= c; b = std::rotl(b, 12);
  a += b; d ^= a; d = std::rotl(d, 8);
  c += d; b ^= c; b = std::rotl(b, 7);
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

SeedKey SeedKey::from_hex(std::string_view hex) {
  if (hex.size() != 64) {
    throw std::invalid_argument("seed key must be 64 hex characters, got " +
                                std::to_string(hex.size()));
  }
  SeedKey key;
  for (std::size_t i = 0; i < 32; ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("seed key contains a non-hex character");
    key.bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return key;
}

std::string SeedKey::to_hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (auto b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

std::array<std::uint8_t, 64> chacha20_block(const SeedKey& key, std::uint64_t block_index,
                                            std::uint32_t nonce1, std::uint32_t nonce2) {
  std::array<std::uint32_t, 16> state{0x61707865, 0x3320646e, 0x79622d32, 0x6b206574};
  for (int i = 0; i < 8; ++i) state[4 + i] = load_le32(&key.bytes[4 * i]);
  state[12] = static_cast<std::uint32_t>(block_index);
  state[13] = static_cast<std::uint32_t>(block_index >> 32);
  state[14] = nonce1;
  state[15] = nonce2;

  auto x = state;
  for (int round = 0; round < 10; ++round) {
    quarter_round(x[0], x[4], x[8], x[12]);
    quarter_round(x[1], x[5], x[9], x[13]);
    quarter_round(x[2], x[6], x[10], x[14]);
    quarter_round(x[3], x[7], x[11], x[15]);
    quarter_round(x[0], x[5], x[10], x[15]);
    quarter_round(x[1], x[6], x[11], x[12]);
    quarter_round(x[2], x[7], x[8], x[13]);
    quarter_round(x[3], x[4], x[9], x[14]);
  }

  std::array<std::uint8_t, 64> out{};
  for (int i = 0; i < 16; ++i) {
    const std::uint32_t w = x[i] + state[i];
    out[4 * i + 0] = static_cast<std::uint8_t>(w);
    out[4 * i + 1] = static_cast<std::uint8_t>(w >> 8);
    out[4 * i + 2] = static_cast<std::uint8_t>(w >> 16);
    out[4 * i + 3] = static_cast<std::uint8_t>(w >> 24);
  }
  return out;
}

KeystreamReader::KeystreamReader(const SeedKey& seed, StreamId stream, std::uint64_t offset_bits)
    : seed_(seed), tag_(static_cast<std::uint32_t>(stream)), position_(offset_bits) {}

void KeystreamReader::seek(std::uint64_t offset_bits) { position_ = offset_bits; }

void KeystreamReader::refill() {
  const std::uint64_t block = position_ / 512;
  if (block != cached_block_) {
    // nonce = (0, 0, tag); the high counter word lands in the first nonce word
    block_ = chacha20_block(seed_, block, 0, tag_);
    cached_block_ = block;
  }
}

std::uint32_t KeystreamReader::take(int nbits) {
  if (nbits < 0 || nbits > 32) throw std::invalid_argument("KeystreamReader::take: nbits in [0,32]");
  std::uint32_t value = 0;
  while (nbits > 0) {
    refill();
    const std::uint64_t in_block = position_ % 512;
    const std::size_t byte = in_block / 8;
    const int bit_in_byte = static_cast<int>(in_block % 8);
    const int available = 8 - bit_in_byte;
    const int n = nbits < available ? nbits : available;
    const std::uint32_t chunk =
        (static_cast<std::uint32_t>(block_[byte]) >> (available - n)) & ((1u << n) - 1u);
    value = (value << n) | chunk;
    position_ += static_cast<std::uint64_t>(n);
    nbits -= n;
  }
  return value;
}

std::vector<std::uint8_t> keystream_bits(const SeedKey& seed, StreamId stream,
                                         std::uint64_t offset_bits, std::uint64_t count) {
  std::vector<std::uint8_t> out(count);
  KeystreamReader reader(seed, stream, offset_bits);
  for (auto& bit : out) bit = static_cast<std::uint8_t>(reader.take(1));
  return out;
}

std::uint64_t xor_bits_per_symbol() { return 4; }

std::uint64_t basis_bits_per_symbol(const TemplateConfig& tpl) {
  return 2 * static_cast<std::uint64_t>(tpl.bits() - 2);
}

RunningKeys running_keys(const SeedKey& seed, const TemplateConfig& tpl, int pol_count,
                         std::int64_t n_symbols, std::int64_t first_symbol) {
  if (pol_count != 1 && pol_count != 2) throw std::invalid_argument("pol_count must be 1 or 2");
  if (n_symbols < 0) throw std::invalid_argument("n_symbols must be non-negative");
  if (first_symbol < 0) throw std::invalid_argument("first_symbol must be non-negative");

  const int kbits = tpl.bits() - 2;
  const auto records_before = static_cast<std::uint64_t>(first_symbol) * pol_count;
  KeystreamReader xor_reader(seed, StreamId::XorStream, records_before * xor_bits_per_symbol());
  KeystreamReader basis_reader(seed, StreamId::BasisStream,
                               records_before * basis_bits_per_symbol(tpl));

  RunningKeys keys(pol_count, std::vector<RunningKey>(static_cast<std::size_t>(n_symbols)));
  for (std::int64_t t = 0; t < n_symbols; ++t) {
    for (int p = 0; p < pol_count; ++p) {
      RunningKey& rk = keys[p][t];
      rk.r_i = static_cast<std::uint8_t>(xor_reader.take(2));
      rk.r_q = static_cast<std::uint8_t>(xor_reader.take(2));
      rk.k_i = basis_reader.take(kbits);
      rk.k_q = basis_reader.take(kbits);
    }
  }
  return keys;
}

SeedKey derive_key(const SeedKey& master, std::string_view label, std::uint64_t index) {
  const std::uint64_t h = fnv1a64(label);
  // top bit set keeps derivation nonces disjoint from the stream nonces (0, tag)
  const auto out = chacha20_block(master, index, static_cast<std::uint32_t>(h) | 0x80000000u,
                                  static_cast<std::uint32_t>(h >> 32));
  SeedKey derived;
  std::copy(out.begin(), out.begin() + 32, derived.bytes.begin());
  return derived;
}

}  // namespace y00
