// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace y00 {

class TemplateConfig;

/// 256-bit seed key shared by transmitter and receiver.
struct SeedKey {
  std::array<std::uint8_t, 32> bytes{};

  /// Parses exactly 64 hex characters (case-insensitive).
  static SeedKey from_hex(std::string_view hex);
  std::string to_hex() const;

  friend bool operator==(const SeedKey&, const SeedKey&) = default;
};

enum class StreamId : std::uint32_t { XorStream = 0, BasisStream = 1 };

/// Raw ChaCha20 block function (RFC 8439 state layout). The 64-bit block
/// index occupies the counter word and carries into the first nonce word,
/// so for indices below 2^32 the output is exactly the RFC keystream.
std::array<std::uint8_t, 64> chacha20_block(const SeedKey& key, std::uint64_t block_index,
                                            std::uint32_t nonce1, std::uint32_t nonce2);

/// Keystream bits for `stream`, MSB-first from successive keystream bytes.
/// Returns one bit per element (0 or 1).
std::vector<std::uint8_t> keystream_bits(const SeedKey& seed, StreamId stream,
                                         std::uint64_t offset_bits, std::uint64_t count);

/// Sequential reader over one keystream. Single-owner; seekable.
class KeystreamReader {
 public:
  KeystreamReader(const SeedKey& seed, StreamId stream, std::uint64_t offset_bits = 0);

  /// Next `nbits` (0..32) bits as a big-endian integer.
  std::uint32_t take(int nbits);
  void seek(std::uint64_t offset_bits);
  std::uint64_t position() const { return position_; }

 private:
  void refill();

  SeedKey seed_;
  std::uint32_t tag_;
  std::uint64_t position_ = 0;
  std::uint64_t cached_block_ = ~std::uint64_t{0};
  std::array<std::uint8_t, 64> block_{};
};

/// Key material for one symbol on one polarization.
struct RunningKey {
  std::uint8_t r_i = 0;  // XOR dibit, in-phase
  std::uint8_t r_q = 0;  // XOR dibit, quadrature
  std::uint32_t k_i = 0; // basis index in [0, M)
  std::uint32_t k_q = 0;

  friend bool operator==(const RunningKey&, const RunningKey&) = default;
};

/// Running keys indexed [polarization][symbol].
using RunningKeys = std::vector<std::vector<RunningKey>>;

/// Keystream bits consumed per symbol per polarization: 4 XOR + 2(n-2) basis.
std::uint64_t xor_bits_per_symbol();
std::uint64_t basis_bits_per_symbol(const TemplateConfig& tpl);

/// Running keys for symbols [first_symbol, first_symbol + n_symbols).
/// Layout is pol-major within a symbol: x-pol record then y-pol record, so
/// symbol t, pol p reads XorStream from bit 4(tP+p) and BasisStream from
/// bit 2(n-2)(tP+p).
RunningKeys running_keys(const SeedKey& seed, const TemplateConfig& tpl, int pol_count,
                         std::int64_t n_symbols, std::int64_t first_symbol = 0);

/// Position-based derivation of an independent key from a master key.
/// Used for per-experiment and per-trial-block seeding.
SeedKey derive_key(const SeedKey& master, std::string_view label, std::uint64_t index);

}  // namespace y00
