#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "cryptosram/aes_kernels.hpp"
#include "cryptosram/bytes.hpp"
#include "cryptosram/controller.hpp"
#include "cryptosram/oracle.hpp"

namespace csram {

enum class CipherMode { kNone, kEcb, kCbc, kCtr, kCcm, kGcm };

std::string_view to_string(CipherMode mode);
CipherMode cipher_mode_from_string(std::string_view s);  // kUnsupportedAlgorithm

struct ModeSpec {
  AesVariant variant = AesVariant::k128;
  CipherMode mode = CipherMode::kEcb;
  CipherDirection direction = CipherDirection::kEncrypt;
  Bytes iv;                   // CBC IV, CTR initial counter, CCM nonce, GCM IV
  std::size_t tag_length = 16;  // CCM only; GCM tags are 16 bytes

  // Throws kBadIvLength when the IV does not fit the mode.
  void validate() const;
};

// Fabric work behind one mode operation, summed over passes.
struct FabricCost {
  std::uint64_t aes_passes = 0;
  std::uint64_t aes_cycles = 0;
  std::uint64_t ghash_passes = 0;
  std::uint64_t ghash_cycles = 0;
  std::uint64_t keccak_passes = 0;
  std::uint64_t keccak_cycles = 0;

  std::uint64_t total_cycles() const { return aes_cycles + ghash_cycles + keccak_cycles; }
  FabricCost& operator+=(const FabricCost& o);
};

struct ModeResult {
  Bytes output;  // AEAD encrypt: ciphertext || tag
  ExecutionStats stats;  // per-function totals over every pass
  FabricCost cost;
};

/// Runs a cipher mode end to end on simulated subarrays. AEAD decryption takes
/// ciphertext || tag and throws kTagMismatch without releasing plaintext.
/// kNone/kEcb need whole blocks, as does CBC.
ModeResult run_mode(const ModeSpec& spec, ByteView key, ByteView data, ByteView aad = {});

/// CBC encryption of independent messages, one chain per tile (16 per pass).
/// Messages must be whole blocks; chains shorter than the longest idle early.
std::vector<Bytes> cbc_encrypt_chains(ByteView key, std::span<const Bytes> ivs, std::span<const Bytes> messages,
                                      FabricCost* cost = nullptr);

// Adds every function's counters from `from` into `into`, matching by name.
void accumulate(ExecutionStats& into, const ExecutionStats& from);

// Fabric counterpart of oracle_output for a known-answer test.
Bytes fabric_output(const KnownAnswerTest& kat, FabricCost* cost = nullptr);

}  // namespace csram
