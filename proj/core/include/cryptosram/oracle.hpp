#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cryptosram/bytes.hpp"

namespace csram {

enum class AesVariant { k128, k256 };
enum class Sha3Variant { k224, k256, k384, k512 };

std::size_t aes_key_bytes(AesVariant v);
std::size_t aes_rounds(AesVariant v);
std::size_t sha3_rate_bytes(Sha3Variant v);
std::size_t sha3_digest_bytes(Sha3Variant v);
std::string_view to_string(AesVariant v);
std::string_view to_string(Sha3Variant v);

using Block = std::array<std::uint8_t, 16>;
using KeccakState = std::array<std::uint64_t, 25>;  // lane (x, y) at index x + 5y

// Reference implementations. Byte-oriented and table-driven; nothing here
// shares code with the fabric kernels.
namespace oracle {

// FIPS-197 key expansion: rounds + 1 round keys.
std::vector<Block> aes_expand_key(ByteView key);
Block aes_encrypt_block(ByteView key, const Block& in);
Block aes_decrypt_block(ByteView key, const Block& in);
std::uint8_t aes_sbox(std::uint8_t x);
std::uint8_t aes_inv_sbox(std::uint8_t x);

// Keccak-f[1600] and its step mappings (for per-stage checks).
inline constexpr std::size_t kKeccakRounds = 24;
std::uint64_t keccak_round_constant(std::size_t round);
unsigned keccak_rotation(std::size_t x, std::size_t y);
void keccak_theta(KeccakState& a);
void keccak_rho(KeccakState& a);
void keccak_pi(KeccakState& a);
void keccak_chi(KeccakState& a);
void keccak_iota(KeccakState& a, std::size_t round);
void keccak_round(KeccakState& a, std::size_t round);
void keccak_f1600(KeccakState& a);

Bytes sha3(Sha3Variant v, ByteView msg);
// SHA3 padding (0x06 ... 0x80) applied to msg, result a multiple of the rate.
Bytes sha3_pad(Sha3Variant v, ByteView msg);
Bytes hmac_sha3(Sha3Variant v, ByteView key, ByteView msg);

// GF(2^128) with the GCM bit order. Two independent formulations.
Block gf128_mul(const Block& x, const Block& y);        // bit-serial, right-shift form
Block gf128_mul_clmul(const Block& x, const Block& y);  // 64x64 carry-less products, then reduction
// GHASH over data zero-padded to whole blocks.
Block ghash(const Block& h, ByteView data);

// Modes. CBC works on whole blocks (no padding); CTR increments the low 32 bits.
Bytes cbc_encrypt(ByteView key, ByteView iv, ByteView pt);
Bytes cbc_decrypt(ByteView key, ByteView iv, ByteView ct);
Bytes ctr_crypt(ByteView key, const Block& counter0, ByteView data);
Block ctr_increment(const Block& counter, std::uint32_t by = 1);

struct AeadResult {
  Bytes ciphertext;
  Bytes tag;
};
// CCM: nonce 7..13 bytes, tag_len in {4,6,...,16}.
AeadResult ccm_encrypt(ByteView key, ByteView nonce, ByteView aad, ByteView pt, std::size_t tag_len = 16);
Bytes ccm_decrypt(ByteView key, ByteView nonce, ByteView aad, ByteView ct, ByteView tag);
// GCM: any non-empty IV (96-bit fast path, GHASH-derived J0 otherwise).
AeadResult gcm_encrypt(ByteView key, ByteView iv, ByteView aad, ByteView pt);
Bytes gcm_decrypt(ByteView key, ByteView iv, ByteView aad, ByteView ct, ByteView tag);

}  // namespace oracle

// Known-answer tests: `Alg=`, `Key=`, `Nonce=`, `AAD=`, `Msg=`, `Out=` lines,
// blocks separated by blank lines, `#` comments.
//
// Algorithm ids: AES-128 / AES-256 (ECB over whole blocks), AES-128-CBC,
// AES-128-CTR, AES-128-CCM, AES-128-GCM (and the -256 forms; Out = ct || tag for
// the AEAD modes), SHA3-224/256/384/512, HMAC-SHA3-224/256/384/512, GHASH (Key = H).
struct KnownAnswerTest {
  std::string alg;
  Bytes key;
  Bytes nonce;
  Bytes aad;
  Bytes msg;
  Bytes out;
  std::size_t line = 0;

  bool operator==(const KnownAnswerTest&) const = default;
};

struct KatAlgorithm {
  enum class Kind { kEcb, kCbc, kCtr, kCcm, kGcm, kSha3, kHmac, kGhash } kind = Kind::kEcb;
  AesVariant aes = AesVariant::k128;
  Sha3Variant sha = Sha3Variant::k256;
};
std::optional<KatAlgorithm> parse_kat_algorithm(std::string_view alg);
bool is_supported_kat_algorithm(std::string_view alg);
std::vector<KnownAnswerTest> parse_kat(std::string_view text);
std::vector<KnownAnswerTest> load_kat(const std::filesystem::path& path);
std::string format_kat(const std::vector<KnownAnswerTest>& kats);
// Computes the oracle output for a test's inputs.
Bytes oracle_output(const KnownAnswerTest& kat);

}  // namespace csram
