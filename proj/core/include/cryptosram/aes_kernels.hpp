#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cryptosram/bytes.hpp"
#include "cryptosram/controller.hpp"
#include "cryptosram/oracle.hpp"
#include "cryptosram/program.hpp"

namespace csram {

enum class CipherDirection { kEncrypt, kDecrypt };

// Optional fabric XOR of eight staged data rows into the state, before the
// cipher (CBC encryption) or after it (CBC decryption, CTR keystream).
enum class DataXor { kNone, kBefore, kAfter };

// Row map of the AES subarray. One 16-column tile per block, 16 tiles.
namespace aes_rows {
inline constexpr std::uint8_t kState = 0;
inline constexpr std::uint8_t kKeys = 8;
inline constexpr std::uint8_t kKeySlots = 11;
inline constexpr std::uint8_t kConstants = 96;   // 9 ShiftRows masks, 4 MixColumns masks
inline constexpr std::uint8_t kScratch = 109;    // through 127
inline constexpr std::uint8_t kData = 113;       // staged XOR operand, 8 rows
inline constexpr std::uint8_t kSliceMasks = 122; // 6 rows, reloaded before the final slicing
}  // namespace aes_rows

inline constexpr std::size_t kAesTiles = 16;

using PlaneRows = std::array<Row, 8>;

BlockGeometry aes_geometry();
LayoutMap aes_layout();

// The transpose is an involution: both directions emit the same sequence.
std::vector<CommandWord> gen_bit_slicing(CipherDirection dir = CipherDirection::kEncrypt);
std::vector<CommandWord> gen_add_round_key();
std::vector<CommandWord> gen_sub_bytes(CipherDirection dir);
std::vector<CommandWord> gen_shift_rows(CipherDirection dir);
std::vector<CommandWord> gen_mix_columns(CipherDirection dir);
std::vector<CommandWord> gen_data_xor();

// Constant rows (row, value) the generated functions expect.
std::vector<std::pair<std::uint8_t, Row>> aes_constant_rows(CipherDirection dir);
std::vector<std::pair<std::uint8_t, Row>> aes_slice_mask_rows();

/// One pass over 16 blocks. Host loads: `state.<r>`, `rk.<i>.<r>` and, with a
/// data XOR, `data.<r>`. Captures the result as `out.<r>`.
KernelProgram build_aes_program(AesVariant variant, CipherDirection dir, DataXor data_xor = DataXor::kNone);

// Host layout before slicing: row i of tile t holds byte i of block t in columns
// 0..7 and byte i+8 in columns 8..15, bit b in column b.
PlaneRows aes_pack_blocks(std::span<const Block> blocks);
std::vector<Block> aes_unpack_blocks(const PlaneRows& rows, std::size_t count);

// Key schedule in the sliced layout: per round key, plane r has bit r of byte j
// in column j of every tile.
std::vector<PlaneRows> host_key_expand(ByteView key, AesVariant variant);

// S-box table derived from the forward circuit.
const std::array<std::uint8_t, 256>& circuit_sbox();

/// Runs AES passes on a simulated subarray. Safe to share across threads.
class AesEngine {
 public:
  AesEngine(ByteView key, AesVariant variant);

  // Processes up to 16 blocks in one pass; `data` (same count) feeds the XOR step.
  std::vector<Block> run(CipherDirection dir, DataXor data_xor, std::span<const Block> blocks,
                         std::span<const Block> data = {}, ExecutionStats* stats = nullptr) const;

  AesVariant variant() const { return variant_; }
  const KernelProgram& program(CipherDirection dir, DataXor data_xor) const;

 private:
  AesVariant variant_;
  std::vector<PlaneRows> round_keys_;
  std::vector<Controller> controllers_;  // [dir * 3 + data_xor]
};

}  // namespace csram
