#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cryptosram/bytes.hpp"
#include "cryptosram/controller.hpp"
#include "cryptosram/oracle.hpp"
#include "cryptosram/program.hpp"

namespace csram {

// Row map of the GHASH subarray: two independent 128-column streams. Inside a
// stream, column c of an aligned row holds the coefficient of x^c.
namespace ghash_rows {
inline constexpr std::uint8_t kZ = 0;         // running hash, aligned
inline constexpr std::uint8_t kV = 1;         // H * x^i
inline constexpr std::uint8_t kHashKey = 2;   // H as loaded (byte order)
inline constexpr std::uint8_t kHashKeyAligned = 3;
inline constexpr std::uint8_t kMsb = 4;       // msb(H * x^i) at column 127 - i
inline constexpr std::uint8_t kScratch = 5;   // 6 rows
inline constexpr std::uint8_t kConstants = 16;  // 8 bit-lane masks, R, low half, high half, column 0
inline constexpr std::uint8_t kBlocks = 32;   // up to 8 input blocks (byte order)
inline constexpr std::uint8_t kExtension = 127;
}  // namespace ghash_rows

inline constexpr std::size_t kGhashStreams = 2;
inline constexpr std::size_t kGhashBlocksPerPass = 8;

BlockGeometry ghash_geometry();
LayoutMap ghash_layout();

std::vector<CommandWord> gen_byte_arrange();
std::vector<CommandWord> gen_msb_trace();
std::vector<CommandWord> gen_byte_aligning();
std::vector<CommandWord> gen_galois_mult();
std::vector<CommandWord> gen_ext_swap();
std::vector<std::pair<std::uint8_t, Row>> ghash_constant_rows();

/// Up to 8 blocks per stream. Loads `h` (H in byte order), `x.<j>`, `z` (the
/// aligned running hash) and, unless `trace_msb`, `m` (the reduction bits from
/// an earlier pass with the same H). Captures `z` and `m`.
KernelProgram build_ghash_program(std::size_t blocks, bool trace_msb);

// Byte order <-> aligned coefficient order for one 128-bit stream.
Row ghash_pack_bytes(std::span<const Block> per_stream);
Block ghash_unpack_aligned(const Row& row, std::size_t stream);

struct GhashResult {
  std::vector<Block> digests;
  std::uint64_t cycles = 0;
  std::uint64_t passes = 0;
};

/// GHASH_H over each input (whole 16-byte blocks), two inputs per subarray
/// pass. The shorter input is front-padded with zero blocks.
GhashResult ghash_fabric(const Block& h, std::span<const std::vector<Block>> inputs,
                         std::vector<ExecutionStats>* per_pass = nullptr);

}  // namespace csram
