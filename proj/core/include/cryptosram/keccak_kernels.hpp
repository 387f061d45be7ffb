#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cryptosram/bytes.hpp"
#include "cryptosram/controller.hpp"
#include "cryptosram/oracle.hpp"
#include "cryptosram/program.hpp"

namespace csram {

// Row map of the Keccak subarray: lane (x, y) of each 64-column tile in row 5y + x.
namespace keccak_rows {
inline constexpr std::uint8_t kState = 0;
inline constexpr std::uint8_t kScratch = 25;          // 6 rows
inline constexpr std::uint8_t kRoundConstants = 32;   // 24 rows
inline constexpr std::uint8_t kMessage = 56;          // up to 18 rate lanes
inline constexpr std::uint8_t kKey = 74;              // HMAC key lanes
inline constexpr std::uint8_t kHmacConstants = 92;    // ipad, opad, digest mask, pad lane
inline constexpr std::uint8_t kExtension = 127;       // used as scratch
}  // namespace keccak_rows

inline constexpr std::size_t kKeccakTiles = 4;

BlockGeometry sha3_geometry();
LayoutMap keccak_layout();

// Keccak round constants and rotation offsets computed for the kernel tables.
std::uint64_t keccak_rc(std::size_t round);
unsigned keccak_rho_offset(std::size_t x, std::size_t y);

std::vector<CommandWord> gen_theta();
// In-place lane rotations, for checking rho on its own.
std::vector<CommandWord> gen_rho();
// rho with pi folded in: each rotated lane is written straight to its pi
// destination row, so pi itself costs no shifts.
std::vector<CommandWord> gen_rho_pi();
std::vector<CommandWord> gen_chi();
std::vector<CommandWord> gen_iota();
// One Keccak round; iota's constant operand is strided by the controller.
std::vector<CommandWord> gen_state_permute();
std::vector<CommandWord> gen_add_state(std::size_t rate_lanes);

// Multi-rate padding into rate-sized blocks of little-endian lanes.
std::vector<std::vector<std::uint64_t>> sha3_host_blocks(Sha3Variant v, ByteView message);

/// Absorbs `blocks` rate blocks per tile. Loads `m.<b>.<lane>`; after block b
/// captures the digest lanes as `d.<b>.<lane>`.
KernelProgram build_sha3_program(Sha3Variant v, std::size_t blocks);

/// Complete HMAC over `blocks` padded inner message blocks, inner and outer
/// hash in one schedule: loads `k.<lane>` (key padded to the rate) and
/// `m.<b>.<lane>`, captures the tag lanes as `d.<lane>`.
KernelProgram build_hmac_program(Sha3Variant v, std::size_t blocks);

struct Sha3Digests {
  std::vector<Bytes> digests;
  std::uint64_t cycles = 0;
  std::uint64_t permutations = 0;
};

// Hashes up to four messages per pass (one per tile); lengths may differ.
Sha3Digests sha3_pass(Sha3Variant v, std::span<const Bytes> messages, ExecutionStats* stats = nullptr);
// HMAC of up to four (key, message) pairs whose padded messages have equal block counts.
Sha3Digests hmac_pass(Sha3Variant v, std::span<const Bytes> keys, std::span<const Bytes> messages,
                      ExecutionStats* stats = nullptr);

}  // namespace csram
