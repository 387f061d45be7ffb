#include "cryptosram/ghash_kernels.hpp"

#include <algorithm>

#include "cryptosram/emit.hpp"
#include "cryptosram/error.hpp"

namespace csram {

namespace {

using namespace ghash_rows;
constexpr std::size_t kWidth = 128;

constexpr std::uint8_t kAligned = kScratch;       // S = Z ^ align(X)
constexpr std::uint8_t kStaged = kScratch + 1;    // second half of the ext row
constexpr std::uint8_t kMaskY = kScratch + 2;
constexpr std::uint8_t kMaskM = kScratch + 3;
constexpr std::uint8_t kT = kScratch + 4;
constexpr std::uint8_t kT2 = kScratch + 5;

constexpr std::uint8_t kLaneMask = kConstants;  // + b: columns with c % 8 == b
constexpr std::uint8_t kPoly = kConstants + 8;   // x^7 + x^2 + x + 1
constexpr std::uint8_t kLowHalf = kConstants + 9;
constexpr std::uint8_t kHighHalf = kConstants + 10;
constexpr std::uint8_t kColumn0 = kConstants + 11;

Row segment_pattern(auto pred) {
  Row r;
  for (std::size_t c = 0; c < kColumns; ++c)
    if (pred(c % kWidth)) r.set(c, true);
  return r;
}

// dst = src with every byte's bits reversed: byte-order bit b of byte k lands
// on coefficient column 8k + 7 - b. Eight masked shifts; the `act src` commands
// are returned so callers can stride them.
std::vector<std::uint32_t> emit_align(CommandBuilder& b, std::uint8_t dst, std::uint8_t src) {
  std::vector<std::uint32_t> acts;
  for (int bit = 0; bit < 8; ++bit) {
    acts.push_back(static_cast<std::uint32_t>(b.size()));
    b.masked_shift(bit == 0 ? dst : kT, src, static_cast<std::uint8_t>(kLaneMask + bit), 7 - 2 * bit);
    if (bit > 0) b.or_(dst, dst, kT);
  }
  return acts;
}

}  // namespace

BlockGeometry ghash_geometry() { return BlockGeometry::make(2, kWidth, 125); }

LayoutMap ghash_layout() {
  LayoutMap m;
  m.add("state", RegionKind::kState, kZ, 2);
  m.add("hash_key", RegionKind::kKey, kHashKey, 3);
  m.add("scratch", RegionKind::kTemp, kScratch, 6);
  m.add("constants", RegionKind::kConstant, kConstants, 12);
  m.add("blocks", RegionKind::kData, kBlocks, kGhashBlocksPerPass);
  m.add("extension", RegionKind::kExtension, kExtension, 1);
  return m;
}

std::vector<std::pair<std::uint8_t, Row>> ghash_constant_rows() {
  std::vector<std::pair<std::uint8_t, Row>> out;
  for (std::size_t bit = 0; bit < 8; ++bit)
    out.emplace_back(kLaneMask + bit, segment_pattern([&](std::size_t c) { return c % 8 == bit; }));
  out.emplace_back(kPoly, segment_pattern([](std::size_t c) { return c == 0 || c == 1 || c == 2 || c == 7; }));
  out.emplace_back(kLowHalf, segment_pattern([](std::size_t c) { return c < 64; }));
  out.emplace_back(kHighHalf, segment_pattern([](std::size_t c) { return c >= 64; }));
  out.emplace_back(kColumn0, segment_pattern([](std::size_t c) { return c == 0; }));
  return out;
}

// Aligns H and primes the reduction-bit trace.
std::vector<CommandWord> gen_byte_arrange() {
  CommandBuilder b;
  emit_align(b, kHashKeyAligned, kHashKey);
  b.copy(kV, kHashKeyAligned);
  b.clear(kMsb);
  return b.take();
}

// One step of V <- V * x mod P, recording msb(V) into the low end of M. The
// ext row carries V so its top column can be broadcast.
std::vector<CommandWord> gen_msb_trace() {
  CommandBuilder b;
  b.copy(kExtension, kV);
  b.ext(kWidth - 1, BlockWidthCode::k128);
  b.wr(kMaskM);
  b.and_(kT2, kMaskM, kPoly);
  b.rd(kV);
  b.shl(1);
  b.wr(kV);
  b.xor_(kV, kV, kT2);
  b.rd(kMsb);
  b.shl(1);
  b.wr(kMsb);
  b.and_(kT, kMaskM, kColumn0);
  b.or_(kMsb, kMsb, kT);
  return b.take();
}

// Per block: S = Z ^ align(X_j); the ext row gets [y_0..y_63 | msb bits 0..63],
// the staged row [y_64..y_127 | msb bits 64..127]; V = H, Z = 0.
namespace {

std::vector<CommandWord> byte_aligning(std::vector<std::uint32_t>* block_reads) {
  CommandBuilder b;
  const auto acts = emit_align(b, kAligned, kBlocks);
  if (block_reads) *block_reads = acts;
  b.xor_(kAligned, kAligned, kZ);
  b.and_(kT, kAligned, kLowHalf);
  b.and_(kT2, kMsb, kHighHalf);
  b.or_(kExtension, kT, kT2);
  b.rd(kAligned);
  b.shr(64);
  b.wr(kStaged);
  b.rd(kMsb);
  b.shl(64);
  b.wr(kT2);
  b.or_(kStaged, kStaged, kT2);
  b.copy(kV, kHashKeyAligned);
  b.clear(kZ);
  return b.take();
}

}  // namespace

std::vector<CommandWord> gen_byte_aligning() { return byte_aligning(nullptr); }

// Iteration i: Z ^= y_i ? V : 0; V = V * x ^ (msb_i ? R : 0).
std::vector<CommandWord> gen_galois_mult() {
  CommandBuilder b;
  b.ext(0, BlockWidthCode::k128);
  b.wr(kMaskY);
  b.and_(kT, kMaskY, kV);
  b.xor_(kZ, kZ, kT);
  b.ext(kWidth - 1, BlockWidthCode::k128);
  b.wr(kMaskM);
  b.and_(kT2, kMaskM, kPoly);
  b.rd(kV);
  b.shl(1);
  b.wr(kV);
  b.xor_(kV, kV, kT2);
  return b.take();
}

std::vector<CommandWord> gen_ext_swap() {
  CommandBuilder b;
  b.copy(kExtension, kStaged);
  return b.take();
}

KernelProgram build_ghash_program(std::size_t blocks, bool trace_msb) {
  if (blocks == 0 || blocks > kGhashBlocksPerPass)
    throw Error(ErrorCode::kInvalidArgument, "1 to 8 blocks per GHASH pass");
  KernelProgram p;
  p.name = "GHASH";
  p.geometry = ghash_geometry();
  p.layout = ghash_layout();

  p.add_function("ByteArrange", gen_byte_arrange());
  {
    // Each block read steps to the next block row.
    std::vector<std::uint32_t> acts;
    auto cmds = byte_aligning(&acts);
    std::vector<StrideRule> strides;
    for (auto a : acts) strides.push_back({a, 1, static_cast<std::uint32_t>(kGhashBlocksPerPass)});
    p.add_function("ByteAligning", cmds, strides);
  }
  {
    // Column strides walk y_i upward from 0 and the msb bits downward from 127.
    const auto cmds = gen_galois_mult();
    const auto second_ext = std::find_if(cmds.begin() + 1, cmds.end(),
                                         [](const CommandWord& c) { return c.opcode == Opcode::kExtBit; });
    p.add_function("GaloisMult", cmds,
                   {{0, 1, 64}, {static_cast<std::uint32_t>(second_ext - cmds.begin()), -1, 64}});
  }
  p.add_function("ExtSwap", gen_ext_swap());
  if (trace_msb) p.add_function("MsbTrace", gen_msb_trace());

  for (const auto& [row, value] : ghash_constant_rows()) p.host_write(row, value);
  p.host_load(kHashKey, "h");
  p.host_load(kZ, "z");
  for (std::size_t j = 0; j < blocks; ++j) p.host_load(kBlocks + j, "x." + std::to_string(j));

  p.invoke("ByteArrange");
  if (trace_msb) p.invoke("MsbTrace", kWidth);
  else p.host_load(kMsb, "m");
  for (std::size_t j = 0; j < blocks; ++j) {
    p.invoke("ByteAligning");
    p.invoke("GaloisMult", 64);
    p.invoke("ExtSwap");
    p.invoke("GaloisMult", 64);
  }
  p.host_capture(kZ, "z");
  p.host_capture(kMsb, "m");
  return p;
}

Row ghash_pack_bytes(std::span<const Block> per_stream) {
  if (per_stream.size() > kGhashStreams) throw Error(ErrorCode::kInvalidArgument, "two streams per row");
  Row r;
  for (std::size_t s = 0; s < per_stream.size(); ++s)
    for (std::size_t k = 0; k < 16; ++k) r.set_field(s * kWidth + 8 * k, 8, per_stream[s][k]);
  return r;
}

Block ghash_unpack_aligned(const Row& row, std::size_t stream) {
  Block out{};
  for (std::size_t c = 0; c < kWidth; ++c)
    if (row.get(stream * kWidth + c)) out[c / 8] |= static_cast<std::uint8_t>(0x80 >> (c % 8));
  return out;
}

GhashResult ghash_fabric(const Block& h, std::span<const std::vector<Block>> inputs,
                         std::vector<ExecutionStats>* per_pass) {
  GhashResult res;
  for (std::size_t first = 0; first < inputs.size(); first += kGhashStreams) {
    const std::size_t n = std::min(kGhashStreams, inputs.size() - first);
    std::size_t len = 0;
    for (std::size_t s = 0; s < n; ++s) len = std::max(len, inputs[first + s].size());

    std::vector<std::vector<Block>> padded(n);
    for (std::size_t s = 0; s < n; ++s) {
      padded[s].assign(len - inputs[first + s].size(), Block{});  // zeros keep Z at 0
      padded[s].insert(padded[s].end(), inputs[first + s].begin(), inputs[first + s].end());
    }

    Subarray sub(kWidth);
    Row z, m;
    bool have_m = false;
    const Block hs[] = {h, h};
    const Row h_row = ghash_pack_bytes(std::span<const Block>(hs, n));
    for (std::size_t at = 0; at < len; at += kGhashBlocksPerPass) {
      const std::size_t blocks = std::min(kGhashBlocksPerPass, len - at);
      Bindings bind{{"h", h_row}, {"z", z}};
      if (have_m) bind["m"] = m;
      for (std::size_t j = 0; j < blocks; ++j) {
        std::vector<Block> col;
        for (std::size_t s = 0; s < n; ++s) col.push_back(padded[s][at + j]);
        bind["x." + std::to_string(j)] = ghash_pack_bytes(col);
      }
      const Controller ctrl(build_ghash_program(blocks, !have_m));
      auto st = ctrl.run(sub, bind);
      z = st.captures.at("z");
      m = st.captures.at("m");
      have_m = true;
      res.cycles += st.total_cycles;
      ++res.passes;
      if (per_pass) per_pass->push_back(std::move(st));
    }
    for (std::size_t s = 0; s < n; ++s) res.digests.push_back(ghash_unpack_aligned(z, s));
  }
  return res;
}

}  // namespace csram
