#include "cryptosram/keccak_kernels.hpp"

#include <algorithm>

#include "cryptosram/emit.hpp"
#include "cryptosram/error.hpp"

namespace csram {

namespace {

using namespace keccak_rows;
constexpr std::size_t kLane = 64;

constexpr std::uint8_t lane_row(std::size_t x, std::size_t y) {
  return static_cast<std::uint8_t>(kState + 5 * (y % 5) + x % 5);
}

// Scratch use: theta C[x] in 25..29, D in 30; rho-pi parks one lane in 25; chi
// saves two lanes in 25, 26 and works in 27. Row 127 is the second rotate temp.
constexpr std::uint8_t kT = kScratch + 5;
constexpr std::uint8_t kPark = kScratch;
constexpr std::uint8_t kU = kExtension;

constexpr std::uint8_t kIpad = kHmacConstants;
constexpr std::uint8_t kDigestMask = kHmacConstants + 2;
constexpr std::uint8_t kPadLane = kHmacConstants + 3;

// dst = src rotated toward higher bit positions by n within each lane.
void emit_rotate(CommandBuilder& b, std::uint8_t dst, std::uint8_t src, unsigned n) {
  n %= kLane;
  if (n == 0) {
    if (dst != src) b.copy(dst, src);
    return;
  }
  b.rd(src);
  b.shl(static_cast<std::uint8_t>(n));
  b.wr(kT);
  b.rd(src);
  b.shr(static_cast<std::uint8_t>(kLane - n));
  b.wr(kU);
  b.or_(dst, kT, kU);
}

Row lane_row_value(std::uint64_t lane) {
  Row r;
  for (std::size_t t = 0; t < kKeccakTiles; ++t) r.set_word(t, lane);
  return r;
}

std::size_t rate_lanes(Sha3Variant v) { return sha3_rate_bytes(v) / 8; }
std::size_t digest_lanes(Sha3Variant v) { return (sha3_digest_bytes(v) + 7) / 8; }

Bytes lanes_to_bytes(const std::vector<std::uint64_t>& lanes, std::size_t n) {
  Bytes out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(lanes[i / 8] >> (8 * (i % 8)));
  return out;
}

}  // namespace

BlockGeometry sha3_geometry() { return BlockGeometry::make(25, kLane, 6); }

LayoutMap keccak_layout() {
  LayoutMap m;
  m.add("state", RegionKind::kState, kState, 25);
  m.add("scratch", RegionKind::kTemp, kScratch, 6);
  m.add("round_constants", RegionKind::kConstant, kRoundConstants, 24);
  m.add("message", RegionKind::kMessage, kMessage, 18);
  m.add("hmac_key", RegionKind::kKey, kKey, 18);
  m.add("hmac_constants", RegionKind::kConstant, kHmacConstants, 4);
  m.add("extension", RegionKind::kExtension, kExtension, 1);
  return m;
}

std::uint64_t keccak_rc(std::size_t round) {
  std::uint8_t lfsr = 1;
  const auto step = [&] {
    const bool out = lfsr & 1;
    lfsr = static_cast<std::uint8_t>((lfsr << 1) ^ ((lfsr & 0x80) ? 0x71 : 0));  // x^8+x^6+x^5+x^4+1
    return out;
  };
  for (std::size_t i = 0; i < 7 * round; ++i) step();
  std::uint64_t rc = 0;
  for (unsigned j = 0; j < 7; ++j)
    if (step()) rc |= std::uint64_t{1} << ((1u << j) - 1);
  return rc;
}

unsigned keccak_rho_offset(std::size_t x, std::size_t y) {
  std::size_t cx = 1, cy = 0;
  for (unsigned t = 0; t < 24; ++t) {
    if (cx == x % 5 && cy == y % 5) return ((t + 1) * (t + 2) / 2) % kLane;
    const std::size_t nx = cy, ny = (2 * cx + 3 * cy) % 5;
    cx = nx;
    cy = ny;
  }
  return 0;  // (0, 0)
}

std::vector<CommandWord> gen_theta() {
  CommandBuilder b;
  const auto c = [](std::size_t x) { return static_cast<std::uint8_t>(kScratch + x % 5); };
  for (std::size_t x = 0; x < 5; ++x) {
    b.xor_(c(x), lane_row(x, 0), lane_row(x, 1));
    for (std::size_t y = 2; y < 5; ++y) b.xor_(c(x), c(x), lane_row(x, y));
  }
  for (std::size_t x = 0; x < 5; ++x) {
    emit_rotate(b, kT, c(x + 1), 1);
    b.xor_(kT, kT, c(x + 4));
    for (std::size_t y = 0; y < 5; ++y) b.xor_(lane_row(x, y), lane_row(x, y), kT);
  }
  return b.take();
}

std::vector<CommandWord> gen_rho() {
  CommandBuilder b;
  for (std::size_t y = 0; y < 5; ++y)
    for (std::size_t x = 0; x < 5; ++x) emit_rotate(b, lane_row(x, y), lane_row(x, y), keccak_rho_offset(x, y));
  return b.take();
}

// B[y, 2x+3y] = rot(A[x, y]). The lane permutation is one 24-cycle: walk it
// backwards so each destination is already consumed, parking the first value.
std::vector<CommandWord> gen_rho_pi() {
  CommandBuilder b;
  const auto next = [](std::pair<std::size_t, std::size_t> p) {
    return std::pair<std::size_t, std::size_t>{p.second, (2 * p.first + 3 * p.second) % 5};
  };
  std::vector<std::pair<std::size_t, std::size_t>> cycle{{1, 0}};
  for (auto p = next(cycle[0]); p != cycle[0]; p = next(p)) cycle.push_back(p);
  const auto rot = [&](std::uint8_t dst, std::pair<std::size_t, std::size_t> src) {
    emit_rotate(b, dst, lane_row(src.first, src.second), keccak_rho_offset(src.first, src.second));
  };
  rot(kPark, cycle.back());
  for (std::size_t i = cycle.size() - 1; i-- > 0;) {
    const auto dst = cycle[i + 1];
    rot(lane_row(dst.first, dst.second), cycle[i]);
  }
  b.copy(lane_row(cycle[0].first, cycle[0].second), kPark);
  return b.take();
}

std::vector<CommandWord> gen_chi() {
  CommandBuilder b;
  const std::uint8_t s0 = kScratch, s1 = kScratch + 1, t = kScratch + 2;
  for (std::size_t y = 0; y < 5; ++y) {
    b.copy(s0, lane_row(0, y));
    b.copy(s1, lane_row(1, y));
    const auto in = [&](std::size_t x) {
      x %= 5;
      return x == 0 ? s0 : x == 1 ? s1 : lane_row(x, y);
    };
    for (std::size_t x = 0; x < 5; ++x) {
      b.not_(t, x + 1 >= 5 ? in(x + 1) : lane_row(x + 1, y));
      b.and_(t, t, in(x + 2));
      b.xor_(lane_row(x, y), t, lane_row(x, y));
    }
  }
  return b.take();
}

std::vector<CommandWord> gen_iota() {
  CommandBuilder b;
  b.xor_(lane_row(0, 0), lane_row(0, 0), kRoundConstants);
  return b.take();
}

std::vector<CommandWord> gen_state_permute() {
  CommandBuilder b;
  b.append(gen_theta());
  b.append(gen_rho_pi());
  b.append(gen_chi());
  b.append(gen_iota());
  return b.take();
}

std::vector<CommandWord> gen_add_state(std::size_t lanes) {
  CommandBuilder b;
  for (std::size_t i = 0; i < lanes; ++i)
    b.xor_(static_cast<std::uint8_t>(kState + i), static_cast<std::uint8_t>(kState + i),
           static_cast<std::uint8_t>(kMessage + i));
  return b.take();
}

namespace {

void add_permute(KernelProgram& p) {
  const auto cmds = gen_state_permute();
  // The iota operand is the second to last command.
  p.add_function("StatePermute", cmds, {{static_cast<std::uint32_t>(cmds.size() - 2), 1, 24}});
}

void write_round_constants(KernelProgram& p) {
  for (std::size_t i = 0; i < 24; ++i) p.host_write(kRoundConstants + i, lane_row_value(keccak_rc(i)));
}

void load_block(KernelProgram& p, std::size_t blk, std::size_t lanes) {
  for (std::size_t i = 0; i < lanes; ++i)
    p.host_load(kMessage + i, "m." + std::to_string(blk) + "." + std::to_string(i));
}

}  // namespace

std::vector<std::vector<std::uint64_t>> sha3_host_blocks(Sha3Variant v, ByteView message) {
  const std::size_t rate = sha3_rate_bytes(v);
  Bytes padded(message.begin(), message.end());
  padded.resize((message.size() / rate + 1) * rate, 0);
  padded[message.size()] ^= 0x06;
  padded.back() ^= 0x80;
  std::vector<std::vector<std::uint64_t>> blocks(padded.size() / rate, std::vector<std::uint64_t>(rate / 8));
  for (std::size_t i = 0; i < padded.size(); ++i)
    blocks[i / rate][(i % rate) / 8] |= std::uint64_t{padded[i]} << (8 * (i % 8));
  return blocks;
}

KernelProgram build_sha3_program(Sha3Variant v, std::size_t blocks) {
  if (blocks == 0) throw Error(ErrorCode::kInvalidArgument, "no blocks to absorb");
  KernelProgram p;
  p.name = std::string(to_string(v));
  p.geometry = sha3_geometry();
  p.layout = keccak_layout();
  add_permute(p);
  p.add_function("AddState", gen_add_state(rate_lanes(v)));
  write_round_constants(p);
  for (std::size_t i = 0; i < 25; ++i) p.host_write(kState + i, Row{});
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    load_block(p, blk, rate_lanes(v));
    p.invoke("AddState");
    p.invoke("StatePermute", 24);
    for (std::size_t i = 0; i < digest_lanes(v); ++i)
      p.host_capture(kState + i, "d." + std::to_string(blk) + "." + std::to_string(i));
  }
  return p;
}

KernelProgram build_hmac_program(Sha3Variant v, std::size_t blocks) {
  if (blocks == 0) throw Error(ErrorCode::kInvalidArgument, "no blocks to absorb");
  const std::size_t lanes = rate_lanes(v), dbytes = sha3_digest_bytes(v);
  KernelProgram p;
  p.name = "HMAC-" + std::string(to_string(v));
  p.geometry = sha3_geometry();
  p.layout = keccak_layout();
  add_permute(p);
  p.add_function("AddState", gen_add_state(lanes));
  {
    // state ^= key ^ pad; the pad operand steps from ipad to opad.
    CommandBuilder b;
    std::vector<StrideRule> strides;
    for (std::size_t i = 0; i < lanes; ++i) {
      strides.push_back({static_cast<std::uint32_t>(b.size() + 1), 1, 2});
      b.xor_(kT, static_cast<std::uint8_t>(kKey + i), kIpad);
      b.xor_(static_cast<std::uint8_t>(kState + i), static_cast<std::uint8_t>(kState + i), kT);
    }
    p.add_function("KeyPad", b.take(), strides);
  }
  {
    // Inner digest becomes the outer message block; a digest ending mid-lane
    // shares that lane with the first padding byte.
    CommandBuilder b;
    for (std::size_t i = 0; i < dbytes / 8; ++i)
      b.copy(static_cast<std::uint8_t>(kMessage + i), static_cast<std::uint8_t>(kState + i));
    if (dbytes % 8) {
      const auto i = static_cast<std::uint8_t>(dbytes / 8);
      b.and_(kMessage + i, kState + i, kDigestMask);
      b.or_(kMessage + i, kMessage + i, kPadLane);
    }
    p.add_function("DigestMove", b.take());
  }
  {
    CommandBuilder b;
    for (std::uint8_t i = 0; i < 25; ++i) b.clear(kState + i);
    p.add_function("ClearState", b.take());
  }

  write_round_constants(p);
  p.host_write(kIpad, lane_row_value(0x3636363636363636ULL));
  p.host_write(kIpad + 1, lane_row_value(0x5c5c5c5c5c5c5c5cULL));
  const unsigned tail = static_cast<unsigned>(dbytes % 8);
  p.host_write(kDigestMask, lane_row_value(tail ? (std::uint64_t{1} << (8 * tail)) - 1 : 0));
  p.host_write(kPadLane, lane_row_value(std::uint64_t{0x06} << (8 * tail)));
  for (std::size_t i = 0; i < 25; ++i) p.host_write(kState + i, Row{});
  for (std::size_t i = 0; i < lanes; ++i) p.host_load(kKey + i, "k." + std::to_string(i));

  p.invoke("KeyPad");
  p.invoke("StatePermute", 24);
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    load_block(p, blk, lanes);
    p.invoke("AddState");
    p.invoke("StatePermute", 24);
  }
  // Outer block constants: zero lanes, the lane opening the padding when the
  // digest fills whole lanes, and the closing 0x80.
  for (std::size_t i = (dbytes + 7) / 8; i < lanes; ++i) {
    std::uint64_t lane = 0;
    if (i == dbytes / 8) lane |= 0x06;
    if (i + 1 == lanes) lane |= 0x80ULL << 56;
    p.host_write(kMessage + i, lane_row_value(lane));
  }
  p.invoke("DigestMove");
  p.invoke("ClearState");
  p.invoke("KeyPad");
  p.invoke("StatePermute", 24);
  p.invoke("AddState");
  p.invoke("StatePermute", 24);
  for (std::size_t i = 0; i < digest_lanes(v); ++i) p.host_capture(kState + i, "d." + std::to_string(i));
  return p;
}

namespace {

std::uint64_t count_permutations(const ExecutionStats& st) {
  const auto* f = st.find("StatePermute");
  return f ? f->iterations / 24 : 0;
}

}  // namespace

Sha3Digests sha3_pass(Sha3Variant v, std::span<const Bytes> messages, ExecutionStats* stats) {
  if (messages.empty() || messages.size() > kKeccakTiles)
    throw Error(ErrorCode::kInvalidArgument, "1 to 4 messages per pass");
  std::vector<std::vector<std::vector<std::uint64_t>>> blocks;
  std::size_t nb = 0;
  for (const auto& m : messages) {
    blocks.push_back(sha3_host_blocks(v, m));
    nb = std::max(nb, blocks.back().size());
  }
  Bindings bind;
  for (std::size_t blk = 0; blk < nb; ++blk)
    for (std::size_t i = 0; i < rate_lanes(v); ++i) {
      Row r;
      for (std::size_t t = 0; t < blocks.size(); ++t)
        if (blk < blocks[t].size()) r.set_word(t, blocks[t][blk][i]);
      bind["m." + std::to_string(blk) + "." + std::to_string(i)] = r;
    }
  const Controller ctrl(build_sha3_program(v, nb));
  Subarray sub(kLane);
  auto st = ctrl.run(sub, bind);

  Sha3Digests out;
  for (std::size_t t = 0; t < blocks.size(); ++t) {
    std::vector<std::uint64_t> lanes;
    for (std::size_t i = 0; i < digest_lanes(v); ++i)
      lanes.push_back(st.captures.at("d." + std::to_string(blocks[t].size() - 1) + "." + std::to_string(i)).word(t));
    out.digests.push_back(lanes_to_bytes(lanes, sha3_digest_bytes(v)));
  }
  out.cycles = st.total_cycles;
  out.permutations = count_permutations(st);
  if (stats) *stats = std::move(st);
  return out;
}

Sha3Digests hmac_pass(Sha3Variant v, std::span<const Bytes> keys, std::span<const Bytes> messages,
                      ExecutionStats* stats) {
  if (messages.empty() || messages.size() > kKeccakTiles || keys.size() != messages.size())
    throw Error(ErrorCode::kInvalidArgument, "1 to 4 key/message pairs per pass");
  const std::size_t rate = sha3_rate_bytes(v);
  Bindings bind;
  std::size_t nb = 0;
  std::uint64_t extra_cycles = 0;
  for (std::size_t t = 0; t < messages.size(); ++t) {
    Bytes key = keys[t];
    if (key.size() > rate) {
      // Long keys are hashed first, on the fabric like everything else.
      const Bytes one[] = {key};
      const auto h = sha3_pass(v, one);
      key = h.digests[0];
      extra_cycles += h.cycles;
    }
    key.resize(rate, 0);
    for (std::size_t i = 0; i < rate / 8; ++i) {
      std::uint64_t lane = 0;
      for (std::size_t j = 0; j < 8; ++j) lane |= std::uint64_t{key[8 * i + j]} << (8 * j);
      bind["k." + std::to_string(i)].set_word(t, lane);
    }
    const auto blocks = sha3_host_blocks(v, messages[t]);
    if (t == 0) nb = blocks.size();
    if (blocks.size() != nb) throw Error(ErrorCode::kInvalidArgument, "HMAC pass messages differ in block count");
    for (std::size_t blk = 0; blk < nb; ++blk)
      for (std::size_t i = 0; i < rate / 8; ++i)
        bind["m." + std::to_string(blk) + "." + std::to_string(i)].set_word(t, blocks[blk][i]);
  }
  const Controller ctrl(build_hmac_program(v, nb));
  Subarray sub(kLane);
  auto st = ctrl.run(sub, bind);

  Sha3Digests out;
  for (std::size_t t = 0; t < messages.size(); ++t) {
    std::vector<std::uint64_t> lanes;
    for (std::size_t i = 0; i < digest_lanes(v); ++i) lanes.push_back(st.captures.at("d." + std::to_string(i)).word(t));
    out.digests.push_back(lanes_to_bytes(lanes, sha3_digest_bytes(v)));
  }
  out.cycles = st.total_cycles + extra_cycles;
  out.permutations = count_permutations(st);
  if (stats) *stats = std::move(st);
  return out;
}

}  // namespace csram
