#include "cryptosram/aes_kernels.hpp"

#include <map>

#include "cryptosram/emit.hpp"
#include "cryptosram/error.hpp"
#include "cryptosram/sbox_circuit.hpp"

namespace csram {

namespace {

using namespace aes_rows;
constexpr std::size_t kTileWidth = 16;

// Scratch assignments.
constexpr std::uint8_t kSliceTmp = kScratch;        // 4 rows
constexpr std::uint8_t kMixT = kScratch;            // 8 rows
constexpr std::uint8_t kMixU = kScratch + 8;
constexpr std::uint8_t kRotA = kScratch + 9;
constexpr std::uint8_t kRotB = kScratch + 10;
constexpr std::uint8_t kShiftA = kScratch;
constexpr std::uint8_t kShiftB = kScratch + 1;

constexpr std::uint8_t kShiftRowsMasks = kConstants;      // 3 per AES row r = 1..3
constexpr std::uint8_t kMixMasks = kConstants + 9;        // hi1, lo1, hi2, lo2

Row tile_pattern(auto pred) {
  Row r;
  for (std::size_t c = 0; c < kColumns; ++c)
    if (pred(c % kTileWidth)) r.set(c, true);
  return r;
}

// ShiftRows moves tile column 4c'+r to 4c+r. For AES row r the two shift
// distances and which source columns take each.
struct RowMove {
  int shift_a, shift_b;  // signed, left > 0
  Row mask_a, mask_b, keep;
};

RowMove row_move(CipherDirection dir, int r) {
  RowMove m{};
  std::map<int, Row> by_shift;
  for (int src = 0; src < 4; ++src) {
    const int dst = dir == CipherDirection::kEncrypt ? (src - r + 4) % 4 : (src + r) % 4;
    const int delta = 4 * (dst - src);
    by_shift[delta] |= tile_pattern([&](std::size_t c) { return c == static_cast<std::size_t>(4 * src + r); });
  }
  auto it = by_shift.begin();
  m.shift_a = it->first;
  m.mask_a = it->second;
  ++it;
  m.shift_b = it->first;
  m.mask_b = it->second;
  m.keep = tile_pattern([&](std::size_t c) { return c % 4 != static_cast<std::size_t>(r); });
  return m;
}

// dst = rot_k(src): within each 4-column group, column r takes column (r+k) mod 4.
void emit_rotate(CommandBuilder& b, std::uint8_t dst, std::uint8_t src, int k) {
  const std::uint8_t hi = kMixMasks + 2 * (k - 1), lo = hi + 1;
  b.masked_shift(kRotA, src, hi, -k);
  b.masked_shift(kRotB, src, lo, 4 - k);
  b.or_(dst, kRotA, kRotB);
}

// a_p ^= xtime terms, finishing into `dst`: acc ^= each term, last write to dst.
void emit_xor_chain(CommandBuilder& b, std::uint8_t dst, std::uint8_t acc, std::span<const std::uint8_t> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) b.xor_(i + 1 == terms.size() ? dst : acc, acc, terms[i]);
}

void emit_mix(CommandBuilder& b) {
  // t = a ^ rot1(a); out = xtime(t) ^ a ^ t ^ rot2(t)
  for (std::uint8_t p = 0; p < 8; ++p) {
    emit_rotate(b, kMixT + p, kState + p, 1);
    b.xor_(kMixT + p, kMixT + p, kState + p);
  }
  const auto t = [](int i) { return static_cast<std::uint8_t>(kMixT + i); };
  for (std::uint8_t p = 0; p < 8; ++p) {
    emit_rotate(b, kMixU, t(p), 2);
    b.xor_(kMixU, kMixU, t(p));
    b.xor_(kMixU, kMixU, kState + p);
    std::vector<std::uint8_t> terms;
    terms.push_back(t((p + 7) % 8));
    if (p == 1 || p == 3 || p == 4) terms.push_back(t(7));
    emit_xor_chain(b, kState + p, kMixU, terms);
  }
}

}  // namespace

BlockGeometry aes_geometry() {
  auto g = BlockGeometry::make(8, kTileWidth, 119);
  return g;
}

LayoutMap aes_layout() {
  LayoutMap m;
  m.add("state", RegionKind::kState, kState, 8);
  m.add("round_keys", RegionKind::kKey, kKeys, 8 * kKeySlots);
  m.add("constants", RegionKind::kConstant, kConstants, kScratch - kConstants);
  m.add("scratch", RegionKind::kTemp, kScratch, kRows - kScratch);
  return m;
}

std::vector<std::pair<std::uint8_t, Row>> aes_slice_mask_rows() {
  std::vector<std::pair<std::uint8_t, Row>> out;
  std::uint8_t row = kSliceMasks;
  for (std::size_t k : {4, 2, 1}) {
    out.emplace_back(row++, tile_pattern([&](std::size_t c) { return ((c % 8) & k) != 0; }));
    out.emplace_back(row++, tile_pattern([&](std::size_t c) { return ((c % 8) & k) == 0; }));
  }
  return out;
}

std::vector<std::pair<std::uint8_t, Row>> aes_constant_rows(CipherDirection dir) {
  std::vector<std::pair<std::uint8_t, Row>> out;
  for (int r = 1; r <= 3; ++r) {
    const auto m = row_move(dir, r);
    const std::uint8_t base = kShiftRowsMasks + 3 * (r - 1);
    out.emplace_back(base, m.mask_a);
    out.emplace_back(base + 1, m.mask_b);
    out.emplace_back(base + 2, m.keep);
  }
  for (std::size_t k : {1, 2}) {
    out.emplace_back(kMixMasks + 2 * (k - 1), tile_pattern([&](std::size_t c) { return c % 4 >= k; }));
    out.emplace_back(kMixMasks + 2 * (k - 1) + 1, tile_pattern([&](std::size_t c) { return c % 4 < k; }));
  }
  return out;
}

// 8x8 bit transpose of both tile halves by three rounds of delta swaps. Its own inverse.
std::vector<CommandWord> gen_bit_slicing(CipherDirection) {
  CommandBuilder b;
  const std::uint8_t t1 = kSliceTmp, t2 = kSliceTmp + 1, t3 = kSliceTmp + 2, t4 = kSliceTmp + 3;
  std::uint8_t mask = kSliceMasks;
  for (int k : {4, 2, 1}) {
    const std::uint8_t set = mask, clr = mask + 1;
    mask += 2;
    for (int i = 0; i < 8; ++i) {
      if (i & k) continue;
      const std::uint8_t a = kState + i, c = kState + i + k;
      b.rd(c);
      b.shl(k);
      b.wr(t1);
      b.and_(t1, t1, set);
      b.and_(t2, a, clr);
      b.rd(a);
      b.shr(k);
      b.wr(t3);
      b.and_(t3, t3, clr);
      b.and_(t4, c, set);
      b.or_(a, t2, t1);
      b.or_(c, t4, t3);
    }
  }
  return b.take();
}

// state ^= round key in slot 0; the controller strides the key operand.
std::vector<CommandWord> gen_add_round_key() {
  CommandBuilder b;
  for (std::uint8_t p = 0; p < 8; ++p) b.xor_(kState + p, kState + p, kKeys + p);
  return b.take();
}

std::vector<CommandWord> gen_sub_bytes(CipherDirection dir) {
  CircuitPlacement place;
  for (std::uint8_t r = kScratch; r < kRows; ++r) place.pool.push_back(r);
  if (dir == CipherDirection::kEncrypt) {
    for (int i = 0; i < 8; ++i) {
      place.inputs["U" + std::to_string(i)] = static_cast<std::uint8_t>(kState + 7 - i);
      place.outputs["S" + std::to_string(i)] = static_cast<std::uint8_t>(kState + 7 - i);
    }
  } else {
    for (int i = 0; i < 8; ++i) {
      place.inputs["P" + std::to_string(i)] = static_cast<std::uint8_t>(kState + i);
      place.outputs["Q" + std::to_string(i)] = static_cast<std::uint8_t>(kState + i);
    }
  }
  CommandBuilder b;
  compile_circuit(dir == CipherDirection::kEncrypt ? forward_sbox_netlist() : inverse_sbox_netlist(), place, b);
  return b.take();
}

std::vector<CommandWord> gen_shift_rows(CipherDirection dir) {
  CommandBuilder b;
  for (std::uint8_t p = 0; p < 8; ++p) {
    const std::uint8_t x = kState + p;
    for (int r = 1; r <= 3; ++r) {
      const auto m = row_move(dir, r);
      const std::uint8_t base = kShiftRowsMasks + 3 * (r - 1);
      b.masked_shift(kShiftA, x, base, m.shift_a);
      b.masked_shift(kShiftB, x, base + 1, m.shift_b);
      b.or_(kShiftA, kShiftA, kShiftB);
      b.and_(x, x, base + 2);
      b.or_(x, x, kShiftA);
    }
  }
  return b.take();
}

std::vector<CommandWord> gen_mix_columns(CipherDirection dir) {
  CommandBuilder b;
  if (dir == CipherDirection::kDecrypt) {
    // InvMixColumns(a) = MixColumns(a ^ 4*(a ^ rot2(a))).
    const auto v = [](int i) { return static_cast<std::uint8_t>(kMixT + i); };
    for (std::uint8_t p = 0; p < 8; ++p) {
      emit_rotate(b, v(p), kState + p, 2);
      b.xor_(v(p), v(p), kState + p);
    }
    // Planes of x^2 * v reduced mod the AES polynomial.
    const std::vector<std::vector<int>> times4 = {{6}, {7, 6}, {0, 7}, {1, 6}, {2, 7, 6}, {3, 7}, {4}, {5}};
    for (std::uint8_t p = 0; p < 8; ++p)
      for (int term : times4[p]) b.xor_(kState + p, kState + p, v(term));
  }
  emit_mix(b);
  return b.take();
}

std::vector<CommandWord> gen_data_xor() {
  CommandBuilder b;
  for (std::uint8_t p = 0; p < 8; ++p) b.xor_(kState + p, kState + p, kData + p);
  return b.take();
}

KernelProgram build_aes_program(AesVariant variant, CipherDirection dir, DataXor data_xor) {
  const bool enc = dir == CipherDirection::kEncrypt;
  const int nr = static_cast<int>(aes_rounds(variant));
  const bool reload = nr + 1 > kKeySlots;  // AES-256: 15 round keys, 8 slots in rotation
  const std::uint32_t period = reload ? 8 : 0;

  KernelProgram p;
  p.name = std::string(to_string(variant)) + (enc ? "-encrypt" : "-decrypt");
  p.geometry = aes_geometry();
  p.layout = aes_layout();

  const std::string sub = enc ? "SubBytes" : "InvSubBytes";
  const std::string shr = enc ? "ShiftRows" : "InvShiftRows";
  const std::string mix = enc ? "MixColumns" : "InvMixColumns";

  p.add_function("BitSlicing", gen_bit_slicing());
  {
    std::vector<StrideRule> strides;
    for (std::uint32_t i = 0; i < 8; ++i) strides.push_back({3 * i + 1, enc ? 8 : -8, period});
    auto cmds = gen_add_round_key();
    const int first_slot = enc ? 0 : (reload ? 7 : nr);
    for (auto& c : cmds)
      if (c.opcode == Opcode::kLogicOp) c.index = static_cast<std::uint8_t>(c.index + 8 * first_slot);
    p.add_function("AddRoundKey", cmds, strides);
  }
  p.add_function(sub, gen_sub_bytes(dir));
  p.add_function(shr, gen_shift_rows(dir));
  p.add_function(mix, gen_mix_columns(dir));
  if (data_xor != DataXor::kNone) p.add_function("DataXor", gen_data_xor());

  // AES-256 decryption holds key 7+s in slot s, then key s-1 after the reload.
  const auto load_keys = [&](int first_key, int count, int first_slot) {
    for (int i = 0; i < count; ++i)
      for (int r = 0; r < 8; ++r)
        p.host_load(kKeys + 8 * (first_slot + i) + r,
                    "rk." + std::to_string(first_key + i) + "." + std::to_string(r));
  };
  const auto load_data = [&] {
    for (int r = 0; r < 8; ++r) p.host_load(kData + r, "data." + std::to_string(r));
  };
  const auto write_rows = [&](const auto& rows) {
    for (const auto& [row, value] : rows) p.host_write(row, value);
  };

  write_rows(aes_constant_rows(dir));
  write_rows(aes_slice_mask_rows());
  if (!reload) load_keys(0, nr + 1, 0);
  else if (enc) load_keys(0, 8, 0);
  else load_keys(nr - 7, 8, 0);
  for (int r = 0; r < 8; ++r) p.host_load(kState + r, "state." + std::to_string(r));

  if (data_xor == DataXor::kBefore) {
    load_data();
    p.invoke("DataXor");
  }
  p.invoke("BitSlicing");
  int ark = 0;
  const auto add_round_key = [&] {
    if (reload && ark == 8) {
      if (enc) load_keys(8, nr - 7, 0);
      else load_keys(0, nr - 7, 1);
    }
    p.invoke("AddRoundKey");
    ++ark;
  };
  add_round_key();
  for (int round = 1; round <= nr; ++round) {
    if (enc) {
      p.invoke(sub);
      p.invoke(shr);
      if (round < nr) p.invoke(mix);
      add_round_key();
    } else {
      p.invoke(shr);
      p.invoke(sub);
      add_round_key();
      if (round < nr) p.invoke(mix);
    }
  }
  write_rows(aes_slice_mask_rows());
  p.invoke("BitSlicing");
  if (data_xor == DataXor::kAfter) {
    load_data();
    p.invoke("DataXor");
  }
  for (int r = 0; r < 8; ++r) p.host_capture(kState + r, "out." + std::to_string(r));
  return p;
}

PlaneRows aes_pack_blocks(std::span<const Block> blocks) {
  if (blocks.size() > kAesTiles) throw Error(ErrorCode::kInvalidArgument, "more than 16 blocks per pass");
  PlaneRows rows{};
  for (std::size_t t = 0; t < blocks.size(); ++t)
    for (std::size_t i = 0; i < 8; ++i) {
      rows[i].set_field(t * kTileWidth, 8, blocks[t][i]);
      rows[i].set_field(t * kTileWidth + 8, 8, blocks[t][i + 8]);
    }
  return rows;
}

std::vector<Block> aes_unpack_blocks(const PlaneRows& rows, std::size_t count) {
  std::vector<Block> out(count);
  for (std::size_t t = 0; t < count; ++t)
    for (std::size_t i = 0; i < 8; ++i) {
      out[t][i] = static_cast<std::uint8_t>(rows[i].field(t * kTileWidth, 8));
      out[t][i + 8] = static_cast<std::uint8_t>(rows[i].field(t * kTileWidth + 8, 8));
    }
  return out;
}

const std::array<std::uint8_t, 256>& circuit_sbox() {
  static const auto table = [] {
    std::array<std::uint8_t, 256> s{};
    const auto& n = forward_sbox_netlist();
    for (int x = 0; x < 256; ++x) {
      std::map<std::string, int> in;
      for (int i = 0; i < 8; ++i) in["U" + std::to_string(i)] = (x >> (7 - i)) & 1;
      const auto v = n.evaluate(in);
      int y = 0;
      for (int i = 0; i < 8; ++i) y |= v.at("S" + std::to_string(i)) << (7 - i);
      s[x] = static_cast<std::uint8_t>(y);
    }
    return s;
  }();
  return table;
}

std::vector<PlaneRows> host_key_expand(ByteView key, AesVariant variant) {
  const std::size_t nk = aes_key_bytes(variant) / 4;
  if (key.size() != aes_key_bytes(variant))
    throw Error(ErrorCode::kBadKeyLength, std::to_string(key.size()) + " key bytes for " +
                                              std::string(to_string(variant)));
  const std::size_t nr = aes_rounds(variant);
  const auto& sbox = circuit_sbox();
  std::vector<std::array<std::uint8_t, 4>> w(4 * (nr + 1));
  for (std::size_t i = 0; i < nk; ++i)
    for (int j = 0; j < 4; ++j) w[i][j] = key[4 * i + j];
  std::uint8_t rcon = 1;
  for (std::size_t i = nk; i < w.size(); ++i) {
    auto t = w[i - 1];
    if (i % nk == 0) {
      t = {static_cast<std::uint8_t>(sbox[t[1]] ^ rcon), sbox[t[2]], sbox[t[3]], sbox[t[0]]};
      rcon = static_cast<std::uint8_t>((rcon << 1) ^ ((rcon & 0x80) ? 0x1b : 0));
    } else if (nk > 6 && i % nk == 4) {
      for (auto& x : t) x = sbox[x];
    }
    for (int j = 0; j < 4; ++j) w[i][j] = w[i - nk][j] ^ t[j];
  }

  std::vector<PlaneRows> out(nr + 1);
  for (std::size_t k = 0; k <= nr; ++k)
    for (int r = 0; r < 8; ++r)
      for (std::size_t j = 0; j < 16; ++j)
        if ((w[4 * k + j / 4][j % 4] >> r) & 1)
          for (std::size_t t = 0; t < kAesTiles; ++t) out[k][r].set(t * kTileWidth + j, true);
  return out;
}

AesEngine::AesEngine(ByteView key, AesVariant variant)
    : variant_(variant), round_keys_(host_key_expand(key, variant)) {
  for (auto dir : {CipherDirection::kEncrypt, CipherDirection::kDecrypt})
    for (auto x : {DataXor::kNone, DataXor::kBefore, DataXor::kAfter})
      controllers_.emplace_back(build_aes_program(variant, dir, x));
}

const KernelProgram& AesEngine::program(CipherDirection dir, DataXor data_xor) const {
  return controllers_[static_cast<std::size_t>(dir) * 3 + static_cast<std::size_t>(data_xor)].program();
}

std::vector<Block> AesEngine::run(CipherDirection dir, DataXor data_xor, std::span<const Block> blocks,
                                  std::span<const Block> data, ExecutionStats* stats) const {
  if (data_xor != DataXor::kNone && data.size() != blocks.size())
    throw Error(ErrorCode::kInvalidArgument, "data XOR needs one data block per input block");
  Bindings bind;
  const auto state = aes_pack_blocks(blocks);
  for (int r = 0; r < 8; ++r) bind["state." + std::to_string(r)] = state[r];
  if (data_xor != DataXor::kNone) {
    const auto d = aes_pack_blocks(data);
    for (int r = 0; r < 8; ++r) bind["data." + std::to_string(r)] = d[r];
  }
  for (std::size_t k = 0; k < round_keys_.size(); ++k)
    for (int r = 0; r < 8; ++r) bind["rk." + std::to_string(k) + "." + std::to_string(r)] = round_keys_[k][r];

  Subarray sub(kTileWidth);
  const auto& ctrl = controllers_[static_cast<std::size_t>(dir) * 3 + static_cast<std::size_t>(data_xor)];
  auto st = ctrl.run(sub, bind);
  PlaneRows out;
  for (int r = 0; r < 8; ++r) out[r] = st.captures.at("out." + std::to_string(r));
  if (stats) *stats = std::move(st);
  return aes_unpack_blocks(out, blocks.size());
}

}  // namespace csram
