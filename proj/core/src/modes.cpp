#include "cryptosram/modes.hpp"

#include <algorithm>
#include <cctype>

#include "cryptosram/error.hpp"
#include "cryptosram/ghash_kernels.hpp"
#include "cryptosram/keccak_kernels.hpp"

namespace csram {

std::string_view to_string(CipherMode mode) {
  switch (mode) {
    case CipherMode::kNone: return "none";
    case CipherMode::kEcb: return "ecb";
    case CipherMode::kCbc: return "cbc";
    case CipherMode::kCtr: return "ctr";
    case CipherMode::kCcm: return "ccm";
    case CipherMode::kGcm: return "gcm";
  }
  return "?";
}

CipherMode cipher_mode_from_string(std::string_view s) {
  for (auto m : {CipherMode::kNone, CipherMode::kEcb, CipherMode::kCbc, CipherMode::kCtr, CipherMode::kCcm,
                 CipherMode::kGcm}) {
    const auto name = to_string(m);
    if (s.size() == name.size() && std::equal(s.begin(), s.end(), name.begin(), [](char a, char b) {
          return std::tolower(static_cast<unsigned char>(a)) == b;
        }))
      return m;
  }
  throw Error(ErrorCode::kUnsupportedAlgorithm, "mode '" + std::string(s) + "'");
}

void ModeSpec::validate() const {
  const auto bad = [&](const std::string& what) {
    return Error(ErrorCode::kBadIvLength, std::string(to_string(mode)) + ": " + what + ", got " +
                                              std::to_string(iv.size()) + " bytes");
  };
  switch (mode) {
    case CipherMode::kCbc:
    case CipherMode::kCtr:
      if (iv.size() != 16) throw bad("needs a 16-byte IV");
      break;
    case CipherMode::kCcm:
      if (iv.size() < 7 || iv.size() > 13) throw bad("nonce must be 7 to 13 bytes");
      if (tag_length < 4 || tag_length > 16 || tag_length % 2)
        throw Error(ErrorCode::kInvalidArgument, "CCM tag length " + std::to_string(tag_length));
      break;
    case CipherMode::kGcm:
      if (iv.empty()) throw bad("IV must not be empty");
      break;
    case CipherMode::kNone:
    case CipherMode::kEcb:
      break;
  }
}

FabricCost& FabricCost::operator+=(const FabricCost& o) {
  aes_passes += o.aes_passes;
  aes_cycles += o.aes_cycles;
  ghash_passes += o.ghash_passes;
  ghash_cycles += o.ghash_cycles;
  keccak_passes += o.keccak_passes;
  keccak_cycles += o.keccak_cycles;
  return *this;
}

void accumulate(ExecutionStats& into, const ExecutionStats& from) {
  for (const auto& f : from.functions) {
    auto it = std::find_if(into.functions.begin(), into.functions.end(),
                           [&](const FunctionStats& g) { return g.name == f.name; });
    if (it == into.functions.end()) {
      into.functions.push_back(f);
      continue;
    }
    it->iterations += f.iterations;
    it->commands += f.commands;
    it->cycles += f.cycles;
  }
  into.total_commands += from.total_commands;
  into.total_cycles += from.total_cycles;
}

namespace {

constexpr std::size_t kBlock = 16;

std::vector<Block> to_blocks(ByteView data) {
  std::vector<Block> out((data.size() + kBlock - 1) / kBlock, Block{});
  for (std::size_t i = 0; i < data.size(); ++i) out[i / kBlock][i % kBlock] = data[i];
  return out;
}

void append(Bytes& out, const Block& b, std::size_t n = kBlock) { out.insert(out.end(), b.begin(), b.begin() + n); }

Block to_block(ByteView b) {
  Block out{};
  std::copy_n(b.begin(), std::min(b.size(), kBlock), out.begin());
  return out;
}

void require_whole_blocks(ByteView data, CipherMode mode) {
  if (data.size() % kBlock)
    throw Error(ErrorCode::kInvalidArgument,
                std::string(to_string(mode)) + " input is not a whole number of 16-byte blocks");
}

// Accumulates the cost of a run of AES passes.
class AesRunner {
 public:
  AesRunner(ByteView key, ModeResult& res) : engine_(key, variant_of(key)), res_(res) {}

  static AesVariant variant_of(ByteView key) {
    if (key.size() == 16) return AesVariant::k128;
    if (key.size() == 32) return AesVariant::k256;
    throw Error(ErrorCode::kBadKeyLength, std::to_string(key.size()) + "-byte AES key");
  }

  // Any number of blocks, 16 tiles per pass.
  std::vector<Block> run(CipherDirection dir, DataXor x, std::span<const Block> blocks,
                         std::span<const Block> data = {}) {
    std::vector<Block> out;
    for (std::size_t at = 0; at < blocks.size(); at += kAesTiles) {
      const std::size_t n = std::min(kAesTiles, blocks.size() - at);
      ExecutionStats st;
      const auto part =
          engine_.run(dir, x, blocks.subspan(at, n), x == DataXor::kNone ? data : data.subspan(at, n), &st);
      out.insert(out.end(), part.begin(), part.end());
      res_.cost.aes_passes += 1;
      res_.cost.aes_cycles += st.total_cycles;
      accumulate(res_.stats, st);
    }
    return out;
  }

  // Independent CBC chains over whole blocks, one tile per chain per pass;
  // each pass XORs the previous ciphertext block in before the cipher.
  std::vector<Bytes> chains(std::span<const Bytes> ivs, std::span<const Bytes> messages) {
    std::vector<Bytes> out(messages.size());
    for (std::size_t first = 0; first < messages.size(); first += kAesTiles) {
      const std::size_t n = std::min(kAesTiles, messages.size() - first);
      std::vector<Block> prev(n);
      std::size_t longest = 0;
      for (std::size_t t = 0; t < n; ++t) {
        prev[t] = to_block(ivs[first + t]);
        longest = std::max(longest, messages[first + t].size() / kBlock);
      }
      for (std::size_t b = 0; b < longest; ++b) {
        std::vector<std::size_t> active;
        std::vector<Block> in, chain;
        for (std::size_t t = 0; t < n; ++t) {
          const auto& m = messages[first + t];
          if (b >= m.size() / kBlock) continue;
          active.push_back(t);
          in.push_back(to_block(ByteView(m).subspan(b * kBlock, kBlock)));
          chain.push_back(prev[t]);
        }
        const auto ct = run(CipherDirection::kEncrypt, DataXor::kBefore, in, chain);
        for (std::size_t i = 0; i < active.size(); ++i) {
          prev[active[i]] = ct[i];
          append(out[first + active[i]], ct[i]);
        }
      }
    }
    return out;
  }

 private:
  AesEngine engine_;
  ModeResult& res_;
};

Block ghash_on_fabric(const Block& h, ByteView data, ModeResult& res) {
  const std::vector<std::vector<Block>> in = {to_blocks(data)};
  std::vector<ExecutionStats> passes;
  const auto g = ghash_fabric(h, in, &passes);
  res.cost.ghash_passes += g.passes;
  res.cost.ghash_cycles += g.cycles;
  for (const auto& st : passes) accumulate(res.stats, st);
  return g.digests[0];
}

void put_be(Bytes& out, std::uint64_t v, std::size_t n) {
  for (std::size_t i = n; i-- > 0;) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

// Keystream XOR over counter blocks; the data tail may be a partial block.
Bytes ctr_xor(AesRunner& aes, const std::vector<Block>& counters, ByteView data) {
  const auto blocks = to_blocks(data);
  const auto out = aes.run(CipherDirection::kEncrypt, DataXor::kAfter, counters, blocks);
  Bytes r;
  for (std::size_t i = 0; i < out.size(); ++i) append(r, out[i], std::min(kBlock, data.size() - i * kBlock));
  return r;
}

Block inc32(Block b, std::uint32_t by) {
  std::uint32_t c = (std::uint32_t{b[12]} << 24) | (std::uint32_t{b[13]} << 16) | (std::uint32_t{b[14]} << 8) | b[15];
  c += by;
  for (int i = 0; i < 4; ++i) b[15 - i] = static_cast<std::uint8_t>(c >> (8 * i));
  return b;
}

bool equal_ct(ByteView a, ByteView b) {
  if (a.size() != b.size()) return false;
  std::uint8_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d |= a[i] ^ b[i];
  return d == 0;
}

// CCM formatting: B0, encoded AAD and zero-padded payload; counter blocks.
Bytes ccm_mac_input(const ModeSpec& spec, ByteView aad, ByteView pt) {
  const std::size_t q = 15 - spec.iv.size();
  Bytes b;
  b.push_back(static_cast<std::uint8_t>((aad.empty() ? 0 : 0x40) | (((spec.tag_length - 2) / 2) << 3) | (q - 1)));
  b.insert(b.end(), spec.iv.begin(), spec.iv.end());
  if (q < 8 && (pt.size() >> (8 * q)) != 0) throw Error(ErrorCode::kInvalidArgument, "CCM payload too long for nonce");
  put_be(b, pt.size(), q);
  if (!aad.empty()) {
    if (aad.size() < 0xFF00) put_be(b, aad.size(), 2);
    else if (aad.size() <= 0xFFFFFFFFULL) {
      b.push_back(0xFF);
      b.push_back(0xFE);
      put_be(b, aad.size(), 4);
    } else {
      b.push_back(0xFF);
      b.push_back(0xFF);
      put_be(b, aad.size(), 8);
    }
    b.insert(b.end(), aad.begin(), aad.end());
    b.resize((b.size() + 15) / 16 * 16, 0);
  }
  b.insert(b.end(), pt.begin(), pt.end());
  b.resize((b.size() + 15) / 16 * 16, 0);
  return b;
}

Block ccm_counter(const ModeSpec& spec, std::uint64_t i) {
  const std::size_t q = 15 - spec.iv.size();
  Block c{};
  c[0] = static_cast<std::uint8_t>(q - 1);
  std::copy(spec.iv.begin(), spec.iv.end(), c.begin() + 1);
  for (std::size_t k = 0; k < q; ++k) c[15 - k] = static_cast<std::uint8_t>(k < 8 ? i >> (8 * k) : 0);
  return c;
}

Block ccm_mac(AesRunner& aes, const ModeSpec& spec, ByteView aad, ByteView pt) {
  const Bytes in[] = {ccm_mac_input(spec, aad, pt)};
  const Bytes iv[] = {Bytes(kBlock, 0)};
  const auto mac = aes.chains(iv, in)[0];
  return to_block(ByteView(mac).subspan(mac.size() - kBlock));
}

// Counter blocks ctr_0 .. ctr_n for an n-byte payload (ctr_0 masks the tag).
std::vector<Block> ccm_counters(const ModeSpec& spec, std::size_t bytes) {
  std::vector<Block> c;
  for (std::uint64_t i = 0; i <= (bytes + kBlock - 1) / kBlock; ++i) c.push_back(ccm_counter(spec, i));
  return c;
}

struct GcmSetup {
  Block h;
  Block j0;
};

GcmSetup gcm_setup(AesRunner& aes, const ModeSpec& spec, ModeResult& res) {
  GcmSetup g{};
  const Block zero{};
  g.h = aes.run(CipherDirection::kEncrypt, DataXor::kNone, std::span<const Block>(&zero, 1))[0];
  if (spec.iv.size() == 12) {
    std::copy(spec.iv.begin(), spec.iv.end(), g.j0.begin());
    g.j0[15] = 1;
  } else {
    Bytes s(spec.iv.begin(), spec.iv.end());
    s.resize((s.size() + 15) / 16 * 16 + 8, 0);
    put_be(s, std::uint64_t{spec.iv.size()} * 8, 8);
    g.j0 = ghash_on_fabric(g.h, s, res);
  }
  return g;
}

Block gcm_hash(const GcmSetup& g, ByteView aad, ByteView ct, ModeResult& res) {
  Bytes s(aad.begin(), aad.end());
  s.resize((s.size() + 15) / 16 * 16, 0);
  s.insert(s.end(), ct.begin(), ct.end());
  s.resize((s.size() + 15) / 16 * 16, 0);
  put_be(s, std::uint64_t{aad.size()} * 8, 8);
  put_be(s, std::uint64_t{ct.size()} * 8, 8);
  return ghash_on_fabric(g.h, s, res);
}

// Payload keystream plus E(J0) in the same passes.
std::pair<Bytes, Block> gcm_ctr(AesRunner& aes, const GcmSetup& g, ByteView data) {
  std::vector<Block> counters{g.j0};
  for (std::size_t i = 0; i < (data.size() + kBlock - 1) / kBlock; ++i)
    counters.push_back(inc32(g.j0, static_cast<std::uint32_t>(i + 1)));
  Bytes padded(kBlock, 0);
  padded.insert(padded.end(), data.begin(), data.end());
  const auto x = ctr_xor(aes, counters, padded);
  return {Bytes(x.begin() + kBlock, x.end()), to_block(x)};
}

}  // namespace

ModeResult run_mode(const ModeSpec& spec, ByteView key, ByteView data, ByteView aad) {
  spec.validate();
  ModeResult res;
  AesRunner aes(key, res);
  if (AesRunner::variant_of(key) != spec.variant)
    throw Error(ErrorCode::kBadKeyLength, std::to_string(key.size()) + "-byte key for " +
                                              std::string(to_string(spec.variant)));
  const bool enc = spec.direction == CipherDirection::kEncrypt;

  switch (spec.mode) {
    case CipherMode::kNone:
    case CipherMode::kEcb: {
      require_whole_blocks(data, spec.mode);
      for (const auto& b : aes.run(spec.direction, DataXor::kNone, to_blocks(data))) append(res.output, b);
      break;
    }
    case CipherMode::kCbc: {
      require_whole_blocks(data, spec.mode);
      if (enc) {
        const Bytes msg[] = {Bytes(data.begin(), data.end())};
        const Bytes iv[] = {spec.iv};
        res.output = aes.chains(iv, msg)[0];
      } else {
        // Every block decrypts in parallel; the chain XOR follows the cipher.
        const auto blocks = to_blocks(data);
        std::vector<Block> chain{to_block(spec.iv)};
        chain.insert(chain.end(), blocks.begin(), blocks.end());
        chain.pop_back();
        for (const auto& b : aes.run(CipherDirection::kDecrypt, DataXor::kAfter, blocks, chain))
          append(res.output, b);
      }
      break;
    }
    case CipherMode::kCtr: {
      std::vector<Block> counters;
      for (std::size_t i = 0; i < (data.size() + kBlock - 1) / kBlock; ++i)
        counters.push_back(inc32(to_block(spec.iv), static_cast<std::uint32_t>(i)));
      res.output = ctr_xor(aes, counters, data);
      break;
    }
    case CipherMode::kCcm: {
      const std::size_t t = spec.tag_length;
      if (enc) {
        const auto mac = ccm_mac(aes, spec, aad, data);
        Bytes padded(kBlock, 0);
        padded.insert(padded.end(), data.begin(), data.end());
        const auto x = ctr_xor(aes, ccm_counters(spec, data.size()), padded);
        res.output.assign(x.begin() + kBlock, x.end());
        for (std::size_t i = 0; i < t; ++i) res.output.push_back(mac[i] ^ x[i]);
      } else {
        if (data.size() < t) throw Error(ErrorCode::kTagMismatch, "input shorter than the tag");
        const ByteView ct = data.first(data.size() - t), tag = data.last(t);
        Bytes padded(kBlock, 0);
        padded.insert(padded.end(), ct.begin(), ct.end());
        const auto x = ctr_xor(aes, ccm_counters(spec, ct.size()), padded);
        const Bytes pt(x.begin() + kBlock, x.end());
        const auto mac = ccm_mac(aes, spec, aad, pt);
        Bytes expect(t);
        for (std::size_t i = 0; i < t; ++i) expect[i] = mac[i] ^ x[i];
        if (!equal_ct(expect, tag)) throw Error(ErrorCode::kTagMismatch, "CCM tag does not verify");
        res.output = pt;
      }
      break;
    }
    case CipherMode::kGcm: {
      const auto g = gcm_setup(aes, spec, res);
      if (enc) {
        auto [ct, ej0] = gcm_ctr(aes, g, data);
        const auto s = gcm_hash(g, aad, ct, res);
        res.output = std::move(ct);
        for (std::size_t i = 0; i < kBlock; ++i) res.output.push_back(ej0[i] ^ s[i]);
      } else {
        if (data.size() < kBlock) throw Error(ErrorCode::kTagMismatch, "input shorter than the tag");
        const ByteView ct = data.first(data.size() - kBlock), tag = data.last(kBlock);
        const auto s = gcm_hash(g, aad, ct, res);
        auto [pt, ej0] = gcm_ctr(aes, g, ct);
        Bytes expect(kBlock);
        for (std::size_t i = 0; i < kBlock; ++i) expect[i] = ej0[i] ^ s[i];
        if (!equal_ct(expect, tag)) throw Error(ErrorCode::kTagMismatch, "GCM tag does not verify");
        res.output = std::move(pt);
      }
      break;
    }
  }
  return res;
}

std::vector<Bytes> cbc_encrypt_chains(ByteView key, std::span<const Bytes> ivs, std::span<const Bytes> messages,
                                      FabricCost* cost) {
  if (ivs.size() != messages.size()) throw Error(ErrorCode::kInvalidArgument, "one IV per message");
  for (const auto& iv : ivs)
    if (iv.size() != 16) throw Error(ErrorCode::kBadIvLength, "CBC needs a 16-byte IV");
  for (const auto& m : messages) require_whole_blocks(m, CipherMode::kCbc);
  ModeResult res;
  AesRunner aes(key, res);
  auto out = aes.chains(ivs, messages);
  if (cost) *cost += res.cost;
  return out;
}

Bytes fabric_output(const KnownAnswerTest& kat, FabricCost* cost) {
  const auto parsed = parse_kat_algorithm(kat.alg);
  if (!parsed) throw Error(ErrorCode::kUnsupportedAlgorithm, kat.alg);
  using K = KatAlgorithm::Kind;
  const auto& info = *parsed;
  FabricCost local;
  Bytes out;
  switch (info.kind) {
    case K::kEcb:
    case K::kCbc:
    case K::kCtr:
    case K::kCcm:
    case K::kGcm: {
      ModeSpec spec;
      spec.variant = info.aes;
      spec.mode = info.kind == K::kEcb   ? CipherMode::kEcb
                  : info.kind == K::kCbc ? CipherMode::kCbc
                  : info.kind == K::kCtr ? CipherMode::kCtr
                  : info.kind == K::kCcm ? CipherMode::kCcm
                                         : CipherMode::kGcm;
      spec.iv = kat.nonce;
      auto r = run_mode(spec, kat.key, kat.msg, kat.aad);
      local += r.cost;
      out = std::move(r.output);
      break;
    }
    case K::kSha3: {
      const Bytes msgs[] = {kat.msg};
      const auto r = sha3_pass(info.sha, msgs);
      local.keccak_passes += 1;
      local.keccak_cycles += r.cycles;
      out = r.digests[0];
      break;
    }
    case K::kHmac: {
      const Bytes keys[] = {kat.key}, msgs[] = {kat.msg};
      const auto r = hmac_pass(info.sha, keys, msgs);
      local.keccak_passes += 1;
      local.keccak_cycles += r.cycles;
      out = r.digests[0];
      break;
    }
    case K::kGhash: {
      if (kat.key.size() != 16) throw Error(ErrorCode::kBadKeyLength, "GHASH key must be 16 bytes");
      ModeResult res;
      const auto g = ghash_on_fabric(to_block(kat.key), kat.msg, res);
      local += res.cost;
      out.assign(g.begin(), g.end());
      break;
    }
  }
  if (cost) *cost += local;
  return out;
}

}  // namespace csram
