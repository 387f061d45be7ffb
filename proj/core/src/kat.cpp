#include <fstream>
#include <sstream>

#include "cryptosram/error.hpp"
#include "cryptosram/oracle.hpp"

namespace csram {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::optional<KatAlgorithm> parse_kat_algorithm(std::string_view alg) {
  using K = KatAlgorithm::Kind;
  KatAlgorithm info{};
  if (alg == "GHASH") {
    info.kind = K::kGhash;
    return info;
  }
  for (auto v : {Sha3Variant::k224, Sha3Variant::k256, Sha3Variant::k384, Sha3Variant::k512}) {
    if (alg == to_string(v)) return KatAlgorithm{K::kSha3, {}, v};
    if (alg.starts_with("HMAC-") && alg.substr(5) == to_string(v)) return KatAlgorithm{K::kHmac, {}, v};
  }
  for (auto v : {AesVariant::k128, AesVariant::k256}) {
    const auto base = to_string(v);
    if (!alg.starts_with(base)) continue;
    const auto rest = alg.substr(base.size());
    info.aes = v;
    if (rest.empty()) info.kind = K::kEcb;
    else if (rest == "-CBC") info.kind = K::kCbc;
    else if (rest == "-CTR") info.kind = K::kCtr;
    else if (rest == "-CCM") info.kind = K::kCcm;
    else if (rest == "-GCM") info.kind = K::kGcm;
    else return std::nullopt;
    return info;
  }
  return std::nullopt;
}

bool is_supported_kat_algorithm(std::string_view alg) {
  return parse_kat_algorithm(alg).has_value();
}

std::vector<KnownAnswerTest> parse_kat(std::string_view text) {
  std::vector<KnownAnswerTest> out;
  KnownAnswerTest cur;
  bool open = false;
  auto flush = [&](std::size_t line) {
    if (!open) return;
    if (cur.alg.empty()) throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": block without Alg=");
    out.push_back(std::move(cur));
    cur = {};
    open = false;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string_view line = trim(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) {
      if (trim(raw).empty()) flush(line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected Field=value");
    const auto field = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!open) cur.line = line_no;
    open = true;
    try {
      if (field == "Alg") {
        if (!is_supported_kat_algorithm(value))
          throw Error(ErrorCode::kUnsupportedAlgorithm, "line " + std::to_string(line_no) + ": '" +
                                                           std::string(value) + "'");
        cur.alg = value;
      } else if (field == "Key") {
        cur.key = from_hex(value);
      } else if (field == "Nonce") {
        cur.nonce = from_hex(value);
      } else if (field == "AAD") {
        cur.aad = from_hex(value);
      } else if (field == "Msg") {
        cur.msg = from_hex(value);
      } else if (field == "Out") {
        cur.out = from_hex(value);
      } else {
        throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": unknown field '" +
                                                std::string(field) + "'");
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kParseError || std::string_view(e.what()).find("line ") != std::string_view::npos)
        throw;
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  flush(line_no);
  return out;
}

std::vector<KnownAnswerTest> load_kat(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_kat(ss.str());
}

std::string format_kat(const std::vector<KnownAnswerTest>& kats) {
  std::string s;
  for (std::size_t i = 0; i < kats.size(); ++i) {
    const auto& k = kats[i];
    if (i) s += '\n';
    s += "Alg=" + k.alg + '\n';
    if (!k.key.empty()) s += "Key=" + to_hex(k.key) + '\n';
    if (!k.nonce.empty()) s += "Nonce=" + to_hex(k.nonce) + '\n';
    if (!k.aad.empty()) s += "AAD=" + to_hex(k.aad) + '\n';
    s += "Msg=" + to_hex(k.msg) + '\n';
    s += "Out=" + to_hex(k.out) + '\n';
  }
  return s;
}

Bytes oracle_output(const KnownAnswerTest& kat) {
  const auto parsed = parse_kat_algorithm(kat.alg);
  if (!parsed) throw Error(ErrorCode::kUnsupportedAlgorithm, kat.alg);
  const auto& info = *parsed;
  using K = KatAlgorithm::Kind;
  switch (info.kind) {
    case K::kEcb: {
      if (kat.msg.size() % 16) throw Error(ErrorCode::kInvalidArgument, "ECB message is not whole blocks");
      Bytes out;
      for (std::size_t off = 0; off < kat.msg.size(); off += 16) {
        Block b;
        std::copy_n(kat.msg.begin() + static_cast<std::ptrdiff_t>(off), 16, b.begin());
        const auto c = oracle::aes_encrypt_block(kat.key, b);
        out.insert(out.end(), c.begin(), c.end());
      }
      return out;
    }
    case K::kCbc: return oracle::cbc_encrypt(kat.key, kat.nonce, kat.msg);
    case K::kCtr: {
      if (kat.nonce.size() != 16) throw Error(ErrorCode::kBadIvLength, "CTR needs a 16-byte counter block");
      Block c;
      std::copy_n(kat.nonce.begin(), 16, c.begin());
      return oracle::ctr_crypt(kat.key, c, kat.msg);
    }
    case K::kCcm: {
      const auto r = oracle::ccm_encrypt(kat.key, kat.nonce, kat.aad, kat.msg);
      return concat(r.ciphertext, r.tag);
    }
    case K::kGcm: {
      const auto r = oracle::gcm_encrypt(kat.key, kat.nonce, kat.aad, kat.msg);
      return concat(r.ciphertext, r.tag);
    }
    case K::kSha3: return oracle::sha3(info.sha, kat.msg);
    case K::kHmac: return oracle::hmac_sha3(info.sha, kat.key, kat.msg);
    case K::kGhash: {
      if (kat.key.size() != 16) throw Error(ErrorCode::kBadKeyLength, "GHASH key must be 16 bytes");
      Block h;
      std::copy_n(kat.key.begin(), 16, h.begin());
      const auto g = oracle::ghash(h, kat.msg);
      return Bytes(g.begin(), g.end());
    }
  }
  return {};
}

}  // namespace csram
