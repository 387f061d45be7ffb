#include "cryptosram/error.hpp"
#include "cryptosram/oracle.hpp"

namespace csram::oracle {
namespace {

Block load_block(ByteView data, std::size_t off) {
  Block b{};
  for (std::size_t i = 0; i < 16 && off + i < data.size(); ++i) b[i] = data[off + i];
  return b;
}

// Coefficient i of the GCM polynomial is bit 7 - i % 8 of byte i / 8.
struct Poly128 {
  std::uint64_t lo = 0, hi = 0;  // coefficient i at bit i of (hi:lo)
};

Poly128 to_poly(const Block& b) {
  Poly128 p;
  for (std::size_t i = 0; i < 128; ++i)
    if ((b[i / 8] >> (7 - i % 8)) & 1) (i < 64 ? p.lo : p.hi) |= std::uint64_t{1} << (i % 64);
  return p;
}

Block from_poly(const Poly128& p) {
  Block b{};
  for (std::size_t i = 0; i < 128; ++i)
    if (((i < 64 ? p.lo : p.hi) >> (i % 64)) & 1) b[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
  return b;
}

void clmul64(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) {
  lo = hi = 0;
  for (unsigned i = 0; i < 64; ++i)
    if ((b >> i) & 1) {
      lo ^= a << i;
      if (i) hi ^= a >> (64 - i);
    }
}

void check_iv(ByteView iv, std::size_t expect) {
  if (iv.size() != expect) throw Error(ErrorCode::kBadIvLength, std::to_string(iv.size()) + "-byte IV");
}

void check_blocks(ByteView data) {
  if (data.size() % 16) throw Error(ErrorCode::kInvalidArgument, "data is not a whole number of blocks");
}

bool equal_ct(ByteView a, ByteView b) {
  if (a.size() != b.size()) return false;
  std::uint8_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d |= a[i] ^ b[i];
  return d == 0;
}

}  // namespace

Block gf128_mul(const Block& x, const Block& y) {
  Block z{}, v = y;
  for (std::size_t i = 0; i < 128; ++i) {
    if ((x[i / 8] >> (7 - i % 8)) & 1)
      for (std::size_t k = 0; k < 16; ++k) z[k] ^= v[k];
    const bool lsb = v[15] & 1;
    for (std::size_t k = 16; k-- > 1;) v[k] = static_cast<std::uint8_t>((v[k] >> 1) | (v[k - 1] << 7));
    v[0] >>= 1;
    if (lsb) v[0] ^= 0xe1;
  }
  return z;
}

Block gf128_mul_clmul(const Block& x, const Block& y) {
  const Poly128 a = to_poly(x), b = to_poly(y);
  std::uint64_t r[4] = {0, 0, 0, 0};
  std::uint64_t lo, hi;
  clmul64(a.lo, b.lo, lo, hi);
  r[0] ^= lo, r[1] ^= hi;
  clmul64(a.lo, b.hi, lo, hi);
  r[1] ^= lo, r[2] ^= hi;
  clmul64(a.hi, b.lo, lo, hi);
  r[1] ^= lo, r[2] ^= hi;
  clmul64(a.hi, b.hi, lo, hi);
  r[2] ^= lo, r[3] ^= hi;
  // x^128 = x^7 + x^2 + x + 1, folded from the top word down.
  for (int w = 3; w >= 2; --w) {
    const std::uint64_t t = r[w];
    r[w] = 0;
    r[w - 2] ^= t ^ (t << 1) ^ (t << 2) ^ (t << 7);
    r[w - 1] ^= (t >> 63) ^ (t >> 62) ^ (t >> 57);
  }
  return from_poly({r[0], r[1]});
}

Block ghash(const Block& h, ByteView data) {
  Block y{};
  for (std::size_t off = 0; off < data.size(); off += 16) {
    const Block x = load_block(data, off);
    for (std::size_t k = 0; k < 16; ++k) y[k] ^= x[k];
    y = gf128_mul(y, h);
  }
  return y;
}

Bytes cbc_encrypt(ByteView key, ByteView iv, ByteView pt) {
  check_iv(iv, 16);
  check_blocks(pt);
  Bytes out(pt.size());
  Block chain = load_block(iv, 0);
  for (std::size_t off = 0; off < pt.size(); off += 16) {
    Block b = load_block(pt, off);
    for (std::size_t k = 0; k < 16; ++k) b[k] ^= chain[k];
    chain = aes_encrypt_block(key, b);
    std::copy(chain.begin(), chain.end(), out.begin() + static_cast<std::ptrdiff_t>(off));
  }
  return out;
}

Bytes cbc_decrypt(ByteView key, ByteView iv, ByteView ct) {
  check_iv(iv, 16);
  check_blocks(ct);
  Bytes out(ct.size());
  Block chain = load_block(iv, 0);
  for (std::size_t off = 0; off < ct.size(); off += 16) {
    const Block c = load_block(ct, off);
    Block p = aes_decrypt_block(key, c);
    for (std::size_t k = 0; k < 16; ++k) out[off + k] = p[k] ^ chain[k];
    chain = c;
  }
  return out;
}

Block ctr_increment(const Block& counter, std::uint32_t by) {
  Block c = counter;
  std::uint32_t v = (std::uint32_t{c[12]} << 24) | (std::uint32_t{c[13]} << 16) | (std::uint32_t{c[14]} << 8) | c[15];
  v += by;
  c[12] = static_cast<std::uint8_t>(v >> 24);
  c[13] = static_cast<std::uint8_t>(v >> 16);
  c[14] = static_cast<std::uint8_t>(v >> 8);
  c[15] = static_cast<std::uint8_t>(v);
  return c;
}

Bytes ctr_crypt(ByteView key, const Block& counter0, ByteView data) {
  Bytes out(data.begin(), data.end());
  Block ctr = counter0;
  for (std::size_t off = 0; off < data.size(); off += 16) {
    const Block ks = aes_encrypt_block(key, ctr);
    for (std::size_t k = 0; k < 16 && off + k < data.size(); ++k) out[off + k] ^= ks[k];
    ctr = ctr_increment(ctr);
  }
  return out;
}

namespace {

struct CcmParts {
  Bytes mac_input;  // B0 || encoded AAD || padded payload
  Block ctr0;
};

CcmParts ccm_format(ByteView nonce, ByteView aad, ByteView payload, std::size_t tag_len) {
  if (nonce.size() < 7 || nonce.size() > 13)
    throw Error(ErrorCode::kBadIvLength, std::to_string(nonce.size()) + "-byte CCM nonce");
  if (tag_len < 4 || tag_len > 16 || tag_len % 2)
    throw Error(ErrorCode::kInvalidArgument, "CCM tag length " + std::to_string(tag_len));
  const std::size_t q = 15 - nonce.size();
  CcmParts parts;
  Block b0{};
  b0[0] = static_cast<std::uint8_t>((aad.empty() ? 0 : 0x40) | ((tag_len - 2) / 2) << 3 | (q - 1));
  std::copy(nonce.begin(), nonce.end(), b0.begin() + 1);
  std::uint64_t len = payload.size();
  for (std::size_t i = 0; i < q; ++i, len >>= 8) b0[15 - i] = static_cast<std::uint8_t>(len);
  parts.mac_input.assign(b0.begin(), b0.end());
  if (!aad.empty()) {
    Bytes enc;
    if (aad.size() < 0xff00) {
      enc = {static_cast<std::uint8_t>(aad.size() >> 8), static_cast<std::uint8_t>(aad.size())};
    } else {
      enc = {0xff, 0xfe};
      for (int s = 24; s >= 0; s -= 8) enc.push_back(static_cast<std::uint8_t>(aad.size() >> s));
    }
    enc.insert(enc.end(), aad.begin(), aad.end());
    while (enc.size() % 16) enc.push_back(0);
    parts.mac_input.insert(parts.mac_input.end(), enc.begin(), enc.end());
  }
  parts.mac_input.insert(parts.mac_input.end(), payload.begin(), payload.end());
  while (parts.mac_input.size() % 16) parts.mac_input.push_back(0);
  parts.ctr0 = Block{};
  parts.ctr0[0] = static_cast<std::uint8_t>(q - 1);
  std::copy(nonce.begin(), nonce.end(), parts.ctr0.begin() + 1);
  return parts;
}

Bytes cbc_mac(ByteView key, ByteView data, std::size_t tag_len) {
  Block y{};
  for (std::size_t off = 0; off < data.size(); off += 16) {
    for (std::size_t k = 0; k < 16; ++k) y[k] ^= data[off + k];
    y = aes_encrypt_block(key, y);
  }
  return Bytes(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(tag_len));
}

Block gcm_j0(ByteView key, ByteView iv, Block& h) {
  if (iv.empty()) throw Error(ErrorCode::kBadIvLength, "empty GCM IV");
  h = aes_encrypt_block(key, Block{});
  Block j0{};
  if (iv.size() == 12) {
    std::copy(iv.begin(), iv.end(), j0.begin());
    j0[15] = 1;
    return j0;
  }
  Bytes s(iv.begin(), iv.end());
  while (s.size() % 16) s.push_back(0);
  s.resize(s.size() + 8, 0);
  const std::uint64_t bits = std::uint64_t{iv.size()} * 8;
  for (int i = 7; i >= 0; --i) s.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  return ghash(h, s);
}

Bytes gcm_tag(ByteView key, const Block& h, const Block& j0, ByteView aad, ByteView ct) {
  Bytes s(aad.begin(), aad.end());
  while (s.size() % 16) s.push_back(0);
  s.insert(s.end(), ct.begin(), ct.end());
  while (s.size() % 16) s.push_back(0);
  for (std::uint64_t bits : {std::uint64_t{aad.size()} * 8, std::uint64_t{ct.size()} * 8})
    for (int i = 7; i >= 0; --i) s.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  const Block g = ghash(h, s);
  const Block e = aes_encrypt_block(key, j0);
  Bytes tag(16);
  for (std::size_t k = 0; k < 16; ++k) tag[k] = g[k] ^ e[k];
  return tag;
}

}  // namespace

AeadResult ccm_encrypt(ByteView key, ByteView nonce, ByteView aad, ByteView pt, std::size_t tag_len) {
  const auto parts = ccm_format(nonce, aad, pt, tag_len);
  Bytes t = cbc_mac(key, parts.mac_input, tag_len);
  const Block s0 = aes_encrypt_block(key, parts.ctr0);
  for (std::size_t k = 0; k < tag_len; ++k) t[k] ^= s0[k];
  return {ctr_crypt(key, ctr_increment(parts.ctr0), pt), t};
}

Bytes ccm_decrypt(ByteView key, ByteView nonce, ByteView aad, ByteView ct, ByteView tag) {
  const auto probe = ccm_format(nonce, aad, ct, tag.size());
  const Bytes pt = ctr_crypt(key, ctr_increment(probe.ctr0), ct);
  const auto expect = ccm_encrypt(key, nonce, aad, pt, tag.size());
  if (!equal_ct(expect.tag, tag)) throw Error(ErrorCode::kTagMismatch, "CCM tag mismatch");
  return pt;
}

AeadResult gcm_encrypt(ByteView key, ByteView iv, ByteView aad, ByteView pt) {
  Block h;
  const Block j0 = gcm_j0(key, iv, h);
  AeadResult r;
  r.ciphertext = ctr_crypt(key, ctr_increment(j0), pt);
  r.tag = gcm_tag(key, h, j0, aad, r.ciphertext);
  return r;
}

Bytes gcm_decrypt(ByteView key, ByteView iv, ByteView aad, ByteView ct, ByteView tag) {
  Block h;
  const Block j0 = gcm_j0(key, iv, h);
  if (!equal_ct(gcm_tag(key, h, j0, aad, ct), tag)) throw Error(ErrorCode::kTagMismatch, "GCM tag mismatch");
  return ctr_crypt(key, ctr_increment(j0), ct);
}

}  // namespace csram::oracle
