#include <bit>

#include "cryptosram/error.hpp"
#include "cryptosram/oracle.hpp"

namespace csram {

std::size_t sha3_rate_bytes(Sha3Variant v) { return 200 - 2 * sha3_digest_bytes(v); }

std::size_t sha3_digest_bytes(Sha3Variant v) {
  switch (v) {
    case Sha3Variant::k224: return 28;
    case Sha3Variant::k256: return 32;
    case Sha3Variant::k384: return 48;
    case Sha3Variant::k512: return 64;
  }
  return 0;
}

std::string_view to_string(Sha3Variant v) {
  switch (v) {
    case Sha3Variant::k224: return "SHA3-224";
    case Sha3Variant::k256: return "SHA3-256";
    case Sha3Variant::k384: return "SHA3-384";
    case Sha3Variant::k512: return "SHA3-512";
  }
  return "?";
}

namespace oracle {
namespace {

// rc(t) from the degree-8 LFSR of FIPS 202, algorithm 5.
bool rc_bit(std::size_t t) {
  unsigned r = 1;  // bit i holds R[i]
  for (std::size_t i = 1; i <= t % 255; ++i) {
    r <<= 1;
    if (r & 0x100) r ^= 0x71;  // R[0], R[4], R[5], R[6] ^= R[8]
    r &= 0xff;
  }
  return r & 1;
}

}  // namespace

std::uint64_t keccak_round_constant(std::size_t round) {
  std::uint64_t rc = 0;
  for (std::size_t j = 0; j <= 6; ++j)
    if (rc_bit(j + 7 * round)) rc |= std::uint64_t{1} << ((std::size_t{1} << j) - 1);
  return rc;
}

unsigned keccak_rotation(std::size_t x, std::size_t y) {
  if (x == 0 && y == 0) return 0;
  std::size_t cx = 1, cy = 0;
  for (unsigned t = 0; t < 24; ++t) {
    if (cx == x && cy == y) return ((t + 1) * (t + 2) / 2) % 64;
    const std::size_t nx = cy, ny = (2 * cx + 3 * cy) % 5;
    cx = nx;
    cy = ny;
  }
  return 0;
}

void keccak_theta(KeccakState& a) {
  std::uint64_t c[5], d[5];
  for (std::size_t x = 0; x < 5; ++x) c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
  for (std::size_t x = 0; x < 5; ++x) d[x] = c[(x + 4) % 5] ^ std::rotl(c[(x + 1) % 5], 1);
  for (std::size_t i = 0; i < 25; ++i) a[i] ^= d[i % 5];
}

void keccak_rho(KeccakState& a) {
  for (std::size_t y = 0; y < 5; ++y)
    for (std::size_t x = 0; x < 5; ++x) a[x + 5 * y] = std::rotl(a[x + 5 * y], static_cast<int>(keccak_rotation(x, y)));
}

void keccak_pi(KeccakState& a) {
  const KeccakState t = a;
  for (std::size_t y = 0; y < 5; ++y)
    for (std::size_t x = 0; x < 5; ++x) a[y + 5 * ((2 * x + 3 * y) % 5)] = t[x + 5 * y];
}

void keccak_chi(KeccakState& a) {
  for (std::size_t y = 0; y < 5; ++y) {
    std::uint64_t row[5];
    for (std::size_t x = 0; x < 5; ++x) row[x] = a[x + 5 * y];
    for (std::size_t x = 0; x < 5; ++x) a[x + 5 * y] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5]);
  }
}

void keccak_iota(KeccakState& a, std::size_t round) { a[0] ^= keccak_round_constant(round); }

void keccak_round(KeccakState& a, std::size_t round) {
  keccak_theta(a);
  keccak_rho(a);
  keccak_pi(a);
  keccak_chi(a);
  keccak_iota(a, round);
}

void keccak_f1600(KeccakState& a) {
  for (std::size_t r = 0; r < kKeccakRounds; ++r) keccak_round(a, r);
}

Bytes sha3_pad(Sha3Variant v, ByteView msg) {
  const std::size_t rate = sha3_rate_bytes(v);
  Bytes p(msg.begin(), msg.end());
  p.push_back(0x06);
  while (p.size() % rate) p.push_back(0);
  p.back() |= 0x80;
  return p;
}

Bytes sha3(Sha3Variant v, ByteView msg) {
  const std::size_t rate = sha3_rate_bytes(v);
  const Bytes padded = sha3_pad(v, msg);
  KeccakState s{};
  for (std::size_t off = 0; off < padded.size(); off += rate) {
    for (std::size_t i = 0; i < rate; ++i)
      s[i / 8] ^= std::uint64_t{padded[off + i]} << (8 * (i % 8));
    keccak_f1600(s);
  }
  Bytes out(sha3_digest_bytes(v));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint8_t>(s[i / 8] >> (8 * (i % 8)));
  return out;
}

Bytes hmac_sha3(Sha3Variant v, ByteView key, ByteView msg) {
  const std::size_t rate = sha3_rate_bytes(v);
  Bytes k = key.size() > rate ? sha3(v, key) : Bytes(key.begin(), key.end());
  k.resize(rate, 0);
  Bytes inner(k), outer(k);
  for (auto& b : inner) b ^= 0x36;
  for (auto& b : outer) b ^= 0x5c;
  inner.insert(inner.end(), msg.begin(), msg.end());
  const Bytes ih = sha3(v, inner);
  outer.insert(outer.end(), ih.begin(), ih.end());
  return sha3(v, outer);
}

}  // namespace oracle
}  // namespace csram
