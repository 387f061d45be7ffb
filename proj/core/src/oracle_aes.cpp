#include <array>

#include "cryptosram/error.hpp"
#include "cryptosram/oracle.hpp"

namespace csram {

std::size_t aes_key_bytes(AesVariant v) { return v == AesVariant::k128 ? 16 : 32; }
std::size_t aes_rounds(AesVariant v) { return v == AesVariant::k128 ? 10 : 14; }
std::string_view to_string(AesVariant v) { return v == AesVariant::k128 ? "AES-128" : "AES-256"; }

namespace oracle {
namespace {

constexpr std::array<std::uint8_t, 256> kSbox = {
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
};

constexpr std::array<std::uint8_t, 256> make_inverse() {
  std::array<std::uint8_t, 256> inv{};
  for (std::size_t i = 0; i < 256; ++i) inv[kSbox[i]] = static_cast<std::uint8_t>(i);
  return inv;
}
constexpr auto kInvSbox = make_inverse();

std::uint8_t xtime(std::uint8_t a) { return static_cast<std::uint8_t>((a << 1) ^ ((a & 0x80) ? 0x1b : 0)); }

std::uint8_t gmul(std::uint8_t a, std::uint8_t b) {
  std::uint8_t r = 0;
  while (b) {
    if (b & 1) r ^= a;
    a = xtime(a);
    b >>= 1;
  }
  return r;
}

void add_round_key(Block& s, const Block& k) {
  for (std::size_t i = 0; i < 16; ++i) s[i] ^= k[i];
}

// State byte i is row i % 4, column i / 4.
void shift_rows(Block& s, bool inverse) {
  Block t = s;
  for (std::size_t r = 1; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      const std::size_t src = inverse ? (c + 4 - r) % 4 : (c + r) % 4;
      s[4 * c + r] = t[4 * src + r];
    }
}

void mix_columns(Block& s, bool inverse) {
  const std::uint8_t m[4] = {static_cast<std::uint8_t>(inverse ? 0x0e : 0x02),
                             static_cast<std::uint8_t>(inverse ? 0x0b : 0x03),
                             static_cast<std::uint8_t>(inverse ? 0x0d : 0x01),
                             static_cast<std::uint8_t>(inverse ? 0x09 : 0x01)};
  for (std::size_t c = 0; c < 4; ++c) {
    std::uint8_t col[4];
    for (std::size_t r = 0; r < 4; ++r) col[r] = s[4 * c + r];
    for (std::size_t r = 0; r < 4; ++r)
      s[4 * c + r] = gmul(col[r], m[0]) ^ gmul(col[(r + 1) % 4], m[1]) ^ gmul(col[(r + 2) % 4], m[2]) ^
                     gmul(col[(r + 3) % 4], m[3]);
  }
}

}  // namespace

std::uint8_t aes_sbox(std::uint8_t x) { return kSbox[x]; }
std::uint8_t aes_inv_sbox(std::uint8_t x) { return kInvSbox[x]; }

std::vector<Block> aes_expand_key(ByteView key) {
  if (key.size() != 16 && key.size() != 32)
    throw Error(ErrorCode::kBadKeyLength, std::to_string(key.size()) + "-byte AES key");
  const std::size_t nk = key.size() / 4, rounds = nk + 6, total = 4 * (rounds + 1);
  std::vector<std::array<std::uint8_t, 4>> w(total);
  for (std::size_t i = 0; i < nk; ++i)
    for (std::size_t b = 0; b < 4; ++b) w[i][b] = key[4 * i + b];
  std::uint8_t rcon = 1;
  for (std::size_t i = nk; i < total; ++i) {
    auto t = w[i - 1];
    if (i % nk == 0) {
      t = {static_cast<std::uint8_t>(kSbox[t[1]] ^ rcon), kSbox[t[2]], kSbox[t[3]], kSbox[t[0]]};
      rcon = xtime(rcon);
    } else if (nk > 6 && i % nk == 4) {
      for (auto& b : t) b = kSbox[b];
    }
    for (std::size_t b = 0; b < 4; ++b) w[i][b] = w[i - nk][b] ^ t[b];
  }
  std::vector<Block> rk(rounds + 1);
  for (std::size_t r = 0; r <= rounds; ++r)
    for (std::size_t i = 0; i < 16; ++i) rk[r][i] = w[4 * r + i / 4][i % 4];
  return rk;
}

Block aes_encrypt_block(ByteView key, const Block& in) {
  const auto rk = aes_expand_key(key);
  const std::size_t rounds = rk.size() - 1;
  Block s = in;
  add_round_key(s, rk[0]);
  for (std::size_t r = 1; r <= rounds; ++r) {
    for (auto& b : s) b = kSbox[b];
    shift_rows(s, false);
    if (r != rounds) mix_columns(s, false);
    add_round_key(s, rk[r]);
  }
  return s;
}

Block aes_decrypt_block(ByteView key, const Block& in) {
  const auto rk = aes_expand_key(key);
  const std::size_t rounds = rk.size() - 1;
  Block s = in;
  add_round_key(s, rk[rounds]);
  for (std::size_t r = rounds; r-- > 0;) {
    shift_rows(s, true);
    for (auto& b : s) b = kInvSbox[b];
    add_round_key(s, rk[r]);
    if (r != 0) mix_columns(s, true);
  }
  return s;
}

}  // namespace oracle
}  // namespace csram
