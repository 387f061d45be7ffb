#include "cryptosram/bits.hpp"

#include <bit>
#include <stdexcept>

namespace csram {

Row Row::range(std::size_t first, std::size_t count) {
  Row r;
  for (std::size_t c = first; c < first + count && c < kColumns; ++c) r.set(c, true);
  return r;
}

std::uint64_t Row::field(std::size_t first, std::size_t width) const {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v |= std::uint64_t{get(first + i)} << i;
  return v;
}

void Row::set_field(std::size_t first, std::size_t width, std::uint64_t value) {
  for (std::size_t i = 0; i < width; ++i) set(first + i, (value >> i) & 1U);
}

std::size_t Row::popcount() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

Row Row::shifted_left(std::size_t n) const {
  Row r;
  if (n >= kColumns) return r;
  const std::size_t ws = n / 64, bs = n % 64;
  for (std::size_t i = 3 + 1; i-- > ws;) {
    std::uint64_t v = words_[i - ws] << bs;
    if (bs != 0 && i - ws >= 1) v |= words_[i - ws - 1] >> (64 - bs);
    r.words_[i] = v;
  }
  return r;
}

Row Row::shifted_right(std::size_t n) const {
  Row r;
  if (n >= kColumns) return r;
  const std::size_t ws = n / 64, bs = n % 64;
  for (std::size_t i = 0; i + ws < 4; ++i) {
    std::uint64_t v = words_[i + ws] >> bs;
    if (bs != 0 && i + ws + 1 < 4) v |= words_[i + ws + 1] << (64 - bs);
    r.words_[i] = v;
  }
  return r;
}

std::string Row::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (std::size_t i = 4; i-- > 0;)
    for (int nib = 15; nib >= 0; --nib) s.push_back(kDigits[(words_[i] >> (nib * 4)) & 0xF]);
  return s;
}

Row Row::from_hex(std::string_view hex) {
  if (hex.size() != 64) throw std::invalid_argument("row hex must be 64 digits");
  Row r;
  for (std::size_t k = 0; k < 64; ++k) {
    const char c = hex[k];
    std::uint64_t d;
    if (c >= '0' && c <= '9')
      d = static_cast<std::uint64_t>(c - '0');
    else if (c >= 'a' && c <= 'f')
      d = static_cast<std::uint64_t>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F')
      d = static_cast<std::uint64_t>(c - 'A' + 10);
    else
      throw std::invalid_argument("bad hex digit in row");
    const std::size_t nib = 63 - k;
    r.words_[nib / 16] |= d << ((nib % 16) * 4);
  }
  return r;
}

namespace {

// keep[c] = 1 when column c still receives a bit from inside its own segment.
Row shift_keep_mask(std::size_t width, std::size_t count, bool left) {
  Row m;
  for (std::size_t c = 0; c < kColumns; ++c) {
    const std::size_t off = c % width;
    m.set(c, left ? off >= count : off + count < width);
  }
  return m;
}

struct ShiftMasks {
  // widths 16,32,64,128,256 -> index 0..4; counts 0..256.
  std::array<std::array<Row, kColumns + 1>, 5> left{}, right{};
  ShiftMasks() {
    for (std::size_t wi = 0; wi < 5; ++wi) {
      const std::size_t w = std::size_t{16} << wi;
      for (std::size_t n = 0; n <= kColumns; ++n) {
        left[wi][n] = shift_keep_mask(w, n, true);
        right[wi][n] = shift_keep_mask(w, n, false);
      }
    }
  }
};

std::size_t width_index(std::size_t width) {
  switch (width) {
    case 16: return 0;
    case 32: return 1;
    case 64: return 2;
    case 128: return 3;
    case 256: return 4;
    default: throw std::invalid_argument("unsupported segment width");
  }
}

}  // namespace

Row segmented_shift(const Row& row, std::size_t width, std::size_t count, bool left) {
  static const ShiftMasks masks;
  const std::size_t wi = width_index(width);
  if (count >= width) return Row{};
  if (left) return row.shifted_left(count) & masks.left[wi][count];
  return row.shifted_right(count) & masks.right[wi][count];
}

Row segment_column_mask(std::size_t width, std::size_t offset) {
  Row m;
  for (std::size_t c = offset; c < kColumns; c += width) m.set(c, true);
  return m;
}

}  // namespace csram
