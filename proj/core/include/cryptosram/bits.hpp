#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace csram {

inline constexpr std::size_t kRows = 128;
inline constexpr std::size_t kColumns = 256;

// One 256-column subarray row. Column c lives in word c / 64, bit c % 64.
// "Left" means towards higher column indices throughout the project.
class Row {
 public:
  constexpr Row() = default;

  static constexpr Row ones() {
    Row r;
    for (auto& w : r.words_) w = ~std::uint64_t{0};
    return r;
  }

  // Columns [first, first + count) set.
  static Row range(std::size_t first, std::size_t count);

  bool get(std::size_t col) const { return (words_[col >> 6] >> (col & 63)) & 1U; }
  void set(std::size_t col, bool v) {
    const std::uint64_t bit = std::uint64_t{1} << (col & 63);
    if (v)
      words_[col >> 6] |= bit;
    else
      words_[col >> 6] &= ~bit;
  }

  std::uint64_t word(std::size_t i) const { return words_[i]; }
  void set_word(std::size_t i, std::uint64_t v) { words_[i] = v; }

  // Reads/writes `width` (<= 64) consecutive columns starting at `first` as an integer,
  // column `first` being bit 0.
  std::uint64_t field(std::size_t first, std::size_t width) const;
  void set_field(std::size_t first, std::size_t width, std::uint64_t value);

  bool none() const { return (words_[0] | words_[1] | words_[2] | words_[3]) == 0; }
  std::size_t popcount() const;

  Row operator&(const Row& o) const { return combine(o, [](auto a, auto b) { return a & b; }); }
  Row operator|(const Row& o) const { return combine(o, [](auto a, auto b) { return a | b; }); }
  Row operator^(const Row& o) const { return combine(o, [](auto a, auto b) { return a ^ b; }); }
  Row operator~() const {
    Row r;
    for (std::size_t i = 0; i < 4; ++i) r.words_[i] = ~words_[i];
    return r;
  }
  Row& operator&=(const Row& o) { return *this = *this & o; }
  Row& operator|=(const Row& o) { return *this = *this | o; }
  Row& operator^=(const Row& o) { return *this = *this ^ o; }
  bool operator==(const Row&) const = default;

  // Whole-row logical shifts (zero fill), no segmentation.
  Row shifted_left(std::size_t n) const;
  Row shifted_right(std::size_t n) const;

  // Column 255 first, 64 hex digits.
  std::string to_hex() const;
  static Row from_hex(std::string_view hex);

 private:
  template <typename F>
  Row combine(const Row& o, F f) const {
    Row r;
    for (std::size_t i = 0; i < 4; ++i) r.words_[i] = f(words_[i], o.words_[i]);
    return r;
  }

  std::array<std::uint64_t, 4> words_{};
};

// Zero-filled logical shift applied independently to every `width`-column segment.
Row segmented_shift(const Row& row, std::size_t width, std::size_t count, bool left);

// Columns whose offset inside their `width`-column segment equals `offset`.
Row segment_column_mask(std::size_t width, std::size_t offset);

}  // namespace csram
