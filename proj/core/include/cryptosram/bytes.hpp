#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csram {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Lowercase hex. from_hex accepts upper/lower case and ignores whitespace;
// odd digit counts or stray characters raise kParseError.
std::string to_hex(ByteView bytes);
Bytes from_hex(std::string_view hex);

Bytes concat(ByteView a, ByteView b);
void xor_into(std::span<std::uint8_t> dst, ByteView src);

}  // namespace csram
