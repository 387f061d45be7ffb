#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csram {

// The six in-SRAM control commands. Values are the 4-bit opcodes.
enum class Opcode : std::uint8_t {
  kRdRow = 0b0001,
  kWrRow = 0b0010,
  kShift = 0b0011,
  kActRow = 0b1011,
  kLogicOp = 0b1001,
  kExtBit = 0b1111,
};

enum class LogicOpKind : std::uint8_t { kAnd = 0b00, kOr = 0b01, kXor = 0b10, kNot = 0b11 };

enum class ShiftDirection : std::uint8_t { kLeft = 0, kRight = 1 };

// Computing-block widths addressable by ext_bit, as their 3-bit codes.
enum class BlockWidthCode : std::uint8_t { k16 = 0, k32, k64, k128, k256, k512 };

std::size_t width_columns(BlockWidthCode code);
// Throws kOperandOutOfRange for widths that have no code.
BlockWidthCode width_code(std::size_t columns);

std::string_view mnemonic(Opcode op);
std::string_view to_string(LogicOpKind kind);

/// One 16-bit command: opcode in bits 15..12, index in 11..4, option in 3..0.
///
/// Option bits per opcode:
///   rd_row / wr_row  bit 3 routes through the sense-amplifier latch (1) or the data bus (0)
///   shift            bit 3 valid, bit 2 direction (0 left, 1 right); index is the step count
///   act_row          bit 0 arms dual-wordline activation
///   logic_op         bits 2..1 select the LogicOpKind
///   ext_bit          bits 3..1 hold the BlockWidthCode; index is the column
/// Remaining bits are don't-care and survive encode/decode untouched.
struct CommandWord {
  Opcode opcode{Opcode::kRdRow};
  std::uint8_t index{0};
  std::uint8_t option{0};

  bool operator==(const CommandWord&) const = default;

  bool routes_through_sa() const { return (option & 0b1000) != 0; }
  bool shift_valid() const { return (option & 0b1000) != 0; }
  ShiftDirection shift_direction() const {
    return (option & 0b0100) ? ShiftDirection::kRight : ShiftDirection::kLeft;
  }
  bool arms_activation() const { return (option & 0b0001) != 0; }
  LogicOpKind logic_kind() const { return static_cast<LogicOpKind>((option >> 1) & 0b11); }
  BlockWidthCode width() const { return static_cast<BlockWidthCode>((option >> 1) & 0b111); }
};

// Canonical constructors.
CommandWord rd_row(std::uint8_t row, bool to_sa = true);
CommandWord wr_row(std::uint8_t row, bool from_sa = true);
CommandWord shift(std::uint8_t count, ShiftDirection dir);
CommandWord act_row(std::uint8_t row);
CommandWord logic_op(std::uint8_t row, LogicOpKind kind);
CommandWord ext_bit(std::uint8_t col, BlockWidthCode width);

std::uint16_t encode(const CommandWord& cmd);
// Throws kInvalidOpcode for the ten unassigned opcodes.
CommandWord decode(std::uint16_t word);
bool is_valid_opcode(std::uint8_t opcode);

// Raw binary streams: big-endian 16-bit words.
std::vector<std::uint8_t> to_binary(std::span<const CommandWord> cmds);
std::vector<CommandWord> from_binary(std::span<const std::uint8_t> bytes);

// Assembly listing, one command per line:
//   .row <label> = <n>           declares a symbolic row (header)
//   rd_row <row>[, sa|bus]       wr_row <row>[, sa|bus]
//   shift <n>, left|right        act_row <row>
//   logic_op <row>, and|or|xor|not
//   ext_bit <col>, <width>
// Any command may instead carry an explicit `opt=0bXXXX` option; disassembly uses it
// whenever the option has don't-care bits set. `#` starts a comment.
std::vector<CommandWord> assemble(std::string_view text);
std::vector<CommandWord> assemble(std::string_view text, std::map<std::string, int>& labels);
std::string disassemble(std::span<const CommandWord> cmds);
std::string disassemble_one(const CommandWord& cmd);

}  // namespace csram
