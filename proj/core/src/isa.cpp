#include "cryptosram/isa.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>

#include "cryptosram/error.hpp"

namespace csram {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidOpcode: return "InvalidOpcode";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kUnknownMnemonic: return "UnknownMnemonic";
    case ErrorCode::kOperandOutOfRange: return "OperandOutOfRange";
    case ErrorCode::kRowOutOfRange: return "RowOutOfRange";
    case ErrorCode::kColumnOutOfRange: return "ColumnOutOfRange";
    case ErrorCode::kPendingActivation: return "PendingActivation";
    case ErrorCode::kBlockWidthMismatch: return "BlockWidthMismatch";
    case ErrorCode::kCapacityExceeded: return "CapacityExceeded";
    case ErrorCode::kUndefinedFunction: return "UndefinedFunction";
    case ErrorCode::kWidthMismatch: return "WidthMismatch";
    case ErrorCode::kStrideOutOfRange: return "StrideOutOfRange";
    case ErrorCode::kTempBudgetExceeded: return "TempBudgetExceeded";
    case ErrorCode::kBadKeyLength: return "BadKeyLength";
    case ErrorCode::kBadIvLength: return "BadIVLength";
    case ErrorCode::kTagMismatch: return "TagMismatch";
    case ErrorCode::kUnsupportedAlgorithm: return "UnsupportedAlgorithm";
    case ErrorCode::kMissingBinding: return "MissingBinding";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

std::size_t width_columns(BlockWidthCode code) {
  return std::size_t{16} << static_cast<unsigned>(code);
}

BlockWidthCode width_code(std::size_t columns) {
  for (std::uint8_t c = 0; c <= 5; ++c)
    if (width_columns(static_cast<BlockWidthCode>(c)) == columns) return static_cast<BlockWidthCode>(c);
  throw Error(ErrorCode::kOperandOutOfRange, "no block-width code for " + std::to_string(columns));
}

std::string_view mnemonic(Opcode op) {
  switch (op) {
    case Opcode::kRdRow: return "rd_row";
    case Opcode::kWrRow: return "wr_row";
    case Opcode::kShift: return "shift";
    case Opcode::kActRow: return "act_row";
    case Opcode::kLogicOp: return "logic_op";
    case Opcode::kExtBit: return "ext_bit";
  }
  return "?";
}

std::string_view to_string(LogicOpKind kind) {
  switch (kind) {
    case LogicOpKind::kAnd: return "and";
    case LogicOpKind::kOr: return "or";
    case LogicOpKind::kXor: return "xor";
    case LogicOpKind::kNot: return "not";
  }
  return "?";
}

CommandWord rd_row(std::uint8_t row, bool to_sa) {
  return {Opcode::kRdRow, row, static_cast<std::uint8_t>(to_sa ? 0b1000 : 0)};
}
CommandWord wr_row(std::uint8_t row, bool from_sa) {
  return {Opcode::kWrRow, row, static_cast<std::uint8_t>(from_sa ? 0b1000 : 0)};
}
CommandWord shift(std::uint8_t count, ShiftDirection dir) {
  return {Opcode::kShift, count,
          static_cast<std::uint8_t>(0b1000 | (dir == ShiftDirection::kRight ? 0b0100 : 0))};
}
CommandWord act_row(std::uint8_t row) { return {Opcode::kActRow, row, 0b0001}; }
CommandWord logic_op(std::uint8_t row, LogicOpKind kind) {
  return {Opcode::kLogicOp, row, static_cast<std::uint8_t>(static_cast<unsigned>(kind) << 1)};
}
CommandWord ext_bit(std::uint8_t col, BlockWidthCode width) {
  return {Opcode::kExtBit, col, static_cast<std::uint8_t>(static_cast<unsigned>(width) << 1)};
}

bool is_valid_opcode(std::uint8_t opcode) {
  switch (opcode) {
    case 0b0001:
    case 0b0010:
    case 0b0011:
    case 0b1011:
    case 0b1001:
    case 0b1111:
      return true;
    default:
      return false;
  }
}

std::uint16_t encode(const CommandWord& cmd) {
  return static_cast<std::uint16_t>((static_cast<unsigned>(cmd.opcode) << 12) |
                                    (static_cast<unsigned>(cmd.index) << 4) | (cmd.option & 0xF));
}

CommandWord decode(std::uint16_t word) {
  const auto op = static_cast<std::uint8_t>(word >> 12);
  if (!is_valid_opcode(op)) {
    std::ostringstream os;
    os << "opcode " << static_cast<int>(op) << " in word 0x" << std::hex << word;
    throw Error(ErrorCode::kInvalidOpcode, os.str());
  }
  return {static_cast<Opcode>(op), static_cast<std::uint8_t>((word >> 4) & 0xFF),
          static_cast<std::uint8_t>(word & 0xF)};
}

std::vector<std::uint8_t> to_binary(std::span<const CommandWord> cmds) {
  std::vector<std::uint8_t> out;
  out.reserve(cmds.size() * 2);
  for (const auto& c : cmds) {
    const auto w = encode(c);
    out.push_back(static_cast<std::uint8_t>(w >> 8));
    out.push_back(static_cast<std::uint8_t>(w & 0xFF));
  }
  return out;
}

std::vector<CommandWord> from_binary(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 2 != 0) throw Error(ErrorCode::kParseError, "odd byte count in command stream");
  std::vector<CommandWord> out;
  out.reserve(bytes.size() / 2);
  for (std::size_t i = 0; i < bytes.size(); i += 2) {
    try {
      out.push_back(decode(static_cast<std::uint16_t>((bytes[i] << 8) | bytes[i + 1])));
    } catch (const Error& e) {
      throw Error(e.code(), "at byte offset " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string r(s);
  std::transform(r.begin(), r.end(), r.begin(), [](unsigned char c) { return std::tolower(c); });
  return r;
}

std::optional<long> parse_int(std::string_view s) {
  int base = 10;
  if (s.starts_with("0x") || s.starts_with("0X")) {
    base = 16;
    s.remove_prefix(2);
  } else if (s.starts_with("0b") || s.starts_with("0B")) {
    base = 2;
    s.remove_prefix(2);
  }
  if (s.empty()) return std::nullopt;
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_operands(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

[[noreturn]] void fail(ErrorCode code, std::size_t line, const std::string& msg) {
  throw Error(code, "line " + std::to_string(line) + ": " + msg);
}

}  // namespace

std::vector<CommandWord> assemble(std::string_view text) {
  std::map<std::string, int> labels;
  return assemble(text, labels);
}

std::vector<CommandWord> assemble(std::string_view text, std::map<std::string, int>& labels) {
  std::vector<CommandWord> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.starts_with(".row")) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) fail(ErrorCode::kParseError, line_no, "expected '.row name = n'");
      const auto name = std::string(trim(line.substr(4, eq - 4)));
      const auto value = parse_int(trim(line.substr(eq + 1)));
      if (name.empty() || !value) fail(ErrorCode::kParseError, line_no, "malformed row label");
      if (*value < 0 || *value > 255) fail(ErrorCode::kOperandOutOfRange, line_no, "row label value");
      labels[name] = static_cast<int>(*value);
      continue;
    }

    const auto sp = line.find_first_of(" \t");
    const std::string name = lower(line.substr(0, sp));
    const auto operands =
        sp == std::string_view::npos ? std::vector<std::string_view>{} : split_operands(line.substr(sp + 1));

    Opcode op;
    if (name == "rd_row") op = Opcode::kRdRow;
    else if (name == "wr_row") op = Opcode::kWrRow;
    else if (name == "shift") op = Opcode::kShift;
    else if (name == "act_row") op = Opcode::kActRow;
    else if (name == "logic_op") op = Opcode::kLogicOp;
    else if (name == "ext_bit") op = Opcode::kExtBit;
    else fail(ErrorCode::kUnknownMnemonic, line_no, "'" + name + "'");

    if (operands.empty() || operands[0].empty()) fail(ErrorCode::kParseError, line_no, "missing operand");
    long index;
    if (auto v = parse_int(operands[0])) {
      index = *v;
    } else if (auto it = labels.find(std::string(operands[0])); it != labels.end()) {
      index = it->second;
    } else {
      fail(ErrorCode::kParseError, line_no, "unresolved operand '" + std::string(operands[0]) + "'");
    }
    if (index < 0 || index > 255) fail(ErrorCode::kOperandOutOfRange, line_no, "index " + std::to_string(index));

    CommandWord cmd{op, static_cast<std::uint8_t>(index), 0};
    const std::string flag = operands.size() > 1 ? lower(operands[1]) : std::string{};
    if (operands.size() > 2) fail(ErrorCode::kParseError, line_no, "too many operands");

    if (flag.starts_with("opt=")) {
      const auto v = parse_int(std::string_view(flag).substr(4));
      if (!v) fail(ErrorCode::kParseError, line_no, "bad option literal");
      if (*v < 0 || *v > 15) fail(ErrorCode::kOperandOutOfRange, line_no, "option " + std::to_string(*v));
      cmd.option = static_cast<std::uint8_t>(*v);
      out.push_back(cmd);
      continue;
    }

    switch (op) {
      case Opcode::kRdRow:
      case Opcode::kWrRow:
        if (flag.empty() || flag == "sa") cmd.option = 0b1000;
        else if (flag == "bus") cmd.option = 0;
        else fail(ErrorCode::kParseError, line_no, "expected sa|bus");
        break;
      case Opcode::kShift:
        if (flag == "left") cmd = shift(cmd.index, ShiftDirection::kLeft);
        else if (flag == "right") cmd = shift(cmd.index, ShiftDirection::kRight);
        else fail(ErrorCode::kParseError, line_no, "expected left|right");
        break;
      case Opcode::kActRow:
        if (!flag.empty()) fail(ErrorCode::kParseError, line_no, "act_row takes no flag");
        cmd = act_row(cmd.index);
        break;
      case Opcode::kLogicOp:
        if (flag == "and") cmd = logic_op(cmd.index, LogicOpKind::kAnd);
        else if (flag == "or") cmd = logic_op(cmd.index, LogicOpKind::kOr);
        else if (flag == "xor") cmd = logic_op(cmd.index, LogicOpKind::kXor);
        else if (flag == "not") cmd = logic_op(cmd.index, LogicOpKind::kNot);
        else fail(ErrorCode::kParseError, line_no, "expected and|or|xor|not");
        break;
      case Opcode::kExtBit: {
        const auto w = parse_int(flag);
        if (!w) fail(ErrorCode::kParseError, line_no, "expected block width");
        try {
          cmd = ext_bit(cmd.index, width_code(static_cast<std::size_t>(*w)));
        } catch (const Error&) {
          fail(ErrorCode::kOperandOutOfRange, line_no, "block width " + flag);
        }
        break;
      }
    }
    out.push_back(cmd);
  }
  return out;
}

namespace {

// Canonical flag text for the option, or nothing when the option carries don't-care bits.
std::optional<std::string> canonical_flag(const CommandWord& c) {
  switch (c.opcode) {
    case Opcode::kRdRow:
    case Opcode::kWrRow:
      if (c.option == 0b1000) return "sa";
      if (c.option == 0) return "bus";
      return std::nullopt;
    case Opcode::kShift:
      if (c.option == 0b1000) return "left";
      if (c.option == 0b1100) return "right";
      return std::nullopt;
    case Opcode::kActRow:
      if (c.option == 0b0001) return "";
      return std::nullopt;
    case Opcode::kLogicOp:
      if ((c.option & 0b1001) == 0) return std::string(to_string(c.logic_kind()));
      return std::nullopt;
    case Opcode::kExtBit:
      if ((c.option & 1) == 0 && static_cast<unsigned>(c.width()) <= 5)
        return std::to_string(width_columns(c.width()));
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::string disassemble_one(const CommandWord& c) {
  std::string s(mnemonic(c.opcode));
  s += ' ';
  s += std::to_string(c.index);
  if (auto flag = canonical_flag(c)) {
    if (!flag->empty()) s += ", " + *flag;
  } else {
    s += ", opt=0b";
    for (int b = 3; b >= 0; --b) s += ((c.option >> b) & 1) ? '1' : '0';
  }
  return s;
}

std::string disassemble(std::span<const CommandWord> cmds) {
  std::string out;
  for (const auto& c : cmds) {
    out += disassemble_one(c);
    out += '\n';
  }
  if (!out.empty()) out.pop_back();
  return out;
}

}  // namespace csram
