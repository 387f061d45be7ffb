#include "cryptosram/fabric.hpp"

#include <cstdio>

#include "cryptosram/error.hpp"

namespace csram {

std::uint64_t CycleCostModel::cost(const CommandWord& cmd) const {
  if (cmd.opcode == Opcode::kShift && cmd.shift_valid()) return base_cost + cmd.index * shift_unit_cost;
  return base_cost;
}

std::string TraceRecord::to_line() const {
  char head[64];
  std::snprintf(head, sizeof head, "%llu 0x%04x ", static_cast<unsigned long long>(sequence), word);
  std::string s = head;
  s += disassemble_one(decode(word));
  s += " ; cycles=" + std::to_string(cycles);
  if (latch) s += " latch=" + latch->to_hex();
  return s;
}

Subarray::Subarray(std::size_t block_width, CycleCostModel costs, std::size_t ext_row)
    : block_width_(kColumns), ext_row_(ext_row), costs_(costs) {
  set_block_width(block_width);
  check_row(ext_row);
}

void Subarray::set_block_width(std::size_t width) {
  if (width > kColumns || kColumns % width != 0 || width < 16)
    throw Error(ErrorCode::kBlockWidthMismatch, "block width " + std::to_string(width));
  block_width_ = width;
}

void Subarray::check_row(std::size_t row) const {
  if (row >= kRows) throw Error(ErrorCode::kRowOutOfRange, "row " + std::to_string(row));
}

void Subarray::write_row(std::size_t row, const Row& bits) {
  check_row(row);
  if (pending_) throw Error(ErrorCode::kPendingActivation, "host write while an activation is armed");
  grid_[row] = bits;
}

const Row& Subarray::read_row(std::size_t row) const {
  check_row(row);
  return grid_[row];
}

std::uint64_t Subarray::execute(const CommandWord& cmd) {
  const bool is_logic = cmd.opcode == Opcode::kLogicOp;
  if (is_logic && !pending_)
    throw Error(ErrorCode::kPendingActivation, "logic_op without a preceding act_row");
  if (!is_logic && pending_)
    throw Error(ErrorCode::kPendingActivation,
                std::string(mnemonic(cmd.opcode)) + " while row " + std::to_string(*pending_) + " is armed");

  switch (cmd.opcode) {
    case Opcode::kRdRow:
      check_row(cmd.index);
      (cmd.routes_through_sa() ? latch_ : bus_) = grid_[cmd.index];
      break;
    case Opcode::kWrRow:
      check_row(cmd.index);
      grid_[cmd.index] = cmd.routes_through_sa() ? latch_ : bus_;
      break;
    case Opcode::kShift:
      if (cmd.shift_valid() && cmd.index != 0)
        latch_ = segmented_shift(latch_, block_width_, cmd.index,
                                 cmd.shift_direction() == ShiftDirection::kLeft);
      break;
    case Opcode::kActRow:
      check_row(cmd.index);
      if (cmd.arms_activation()) pending_ = cmd.index;
      break;
    case Opcode::kLogicOp: {
      check_row(cmd.index);
      const Row& a = grid_[*pending_];
      const Row& b = grid_[cmd.index];
      switch (cmd.logic_kind()) {
        case LogicOpKind::kAnd: latch_ = a & b; break;
        case LogicOpKind::kOr: latch_ = a | b; break;
        case LogicOpKind::kXor: latch_ = a ^ b; break;
        case LogicOpKind::kNot: latch_ = ~a; break;
      }
      pending_.reset();
      break;
    }
    case Opcode::kExtBit: {
      const auto code = static_cast<unsigned>(cmd.width());
      const std::size_t w = code <= 5 ? width_columns(cmd.width()) : 0;
      if (w == 0 || w > kColumns || w != block_width_)
        throw Error(ErrorCode::kBlockWidthMismatch,
                    "ext_bit width code " + std::to_string(code) + " vs configured " +
                        std::to_string(block_width_));
      const Row& src = grid_[ext_row_];
      const std::size_t rel = cmd.index % w;
      Row out;
      for (std::size_t base = 0; base < kColumns; base += w)
        if (src.get(base + rel)) out |= Row::range(base, w);
      latch_ = out;
      break;
    }
  }
  const auto c = costs_.cost(cmd);
  cycles_ += c;
  return c;
}

void Subarray::reset() {
  grid_.fill(Row{});
  latch_ = Row{};
  bus_ = Row{};
  pending_.reset();
  cycles_ = 0;
}

}  // namespace csram
