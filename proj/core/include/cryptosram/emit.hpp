#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cryptosram/isa.hpp"

namespace csram {

// Appends command sequences for common row-level idioms.
class CommandBuilder {
 public:
  using RowId = std::uint8_t;

  void rd(RowId r) { cmds_.push_back(rd_row(r)); }
  void wr(RowId r) { cmds_.push_back(wr_row(r)); }
  void act(RowId r) { cmds_.push_back(act_row(r)); }
  void op(RowId r, LogicOpKind k) { cmds_.push_back(logic_op(r, k)); }
  void shl(std::uint8_t n) { cmds_.push_back(shift(n, ShiftDirection::kLeft)); }
  void shr(std::uint8_t n) { cmds_.push_back(shift(n, ShiftDirection::kRight)); }
  void ext(std::uint8_t col, BlockWidthCode w) { cmds_.push_back(ext_bit(col, w)); }

  // dst = a <op> b (3 commands).
  void logic(RowId dst, RowId a, RowId b, LogicOpKind k) {
    act(a);
    op(b, k);
    wr(dst);
  }
  void xor_(RowId dst, RowId a, RowId b) { logic(dst, a, b, LogicOpKind::kXor); }
  void and_(RowId dst, RowId a, RowId b) { logic(dst, a, b, LogicOpKind::kAnd); }
  void or_(RowId dst, RowId a, RowId b) { logic(dst, a, b, LogicOpKind::kOr); }
  void not_(RowId dst, RowId a) { logic(dst, a, a, LogicOpKind::kNot); }
  void copy(RowId dst, RowId src) {
    rd(src);
    wr(dst);
  }
  void clear(RowId r) { xor_(r, r, r); }
  // dst = (src & mask) shifted by n; left when n > 0 (4 commands).
  void masked_shift(RowId dst, RowId src, RowId mask, int n) {
    act(src);
    op(mask, LogicOpKind::kAnd);
    if (n > 0) shl(static_cast<std::uint8_t>(n));
    if (n < 0) shr(static_cast<std::uint8_t>(-n));
    wr(dst);
  }

  void append(std::span<const CommandWord> more) { cmds_.insert(cmds_.end(), more.begin(), more.end()); }
  std::size_t size() const { return cmds_.size(); }
  const std::vector<CommandWord>& commands() const { return cmds_; }
  std::vector<CommandWord> take() { return std::move(cmds_); }

 private:
  std::vector<CommandWord> cmds_;
};

}  // namespace csram
