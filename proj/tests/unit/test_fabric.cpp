#include <gtest/gtest.h>

#include <random>

#include "cryptosram/error.hpp"
#include "cryptosram/fabric.hpp"

using namespace csram;

namespace {

Row random_row(std::mt19937_64& rng) {
  Row r;
  for (std::size_t i = 0; i < 4; ++i) r.set_word(i, rng());
  return r;
}

// Column-by-column reference for the segmented shift.
Row naive_shift(const Row& in, std::size_t width, std::size_t n, bool left) {
  Row out;
  for (std::size_t c = 0; c < kColumns; ++c) {
    const std::size_t base = c - c % width, off = c % width;
    if (left && off >= n) out.set(c, in.get(base + off - n));
    if (!left && off + n < width) out.set(c, in.get(base + off + n));
  }
  return out;
}

}  // namespace

TEST(Bits, HexRoundTrip) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const Row r = random_row(rng);
    EXPECT_EQ(Row::from_hex(r.to_hex()), r);
  }
  Row one;
  one.set(0, true);
  EXPECT_EQ(one.to_hex(), std::string(63, '0') + "1");
}

TEST(Bits, SegmentedShiftMatchesReference) {
  std::mt19937_64 rng(2);
  for (std::size_t w : {16u, 32u, 64u, 128u, 256u})
    for (int i = 0; i < 40; ++i) {
      const Row r = random_row(rng);
      const std::size_t n = rng() % (w + 1);
      const bool left = rng() & 1;
      ASSERT_EQ(segmented_shift(r, w, n, left), naive_shift(r, w, n, left)) << w << " " << n << " " << left;
    }
}

TEST(Fabric, LogicOpsRequireActivation) {
  Subarray s;
  EXPECT_THROW(s.execute(logic_op(1, LogicOpKind::kAnd)), Error);
  s.execute(act_row(2));
  EXPECT_TRUE(s.pending_row().has_value());
  try {
    s.execute(rd_row(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPendingActivation);
  }
  EXPECT_THROW(s.write_row(3, Row::ones()), Error);
  s.execute(logic_op(1, LogicOpKind::kOr));
  EXPECT_FALSE(s.pending_row().has_value());
}

TEST(Fabric, LogicOpsComputeOverFullRow) {
  std::mt19937_64 rng(3);
  Subarray s(16);
  const Row a = random_row(rng), b = random_row(rng);
  s.write_row(10, a);
  s.write_row(20, b);
  const std::pair<LogicOpKind, Row> cases[] = {
      {LogicOpKind::kAnd, a & b}, {LogicOpKind::kOr, a | b}, {LogicOpKind::kXor, a ^ b}, {LogicOpKind::kNot, ~a}};
  for (const auto& [kind, expect] : cases) {
    s.execute(act_row(10));
    s.execute(logic_op(20, kind));
    EXPECT_EQ(s.latch(), expect);
  }
  s.execute(wr_row(30));
  EXPECT_EQ(s.read_row(30), ~a);
}

TEST(Fabric, ShiftIsSegmentedAndCostsPerStep) {
  Subarray s(64);
  Row r;
  r.set(63, true);
  r.set(64, true);
  s.write_row(0, r);
  s.execute(rd_row(0));
  EXPECT_EQ(s.execute(shift(1, ShiftDirection::kLeft)), 2u);
  Row expect;
  expect.set(65, true);
  EXPECT_EQ(s.latch(), expect);
  EXPECT_EQ(s.execute(shift(0, ShiftDirection::kRight)), 1u);
  EXPECT_EQ(s.cycle_count(), 4u);
}

TEST(Fabric, BusPathIsSeparateFromLatch) {
  Subarray s;
  Row r;
  r.set(5, true);
  s.write_row(1, r);
  s.execute(rd_row(1, false));
  EXPECT_TRUE(s.latch().none());
  s.execute(wr_row(2, false));
  EXPECT_EQ(s.read_row(2), r);
}

TEST(Fabric, ExtBitBroadcastsPerSegment) {
  Subarray s(64);
  Row e;
  e.set(3, true);
  e.set(128 + 3, true);
  s.write_row(127, e);
  s.execute(ext_bit(3, BlockWidthCode::k64));
  EXPECT_EQ(s.latch(), Row::range(0, 64) | Row::range(128, 64));
  try {
    s.execute(ext_bit(3, BlockWidthCode::k32));
    FAIL();
  } catch (const Error& e2) {
    EXPECT_EQ(e2.code(), ErrorCode::kBlockWidthMismatch);
  }
}

TEST(Fabric, InvalidShiftAndUnarmedActAreNoOps) {
  Subarray s;
  s.write_row(0, Row::ones());
  s.execute(rd_row(0));
  s.execute(CommandWord{Opcode::kShift, 5, 0b0000});
  EXPECT_EQ(s.latch(), Row::ones());
  s.execute(CommandWord{Opcode::kActRow, 4, 0b0000});
  EXPECT_FALSE(s.pending_row().has_value());
}

TEST(Fabric, RowBoundsChecked) {
  Subarray s;
  EXPECT_THROW(s.execute(rd_row(128)), Error);
  EXPECT_THROW(s.write_row(200, Row{}), Error);
  EXPECT_THROW(Subarray(48), Error);
}
