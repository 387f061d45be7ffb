#include <gtest/gtest.h>

#include "cryptosram/controller.hpp"
#include "cryptosram/error.hpp"

using namespace csram;

namespace {

ErrorCode code_of(const KernelProgram& p) {
  try {
    Controller::validate(p);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

// XOR rows 8.. into row 0, one key row per iteration.
KernelProgram xor_program(std::uint32_t period) {
  KernelProgram p;
  p.name = "xor";
  p.geometry = BlockGeometry::make(1, 256, 1);
  p.layout.add("state", RegionKind::kState, 0, 1);
  p.layout.add("keys", RegionKind::kKey, 8, 4);
  const CommandWord body[] = {act_row(0), logic_op(8, LogicOpKind::kXor), wr_row(0)};
  p.add_function("Add", body, {{1, 1, period}});
  return p;
}

}  // namespace

TEST(Controller, StrideCounterPersistsAcrossInvocations) {
  auto p = xor_program(0);
  p.invoke("Add", 2);
  p.invoke("Add", 2);
  Controller ctl(p);
  Subarray s;
  Row expect;
  for (std::size_t i = 0; i < 4; ++i) {
    Row k;
    k.set(i * 3, true);
    s.write_row(8 + i, k);
    expect ^= k;
  }
  std::vector<TraceRecord> trace;
  const auto st = ctl.run_traced(s, trace);
  EXPECT_EQ(s.read_row(0), expect);
  EXPECT_EQ(st.total_commands, 12u);
  EXPECT_EQ(st.find("Add")->iterations, 4u);
  ASSERT_EQ(trace.size(), 12u);
  EXPECT_EQ(decode(trace[10].word).index, 11);
}

TEST(Controller, PeriodWrapsIndex) {
  auto p = xor_program(2);
  p.invoke("Add", 4);
  Controller ctl(p);
  Subarray s;
  Row k;
  k.set(1, true);
  s.write_row(8, k);
  ctl.run(s);
  EXPECT_TRUE(s.read_row(0).none());
}

TEST(Controller, ValidationErrors) {
  auto p = xor_program(0);
  p.invoke("Add", 5);
  EXPECT_EQ(code_of(p), ErrorCode::kStrideOutOfRange);

  auto q = xor_program(0);
  q.invoke("Missing");
  EXPECT_EQ(code_of(q), ErrorCode::kUndefinedFunction);

  auto r = xor_program(0);
  const CommandWord e[] = {ext_bit(0, BlockWidthCode::k128)};
  r.add_function("Ext", e);
  EXPECT_EQ(code_of(r), ErrorCode::kWidthMismatch);

  auto c = xor_program(0);
  c.command_array.words.resize(4097, rd_row(0));
  EXPECT_EQ(code_of(c), ErrorCode::kCapacityExceeded);

  auto o = xor_program(0);
  const CommandWord bad[] = {rd_row(50)};
  o.add_function("Bad", bad);
  EXPECT_EQ(code_of(o), ErrorCode::kRowOutOfRange);
}

TEST(Controller, HostStepsAndCaptures) {
  KernelProgram p;
  p.geometry = BlockGeometry::make(1, 256, 1);
  const CommandWord body[] = {act_row(0), logic_op(0, LogicOpKind::kNot), wr_row(1)};
  p.add_function("Not", body);
  p.host_load(0, "in");
  p.invoke("Not");
  p.host_capture(1, "out");
  Controller ctl(p);
  Subarray s;
  Bindings b{{"in", Row::range(0, 8)}};
  const auto st = ctl.run(s, b);
  EXPECT_EQ(st.captures.at("out"), ~Row::range(0, 8));
  Subarray s2;
  EXPECT_THROW(ctl.run(s2), Error);
}

TEST(Controller, FaultsNameFunctionAndOffset) {
  KernelProgram p;
  p.geometry = BlockGeometry::make(1, 256, 1);
  const CommandWord body[] = {rd_row(0), logic_op(0, LogicOpKind::kAnd)};
  p.add_function("Broken", body);
  p.invoke("Broken");
  Controller ctl(p);
  Subarray s;
  try {
    ctl.run(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPendingActivation);
    EXPECT_NE(std::string(e.what()).find("Broken"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("offset 1"), std::string::npos);
  }
}
