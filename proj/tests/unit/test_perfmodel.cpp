#include <gtest/gtest.h>

#include <json.hpp>

#include "cryptosram/aes_kernels.hpp"
#include "cryptosram/error.hpp"
#include "cryptosram/ghash_kernels.hpp"
#include "cryptosram/keccak_kernels.hpp"
#include "cryptosram/perfmodel.hpp"

using namespace csram;

namespace {

const Workload kCbc128 = Workload::aes_mode(WorkloadKind::kAesCbc, AesVariant::k128, CipherDirection::kEncrypt);

PerfModel& shared_model() {
  static PerfModel m;
  return m;
}

}  // namespace

TEST(PowerModes, Predefined) {
  EXPECT_EQ(find_power_mode("run0").frequency, 110e6);
  EXPECT_EQ(find_power_mode("RUN-Range2").current, 1.87e-3);
  EXPECT_EQ(find_power_mode("2MHz").current, 230e-6);
  EXPECT_THROW(find_power_mode("turbo"), Error);
}

TEST(FabricConfig, ActiveSubarrays) {
  FabricConfig c;
  EXPECT_EQ(c.active_subarrays(), 64.0);
  c.isc_fraction = 0.25;
  EXPECT_EQ(c.active_subarrays(), 16.0);
  c.isc_fraction = 0.3;
  EXPECT_THROW(c.validate(), Error);
}

TEST(CountCommands, MatchesControllerStats) {
  const auto prog = build_aes_program(AesVariant::k128, CipherDirection::kEncrypt);
  const auto counts = count_commands(prog);
  const auto stats = profile_program(prog);
  EXPECT_EQ(counts.total_executed, stats.total_commands);
  for (const auto& f : stats.functions) {
    const auto* c = counts.find(f.name);
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->iterations, f.iterations);
    EXPECT_EQ(c->executed, f.commands);
  }
  EXPECT_EQ(counts.bytes(), 2 * counts.total_inst);
  EXPECT_EQ(count_commands(KernelProgram{}).total_inst, 0u);
}

TEST(CountCommands, ReferenceIterations) {
  const auto aes = count_commands(build_aes_program(AesVariant::k128, CipherDirection::kEncrypt));
  EXPECT_EQ(aes.find("BitSlicing")->iterations, 2u);
  EXPECT_EQ(aes.find("AddRoundKey")->iterations, 11u);
  EXPECT_EQ(aes.find("SubBytes")->iterations, 10u);
  EXPECT_EQ(aes.find("ShiftRows")->iterations, 10u);
  EXPECT_EQ(aes.find("MixColumns")->iterations, 9u);
  const auto gh = count_commands(build_ghash_program(kGhashBlocksPerPass, true));
  EXPECT_EQ(gh.find("ByteArrange")->iterations, 1u);
  EXPECT_EQ(gh.find("ByteAligning")->iterations, 8u);
  EXPECT_EQ(gh.find("GaloisMult")->iterations, 1024u);
  EXPECT_EQ(count_commands(build_sha3_program(Sha3Variant::k256, 1)).find("StatePermute")->iterations, 24u);
}

TEST(PerfModel, ProfileMatchesRealDataRun) {
  // Cycles are data independent: a run on real blocks charges what the zero-data profile does.
  const Bytes key(16, 0x2b);
  const AesEngine engine(key, AesVariant::k128);
  std::vector<Block> blocks(16);
  for (std::size_t i = 0; i < 16; ++i) blocks[i].fill(static_cast<std::uint8_t>(i * 17));
  ExecutionStats st;
  engine.run(CipherDirection::kEncrypt, DataXor::kBefore, blocks, blocks, &st);
  EXPECT_EQ(shared_model().cost(kCbc128).cycles(), st.total_cycles);
}

TEST(PerfModel, CostModelChangesCycles) {
  PerfModel slow({2, 1});
  const auto& c = slow.cost(kCbc128);
  const auto prog = build_aes_program(AesVariant::k128, CipherDirection::kEncrypt, DataXor::kBefore);
  const auto base = profile_program(prog);
  EXPECT_EQ(c.cycles(), base.total_cycles + base.total_commands);
}

TEST(Throughput, FormulaByHand) {
  FabricConfig cfg;
  cfg.isc_fraction = 0.5;
  cfg.calibration.aes = 1.5;
  const WorkloadCost c{{{KernelFamily::kAes, 1000}}, 256};
  // 1.5 x 32 x 256 B x 110 MHz / 1000 cycles
  EXPECT_DOUBLE_EQ(throughput(c, cfg, power_modes()[0]), 1.5 * 32 * 256 * 110e6 / 1000);
  // Mixed families scale each segment by its own calibration.
  cfg.calibration.ghash = 2.0;
  const WorkloadCost g{{{KernelFamily::kAes, 1000}, {KernelFamily::kGhash, 1000}}, 256};
  EXPECT_DOUBLE_EQ(throughput(g, cfg, power_modes()[0]), 32 * 256 * 110e6 / (1000 / 1.5 + 1000 / 2.0));
}

TEST(Throughput, LinearInFractionAndFrequency) {
  const auto& c = shared_model().cost(kCbc128);
  FabricConfig q;
  q.isc_fraction = 0.25;
  FabricConfig h = q;
  h.isc_fraction = 0.5;
  const auto& run0 = power_modes()[0];
  const double t25 = throughput(c, q, run0);
  EXPECT_EQ(throughput(c, h, run0), 2 * t25);
  EXPECT_DOUBLE_EQ(throughput(c, q, power_modes()[1]), t25 * 26.0 / 110.0);
}

TEST(Energy, DerivedArithmetic) {
  // 17.543 MB/s / (1.8 V x 11.21 mA)
  EXPECT_NEAR(energy_efficiency(17.543e6, power_modes()[0]) / 1e9, 0.8694, 0.5e-4);
  EXPECT_NEAR(energy_efficiency(1.448e6, power_modes()[0]) / 1e9, 0.0718, 0.5e-4);
  // 1.448 MB/s scaled to 26 MHz over (1.8 V x 1.87 mA)
  EXPECT_NEAR(energy_efficiency(1.448e6 * 26 / 110, power_modes()[1]) / 1e9, 0.1017, 0.5e-4);
  EXPECT_EQ(energy_efficiency(0, power_modes()[2]), 0);
  EXPECT_DOUBLE_EQ(energy_efficiency(1e6, power_modes()[0], 1.048),
                   energy_efficiency(1e6, power_modes()[0]) / 1.048);
}

TEST(Calibration, AnchorsHitReferenceCells) {
  const auto cal = calibrate(shared_model());
  const auto r = build_report(shared_model(), cal);
  EXPECT_NEAR(r.table("aes-throughput")->find("CryptoSRAM (100%)", kCbc128.label())->model, 113.348, 1e-9);
  EXPECT_NEAR(r.table("sha3-throughput")->find("CryptoSRAM (100%)", "SHA3-256")->model, 57.038, 1e-9);
}

TEST(CompareToReference, ExactReportHasZeroDeltas) {
  auto r = build_report(shared_model(), calibrate(shared_model()));
  for (auto& t : r.tables)
    for (auto& c : t.cells)
      if (c.reference) c.model = *c.reference;
  const auto cmp = compare_to_reference(r);
  for (const auto& d : cmp.deltas)
    if (d.table != "control") EXPECT_EQ(d.abs, 0) << d.row << " " << d.column;
}

TEST(CompareToReference, FlagsBrokenFractionScaling) {
  auto r = build_report(shared_model(), {});
  for (auto& t : r.tables)
    if (t.id == "aes-throughput")
      for (auto& c : t.cells)
        if (c.row == "CryptoSRAM (50%)" && c.column == kCbc128.label()) c.model *= 1.01;
  const auto cmp = compare_to_reference(r);
  bool flagged = false;
  for (const auto& s : cmp.scaling)
    if (s.name == "fraction 50/25 " + kCbc128.label()) flagged = !s.ok;
  EXPECT_TRUE(flagged);
}

TEST(CompareToReference, UncalibratedScalingLaws) {
  const auto cmp = compare_to_reference(build_report(shared_model(), {}));
  for (const auto& s : cmp.scaling) {
    if (s.name.rfind("HMAC/SHA3", 0) == 0) continue;  // checked by the acceptance suite
    EXPECT_TRUE(s.ok) << s.name << " " << s.observed;
  }
}

TEST(Reports, TextAndJson) {
  const auto r = build_report(shared_model(), {});
  const auto cmp = compare_to_reference(r);
  const auto text = format_text(r, &cmp);
  EXPECT_NE(text.find("Control overhead"), std::string::npos);
  EXPECT_NE(text.find("StatePermute"), std::string::npos);
  const auto j = nlohmann::json::parse(format_json(r, &cmp));
  EXPECT_EQ(j["tables"].size(), 5u);
  EXPECT_EQ(j["control_total_inst"].get<std::uint64_t>(), r.control_total_inst);
  EXPECT_EQ(j["comparison"]["deltas"].size(), cmp.deltas.size());
}
