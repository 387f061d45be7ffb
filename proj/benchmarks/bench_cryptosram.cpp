// Host-side cost of simulating the kernels. The "fabric_cycles" counter is the
// modelled in-SRAM cycle count for one iteration.

#include <benchmark/benchmark.h>

#include <random>

#include "cryptosram/aes_kernels.hpp"
#include "cryptosram/ghash_kernels.hpp"
#include "cryptosram/keccak_kernels.hpp"
#include "cryptosram/modes.hpp"
#include "cryptosram/perfmodel.hpp"

namespace {

using namespace csram;

Bytes random_bytes(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> d(0, 255);
  Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(d(rng));
  return out;
}

void BM_BuildAesProgram(benchmark::State& state) {
  const auto v = state.range(0) == 128 ? AesVariant::k128 : AesVariant::k256;
  for (auto _ : state) benchmark::DoNotOptimize(build_aes_program(v, CipherDirection::kEncrypt));
}
BENCHMARK(BM_BuildAesProgram)->Arg(128)->Arg(256);

// One full pass: 16 blocks, one per tile.
void BM_AesEcbPass(benchmark::State& state) {
  ModeSpec spec;
  spec.variant = state.range(0) == 128 ? AesVariant::k128 : AesVariant::k256;
  spec.direction = state.range(1) ? CipherDirection::kDecrypt : CipherDirection::kEncrypt;
  const auto key = random_bytes(spec.variant == AesVariant::k128 ? 16 : 32, 1);
  const auto data = random_bytes(16 * 16, 2);
  std::uint64_t cycles = 0;
  for (auto _ : state) {
    auto r = run_mode(spec, key, data);
    cycles = r.cost.total_cycles();
    benchmark::DoNotOptimize(r.output);
  }
  state.counters["fabric_cycles"] = static_cast<double>(cycles);
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * data.size()));
}
BENCHMARK(BM_AesEcbPass)->ArgsProduct({{128, 256}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_AesGcm(benchmark::State& state) {
  ModeSpec spec;
  spec.mode = CipherMode::kGcm;
  spec.iv = random_bytes(12, 3);
  const auto key = random_bytes(16, 4);
  const auto data = random_bytes(static_cast<std::size_t>(state.range(0)), 5);
  std::uint64_t cycles = 0;
  for (auto _ : state) {
    auto r = run_mode(spec, key, data);
    cycles = r.cost.total_cycles();
    benchmark::DoNotOptimize(r.output);
  }
  state.counters["fabric_cycles"] = static_cast<double>(cycles);
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * data.size()));
}
BENCHMARK(BM_AesGcm)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Sha3Pass(benchmark::State& state) {
  const auto v = static_cast<Sha3Variant>(state.range(0));
  std::vector<Bytes> msgs;
  for (unsigned t = 0; t < kKeccakTiles; ++t) msgs.push_back(random_bytes(sha3_rate_bytes(v) - 1, 10 + t));
  std::uint64_t cycles = 0;
  for (auto _ : state) {
    auto r = sha3_pass(v, msgs);
    cycles = r.cycles;
    benchmark::DoNotOptimize(r.digests);
  }
  state.counters["fabric_cycles"] = static_cast<double>(cycles);
}
BENCHMARK(BM_Sha3Pass)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_HmacPass(benchmark::State& state) {
  const auto v = Sha3Variant::k256;
  std::vector<Bytes> keys, msgs;
  for (unsigned t = 0; t < kKeccakTiles; ++t) {
    keys.push_back(random_bytes(32, 20 + t));
    msgs.push_back(random_bytes(sha3_rate_bytes(v), 30 + t));
  }
  std::uint64_t cycles = 0;
  for (auto _ : state) {
    auto r = hmac_pass(v, keys, msgs);
    cycles = r.cycles;
    benchmark::DoNotOptimize(r.digests);
  }
  state.counters["fabric_cycles"] = static_cast<double>(cycles);
}
BENCHMARK(BM_HmacPass)->Unit(benchmark::kMillisecond);

void BM_GhashPass(benchmark::State& state) {
  Block h{};
  const auto hb = random_bytes(16, 40);
  std::copy(hb.begin(), hb.end(), h.begin());
  std::vector<std::vector<Block>> inputs(kGhashStreams);
  for (std::size_t s = 0; s < inputs.size(); ++s)
    for (std::size_t j = 0; j < kGhashBlocksPerPass; ++j) {
      const auto b = random_bytes(16, static_cast<unsigned>(50 + 16 * s + j));
      Block blk{};
      std::copy(b.begin(), b.end(), blk.begin());
      inputs[s].push_back(blk);
    }
  std::uint64_t cycles = 0;
  for (auto _ : state) {
    auto r = ghash_fabric(h, inputs);
    cycles = r.cycles;
    benchmark::DoNotOptimize(r.digests);
  }
  state.counters["fabric_cycles"] = static_cast<double>(cycles);
}
BENCHMARK(BM_GhashPass)->Unit(benchmark::kMillisecond);

void BM_PerfReport(benchmark::State& state) {
  for (auto _ : state) {
    PerfModel model;
    const auto cal = calibrate(model);
    auto report = build_report(model, cal);
    benchmark::DoNotOptimize(compare_to_reference(report));
  }
}
BENCHMARK(BM_PerfReport)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
