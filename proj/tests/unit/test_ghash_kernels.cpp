#include <gtest/gtest.h>

#include <random>

#include "cryptosram/ghash_kernels.hpp"

using namespace csram;

namespace {

std::vector<Block> random_blocks(std::size_t n, std::mt19937& rng) {
  std::vector<Block> v(n);
  for (auto& b : v)
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return v;
}

Bytes flatten(const std::vector<Block>& v) {
  Bytes out;
  for (const auto& b : v) out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

TEST(GhashKernels, FunctionSizes) {
  EXPECT_EQ(gen_galois_mult().size(), 19u);
  EXPECT_EQ(gen_ext_swap().size(), 2u);
  EXPECT_EQ(gen_byte_arrange().size(), 58u);
  EXPECT_EQ(gen_byte_aligning().size(), 79u);
}

TEST(GhashKernels, PackUnpackMatchesCoefficientOrder) {
  std::mt19937 rng(1);
  const auto b = random_blocks(2, rng);
  Subarray sub(128);
  const Row r = ghash_pack_bytes(b);
  sub.write_row(ghash_rows::kBlocks, r);
  for (const auto& [row, value] : ghash_constant_rows()) sub.write_row(row, value);
  // Align one block by running ByteAligning's prefix through a program.
  KernelProgram p;
  p.geometry = ghash_geometry();
  p.add_function("A", gen_byte_aligning());
  p.invoke("A");
  Controller(p).run(sub);
  // Z was zero, so the staged halves are the aligned block: recombine them.
  const Row ext = sub.read_row(ghash_rows::kExtension), staged = sub.read_row(ghash_rows::kScratch + 1);
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t c = 0; c < 64; ++c) {
      const bool lo = ext.get(128 * s + c), hi = staged.get(128 * s + c);
      EXPECT_EQ(lo, ((b[s][c / 8] >> (7 - c % 8)) & 1) != 0);
      EXPECT_EQ(hi, ((b[s][8 + c / 8] >> (7 - c % 8)) & 1) != 0);
    }
}

TEST(GhashKernels, MatchesOracleAcrossPassBoundaries) {
  std::mt19937 rng(7);
  Block h = random_blocks(1, rng)[0];
  for (std::size_t len : {1u, 3u, 8u, 9u, 17u}) {
    const std::vector<std::vector<Block>> in = {random_blocks(len, rng), random_blocks(len / 2 + 1, rng)};
    std::vector<ExecutionStats> passes;
    const auto res = ghash_fabric(h, in, &passes);
    for (std::size_t s = 0; s < in.size(); ++s) EXPECT_EQ(res.digests[s], oracle::ghash(h, flatten(in[s]))) << len;
    EXPECT_EQ(res.passes, (len + 7) / 8);
    const auto* gm = passes[0].find("GaloisMult");
    ASSERT_NE(gm, nullptr);
    EXPECT_EQ(gm->iterations, 128 * std::min<std::size_t>(len, 8));
  }
}

TEST(GhashKernels, RandomInputs) {
  std::mt19937 rng(11);
  for (int i = 0; i < 20; ++i) {
    const Block h = random_blocks(1, rng)[0];
    const std::vector<std::vector<Block>> in = {random_blocks(1 + rng() % 4, rng), random_blocks(1 + rng() % 4, rng),
                                                random_blocks(2, rng)};
    const auto res = ghash_fabric(h, in);
    for (std::size_t s = 0; s < in.size(); ++s) EXPECT_EQ(res.digests[s], oracle::ghash(h, flatten(in[s])));
  }
}
