#include <gtest/gtest.h>

#include <random>

#include "cryptosram/error.hpp"
#include "cryptosram/modes.hpp"

using namespace csram;

namespace {

Bytes random_bytes(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  Bytes b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return b;
}

Block as_block(ByteView b) {
  Block out{};
  std::copy_n(b.begin(), 16, out.begin());
  return out;
}

ModeSpec spec_for(AesVariant v, CipherMode m, CipherDirection d, Bytes iv) {
  ModeSpec s;
  s.variant = v;
  s.mode = m;
  s.direction = d;
  s.iv = std::move(iv);
  return s;
}

Bytes concat(Bytes a, const Bytes& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

class ModesByVariant : public ::testing::TestWithParam<AesVariant> {};

}  // namespace

TEST(Modes, NamesRoundTrip) {
  for (auto m : {CipherMode::kNone, CipherMode::kEcb, CipherMode::kCbc, CipherMode::kCtr, CipherMode::kCcm,
                 CipherMode::kGcm})
    EXPECT_EQ(cipher_mode_from_string(to_string(m)), m);
  EXPECT_THROW(cipher_mode_from_string("ofb"), Error);
}

TEST_P(ModesByVariant, EcbMatchesOracle) {
  const auto v = GetParam();
  const auto key = random_bytes(aes_key_bytes(v), 1);
  const auto pt = random_bytes(1024, 2);
  const auto r = run_mode(spec_for(v, CipherMode::kEcb, CipherDirection::kEncrypt, {}), key, pt);
  Bytes expect;
  for (std::size_t i = 0; i < pt.size(); i += 16) {
    const auto c = oracle::aes_encrypt_block(key, as_block(ByteView(pt).subspan(i, 16)));
    expect.insert(expect.end(), c.begin(), c.end());
  }
  EXPECT_EQ(r.output, expect);
  EXPECT_EQ(r.cost.aes_passes, 4u);  // 64 blocks, 16 per pass
  const auto back = run_mode(spec_for(v, CipherMode::kEcb, CipherDirection::kDecrypt, {}), key, r.output);
  EXPECT_EQ(back.output, pt);
}

TEST_P(ModesByVariant, CbcMatchesOracle) {
  const auto v = GetParam();
  const auto key = random_bytes(aes_key_bytes(v), 3);
  const auto iv = random_bytes(16, 4);
  const auto pt = random_bytes(1024, 5);
  const auto ct = run_mode(spec_for(v, CipherMode::kCbc, CipherDirection::kEncrypt, iv), key, pt).output;
  EXPECT_EQ(ct, oracle::cbc_encrypt(key, iv, pt));
  const auto dec = run_mode(spec_for(v, CipherMode::kCbc, CipherDirection::kDecrypt, iv), key, ct);
  EXPECT_EQ(dec.output, pt);
  EXPECT_EQ(dec.cost.aes_passes, 4u);
}

TEST_P(ModesByVariant, CtrMatchesOracle) {
  const auto v = GetParam();
  const auto key = random_bytes(aes_key_bytes(v), 6);
  auto iv = random_bytes(16, 7);
  iv[12] = iv[13] = iv[14] = 0xff;  // forces a low-word wrap inside the message
  const auto pt = random_bytes(1000, 8);
  const auto r = run_mode(spec_for(v, CipherMode::kCtr, CipherDirection::kEncrypt, iv), key, pt);
  EXPECT_EQ(r.output, oracle::ctr_crypt(key, as_block(iv), pt));
}

TEST_P(ModesByVariant, CcmMatchesOracleAndRejectsTampering) {
  const auto v = GetParam();
  const auto key = random_bytes(aes_key_bytes(v), 9);
  const auto aad = random_bytes(37, 10);
  const auto pt = random_bytes(1024 + 5, 11);
  for (std::size_t nonce_len : {7u, 12u, 13u}) {
    const auto nonce = random_bytes(nonce_len, 12);
    auto s = spec_for(v, CipherMode::kCcm, CipherDirection::kEncrypt, nonce);
    const auto ct = run_mode(s, key, pt, aad).output;
    const auto ref = oracle::ccm_encrypt(key, nonce, aad, pt);
    EXPECT_EQ(ct, concat(ref.ciphertext, ref.tag)) << nonce_len;
    s.direction = CipherDirection::kDecrypt;
    EXPECT_EQ(run_mode(s, key, ct, aad).output, pt);
    auto bad = ct;
    bad[3] ^= 1;
    EXPECT_THROW(run_mode(s, key, bad, aad), Error);
  }
}

TEST(Modes, CcmShortTag) {
  const auto key = random_bytes(16, 13);
  const auto nonce = random_bytes(11, 14);
  const auto pt = random_bytes(40, 15);
  auto s = spec_for(AesVariant::k128, CipherMode::kCcm, CipherDirection::kEncrypt, nonce);
  s.tag_length = 8;
  const auto ct = run_mode(s, key, pt).output;
  const auto ref = oracle::ccm_encrypt(key, nonce, {}, pt, 8);
  EXPECT_EQ(ct, concat(ref.ciphertext, ref.tag));
}

TEST_P(ModesByVariant, GcmMatchesOracleAndRejectsTampering) {
  const auto v = GetParam();
  const auto key = random_bytes(aes_key_bytes(v), 16);
  const auto aad = random_bytes(20, 17);
  const auto pt = random_bytes(1024 + 9, 18);
  for (std::size_t iv_len : {12u, 8u, 60u}) {
    const auto iv = random_bytes(iv_len, 19);
    auto s = spec_for(v, CipherMode::kGcm, CipherDirection::kEncrypt, iv);
    const auto r = run_mode(s, key, pt, aad);
    const auto ref = oracle::gcm_encrypt(key, iv, aad, pt);
    EXPECT_EQ(r.output, concat(ref.ciphertext, ref.tag)) << iv_len;
    EXPECT_GT(r.cost.ghash_cycles, 0u);
    s.direction = CipherDirection::kDecrypt;
    EXPECT_EQ(run_mode(s, key, r.output, aad).output, pt);
    auto bad = r.output;
    bad.back() ^= 0x80;
    try {
      run_mode(s, key, bad, aad);
      ADD_FAILURE() << "tampered tag accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kTagMismatch);
    }
    auto bad_aad = aad;
    bad_aad[0] ^= 1;
    EXPECT_THROW(run_mode(s, key, r.output, bad_aad), Error);
  }
}

INSTANTIATE_TEST_SUITE_P(Aes, ModesByVariant, ::testing::Values(AesVariant::k128, AesVariant::k256));

TEST(Modes, CbcChainsAreIndependentPerTile) {
  const auto key = random_bytes(16, 20);
  std::vector<Bytes> ivs, msgs;
  for (std::uint32_t i = 0; i < 20; ++i) {
    ivs.push_back(random_bytes(16, 100 + i));
    msgs.push_back(random_bytes(16 * (1 + i % 5), 200 + i));
  }
  FabricCost cost;
  const auto out = cbc_encrypt_chains(key, ivs, msgs, &cost);
  ASSERT_EQ(out.size(), msgs.size());
  for (std::size_t i = 0; i < msgs.size(); ++i) EXPECT_EQ(out[i], oracle::cbc_encrypt(key, ivs[i], msgs[i])) << i;
  // Two groups of chains (16 + 4), each needing as many passes as its longest chain.
  EXPECT_EQ(cost.aes_passes, 5u + 5u);
}

TEST(Modes, RejectsBadInputs) {
  const auto key = random_bytes(16, 21);
  EXPECT_THROW(run_mode(spec_for(AesVariant::k128, CipherMode::kEcb, CipherDirection::kEncrypt, {}), key,
                        random_bytes(15, 1)),
               Error);
  EXPECT_THROW(run_mode(spec_for(AesVariant::k128, CipherMode::kCbc, CipherDirection::kEncrypt, Bytes(8)), key,
                        random_bytes(16, 1)),
               Error);
  EXPECT_THROW(run_mode(spec_for(AesVariant::k256, CipherMode::kEcb, CipherDirection::kEncrypt, {}), key,
                        random_bytes(16, 1)),
               Error);
}

TEST(Modes, RandomAesPairsMatchOracle) {
  // 64 keys per variant, a full 16-tile pass each: 1024 plaintext/ciphertext pairs.
  for (auto v : {AesVariant::k128, AesVariant::k256}) {
    for (std::uint32_t k = 0; k < 64; ++k) {
      const auto key = random_bytes(aes_key_bytes(v), 1000 + k);
      const auto pt = random_bytes(256, 5000 + k);
      const auto ct = run_mode(spec_for(v, CipherMode::kEcb, CipherDirection::kEncrypt, {}), key, pt).output;
      for (std::size_t i = 0; i < 256; i += 16)
        ASSERT_EQ(as_block(ByteView(ct).subspan(i, 16)),
                  oracle::aes_encrypt_block(key, as_block(ByteView(pt).subspan(i, 16))));
    }
  }
}

TEST(Modes, FabricOutputMatchesOracleOutput) {
  std::vector<KnownAnswerTest> kats;
  auto add = [&](std::string alg, Bytes key, Bytes nonce, Bytes aad, Bytes msg) {
    KnownAnswerTest k;
    k.alg = std::move(alg);
    k.key = std::move(key);
    k.nonce = std::move(nonce);
    k.aad = std::move(aad);
    k.msg = std::move(msg);
    kats.push_back(std::move(k));
  };
  add("AES-128", random_bytes(16, 1), {}, {}, random_bytes(48, 2));
  add("AES-256-CBC", random_bytes(32, 3), random_bytes(16, 4), {}, random_bytes(64, 5));
  add("AES-128-CTR", random_bytes(16, 6), random_bytes(16, 7), {}, random_bytes(33, 8));
  add("AES-128-CCM", random_bytes(16, 9), random_bytes(12, 10), random_bytes(5, 11), random_bytes(30, 12));
  add("AES-256-GCM", random_bytes(32, 13), random_bytes(12, 14), random_bytes(7, 15), random_bytes(50, 16));
  add("SHA3-256", {}, {}, {}, random_bytes(200, 17));
  add("HMAC-SHA3-512", random_bytes(20, 18), {}, {}, random_bytes(30, 19));
  add("GHASH", random_bytes(16, 20), {}, {}, random_bytes(64, 21));
  for (const auto& k : kats) {
    FabricCost cost;
    EXPECT_EQ(fabric_output(k, &cost), oracle_output(k)) << k.alg;
    EXPECT_GT(cost.total_cycles(), 0u) << k.alg;
  }
}
