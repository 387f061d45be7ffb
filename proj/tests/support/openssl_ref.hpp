#pragma once

// Second, independently sourced implementation (OpenSSL) for cross-checks.

#include <openssl/evp.h>
#include <openssl/params.h>

#include <stdexcept>
#include <string>

#include "cryptosram/bytes.hpp"
#include "cryptosram/oracle.hpp"

namespace ossl {

inline const EVP_CIPHER* cipher(csram::AesVariant v, const char* mode) {
  const std::string name = std::string(v == csram::AesVariant::k128 ? "aes-128-" : "aes-256-") + mode;
  return EVP_get_cipherbyname(name.c_str());
}

inline csram::Bytes run_cipher(const EVP_CIPHER* c, csram::ByteView key, csram::ByteView iv, csram::ByteView in,
                               bool enc) {
  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  csram::Bytes out(in.size() + 32);
  int n = 0, m = 0;
  EVP_CipherInit_ex(ctx, c, nullptr, key.data(), iv.empty() ? nullptr : iv.data(), enc ? 1 : 0);
  EVP_CIPHER_CTX_set_padding(ctx, 0);
  EVP_CipherUpdate(ctx, out.data(), &n, in.data(), static_cast<int>(in.size()));
  EVP_CipherFinal_ex(ctx, out.data() + n, &m);
  EVP_CIPHER_CTX_free(ctx);
  out.resize(static_cast<std::size_t>(n + m));
  return out;
}

inline csram::Bytes aes_ecb(csram::AesVariant v, csram::ByteView key, csram::ByteView in, bool enc = true) {
  return run_cipher(cipher(v, "ecb"), key, {}, in, enc);
}

inline csram::Bytes digest(csram::Sha3Variant v, csram::ByteView msg) {
  const char* names[] = {"SHA3-224", "SHA3-256", "SHA3-384", "SHA3-512"};
  const EVP_MD* md = EVP_get_digestbyname(names[static_cast<int>(v)]);
  csram::Bytes out(EVP_MAX_MD_SIZE);
  unsigned len = 0;
  EVP_Digest(msg.data(), msg.size(), out.data(), &len, md, nullptr);
  out.resize(len);
  return out;
}

inline csram::Bytes hmac(csram::Sha3Variant v, csram::ByteView key, csram::ByteView msg) {
  const char* names[] = {"SHA3-224", "SHA3-256", "SHA3-384", "SHA3-512"};
  EVP_MAC* mac = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
  EVP_MAC_CTX* ctx = EVP_MAC_CTX_new(mac);
  OSSL_PARAM params[] = {
      OSSL_PARAM_construct_utf8_string("digest", const_cast<char*>(names[static_cast<int>(v)]), 0),
      OSSL_PARAM_construct_end()};
  static const unsigned char kEmpty = 0;
  EVP_MAC_init(ctx, key.empty() ? &kEmpty : key.data(), key.size(), params);
  EVP_MAC_update(ctx, msg.data(), msg.size());
  csram::Bytes out(EVP_MAX_MD_SIZE);
  std::size_t len = 0;
  if (EVP_MAC_final(ctx, out.data(), &len, out.size()) != 1) throw std::runtime_error("EVP_MAC_final");
  EVP_MAC_CTX_free(ctx);
  EVP_MAC_free(mac);
  out.resize(len);
  return out;
}

// AEAD encrypt; returns ct || tag.
inline csram::Bytes aead(csram::AesVariant v, const char* mode, csram::ByteView key, csram::ByteView iv,
                         csram::ByteView aad, csram::ByteView pt, std::size_t tag_len = 16) {
  const bool ccm = std::string(mode) == "ccm";
  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  EVP_EncryptInit_ex(ctx, cipher(v, mode), nullptr, nullptr, nullptr);
  EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_AEAD_SET_IVLEN, static_cast<int>(iv.size()), nullptr);
  if (ccm) EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_AEAD_SET_TAG, static_cast<int>(tag_len), nullptr);
  EVP_EncryptInit_ex(ctx, nullptr, nullptr, key.data(), iv.data());
  int n = 0;
  if (ccm) EVP_EncryptUpdate(ctx, nullptr, &n, nullptr, static_cast<int>(pt.size()));
  if (!aad.empty()) EVP_EncryptUpdate(ctx, nullptr, &n, aad.data(), static_cast<int>(aad.size()));
  csram::Bytes out(pt.size() + tag_len);
  EVP_EncryptUpdate(ctx, out.data(), &n, pt.data(), static_cast<int>(pt.size()));
  int m = 0;
  EVP_EncryptFinal_ex(ctx, out.data() + n, &m);
  EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_AEAD_GET_TAG, static_cast<int>(tag_len), out.data() + pt.size());
  EVP_CIPHER_CTX_free(ctx);
  return out;
}

}  // namespace ossl
