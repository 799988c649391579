/*
 * Copyright 2026 The OPA Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "opa/protocol/pke.hpp"

#include <sodium.h>

#include <algorithm>
#include <cstring>

#include "opa/error.hpp"

namespace opa {
namespace {

constexpr std::size_t kKey = crypto_scalarmult_BYTES;
constexpr std::size_t kNonce = crypto_aead_xchacha20poly1305_ietf_NPUBBYTES;
constexpr std::size_t kTag = crypto_aead_xchacha20poly1305_ietf_ABYTES;

void derive_key(const std::uint8_t* shared, const std::uint8_t* epk, const std::uint8_t* rpk,
                std::uint8_t* out) {
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, crypto_aead_xchacha20poly1305_ietf_KEYBYTES);
  crypto_generichash_update(&st, shared, kKey);
  crypto_generichash_update(&st, epk, kKey);
  crypto_generichash_update(&st, rpk, kKey);
  crypto_generichash_final(&st, out, crypto_aead_xchacha20poly1305_ietf_KEYBYTES);
}

}  // namespace

Bytes iteration_ad(std::uint64_t ell, std::uint32_t client) {
  ByteWriter w(12);
  w.u64(ell);
  w.u32(client);
  return w.take();
}

Bytes PkeBackend::seal(const Bytes& pk, ByteView ad, const Bytes& msg, Rng& rng) const {
  return std::move(seal_batch({&pk, 1}, ad, {&msg, 1}, rng).front());
}

PkeKeyPair HybridPke::keygen(Rng& rng) const {
  PkeKeyPair kp{Bytes(kKey), Bytes(kKey)};
  rng.fill(kp.sk);
  crypto_scalarmult_base(kp.pk.data(), kp.sk.data());
  return kp;
}

std::vector<Bytes> HybridPke::seal_batch(std::span<const Bytes> pks, ByteView ad,
                                         std::span<const Bytes> msgs, Rng& rng) const {
  if (pks.size() != msgs.size()) throw ParamError("recipient/message count mismatch");
  std::uint8_t esk[kKey], epk[kKey];
  rng.fill(esk);
  crypto_scalarmult_base(epk, esk);
  std::vector<Bytes> out;
  out.reserve(pks.size());
  for (std::size_t k = 0; k < pks.size(); ++k) {
    if (pks[k].size() != kKey) throw ParamError("bad X25519 public key length");
    std::uint8_t shared[kKey], key[crypto_aead_xchacha20poly1305_ietf_KEYBYTES];
    if (crypto_scalarmult(shared, esk, pks[k].data()) != 0) {
      throw ParamError("degenerate X25519 public key");
    }
    derive_key(shared, epk, pks[k].data(), key);
    Bytes ct(kKey + kNonce + msgs[k].size() + kTag);
    std::memcpy(ct.data(), epk, kKey);
    rng.fill({ct.data() + kKey, kNonce});
    unsigned long long clen = 0;
    crypto_aead_xchacha20poly1305_ietf_encrypt(ct.data() + kKey + kNonce, &clen, msgs[k].data(),
                                               msgs[k].size(), ad.data(), ad.size(), nullptr,
                                               ct.data() + kKey, key);
    sodium_memzero(shared, sizeof(shared));
    sodium_memzero(key, sizeof(key));
    out.push_back(std::move(ct));
  }
  sodium_memzero(esk, sizeof(esk));
  return out;
}

std::optional<Bytes> HybridPke::open(const PkeKeyPair& kp, ByteView ad, ByteView ct) const {
  if (ct.size() < kKey + kNonce + kTag || kp.sk.size() != kKey) return std::nullopt;
  std::uint8_t shared[kKey], key[crypto_aead_xchacha20poly1305_ietf_KEYBYTES];
  if (crypto_scalarmult(shared, kp.sk.data(), ct.data()) != 0) return std::nullopt;
  derive_key(shared, ct.data(), kp.pk.data(), key);
  Bytes msg(ct.size() - kKey - kNonce - kTag);
  unsigned long long mlen = 0;
  const int rc = crypto_aead_xchacha20poly1305_ietf_decrypt(
      msg.data(), &mlen, nullptr, ct.data() + kKey + kNonce, ct.size() - kKey - kNonce,
      ad.data(), ad.size(), ct.data() + kKey, key);
  sodium_memzero(key, sizeof(key));
  if (rc != 0) return std::nullopt;
  return msg;
}

std::size_t HybridPke::overhead() const { return kKey + kNonce + kTag; }

PkeKeyPair NullCipher::keygen(Rng& rng) const {
  PkeKeyPair kp{Bytes(8), Bytes(8)};
  rng.fill(kp.pk);
  kp.sk = kp.pk;
  return kp;
}

// Layout: pk (8) || blob(ad) || msg. The recipient tag makes cross-key
// opens fail just like the real backend.
std::vector<Bytes> NullCipher::seal_batch(std::span<const Bytes> pks, ByteView ad,
                                          std::span<const Bytes> msgs, Rng&) const {
  if (pks.size() != msgs.size()) throw ParamError("recipient/message count mismatch");
  std::vector<Bytes> out;
  out.reserve(pks.size());
  for (std::size_t k = 0; k < pks.size(); ++k) {
    ByteWriter w(8 + 4 + ad.size() + msgs[k].size());
    w.raw(pks[k]);
    w.blob(ad);
    w.raw(msgs[k]);
    out.push_back(w.take());
  }
  return out;
}

std::optional<Bytes> NullCipher::open(const PkeKeyPair& kp, ByteView ad, ByteView ct) const {
  try {
    ByteReader r(ct);
    const ByteView tag = r.raw(kp.pk.size());
    const ByteView got = r.blob();
    if (!std::equal(tag.begin(), tag.end(), kp.pk.begin(), kp.pk.end())) return std::nullopt;
    if (!std::equal(got.begin(), got.end(), ad.begin(), ad.end())) return std::nullopt;
    const ByteView rest = r.raw(r.remaining());
    return Bytes(rest.begin(), rest.end());
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

std::size_t NullCipher::overhead() const { return 8 + 4 + 12; }

std::shared_ptr<const PkeBackend> make_pke(bool null_cipher) {
  if (null_cipher) return std::make_shared<NullCipher>();
  return std::make_shared<HybridPke>();
}

}  // namespace opa
