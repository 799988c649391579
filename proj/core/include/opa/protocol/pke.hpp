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

// Public-key encryption of committee payloads. The hybrid backend is
// X25519 + BLAKE2b + XChaCha20-Poly1305; NullCipher is an identity
// transform that still enforces the associated data, for deterministic
// tests and large simulations.

#ifndef OPA_PROTOCOL_PKE_HPP_
#define OPA_PROTOCOL_PKE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opa/bytes.hpp"
#include "opa/rng.hpp"

namespace opa {

struct PkeKeyPair {
  Bytes pk;
  Bytes sk;
};

// 8-byte label followed by the 4-byte client id.
Bytes iteration_ad(std::uint64_t ell, std::uint32_t client);

class PkeBackend {
 public:
  virtual ~PkeBackend() = default;

  virtual std::string name() const = 0;
  virtual PkeKeyPair keygen(Rng& rng) const = 0;
  // One ciphertext per recipient; implementations may share ephemeral
  // state across the batch.
  virtual std::vector<Bytes> seal_batch(std::span<const Bytes> pks, ByteView ad,
                                        std::span<const Bytes> msgs, Rng& rng) const = 0;
  virtual std::optional<Bytes> open(const PkeKeyPair& kp, ByteView ad, ByteView ct) const = 0;
  virtual std::size_t overhead() const = 0;

  Bytes seal(const Bytes& pk, ByteView ad, const Bytes& msg, Rng& rng) const;
};

class HybridPke final : public PkeBackend {
 public:
  std::string name() const override { return "x25519-xchacha20poly1305"; }
  PkeKeyPair keygen(Rng& rng) const override;
  // A single ephemeral key is used for the whole batch; keys are bound to
  // the recipient through the KDF input.
  std::vector<Bytes> seal_batch(std::span<const Bytes> pks, ByteView ad,
                                std::span<const Bytes> msgs, Rng& rng) const override;
  std::optional<Bytes> open(const PkeKeyPair& kp, ByteView ad, ByteView ct) const override;
  std::size_t overhead() const override;
};

class NullCipher final : public PkeBackend {
 public:
  std::string name() const override { return "null"; }
  PkeKeyPair keygen(Rng& rng) const override;
  std::vector<Bytes> seal_batch(std::span<const Bytes> pks, ByteView ad,
                                std::span<const Bytes> msgs, Rng& rng) const override;
  std::optional<Bytes> open(const PkeKeyPair& kp, ByteView ad, ByteView ct) const override;
  std::size_t overhead() const override;
};

std::shared_ptr<const PkeBackend> make_pke(bool null_cipher);

}  // namespace opa

#endif  // OPA_PROTOCOL_PKE_HPP_
