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

#include "opa/rng.hpp"

#include <sodium.h>

#include <algorithm>

#include "opa/error.hpp"

namespace opa {
namespace {

void ensure_sodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw Error("libsodium initialisation failed");
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  ensure_sodium();
  std::uint8_t in[16] = {'O', 'P', 'A', '-', 'R', 'N', 'G'};
  for (int k = 0; k < 8; ++k) in[8 + k] = static_cast<std::uint8_t>(seed >> (8 * k));
  crypto_generichash(key_.data(), key_.size(), in, sizeof(in), nullptr, 0);
}

Rng::Rng(const std::array<std::uint8_t, 32>& key) : key_(key) { ensure_sodium(); }

Rng Rng::from_os() {
  ensure_sodium();
  std::array<std::uint8_t, 32> key;
  randombytes_buf(key.data(), key.size());
  return Rng(key);
}

Rng Rng::fork(std::string_view label, std::uint64_t id) const {
  crypto_generichash_state st;
  crypto_generichash_init(&st, key_.data(), key_.size(), 32);
  crypto_generichash_update(&st, reinterpret_cast<const unsigned char*>(label.data()),
                            label.size());
  std::uint8_t idb[8];
  for (int k = 0; k < 8; ++k) idb[k] = static_cast<std::uint8_t>(id >> (8 * k));
  crypto_generichash_update(&st, idb, sizeof(idb));
  std::array<std::uint8_t, 32> child;
  crypto_generichash_final(&st, child.data(), child.size());
  return Rng(child);
}

void Rng::refill() {
  std::uint8_t nonce[crypto_stream_chacha20_NONCEBYTES];
  for (int k = 0; k < 8; ++k) nonce[k] = static_cast<std::uint8_t>(block_ >> (8 * k));
  ++block_;
  crypto_stream_chacha20(buf_.data(), buf_.size(), nonce, key_.data());
  pos_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (pos_ == buf_.size()) refill();
    const std::size_t n = std::min(out.size() - done, buf_.size() - pos_);
    std::copy_n(buf_.begin() + static_cast<std::ptrdiff_t>(pos_), n, out.begin() + static_cast<std::ptrdiff_t>(done));
    pos_ += n;
    done += n;
  }
}

Rng::result_type Rng::operator()() {
  std::uint8_t b[8];
  fill(b);
  std::uint64_t v = 0;
  for (int k = 7; k >= 0; --k) v = (v << 8) | b[k];
  return v;
}

std::array<std::uint8_t, 32> Rng::key32() {
  std::array<std::uint8_t, 32> k;
  fill(k);
  return k;
}

std::array<std::uint8_t, 16> Rng::bytes16() {
  std::array<std::uint8_t, 16> k;
  fill(k);
  return k;
}

u128 Rng::uniform_below(u128 bound) {
  if (bound == 0) throw ParamError("uniform_below needs bound >= 1");
  if (bound == 1) return 0;
  const unsigned bits = bit_length(bound - 1);
  const u128 mask = bits == 128 ? ~static_cast<u128>(0) : (static_cast<u128>(1) << bits) - 1;
  for (;;) {
    u128 v = (*this)();
    if (bits > 64) v |= static_cast<u128>((*this)()) << 64;
    v &= mask;
    if (v < bound) return v;
  }
}

std::uint64_t Rng::uniform_u64(std::uint64_t bound) {
  return static_cast<std::uint64_t>(uniform_below(bound));
}

double Rng::uniform01() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::int64_t Rng::cbd(unsigned eta) {
  std::int64_t acc = 0;
  unsigned left = eta;
  while (left > 0) {
    const unsigned take = std::min(left, 32u);
    const std::uint64_t w = (*this)();
    const std::uint64_t mask = take == 32 ? 0xffffffffULL : ((1ULL << take) - 1);
    acc += __builtin_popcountll(w & mask) - __builtin_popcountll((w >> 32) & mask);
    left -= take;
  }
  return acc;
}

}  // namespace opa
