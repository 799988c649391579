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

// Deterministic ChaCha20 stream RNG (libsodium) used for every sampled
// quantity, so runs are reproducible from their seeds.

#ifndef OPA_RNG_HPP_
#define OPA_RNG_HPP_

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

#include "opa/ringmath.hpp"

namespace opa {

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);
  explicit Rng(const std::array<std::uint8_t, 32>& key);
  // Keyed from the operating system entropy source.
  static Rng from_os();

  // Independent child stream keyed by (parent key, label, id); does not
  // advance the parent.
  Rng fork(std::string_view label, std::uint64_t id) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  void fill(std::span<std::uint8_t> out);
  std::array<std::uint8_t, 32> key32();
  std::array<std::uint8_t, 16> bytes16();

  // Uniform in [0, bound); bound >= 1.
  u128 uniform_below(u128 bound);
  std::uint64_t uniform_u64(std::uint64_t bound);
  // Uniform double in [0, 1).
  double uniform01();
  // Centered binomial: sum of eta coin differences, in [-eta, eta].
  std::int64_t cbd(unsigned eta);

 private:
  void refill();

  std::array<std::uint8_t, 32> key_{};
  std::array<std::uint8_t, 512> buf_{};
  std::size_t pos_ = 512;
  std::uint64_t block_ = 0;
};

}  // namespace opa

#endif  // OPA_RNG_HPP_
