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

// SHAKE256-based extendable-output hash with a 16-byte domain tag prefix.
//
// Layout of the absorbed string: tag (zero-padded to 16 bytes) followed by
// every absorb() call in order. Output is the SHAKE256 stream, so any prefix
// of a longer squeeze equals a shorter squeeze of the same input.

#ifndef OPA_XOF_HPP_
#define OPA_XOF_HPP_

#include <cstdint>
#include <span>
#include <string_view>

#include "opa/bytes.hpp"
#include "opa/ringmath.hpp"

namespace opa {

class Xof {
 public:
  // Throws ParamError when the tag is longer than 16 bytes.
  explicit Xof(std::string_view domain_tag);

  Xof& absorb(ByteView data);
  Xof& absorb_u32(std::uint32_t v);
  Xof& absorb_u64(std::uint64_t v);
  Xof& absorb_u128(u128 v);

  // After the first squeeze the input is frozen; further absorbs throw.
  void squeeze(std::span<std::uint8_t> out);
  Bytes squeeze(std::size_t n);

  // Rejection sampling of 16-byte little-endian chunks masked to
  // bit_length(bound - 1); bound >= 2.
  u128 uniform_below(u128 bound);

 private:
  void refill(std::size_t need);

  Bytes input_;
  Bytes stream_;
  std::size_t pos_ = 0;
  bool squeezing_ = false;
};

// One-shot helper: SHAKE256(tag || data) truncated to n bytes.
Bytes xof_digest(std::string_view domain_tag, ByteView data, std::size_t n);

}  // namespace opa

#endif  // OPA_XOF_HPP_
