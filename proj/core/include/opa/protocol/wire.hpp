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

// Message framing: 1-byte type, 8-byte label, 4-byte sender, then a
// length-prefixed body. Integers are little-endian.

#ifndef OPA_PROTOCOL_WIRE_HPP_
#define OPA_PROTOCOL_WIRE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "opa/bytes.hpp"

namespace opa {

enum class MsgType : std::uint8_t {
  kBegin = 0x00,  // server -> committee: online set and forwarded ciphertexts
  kMaskedInput = 0x1A,
  kAuxCiphertext = 0x1B,
  kCommitteeCombined = 0x02,
};

inline constexpr std::uint32_t kServerId = 0xffffffffu;

struct Frame {
  MsgType type = MsgType::kBegin;
  std::uint64_t ell = 0;
  std::uint32_t sender = 0;
  Bytes body;
};

void write_frame(ByteWriter& w, const Frame& f);
// Throws DecodeError on truncation or an unknown type byte.
Frame read_frame(ByteReader& r);

Bytes encode_frames(std::span<const Frame> frames);
std::vector<Frame> decode_frames(ByteView data);

}  // namespace opa

#endif  // OPA_PROTOCOL_WIRE_HPP_
