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

#include "opa/protocol/wire.hpp"

#include "opa/error.hpp"

namespace opa {

void write_frame(ByteWriter& w, const Frame& f) {
  w.u8(static_cast<std::uint8_t>(f.type));
  w.u64(f.ell);
  w.u32(f.sender);
  w.blob(f.body);
}

Frame read_frame(ByteReader& r) {
  Frame f;
  const std::uint8_t type = r.u8();
  switch (type) {
    case 0x00:
    case 0x1A:
    case 0x1B:
    case 0x02:
      f.type = static_cast<MsgType>(type);
      break;
    default:
      throw DecodeError("unknown message type");
  }
  f.ell = r.u64();
  f.sender = r.u32();
  const ByteView body = r.blob();
  f.body.assign(body.begin(), body.end());
  return f;
}

Bytes encode_frames(std::span<const Frame> frames) {
  std::size_t size = 0;
  for (const Frame& f : frames) size += 17 + f.body.size();
  ByteWriter w(size);
  for (const Frame& f : frames) write_frame(w, f);
  return w.take();
}

std::vector<Frame> decode_frames(ByteView data) {
  ByteReader r(data);
  std::vector<Frame> out;
  while (!r.done()) out.push_back(read_frame(r));
  return out;
}

}  // namespace opa
