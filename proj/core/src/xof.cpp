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

#include "opa/xof.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <memory>

#include "opa/error.hpp"

namespace opa {
namespace {

constexpr std::size_t kTagBytes = 16;

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};

void shake256(ByteView in, std::span<std::uint8_t> out) {
  std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_shake256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), in.data(), in.size()) != 1 ||
      EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1) {
    throw Error("SHAKE256 failed");
  }
}

}  // namespace

Xof::Xof(std::string_view domain_tag) {
  if (domain_tag.size() > kTagBytes) throw ParamError("domain tag longer than 16 bytes");
  input_.assign(kTagBytes, 0);
  std::copy(domain_tag.begin(), domain_tag.end(), input_.begin());
}

Xof& Xof::absorb(ByteView data) {
  if (squeezing_) throw Error("absorb after squeeze");
  input_.insert(input_.end(), data.begin(), data.end());
  return *this;
}

Xof& Xof::absorb_u32(std::uint32_t v) {
  ByteWriter w;
  w.u32(v);
  return absorb(w.bytes());
}

Xof& Xof::absorb_u64(std::uint64_t v) {
  ByteWriter w;
  w.u64(v);
  return absorb(w.bytes());
}

Xof& Xof::absorb_u128(u128 v) {
  ByteWriter w;
  w.u128le(v);
  return absorb(w.bytes());
}

// OpenSSL 3.0 finalizes XOF output in one call, so the stream is regenerated
// at doubling lengths; SHAKE output is prefix-stable, which keeps this exact.
void Xof::refill(std::size_t need) {
  std::size_t len = std::max<std::size_t>({stream_.size() * 2, need, 512});
  stream_.resize(len);
  shake256(input_, stream_);
}

void Xof::squeeze(std::span<std::uint8_t> out) {
  squeezing_ = true;
  if (pos_ + out.size() > stream_.size()) refill(pos_ + out.size());
  std::copy_n(stream_.begin() + static_cast<std::ptrdiff_t>(pos_), out.size(), out.begin());
  pos_ += out.size();
}

Bytes Xof::squeeze(std::size_t n) {
  Bytes out(n);
  squeeze(std::span<std::uint8_t>(out));
  return out;
}

u128 Xof::uniform_below(u128 bound) {
  if (bound < 2) throw ParamError("uniform_below needs bound >= 2");
  const unsigned bits = bit_length(bound - 1);
  const u128 mask = bits == 128 ? ~static_cast<u128>(0) : (static_cast<u128>(1) << bits) - 1;
  std::uint8_t chunk[16];
  for (;;) {
    squeeze(std::span<std::uint8_t>(chunk, 16));
    u128 v = 0;
    for (int k = 15; k >= 0; --k) v = (v << 8) | chunk[k];
    v &= mask;
    if (v < bound) return v;
  }
}

Bytes xof_digest(std::string_view domain_tag, ByteView data, std::size_t n) {
  Xof x(domain_tag);
  x.absorb(data);
  return x.squeeze(n);
}

}  // namespace opa
