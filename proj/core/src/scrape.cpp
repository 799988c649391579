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

#include "opa/scrape.hpp"

#include "opa/error.hpp"
#include "opa/xof.hpp"

namespace opa {
namespace {

void absorb_elements(Xof& xof, std::span<const GroupElement> elems) {
  for (const GroupElement& e : elems) xof.absorb(e.data);
}

Bytes commitment_transcript(std::span<const GroupElement> commitments, ByteView context) {
  ByteWriter w;
  w.blob(context);
  for (const GroupElement& e : commitments) w.raw(e.data);
  return w.take();
}

u128 challenge_hash(std::span<const GroupElement> commitments,
                    std::span<const GroupElement> nonce_commitments, const ScrapeWeights& w,
                    u128 inner, const Modulus& q, ByteView context) {
  Xof xof("OPA-SCRAPE-CHAL");
  ByteWriter ctx;
  ctx.blob(context);
  xof.absorb(ctx.bytes());
  absorb_elements(xof, commitments);
  absorb_elements(xof, nonce_commitments);
  for (u128 x : w.w) xof.absorb_u128(x);
  xof.absorb_u128(inner);
  return xof.uniform_below(q.value());
}

}  // namespace

std::vector<u128> dual_code_vector(std::size_t m, const Modulus& q) {
  std::vector<u128> v(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    u128 prod = 1;
    for (std::size_t j = 0; j <= m; ++j) {
      if (j == i) continue;
      prod = q.mul(prod, q.from_signed(static_cast<i128>(i) - static_cast<i128>(j)));
    }
    v[i] = q.inv(prod);
  }
  return v;
}

ScrapeWeights scrape_weights(std::size_t m, const Modulus& q, std::span<const u128> m_star) {
  const Poly f(q, std::vector<u128>(m_star.begin(), m_star.end()));
  const auto v = dual_code_vector(m, q);
  ScrapeWeights out;
  out.w.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i) out.w[i] = q.mul(v[i], f.eval(i));
  return out;
}

ScrapeWeights scrape_weights(std::size_t m, std::size_t d, const Modulus& q, ByteView transcript) {
  if (d >= m) throw ParamError("SCRAPE needs d < m");
  Xof xof("OPA-SCRAPE-MSTAR");
  xof.absorb(transcript);
  std::vector<u128> coeffs(m - d);
  for (u128& c : coeffs) c = xof.uniform_below(q.value());
  return scrape_weights(m, q, coeffs);
}

bool scrape_check(std::span<const u128> values, const ScrapeWeights& w, const Modulus& q) {
  if (values.size() != w.w.size()) throw ParamError("SCRAPE length mismatch");
  return q.dot(values, w.w) == 0;
}

SharingProof prove_sharing(std::span<const u128> values, std::size_t d, const GroupBackend& group,
                           ByteView context, Rng& rng) {
  const Modulus& q = group.order();
  const std::size_t m = values.size() - 1;
  SharingProof proof;
  proof.commitments.reserve(m + 1);
  for (u128 s : values) proof.commitments.push_back(group.exp_g(s));
  const ScrapeWeights w =
      scrape_weights(m, d, q, commitment_transcript(proof.commitments, context));
  std::vector<u128> t(m + 1);
  std::vector<GroupElement> nonce_commitments;
  nonce_commitments.reserve(m + 1);
  for (u128& x : t) {
    x = rng.uniform_below(q.value());
    nonce_commitments.push_back(group.exp_g(x));
  }
  proof.inner_resp = q.dot(t, w.w);
  proof.challenge =
      challenge_hash(proof.commitments, nonce_commitments, w, proof.inner_resp, q, context);
  proof.z.resize(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    proof.z[j] = q.add(t[j], q.mul(proof.challenge, q.reduce(values[j])));
  }
  return proof;
}

bool verify_sharing(const SharingProof& proof, std::size_t m, std::size_t d,
                    const GroupBackend& group, ByteView context) {
  const Modulus& q = group.order();
  if (proof.commitments.size() != m + 1 || proof.z.size() != m + 1) return false;
  if (d >= m) return false;
  for (u128 z : proof.z) {
    if (z >= q.value()) return false;
  }
  const ScrapeWeights w =
      scrape_weights(m, d, q, commitment_transcript(proof.commitments, context));
  if (q.dot(proof.z, w.w) != proof.inner_resp) return false;
  std::vector<GroupElement> nonce_commitments;
  nonce_commitments.reserve(m + 1);
  try {
    const u128 neg_c = q.neg(proof.challenge % q.value());
    for (std::size_t j = 0; j <= m; ++j) {
      nonce_commitments.push_back(
          group.mul(group.exp_g(proof.z[j]), group.exp(proof.commitments[j], neg_c)));
    }
  } catch (const DecodeError&) {
    return false;
  }
  return challenge_hash(proof.commitments, nonce_commitments, w, proof.inner_resp, q, context) ==
         proof.challenge;
}

bool committee_share_check(u128 share, const GroupElement& commitment, const GroupBackend& group) {
  return group.exp_g(share) == commitment;
}

bool aggregate_commitment_check(std::span<const GroupElement> commitments, u128 reconstructed_sum,
                                const GroupBackend& group) {
  GroupElement acc = group.identity();
  for (const GroupElement& c : commitments) acc = group.mul(acc, c);
  return acc == group.exp_g(reconstructed_sum);
}

void write_proof(ByteWriter& w, const SharingProof& proof) {
  for (const GroupElement& c : proof.commitments) w.raw(c.data);
  for (u128 z : proof.z) w.u128le(z);
  w.u128le(proof.inner_resp);
  w.u128le(proof.challenge);
}

SharingProof read_proof(ByteReader& r, std::size_t m, const GroupBackend& group) {
  SharingProof proof;
  proof.commitments.reserve(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    proof.commitments.push_back(group.decode(r.raw(group.encoded_size())));
  }
  proof.z.resize(m + 1);
  for (u128& z : proof.z) z = r.u128le();
  proof.inner_resp = r.u128le();
  proof.challenge = r.u128le();
  return proof;
}

}  // namespace opa
