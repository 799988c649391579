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

// SCRAPE dual-code test and the commitment proof that a client's share
// vector lies on a degree-d polynomial.
//
// Values are indexed 0..m: index 0 carries the sharing polynomial at zero,
// index j the share of party j.

#ifndef OPA_SCRAPE_HPP_
#define OPA_SCRAPE_HPP_

#include <span>
#include <vector>

#include "opa/bytes.hpp"
#include "opa/group.hpp"
#include "opa/ringmath.hpp"
#include "opa/rng.hpp"

namespace opa {

struct ScrapeWeights {
  std::vector<u128> w;  // m + 1 entries, v_i * m*(i)
};

// v_i = prod_{j in {0..m}, j != i} (i - j)^-1
std::vector<u128> dual_code_vector(std::size_t m, const Modulus& q);

// m* has m - d coefficients (degree <= m - d - 1) drawn from
// Xof("OPA-SCRAPE-MSTAR").absorb(transcript). Throws ParamError if d >= m.
ScrapeWeights scrape_weights(std::size_t m, std::size_t d, const Modulus& q, ByteView transcript);
ScrapeWeights scrape_weights(std::size_t m, const Modulus& q, std::span<const u128> m_star);

// <w, values> == 0; throws ParamError on a length mismatch.
bool scrape_check(std::span<const u128> values, const ScrapeWeights& w, const Modulus& q);

struct SharingProof {
  std::vector<GroupElement> commitments;  // g^{values[j]}, j = 0..m
  std::vector<u128> z;                    // t_j + c * values[j]
  u128 inner_resp = 0;                    // <t, w>
  u128 challenge = 0;
};

// `context` is absorbed into both hashes (binds iteration, client, chunk).
SharingProof prove_sharing(std::span<const u128> values, std::size_t d, const GroupBackend& group,
                           ByteView context, Rng& rng);
// Recomputes w from the commitments, checks <w, z> = inner_resp, rebuilds
// the nonce commitments and compares challenges. Malformed input rejects.
bool verify_sharing(const SharingProof& proof, std::size_t m, std::size_t d,
                    const GroupBackend& group, ByteView context);

bool committee_share_check(u128 share, const GroupElement& commitment, const GroupBackend& group);
bool aggregate_commitment_check(std::span<const GroupElement> commitments, u128 reconstructed_sum,
                                const GroupBackend& group);

// Commitments (fixed width), z (16-byte LE each), inner_resp, challenge.
void write_proof(ByteWriter& w, const SharingProof& proof);
SharingProof read_proof(ByteReader& r, std::size_t m, const GroupBackend& group);

}  // namespace opa

#endif  // OPA_SCRAPE_HPP_
