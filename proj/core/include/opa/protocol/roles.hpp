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

// Client, committee and server roles for one aggregation iteration. Each
// role is a pure function of its inputs; messages are explicit values with
// byte encodings used by the simulator.

#ifndef OPA_PROTOCOL_ROLES_HPP_
#define OPA_PROTOCOL_ROLES_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opa/dkhprf.hpp"
#include "opa/group.hpp"
#include "opa/protocol/params.hpp"
#include "opa/protocol/pke.hpp"
#include "opa/protocol/wire.hpp"
#include "opa/scrape.hpp"
#include "opa/sharing.hpp"
#include "opa/shprg.hpp"

namespace opa {

enum class AbortReason {
  kTooManyDropouts,
  kTooFewCommittee,
  kMaliciousClient,
  kCommitteeComplaint,
  kEquivocation,
  kInvalidMessage,
};

std::string to_string(AbortReason reason);

// Public, session-wide state shared by every role.
struct ProtocolContext {
  ProtocolParams params;
  std::shared_ptr<const PublicMatrix> matrix;  // LWR / LWE
  std::shared_ptr<const PackedSharer> sharer;  // LWR / LWE
  CommitteeAssignment committee;
  std::vector<Bytes> member_pks;  // slot = group * m + (j - 1)
  std::shared_ptr<const PkeBackend> pke;
  const GroupBackend* group = nullptr;  // active security only
  std::optional<PrimeCodec> codec;      // PRIME_LWR only

  std::size_t slot(std::size_t group, std::size_t j) const { return group * params.m + (j - 1); }
};

// Derives the public matrix, samples the committee from `beacon` and
// records the members' public keys. Does not validate the parameters.
ProtocolContext make_context(const ProtocolParams& params, const Seed32& beacon,
                             std::shared_ptr<const PkeBackend> pke,
                             std::vector<Bytes> member_pks,
                             const GroupBackend* group = nullptr);

// Long-lived DPRF keys of one client in PRIME_LWR mode, one per coordinate.
struct PrimeClientKeys {
  std::vector<DprfKey> keys;                        // [l]
  std::vector<std::vector<DprfKeyShare>> shares;    // [l][j - 1]
};
PrimeClientKeys prime_keygen(const ProtocolParams& params, Rng& rng);
Bytes prime_point(std::uint64_t ell, std::size_t coord);

struct ClientMessage {
  std::uint32_t client = 0;
  std::uint64_t ell = 0;
  std::vector<u128> ct;              // message 1a
  std::vector<Bytes> aux;            // message 1b, aux[j - 1] for member j; empty = not sent
  std::vector<SharingProof> proofs;  // active: one per chunk, then the digest sharing
};

// Fault switches for the adversarial harness.
struct ClientFault {
  bool corrupt_share = false;  // shift member 1's share of chunk 0 after proving
  bool bad_proof = false;      // perturb one proof response
};

ClientMessage client_encrypt(const ProtocolContext& ctx, std::uint32_t i, std::span<const u128> x,
                             std::uint64_t ell, Rng& rng, const ClientFault& fault = {},
                             const PrimeClientKeys* prime = nullptr);

std::vector<Frame> to_frames(const ClientMessage& msg);
ClientMessage client_message_from_frames(std::span<const Frame> frames,
                                         const ProtocolContext& ctx);

struct IntersectResult {
  std::vector<std::uint32_t> online;  // sorted
  std::optional<AbortReason> abort;
};

// C = clients whose masked input and every committee ciphertext arrived.
// Active mode also verifies each client's sharing proofs.
IntersectResult server_intersect(const ProtocolContext& ctx,
                                 std::span<const ClientMessage> received, std::uint64_t ell);

struct ForwardMessage {
  std::uint64_t ell = 0;
  std::vector<std::uint32_t> online;
  std::vector<Bytes> cts;                                // parallel to online
  std::vector<std::vector<GroupElement>> commitments;    // active: [client][chunk]
};

// What the server sends to member j of `group`; `received` must be sorted
// by client id and cover ctx-group clients in `online`.
ForwardMessage server_forward(const ProtocolContext& ctx, std::span<const ClientMessage> received,
                              std::span<const std::uint32_t> online, std::size_t group,
                              std::size_t j);

Frame to_frame(const ForwardMessage& msg, std::uint32_t member_slot);
ForwardMessage forward_from_frame(const Frame& frame, const ProtocolContext& ctx);

struct MemberSecret {
  std::size_t group = 0;
  std::size_t j = 0;  // share index in [1, m]
  PkeKeyPair keys;
};

struct CommitteeMessage {
  std::size_t group = 0;
  std::size_t j = 0;
  bool abort = false;
  std::vector<u128> aux_sum;  // per chunk (or per coordinate in PRIME_LWR)
  std::vector<std::pair<std::uint32_t, u128>> dig_shares;  // active
  Digest16 view{};                                          // active
};

Digest16 view_digest(std::uint64_t ell, std::size_t group, std::span<const std::uint32_t> online);

CommitteeMessage committee_combine(const ProtocolContext& ctx, const MemberSecret& me,
                                   const ForwardMessage& fwd, std::uint64_t ell);

Frame to_frame(const CommitteeMessage& msg, std::uint64_t ell, std::uint32_t member_slot);
CommitteeMessage committee_message_from_frame(const Frame& frame, const ProtocolContext& ctx);

// Returns the view backed by at least r members, if any.
std::optional<Digest16> unique_set_guard(std::span<const CommitteeMessage> replies, std::size_t r);

struct IterationResult {
  std::uint64_t ell = 0;
  std::optional<AbortReason> abort;
  std::vector<i128> aggregate;
  std::vector<std::uint32_t> online;

  bool ok() const { return !abort.has_value(); }
};

// `received` is every parsed client message; only the online ones count.
IterationResult server_aggregate(const ProtocolContext& ctx,
                                 std::span<const CommitteeMessage> replies,
                                 std::span<const ClientMessage> received,
                                 std::span<const std::uint32_t> online, std::uint64_t ell);

// Runs one PRIME_LWR iteration synchronously with every party online.
IterationResult opa_prime_round(const ProtocolContext& ctx,
                                std::span<const PrimeClientKeys> clients,
                                std::span<const std::vector<u128>> inputs,
                                std::span<const MemberSecret> members, std::uint64_t ell,
                                Rng& rng);

// 2 sum(v) - |C| per coordinate; throws RangeError on a non-binary entry.
std::vector<std::int64_t> brsa_aggregate(std::span<const std::vector<u128>> v);
// Same transform applied to an aggregate of binary vectors.
std::vector<std::int64_t> brsa_from_sum(std::span<const i128> sum, std::size_t count);

}  // namespace opa

#endif  // OPA_PROTOCOL_ROLES_HPP_
