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

// Discrete-event execution of multi-iteration sessions. Message arrivals
// are events at send time plus a sampled network delay; role compute is
// measured by wall clock and advances the sender's clock.

#ifndef OPA_SIM_SESSION_HPP_
#define OPA_SIM_SESSION_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "opa/protocol/roles.hpp"
#include "opa/protocol/wire.hpp"
#include "opa/sim/config.hpp"

namespace opa::sim {

enum class Role : std::uint8_t { kClient, kCommittee, kServer };
std::string to_string(Role role);

struct TranscriptEntry {
  std::uint64_t ell = 0;
  Role from = Role::kClient;
  std::uint32_t from_id = 0;  // client id, committee slot, or kServerId
  Role to = Role::kServer;
  std::uint32_t to_id = 0;
  MsgType type = MsgType::kBegin;
  std::size_t bytes = 0;
  double send_us = 0;
  double arrive_us = 0;
  bool delivered = false;
};

struct RoleMetrics {
  double compute_ms = 0;      // summed over parties of this role
  double max_compute_ms = 0;  // slowest single party
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_received = 0;
  std::size_t messages_sent = 0;
};

struct MetricsRecord {
  std::uint64_t iteration = 0;
  std::string outcome;  // "ok" or the abort reason
  bool exact = false;   // aggregate equals the plaintext sum over C
  bool injected = false;
  std::size_t online = 0;
  std::size_t committee_replies = 0;
  double completion_us = 0;
  RoleMetrics client, committee, server;
  std::uint64_t bytes_dropped = 0;

  std::uint64_t bytes_sent() const;
  std::uint64_t bytes_received() const;
};

struct IterationParticipants {
  std::vector<std::uint32_t> clients;  // did not drop out
  std::vector<std::uint32_t> members;  // committee slots that did not drop out
  std::vector<std::uint32_t> members_contacted;  // slots the server forwarded to
};

struct SessionOutput {
  std::vector<IterationResult> results;
  std::vector<std::vector<i128>> expected;  // plaintext sum over the online set
  std::vector<MetricsRecord> metrics;
  std::vector<TranscriptEntry> transcript;
  std::vector<IterationParticipants> participants;
};

// Called after each iteration's aggregation, e.g. to feed an optimiser.
using AggregateHook = std::function<void(std::uint64_t ell, const IterationResult&)>;

// Validates the configuration first unless cfg.unchecked; aborts are
// recorded in the results, not thrown.
SessionOutput run_session(const ScenarioConfig& cfg, const AggregateHook& hook = {});

struct AuditReport {
  bool ok = true;
  std::string detail;
};

// Every non-dropped client and every contacted, non-dropped committee
// member sends exactly one message per iteration; nobody else sends.
AuditReport single_send_audit(const SessionOutput& out);
// Sent bytes equal received plus dropped bytes, per iteration.
AuditReport byte_balance_audit(const SessionOutput& out);

struct ParamReport {
  std::vector<RuleResult> rules;
  bool ok = true;
  std::string text() const;
};

ParamReport verify_params(const ScenarioConfig& cfg);

}  // namespace opa::sim

#endif  // OPA_SIM_SESSION_HPP_
