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

#include "opa/sim/session.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>

#include "opa/error.hpp"

namespace opa::sim {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point start) {
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

void charge(RoleMetrics& m, double us) {
  m.compute_ms += us / 1000.0;
  m.max_compute_ms = std::max(m.max_compute_ms, us / 1000.0);
}

RoleMetrics& role_metrics(MetricsRecord& rec, Role role) {
  switch (role) {
    case Role::kClient:
      return rec.client;
    case Role::kCommittee:
      return rec.committee;
    case Role::kServer:
      break;
  }
  return rec.server;
}

// k distinct values of [0, n), sorted.
std::vector<std::uint32_t> pick(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::uint32_t> all(n);
  std::iota(all.begin(), all.end(), 0u);
  k = std::min(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.uniform_u64(n - i);
    std::swap(all[i], all[j]);
  }
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

struct Session {
  const ScenarioConfig& cfg;
  const ProtocolParams& pp;
  ProtocolContext ctx;
  std::vector<MemberSecret> members;  // by slot
  std::vector<PrimeClientKeys> prime;
  Rng root;
  Rng latency_rng;
  // Client messages of the previous iteration, for the replaying server.
  std::vector<ClientMessage> previous;
  std::optional<SchnorrGroup> own_group;

  explicit Session(const ScenarioConfig& c)
      : cfg(c), pp(c.params), root(c.seed), latency_rng(c.latency.rng_seed) {
    auto pke = make_pke(cfg.null_cipher);
    Rng key_rng = root.fork("member-keys", 0);
    std::vector<Bytes> pks;
    for (std::size_t g = 0; g < pp.groups; ++g) {
      for (std::size_t j = 1; j <= pp.m; ++j) {
        members.push_back({g, j, pke->keygen(key_rng)});
        pks.push_back(members.back().keys.pk);
      }
    }
    const GroupBackend* group = nullptr;
    if (pp.security == Security::kActiveAbort) {
      const SchnorrGroup& def = SchnorrGroup::default_group();
      if (def.order() == pp.share().field) {
        group = &def;
      } else {
        Rng grng = root.fork("group", 0);
        own_group = SchnorrGroup::generate(pp.share().field, grng);
        group = &*own_group;
      }
    }
    const Seed32 beacon = root.fork("beacon", 0).key32();
    ctx = make_context(pp, beacon, pke, std::move(pks), group);
    if (pp.mode == Mode::kPrimeLwr) {
      for (std::size_t i = 0; i < pp.n; ++i) {
        Rng prng = root.fork("prime-keys", i);
        prime.push_back(prime_keygen(pp, prng));
      }
    }
  }

  void run_iteration(std::uint64_t ell, SessionOutput& out);
};

struct Event {
  double at;
  std::size_t msg;
  bool operator>(const Event& o) const { return std::tie(at, msg) > std::tie(o.at, o.msg); }
};

void Session::run_iteration(std::uint64_t ell, SessionOutput& out) {
  Rng irng = root.fork("iteration", ell);
  const std::size_t universe = pp.universe_size();

  // Inputs and dropouts are fixed up front so the oracle sees the same data.
  std::vector<std::vector<u128>> x(universe, std::vector<u128>(pp.big_l, 0));
  {
    Rng in_rng = irng.fork("inputs", 0);
    const u128 bound = u128{1} << pp.input_bits;
    for (std::size_t i = 0; i < pp.n; ++i) {
      for (u128& v : x[i]) v = in_rng.uniform_below(bound);
    }
  }
  Rng drop_rng = irng.fork("dropouts", 0);
  const auto dropped_list = pick(pp.n, cfg.dropped_clients(), drop_rng);
  const std::set<std::uint32_t> dropped(dropped_list.begin(), dropped_list.end());
  std::set<std::uint32_t> dropped_slots;
  for (std::size_t g = 0; g < pp.groups; ++g) {
    for (std::uint32_t j0 : pick(pp.m, cfg.dropped_members(), drop_rng)) {
      dropped_slots.insert(static_cast<std::uint32_t>(ctx.slot(g, j0 + 1)));
    }
  }

  MetricsRecord rec;
  rec.iteration = ell;
  IterationParticipants parts;
  IterationResult result;
  result.ell = ell;
  std::optional<IterationResult> final_result;
  double completion = 0;

  std::vector<TranscriptEntry> tr;
  std::vector<Bytes> payloads;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;

  auto send = [&](Role from, std::uint32_t fid, Role to, std::uint32_t tid, MsgType type,
                  Bytes bytes, double at) {
    TranscriptEntry e;
    e.ell = ell;
    e.from = from;
    e.from_id = fid;
    e.to = to;
    e.to_id = tid;
    e.type = type;
    e.bytes = bytes.size();
    e.send_us = at;
    e.arrive_us = at + cfg.latency.sample_us(latency_rng);
    RoleMetrics& m = role_metrics(rec, from);
    m.bytes_sent += e.bytes;
    ++m.messages_sent;
    queue.push({e.arrive_us, tr.size()});
    tr.push_back(e);
    payloads.push_back(std::move(bytes));
  };

  // Clients: one envelope carrying 1a and every 1b ciphertext.
  const bool inject_share = cfg.adversary == Adversary::kInconsistentShareClient;
  for (std::uint32_t i = 0; i < pp.n; ++i) {
    if (dropped.count(i)) continue;
    parts.clients.push_back(i);
    ClientFault fault;
    if (inject_share && i == 0) {
      fault.corrupt_share = true;
      const auto slot = static_cast<std::uint32_t>(ctx.slot(ctx.committee.group_of(0), 1));
      rec.injected = !dropped_slots.count(slot);
    }
    Rng crng = irng.fork("client", i);
    const auto t0 = Clock::now();
    const ClientMessage msg = client_encrypt(ctx, i, x[i], ell, crng, fault,
                                             prime.empty() ? nullptr : &prime[i]);
    Bytes env = encode_frames(to_frames(msg));
    const double us = elapsed_us(t0);
    charge(rec.client, us);
    send(Role::kClient, i, Role::kServer, kServerId, MsgType::kMaskedInput, std::move(env), us);
  }

  std::size_t clients_pending = tr.size();
  std::vector<ClientMessage> received;
  std::vector<std::uint32_t> online;
  std::size_t replies_pending = 0;
  std::vector<CommitteeMessage> replies;
  // Equivocating server: slot -> whether that member saw the reduced set.
  std::vector<std::uint32_t> reduced;
  std::map<std::uint32_t, bool> saw_reduced;

  double server_free = 0;  // the server handles one message at a time

  auto finish = [&](IterationResult res, double at) {
    final_result = std::move(res);
    completion = at;
  };

  auto aggregate_phase = [&](double at) {
    const auto t0 = Clock::now();
    IterationResult res;
    if (reduced.empty()) {
      res = server_aggregate(ctx, replies, received, online, ell);
    } else {
      // One attempt per view; either may be backed by r members.
      std::vector<CommitteeMessage> full, part;
      for (const CommitteeMessage& cm : replies) {
        (saw_reduced[static_cast<std::uint32_t>(ctx.slot(cm.group, cm.j))] ? part : full)
            .push_back(cm);
      }
      res = server_aggregate(ctx, full, received, online, ell);
      if (!res.ok()) {
        IterationResult alt = server_aggregate(ctx, part, received, reduced, ell);
        if (alt.ok()) res = std::move(alt);
      }
    }
    const double us = elapsed_us(t0);
    charge(rec.server, us);
    res.ell = ell;
    finish(std::move(res), at + us);
  };

  auto forward_phase = [&](double at) {
    const auto t0 = Clock::now();
    std::sort(received.begin(), received.end(),
              [](const ClientMessage& a, const ClientMessage& b) { return a.client < b.client; });
    const IntersectResult inter = server_intersect(ctx, received, ell);
    double us = elapsed_us(t0);
    if (inter.abort) {
      charge(rec.server, us);
      IterationResult res;
      res.ell = ell;
      res.abort = inter.abort;
      finish(std::move(res), at + us);
      return;
    }
    online = inter.online;

    if (cfg.adversary == Adversary::kEquivocatingServer && online.size() >= 2) {
      reduced.assign(online.begin(), online.end() - 1);
      rec.injected = true;
    }
    // Replaying server: victim is the first online client; member 1 of its group.
    std::optional<std::pair<std::uint32_t, std::size_t>> replay;
    if (cfg.adversary == Adversary::kReplayingServer && !online.empty()) {
      const std::uint32_t victim = online.front();
      const auto it = std::find_if(previous.begin(), previous.end(),
                                   [&](const ClientMessage& m) { return m.client == victim; });
      if (it != previous.end() && !it->aux.empty() && !it->aux[0].empty()) {
        replay = {victim, ctx.slot(ctx.committee.group_of(victim), 1)};
        rec.injected = !dropped_slots.count(static_cast<std::uint32_t>(replay->second));
      }
    }

    std::vector<std::pair<std::uint32_t, Bytes>> outbox;
    for (std::size_t g = 0; g < pp.groups; ++g) {
      std::vector<std::uint32_t> in_group;
      for (std::uint32_t i : online) {
        if (ctx.committee.group_of(i) == g) in_group.push_back(i);
      }
      if (in_group.empty()) continue;
      for (std::size_t j = 1; j <= pp.m; ++j) {
        const auto slot = static_cast<std::uint32_t>(ctx.slot(g, j));
        const bool use_reduced = !reduced.empty() && g == ctx.committee.group_of(online.back()) &&
                                 j > pp.m / 2;
        saw_reduced[slot] = use_reduced;
        ForwardMessage fwd = server_forward(ctx, received, use_reduced ? reduced : online, g, j);
        if (replay && slot == replay->second) {
          const auto pos = std::find(fwd.online.begin(), fwd.online.end(), replay->first);
          const auto prev = std::find_if(previous.begin(), previous.end(), [&](const auto& m) {
            return m.client == replay->first;
          });
          fwd.cts[pos - fwd.online.begin()] = prev->aux[0];
        }
        outbox.emplace_back(slot, encode_frames(std::vector<Frame>{to_frame(fwd, slot)}));
        parts.members_contacted.push_back(slot);
      }
    }
    us = elapsed_us(t0);
    charge(rec.server, us);
    for (auto& [slot, bytes] : outbox) {
      send(Role::kServer, kServerId, Role::kCommittee, slot, MsgType::kBegin, std::move(bytes),
           at + us);
      if (!dropped_slots.count(slot)) ++replies_pending;
    }
    if (replies_pending == 0) aggregate_phase(at + us);
  };

  if (clients_pending == 0) forward_phase(0);

  while (!queue.empty()) {
    const Event ev = queue.top();
    queue.pop();
    TranscriptEntry& e = tr[ev.msg];
    e.delivered = true;
    role_metrics(rec, e.to).bytes_received += e.bytes;
    const Bytes bytes = std::move(payloads[ev.msg]);

    if (e.to == Role::kServer && e.from == Role::kClient) {
      const auto t0 = Clock::now();
      try {
        received.push_back(client_message_from_frames(decode_frames(bytes), ctx));
      } catch (const Error&) {
        // Unparseable envelopes count as missing.
      }
      const double us = elapsed_us(t0);
      charge(rec.server, us);
      server_free = std::max(server_free, ev.at) + us;
      if (--clients_pending == 0) forward_phase(server_free);
    } else if (e.to == Role::kCommittee) {
      const std::uint32_t slot = e.to_id;
      if (dropped_slots.count(slot)) continue;  // drops before its only send
      const auto t0 = Clock::now();
      const ForwardMessage fwd = forward_from_frame(decode_frames(bytes).at(0), ctx);
      const CommitteeMessage cm = committee_combine(ctx, members[slot], fwd, ell);
      Bytes reply = encode_frames(std::vector<Frame>{to_frame(cm, ell, slot)});
      const double us = elapsed_us(t0);
      charge(rec.committee, us);
      parts.members.push_back(slot);
      send(Role::kCommittee, slot, Role::kServer, kServerId, MsgType::kCommitteeCombined,
           std::move(reply), ev.at + us);
    } else if (e.to == Role::kServer && e.from == Role::kCommittee) {
      const auto t0 = Clock::now();
      try {
        replies.push_back(committee_message_from_frame(decode_frames(bytes).at(0), ctx));
      } catch (const Error&) {
      }
      const double us = elapsed_us(t0);
      charge(rec.server, us);
      server_free = std::max(server_free, ev.at) + us;
      if (--replies_pending == 0) aggregate_phase(server_free);
    }
  }

  for (const TranscriptEntry& e : tr) {
    if (!e.delivered) rec.bytes_dropped += e.bytes;
  }
  if (!final_result) {
    IterationResult res;
    res.ell = ell;
    res.abort = AbortReason::kTooFewCommittee;
    final_result = std::move(res);
  }
  result = std::move(*final_result);

  std::vector<i128> expect;
  if (result.ok()) {
    expect.assign(pp.big_l, 0);
    for (std::uint32_t i : result.online) {
      for (std::size_t l = 0; l < pp.big_l; ++l) expect[l] += static_cast<i128>(x[i][l]);
    }
  }
  rec.outcome = result.ok() ? "ok" : to_string(*result.abort);
  rec.exact = result.ok() && result.aggregate == expect;
  rec.online = result.ok() ? result.online.size() : online.size();
  rec.committee_replies = replies.size();
  rec.completion_us = completion;
  std::sort(parts.members.begin(), parts.members.end());
  std::sort(parts.members_contacted.begin(), parts.members_contacted.end());

  previous = std::move(received);
  out.results.push_back(std::move(result));
  out.expected.push_back(std::move(expect));
  out.metrics.push_back(rec);
  out.participants.push_back(std::move(parts));
  out.transcript.insert(out.transcript.end(), tr.begin(), tr.end());
}

}  // namespace

std::string to_string(Role role) {
  switch (role) {
    case Role::kClient:
      return "client";
    case Role::kCommittee:
      return "committee";
    case Role::kServer:
      return "server";
  }
  return "?";
}

std::uint64_t MetricsRecord::bytes_sent() const {
  return client.bytes_sent + committee.bytes_sent + server.bytes_sent;
}

std::uint64_t MetricsRecord::bytes_received() const {
  return client.bytes_received + committee.bytes_received + server.bytes_received;
}

SessionOutput run_session(const ScenarioConfig& cfg, const AggregateHook& hook) {
  if (!cfg.unchecked) validate(cfg.params);
  cfg.latency.validate();
  if (cfg.dropout < 0 || cfg.dropout > 1 || cfg.committee_dropout < 0 ||
      cfg.committee_dropout > 1) {
    throw ParamError("dropout rates must lie in [0, 1]");
  }
  Session session(cfg);
  SessionOutput out;
  for (std::uint64_t ell = 1; ell <= cfg.iterations; ++ell) {
    session.run_iteration(ell, out);
    if (hook) hook(ell, out.results.back());
  }
  return out;
}

AuditReport single_send_audit(const SessionOutput& out) {
  AuditReport rep;
  std::ostringstream why;
  for (std::size_t it = 0; it < out.participants.size(); ++it) {
    const std::uint64_t ell = out.metrics[it].iteration;
    std::map<std::uint32_t, int> client_sends, member_sends;
    for (const TranscriptEntry& e : out.transcript) {
      if (e.ell != ell) continue;
      if (e.from == Role::kClient) ++client_sends[e.from_id];
      if (e.from == Role::kCommittee) ++member_sends[e.from_id];
    }
    const IterationParticipants& p = out.participants[it];
    auto check = [&](const char* who, const std::map<std::uint32_t, int>& sends,
                     const std::vector<std::uint32_t>& expected) {
      std::set<std::uint32_t> want(expected.begin(), expected.end());
      for (const auto& [id, count] : sends) {
        if (count != 1 || !want.count(id)) {
          rep.ok = false;
          why << "ell " << ell << ": " << who << " " << id << " sent " << count << "\n";
        }
      }
      for (std::uint32_t id : want) {
        if (!sends.count(id)) {
          rep.ok = false;
          why << "ell " << ell << ": " << who << " " << id << " never sent\n";
        }
      }
    };
    check("client", client_sends, p.clients);
    check("member", member_sends, p.members);
  }
  rep.detail = why.str();
  return rep;
}

AuditReport byte_balance_audit(const SessionOutput& out) {
  AuditReport rep;
  std::ostringstream why;
  for (const MetricsRecord& m : out.metrics) {
    if (m.bytes_sent() != m.bytes_received() + m.bytes_dropped) {
      rep.ok = false;
      why << "ell " << m.iteration << ": sent " << m.bytes_sent() << " received "
          << m.bytes_received() << " dropped " << m.bytes_dropped << "\n";
    }
  }
  rep.detail = why.str();
  return rep;
}

std::string ParamReport::text() const {
  std::ostringstream os;
  for (const RuleResult& r : rules) {
    os << (r.pass ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) os << ": " << r.detail;
    os << "\n";
  }
  os << (ok ? "parameters valid" : "parameters rejected") << "\n";
  return os.str();
}

ParamReport verify_params(const ScenarioConfig& cfg) {
  ParamReport rep;
  rep.rules = check_rules(cfg.params);
  RuleResult lat{"latency model", true, ""};
  try {
    cfg.latency.validate();
  } catch (const ParamError& e) {
    lat.pass = false;
    lat.detail = e.what();
  }
  rep.rules.push_back(lat);
  rep.rules.push_back({"dropout rates in [0, 1]",
                       cfg.dropout >= 0 && cfg.dropout <= 1 && cfg.committee_dropout >= 0 &&
                           cfg.committee_dropout <= 1,
                       ""});
  for (const RuleResult& r : rep.rules) rep.ok = rep.ok && r.pass;
  return rep;
}

}  // namespace opa::sim
