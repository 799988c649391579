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

#include "opa/protocol/roles.hpp"

#include <algorithm>
#include <map>

#include "opa/error.hpp"
#include "opa/xof.hpp"

namespace opa {
namespace {

Bytes proof_context(std::uint64_t ell, std::uint32_t client, std::size_t slot) {
  ByteWriter w(16);
  w.u64(ell);
  w.u32(client);
  w.u32(static_cast<std::uint32_t>(slot));
  return w.take();
}

Digest16 digest_bytes(u128 dig) {
  Digest16 out{};
  for (int k = 0; k < 16; ++k) out[k] = static_cast<std::uint8_t>(dig >> (8 * k));
  return out;
}

bool is_active(const ProtocolParams& pp) { return pp.security == Security::kActiveAbort; }

// Values each member receives per client: chunks, or coordinates in PRIME_LWR.
std::size_t aux_count(const ProtocolParams& pp) {
  return pp.mode == Mode::kPrimeLwr ? pp.big_l : pp.chunks();
}

const Modulus& aux_modulus(const ProtocolParams& pp) {
  return pp.mode == Mode::kPrimeLwr ? pp.dprf.p : pp.q;
}

std::map<std::uint32_t, const ClientMessage*> index_by_client(
    std::span<const ClientMessage> received) {
  std::map<std::uint32_t, const ClientMessage*> out;
  for (const ClientMessage& msg : received) out.emplace(msg.client, &msg);
  return out;
}

IterationResult abort_with(IterationResult res, AbortReason reason) {
  res.abort = reason;
  res.aggregate.clear();
  return res;
}

}  // namespace

std::string to_string(AbortReason reason) {
  switch (reason) {
    case AbortReason::kTooManyDropouts: return "TooManyDropouts";
    case AbortReason::kTooFewCommittee: return "TooFewCommittee";
    case AbortReason::kMaliciousClient: return "MaliciousClient";
    case AbortReason::kCommitteeComplaint: return "CommitteeComplaint";
    case AbortReason::kEquivocation: return "Equivocation";
    case AbortReason::kInvalidMessage: return "InvalidMessage";
  }
  return "?";
}

ProtocolContext make_context(const ProtocolParams& params, const Seed32& beacon,
                             std::shared_ptr<const PkeBackend> pke,
                             std::vector<Bytes> member_pks, const GroupBackend* group) {
  ProtocolContext ctx;
  ctx.params = params;
  ctx.committee = sample_committee(params.universe_size(), params.m, params.groups, beacon);
  if (member_pks.size() != params.m * params.groups) {
    throw ParamError("need one public key per committee slot");
  }
  ctx.member_pks = std::move(member_pks);
  ctx.pke = std::move(pke);
  if (is_active(params)) {
    if (group == nullptr) throw ParamError("active security needs a group backend");
    if (!(group->order() == params.q)) throw ParamError("group order must equal the field modulus");
  }
  ctx.group = group;
  if (params.mode == Mode::kPrimeLwr) {
    ctx.codec = prime_codec(params);
  } else {
    ctx.matrix = std::make_shared<const PublicMatrix>(derive_matrix(params.prg()));
    ctx.sharer = std::make_shared<const PackedSharer>(params.share());
  }
  return ctx;
}

PrimeClientKeys prime_keygen(const ProtocolParams& params, Rng& rng) {
  const DprfParams dp = params.dprf_params();
  PrimeClientKeys out;
  for (std::size_t l = 0; l < params.big_l; ++l) {
    out.keys.push_back(sample_key(dp, rng));
    out.shares.push_back(share_key(out.keys.back(), dp, rng));
  }
  return out;
}

Bytes prime_point(std::uint64_t ell, std::size_t coord) {
  ByteWriter w(16);
  w.u64(ell);
  w.u64(coord);
  return w.take();
}

ClientMessage client_encrypt(const ProtocolContext& ctx, std::uint32_t i, std::span<const u128> x,
                             std::uint64_t ell, Rng& rng, const ClientFault& fault,
                             const PrimeClientKeys* prime) {
  const ProtocolParams& pp = ctx.params;
  if (x.size() != pp.big_l) throw ParamError("input length differs from L");
  const Modulus& cm = pp.ct_modulus();
  const std::size_t g = ctx.committee.group_of(i);
  ClientMessage msg;
  msg.client = i;
  msg.ell = ell;
  msg.ct.resize(pp.big_l);
  std::vector<ByteWriter> plain(pp.m);
  const std::size_t count = aux_count(pp);
  for (ByteWriter& w : plain) {
    w.u64(ell);
    w.u32(i);
    w.u32(static_cast<std::uint32_t>(count));
  }

  if (pp.mode == Mode::kPrimeLwr) {
    if (prime == nullptr || prime->keys.size() != pp.big_l) throw ParamError("missing DPRF keys");
    const DprfParams dp = pp.dprf_params();
    const PrimeCodec& codec = *ctx.codec;
    for (std::size_t l = 0; l < pp.big_l; ++l) {
      if (x[l] > codec.max_sum) throw RangeError("input exceeds the DPRF encoding range");
      const auto h = hash_point(prime_point(ell, l), dp);
      msg.ct[l] = cm.add(x[l] * codec.w + codec.o, dprf_eval_hashed(h, prime->keys[l], dp));
      for (std::size_t j = 0; j < pp.m; ++j) {
        plain[j].u128le(inner_round_p(h, prime->shares[l][j].k, dp));
      }
    }
  } else {
    const PrgParams prg = pp.prg();
    const EncodeParams ep = pp.encode();
    const bool lwr = pp.mode == Mode::kLwr;
    const PrgSeed sd = lwr ? sample_seed_lwr(prg, rng) : sample_seed_lwe(prg, pp.lwe_eta, rng);
    const std::vector<u128> mask =
        lwr ? expand_lwr(prg, *ctx.matrix, sd)
            : expand_lwe(prg, *ctx.matrix, sd, lwe_error_bound(pp.lwe_eta));
    for (std::size_t l = 0; l < pp.big_l; ++l) {
      const u128 enc = lwr ? encode_lwr(x[l], ep, pp.p, rng) : encode_lwe(x[l], ep, pp.q);
      msg.ct[l] = cm.add(enc, mask[l]);
    }
    const auto chunks = chunk_seed(sd.s, pp.rho);
    std::vector<std::vector<u128>> values(chunks.size());
    for (std::size_t k = 0; k < chunks.size(); ++k) values[k] = ctx.sharer->share(chunks[k], rng);

    std::vector<u128> dig_values;
    if (is_active(pp)) {
      const u128 dig = rng.uniform_below(pp.q.value());
      const auto m2 = second_mask(digest_bytes(dig), pp.big_l, cm);
      for (std::size_t l = 0; l < pp.big_l; ++l) msg.ct[l] = cm.add(msg.ct[l], m2[l]);
      std::vector<u128> coeffs(pp.r);
      coeffs[0] = dig;
      for (std::size_t c = 1; c < pp.r; ++c) coeffs[c] = rng.uniform_below(pp.q.value());
      const Poly f(pp.q, std::move(coeffs));
      dig_values.resize(pp.m + 1);
      for (std::size_t j = 0; j <= pp.m; ++j) dig_values[j] = f.eval(j);
      for (std::size_t k = 0; k < values.size(); ++k) {
        msg.proofs.push_back(
            prove_sharing(values[k], pp.r - 1, *ctx.group, proof_context(ell, i, k), rng));
      }
      msg.proofs.push_back(
          prove_sharing(dig_values, pp.r - 1, *ctx.group, proof_context(ell, i, values.size()), rng));
      if (fault.bad_proof) msg.proofs.front().z.front() = pp.q.add(msg.proofs.front().z.front(), 1);
    }
    if (fault.corrupt_share) values[0][1] = pp.q.add(values[0][1], 1);

    for (std::size_t j = 1; j <= pp.m; ++j) {
      for (const auto& v : values) plain[j - 1].u128le(v[j]);
      if (!dig_values.empty()) plain[j - 1].u128le(dig_values[j]);
    }
  }

  std::vector<Bytes> pks(pp.m), msgs(pp.m);
  for (std::size_t j = 1; j <= pp.m; ++j) {
    pks[j - 1] = ctx.member_pks[ctx.slot(g, j)];
    msgs[j - 1] = plain[j - 1].take();
  }
  msg.aux = ctx.pke->seal_batch(pks, iteration_ad(ell, i), msgs, rng);
  return msg;
}

std::vector<Frame> to_frames(const ClientMessage& msg) {
  std::vector<Frame> out;
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(msg.ct.size()));
  for (u128 c : msg.ct) w.u128le(c);
  w.u32(static_cast<std::uint32_t>(msg.proofs.size()));
  for (const SharingProof& p : msg.proofs) write_proof(w, p);
  out.push_back({MsgType::kMaskedInput, msg.ell, msg.client, w.take()});
  for (std::size_t j = 0; j < msg.aux.size(); ++j) {
    if (msg.aux[j].empty()) continue;
    ByteWriter a(8 + msg.aux[j].size());
    a.u32(static_cast<std::uint32_t>(j + 1));
    a.blob(msg.aux[j]);
    out.push_back({MsgType::kAuxCiphertext, msg.ell, msg.client, a.take()});
  }
  return out;
}

ClientMessage client_message_from_frames(std::span<const Frame> frames,
                                         const ProtocolContext& ctx) {
  const ProtocolParams& pp = ctx.params;
  ClientMessage msg;
  msg.aux.resize(pp.m);
  bool have_ct = false;
  for (const Frame& f : frames) {
    if (&f == frames.data()) {
      msg.client = f.sender;
      msg.ell = f.ell;
    } else if (f.sender != msg.client || f.ell != msg.ell) {
      throw DecodeError("frames from different senders or iterations");
    }
    ByteReader r(f.body);
    if (f.type == MsgType::kMaskedInput) {
      if (have_ct) throw DecodeError("duplicate masked input");
      have_ct = true;
      const std::uint32_t len = r.u32();
      if (len != pp.big_l) throw DecodeError("masked input has wrong length");
      msg.ct.resize(len);
      for (u128& c : msg.ct) c = r.u128le();
      const std::uint32_t np = r.u32();
      if (np > 0) {
        if (ctx.group == nullptr || np > pp.chunks() + 1) throw DecodeError("unexpected proofs");
        for (std::uint32_t k = 0; k < np; ++k) msg.proofs.push_back(read_proof(r, pp.m, *ctx.group));
      }
    } else if (f.type == MsgType::kAuxCiphertext) {
      const std::uint32_t j = r.u32();
      if (j == 0 || j > pp.m) throw DecodeError("aux ciphertext for unknown member");
      const ByteView ct = r.blob();
      msg.aux[j - 1].assign(ct.begin(), ct.end());
    } else {
      throw DecodeError("unexpected frame from client");
    }
    r.expect_done();
  }
  if (!have_ct) throw DecodeError("client sent no masked input");
  return msg;
}

IntersectResult server_intersect(const ProtocolContext& ctx,
                                 std::span<const ClientMessage> received, std::uint64_t ell) {
  const ProtocolParams& pp = ctx.params;
  const Modulus& cm = pp.ct_modulus();
  IntersectResult out;
  for (const auto& [id, msg] : index_by_client(received)) {
    if (id >= pp.n || msg->ell != ell || msg->ct.size() != pp.big_l) continue;
    if (!std::all_of(msg->ct.begin(), msg->ct.end(), [&](u128 c) { return c < cm.value(); })) {
      continue;
    }
    if (msg->aux.size() != pp.m ||
        std::any_of(msg->aux.begin(), msg->aux.end(), [](const Bytes& b) { return b.empty(); })) {
      continue;
    }
    if (is_active(pp)) {
      bool ok = msg->proofs.size() == pp.chunks() + 1;
      for (std::size_t k = 0; ok && k < msg->proofs.size(); ++k) {
        ok = verify_sharing(msg->proofs[k], pp.m, pp.r - 1, *ctx.group, proof_context(ell, id, k));
      }
      if (!ok) {
        out.abort = AbortReason::kMaliciousClient;
        return out;
      }
    }
    out.online.push_back(id);
  }
  if (static_cast<double>(out.online.size()) + 1e-9 < (1.0 - pp.delta) * static_cast<double>(pp.n)) {
    out.abort = AbortReason::kTooManyDropouts;
  }
  return out;
}

ForwardMessage server_forward(const ProtocolContext& ctx, std::span<const ClientMessage> received,
                              std::span<const std::uint32_t> online, std::size_t group,
                              std::size_t j) {
  const auto by_id = index_by_client(received);
  ForwardMessage fwd;
  for (std::uint32_t i : online) {
    if (ctx.committee.group_of(i) != group) continue;
    const auto it = by_id.find(i);
    if (it == by_id.end()) throw ParamError("online client without a message");
    const ClientMessage& msg = *it->second;
    fwd.ell = msg.ell;
    fwd.online.push_back(i);
    fwd.cts.push_back(msg.aux.at(j - 1));
    if (is_active(ctx.params)) {
      std::vector<GroupElement> cs;
      for (const SharingProof& p : msg.proofs) cs.push_back(p.commitments.at(j));
      fwd.commitments.push_back(std::move(cs));
    }
  }
  return fwd;
}

Frame to_frame(const ForwardMessage& msg, std::uint32_t member_slot) {
  (void)member_slot;
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(msg.online.size()));
  for (std::uint32_t i : msg.online) w.u32(i);
  for (const Bytes& ct : msg.cts) w.blob(ct);
  const std::size_t per = msg.commitments.empty() ? 0 : msg.commitments.front().size();
  w.u32(static_cast<std::uint32_t>(per));
  for (const auto& cs : msg.commitments) {
    for (const GroupElement& c : cs) w.raw(c.data);
  }
  return {MsgType::kBegin, msg.ell, kServerId, w.take()};
}

ForwardMessage forward_from_frame(const Frame& frame, const ProtocolContext& ctx) {
  if (frame.type != MsgType::kBegin) throw DecodeError("expected a begin frame");
  ByteReader r(frame.body);
  ForwardMessage fwd;
  fwd.ell = frame.ell;
  const std::uint32_t count = r.u32();
  if (count > ctx.params.n) throw DecodeError("online set larger than n");
  fwd.online.resize(count);
  for (std::uint32_t& i : fwd.online) i = r.u32();
  for (std::uint32_t k = 0; k < count; ++k) {
    const ByteView ct = r.blob();
    fwd.cts.emplace_back(ct.begin(), ct.end());
  }
  const std::uint32_t per = r.u32();
  if (per > 0) {
    if (ctx.group == nullptr || per > ctx.params.chunks() + 1) throw DecodeError("bad commitments");
    fwd.commitments.resize(count);
    for (auto& cs : fwd.commitments) {
      for (std::uint32_t k = 0; k < per; ++k) {
        cs.push_back(ctx.group->decode(r.raw(ctx.group->encoded_size())));
      }
    }
  }
  r.expect_done();
  return fwd;
}

Digest16 view_digest(std::uint64_t ell, std::size_t group, std::span<const std::uint32_t> online) {
  ByteWriter w(16 + 4 * online.size());
  w.u64(ell);
  w.u64(group);
  for (std::uint32_t i : online) w.u32(i);
  const Bytes d = xof_digest("OPA-VIEW", w.bytes(), 16);
  Digest16 out{};
  std::copy(d.begin(), d.end(), out.begin());
  return out;
}

CommitteeMessage committee_combine(const ProtocolContext& ctx, const MemberSecret& me,
                                   const ForwardMessage& fwd, std::uint64_t ell) {
  const ProtocolParams& pp = ctx.params;
  const bool active = is_active(pp);
  const std::size_t count = aux_count(pp);
  const Modulus& am = aux_modulus(pp);
  CommitteeMessage out;
  out.group = me.group;
  out.j = me.j;
  auto fail = [&] {
    CommitteeMessage a;
    a.group = me.group;
    a.j = me.j;
    a.abort = true;
    return a;
  };
  if (fwd.ell != ell || fwd.online.empty() || fwd.cts.size() != fwd.online.size()) return fail();
  if (!std::is_sorted(fwd.online.begin(), fwd.online.end()) ||
      std::adjacent_find(fwd.online.begin(), fwd.online.end()) != fwd.online.end()) {
    return fail();
  }
  if (active && fwd.commitments.size() != fwd.online.size()) return fail();
  std::vector<u128> sum(count, 0);
  std::vector<u128> vals(count);
  for (std::size_t idx = 0; idx < fwd.online.size(); ++idx) {
    const std::uint32_t i = fwd.online[idx];
    if (i >= pp.n || ctx.committee.group_of(i) != me.group) return fail();
    const auto plain = ctx.pke->open(me.keys, iteration_ad(ell, i), fwd.cts[idx]);
    if (!plain) return fail();
    try {
      ByteReader r(*plain);
      if (r.u64() != ell || r.u32() != i || r.u32() != count) return fail();
      for (u128& v : vals) {
        v = r.u128le();
        if (v >= am.value()) return fail();
      }
      u128 dig_share = 0;
      if (active) {
        dig_share = r.u128le();
        if (dig_share >= pp.q.value()) return fail();
      }
      r.expect_done();
      if (active) {
        const auto& cs = fwd.commitments[idx];
        if (cs.size() != count + 1) return fail();
        for (std::size_t k = 0; k < count; ++k) {
          if (!committee_share_check(vals[k], cs[k], *ctx.group)) return fail();
        }
        if (!committee_share_check(dig_share, cs[count], *ctx.group)) return fail();
        out.dig_shares.emplace_back(i, dig_share);
      }
    } catch (const DecodeError&) {
      return fail();
    }
    for (std::size_t k = 0; k < count; ++k) sum[k] = am.add(sum[k], vals[k]);
  }
  if (pp.mode == Mode::kPrimeLwr) {
    const DprfParams dp = pp.dprf_params();
    for (u128& s : sum) s = lift_to_u(s, dp);
  }
  out.aux_sum = std::move(sum);
  if (active) out.view = view_digest(ell, me.group, fwd.online);
  return out;
}

Frame to_frame(const CommitteeMessage& msg, std::uint64_t ell, std::uint32_t member_slot) {
  ByteWriter w;
  w.u8(msg.abort ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(msg.group));
  w.u16(static_cast<std::uint16_t>(msg.j));
  w.u32(static_cast<std::uint32_t>(msg.aux_sum.size()));
  for (u128 v : msg.aux_sum) w.u128le(v);
  w.u32(static_cast<std::uint32_t>(msg.dig_shares.size()));
  for (const auto& [i, s] : msg.dig_shares) {
    w.u32(i);
    w.u128le(s);
  }
  w.raw(msg.view);
  return {MsgType::kCommitteeCombined, ell, member_slot, w.take()};
}

CommitteeMessage committee_message_from_frame(const Frame& frame, const ProtocolContext& ctx) {
  if (frame.type != MsgType::kCommitteeCombined) throw DecodeError("expected a committee frame");
  ByteReader r(frame.body);
  CommitteeMessage msg;
  msg.abort = r.u8() != 0;
  msg.group = r.u32();
  msg.j = r.u16();
  if (msg.group >= ctx.params.groups || msg.j == 0 || msg.j > ctx.params.m) {
    throw DecodeError("committee reply from unknown slot");
  }
  const std::uint32_t count = r.u32();
  if (count > std::max(ctx.params.chunks(), ctx.params.big_l)) throw DecodeError("reply too long");
  msg.aux_sum.resize(count);
  for (u128& v : msg.aux_sum) v = r.u128le();
  const std::uint32_t nd = r.u32();
  if (nd > ctx.params.n) throw DecodeError("too many digest shares");
  for (std::uint32_t k = 0; k < nd; ++k) {
    const std::uint32_t i = r.u32();
    msg.dig_shares.emplace_back(i, r.u128le());
  }
  const ByteView view = r.raw(16);
  std::copy(view.begin(), view.end(), msg.view.begin());
  r.expect_done();
  return msg;
}

std::optional<Digest16> unique_set_guard(std::span<const CommitteeMessage> replies, std::size_t r) {
  std::map<Digest16, std::size_t> votes;
  for (const CommitteeMessage& m : replies) {
    if (!m.abort) ++votes[m.view];
  }
  for (const auto& [view, count] : votes) {
    if (count >= r) return view;
  }
  return std::nullopt;
}

IterationResult server_aggregate(const ProtocolContext& ctx,
                                 std::span<const CommitteeMessage> replies,
                                 std::span<const ClientMessage> received,
                                 std::span<const std::uint32_t> online, std::uint64_t ell) {
  const ProtocolParams& pp = ctx.params;
  const bool active = is_active(pp);
  const Modulus& cm = pp.ct_modulus();
  IterationResult res;
  res.ell = ell;
  res.online.assign(online.begin(), online.end());
  for (const CommitteeMessage& m : replies) {
    if (m.abort) return abort_with(res, AbortReason::kCommitteeComplaint);
  }
  const auto by_id = index_by_client(received);
  std::vector<u128> x(pp.big_l, 0);
  for (std::uint32_t i : online) {
    const auto it = by_id.find(i);
    if (it == by_id.end()) return abort_with(res, AbortReason::kInvalidMessage);
    for (std::size_t l = 0; l < pp.big_l; ++l) x[l] = cm.add(x[l], it->second->ct[l]);
  }

  const ShareParams sp = pp.share();
  for (std::size_t g = 0; g < pp.groups; ++g) {
    std::vector<std::uint32_t> cg;
    for (std::uint32_t i : online) {
      if (ctx.committee.group_of(i) == g) cg.push_back(i);
    }
    if (cg.empty()) continue;
    std::map<std::size_t, const CommitteeMessage*> by_j;
    for (const CommitteeMessage& m : replies) {
      if (m.group == g) by_j.emplace(m.j, &m);
    }
    std::vector<const CommitteeMessage*> reps;
    if (active) {
      std::vector<CommitteeMessage> group_replies;
      for (const auto& [j, m] : by_j) group_replies.push_back(*m);
      const auto guard = unique_set_guard(group_replies, pp.r);
      if (!guard || *guard != view_digest(ell, g, cg)) {
        return abort_with(res, AbortReason::kEquivocation);
      }
      for (const auto& [j, m] : by_j) {
        if (m->view == *guard) reps.push_back(m);
      }
    } else {
      for (const auto& [j, m] : by_j) reps.push_back(m);
    }
    if (reps.size() < pp.r) return abort_with(res, AbortReason::kTooFewCommittee);
    reps.resize(pp.r);
    const std::size_t count = aux_count(pp);
    std::vector<std::uint16_t> idx;
    for (const CommitteeMessage* m : reps) {
      if (m->aux_sum.size() != count) return abort_with(res, AbortReason::kInvalidMessage);
      idx.push_back(static_cast<std::uint16_t>(m->j));
    }

    if (pp.mode == Mode::kPrimeLwr) {
      const DprfParams dp = pp.dprf_params();
      for (std::size_t l = 0; l < pp.big_l; ++l) {
        std::vector<DprfPartial> parts;
        for (const CommitteeMessage* m : reps) {
          parts.push_back({static_cast<std::uint16_t>(m->j), m->aux_sum[l]});
        }
        x[l] = cm.sub(x[l], combine(parts, dp));
      }
      continue;
    }

    const PackedReconstructor rec(sp, idx);
    std::vector<std::vector<u128>> chunk_sums(count);
    std::vector<u128> vals(pp.r);
    for (std::size_t k = 0; k < count; ++k) {
      for (std::size_t c = 0; c < pp.r; ++c) vals[c] = reps[c]->aux_sum[k];
      chunk_sums[k] = rec.slots(vals);
      if (active) {
        std::vector<GroupElement> cs;
        for (std::uint32_t i : cg) cs.push_back(by_id.at(i)->proofs.at(k).commitments.at(0));
        if (!aggregate_commitment_check(cs, rec.at_zero(vals), *ctx.group)) {
          return abort_with(res, AbortReason::kMaliciousClient);
        }
      }
    }
    const std::vector<u128> seed_sum = unchunk_seed(chunk_sums, pp.lambda);
    if (pp.mode == Mode::kLwr) {
      PrgSeed sd;
      sd.s = seed_sum;
      const auto aux = expand_lwr(pp.prg(), *ctx.matrix, sd);
      for (std::size_t l = 0; l < pp.big_l; ++l) x[l] = cm.sub(x[l], aux[l]);
    } else {
      for (std::size_t l = 0; l < pp.big_l; ++l) {
        x[l] = cm.sub(x[l], pp.q.dot(ctx.matrix->row(l), seed_sum));
      }
    }

    if (active) {
      std::vector<std::map<std::uint32_t, u128>> dig_by_member(pp.r);
      for (std::size_t c = 0; c < pp.r; ++c) {
        for (const auto& [i, s] : reps[c]->dig_shares) dig_by_member[c].emplace(i, s);
      }
      std::vector<FieldShare> shares(pp.r);
      for (std::uint32_t i : cg) {
        for (std::size_t c = 0; c < pp.r; ++c) {
          const auto it = dig_by_member[c].find(i);
          if (it == dig_by_member[c].end()) return abort_with(res, AbortReason::kInvalidMessage);
          shares[c] = {idx[c], it->second};
        }
        const u128 dig = reconstruct_field(shares, sp);
        const GroupElement& c0 = by_id.at(i)->proofs.at(count).commitments.at(0);
        if (!committee_share_check(dig, c0, *ctx.group)) {
          return abort_with(res, AbortReason::kMaliciousClient);
        }
        const auto m2 = second_mask(digest_bytes(dig), pp.big_l, cm);
        for (std::size_t l = 0; l < pp.big_l; ++l) x[l] = cm.sub(x[l], m2[l]);
      }
    }
  }

  res.aggregate.resize(pp.big_l);
  if (pp.mode == Mode::kPrimeLwr) {
    for (std::size_t l = 0; l < pp.big_l; ++l) {
      res.aggregate[l] = static_cast<i128>(x[l] / ctx.codec->w);
    }
  } else {
    const EncodeParams ep = pp.encode();
    for (std::size_t l = 0; l < pp.big_l; ++l) {
      res.aggregate[l] = pp.mode == Mode::kLwr ? decode_lwr(x[l], ep) : decode_lwe(x[l], ep);
    }
  }
  return res;
}

IterationResult opa_prime_round(const ProtocolContext& ctx,
                                std::span<const PrimeClientKeys> clients,
                                std::span<const std::vector<u128>> inputs,
                                std::span<const MemberSecret> members, std::uint64_t ell,
                                Rng& rng) {
  const ProtocolParams& pp = ctx.params;
  if (pp.mode != Mode::kPrimeLwr) throw ParamError("opa_prime_round needs PRIME_LWR mode");
  if (clients.size() != pp.n || inputs.size() != pp.n) throw ParamError("need n clients");
  std::vector<ClientMessage> msgs;
  for (std::uint32_t i = 0; i < pp.n; ++i) {
    Rng crng = rng.fork("prime-client", i);
    msgs.push_back(client_encrypt(ctx, i, inputs[i], ell, crng, {}, &clients[i]));
  }
  const IntersectResult inter = server_intersect(ctx, msgs, ell);
  IterationResult res;
  res.ell = ell;
  if (inter.abort) return abort_with(res, *inter.abort);
  std::vector<CommitteeMessage> replies;
  for (const MemberSecret& me : members) {
    const ForwardMessage fwd = server_forward(ctx, msgs, inter.online, me.group, me.j);
    replies.push_back(committee_combine(ctx, me, fwd, ell));
  }
  return server_aggregate(ctx, replies, msgs, inter.online, ell);
}

std::vector<std::int64_t> brsa_aggregate(std::span<const std::vector<u128>> v) {
  if (v.empty()) return {};
  const std::size_t len = v.front().size();
  std::vector<std::int64_t> sum(len, 0);
  for (const auto& row : v) {
    if (row.size() != len) throw ParamError("sign vectors differ in length");
    for (std::size_t l = 0; l < len; ++l) {
      if (row[l] > 1) throw RangeError("sign vector entry is not binary");
      sum[l] += static_cast<std::int64_t>(row[l]);
    }
  }
  for (std::int64_t& s : sum) s = 2 * s - static_cast<std::int64_t>(v.size());
  return sum;
}

std::vector<std::int64_t> brsa_from_sum(std::span<const i128> sum, std::size_t count) {
  std::vector<std::int64_t> out;
  out.reserve(sum.size());
  for (i128 s : sum) {
    if (s < 0 || s > static_cast<i128>(count)) throw RangeError("binary sum out of range");
    out.push_back(2 * static_cast<std::int64_t>(s) - static_cast<std::int64_t>(count));
  }
  return out;
}

}  // namespace opa
