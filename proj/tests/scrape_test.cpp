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

#include "gtest/gtest.h"
#include "opa/error.hpp"
#include "opa/sharing.hpp"

namespace opa {
namespace {

const SchnorrGroup& small_group() {
  static const SchnorrGroup g = [] {
    Rng rng(99);
    return SchnorrGroup::generate(Modulus::prime(10007), rng);
  }();
  return g;
}

// f(0), f(1), ..., f(m) for a random polynomial of exact degree `deg`.
std::vector<u128> poly_values(std::size_t m, std::size_t deg, const Modulus& q, Rng& rng) {
  std::vector<u128> c(deg + 1);
  for (u128& x : c) x = rng.uniform_below(q.value());
  c[deg] = 1 + rng.uniform_below(q.value() - 1);
  const Poly f(q, c);
  std::vector<u128> out(m + 1);
  for (std::size_t i = 0; i <= m; ++i) out[i] = f.eval(i);
  return out;
}

Bytes ctx(std::uint64_t i) {
  ByteWriter w;
  w.u64(i);
  return w.take();
}

TEST(DualCodeTest, HandVector) {
  const Modulus q = Modulus::prime(10007);
  const auto v = dual_code_vector(3, q);
  EXPECT_EQ(v[0], q.inv(q.from_signed(-6)));
  EXPECT_EQ(v[1], q.inv(2));
  EXPECT_EQ(v[2], q.inv(q.from_signed(-2)));
  EXPECT_EQ(v[3], q.inv(6));
  const std::vector<u128> one = {1};
  EXPECT_EQ(scrape_weights(3, q, one).w, v);
}

TEST(ScrapeCheckTest, HandAndTrivialCases) {
  const Modulus q = Modulus::prime(10007);
  const std::vector<u128> one = {1};
  const ScrapeWeights w = scrape_weights(3, q, one);
  // 5 + 3X at 0..3
  const std::vector<u128> values = {5, 8, 11, 14};
  EXPECT_TRUE(scrape_check(values, w, q));
  EXPECT_TRUE(scrape_check(std::vector<u128>(4, 0), w, q));
  const std::vector<u128> bad = {5, 8, 11, 15};
  EXPECT_FALSE(scrape_check(bad, w, q));
  EXPECT_THROW(scrape_check(std::vector<u128>(3, 0), w, q), ParamError);
  EXPECT_THROW(scrape_weights(3, 3, q, ctx(0)), ParamError);
  EXPECT_EQ(scrape_weights(5, 2, q, ctx(1)).w, scrape_weights(5, 2, q, ctx(1)).w);
}

TEST(ScrapeCheckTest, CodewordsAlwaysPass) {
  const Modulus q = Modulus::prime(10007);
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 4 + trial % 6;
    const std::size_t d = trial % (m - 1);
    const auto values = poly_values(m, d, q, rng);
    ASSERT_TRUE(scrape_check(values, scrape_weights(m, d, q, ctx(trial)), q));
  }
}

TEST(ScrapeCheckTest, DegreeDPlusOneRejected) {
  const Modulus q = Modulus::prime(10007);
  Rng rng(2);
  const std::size_t m = 7, d = 3;
  int accepted = 0;
  const int trials = 100000;
  for (int trial = 0; trial < trials; ++trial) {
    const auto values = poly_values(m, d + 1, q, rng);
    accepted += scrape_check(values, scrape_weights(m, d, q, ctx(trial)), q);
  }
  EXPECT_LE(accepted, 10 * trials / 10007);
}

TEST(GroupTest, DefaultGroupIsValid) {
  const SchnorrGroup& g = SchnorrGroup::default_group();
  EXPECT_EQ(g.order().value(), Modulus::mersenne127().value());
  EXPECT_EQ(g.encoded_size(), 32u);
  EXPECT_EQ(g.exp_g(0), g.identity());
  EXPECT_EQ(g.exp_g(1), g.generator());
  EXPECT_EQ(g.exp_g(g.order().value() - 1), g.inv(g.generator()));
  EXPECT_EQ(g.mul(g.exp_g(5), g.exp_g(7)), g.exp_g(12));
  EXPECT_EQ(g.exp(g.exp_g(3), 4), g.exp_g(12));
  EXPECT_NO_THROW(g.decode(g.exp_g(77).data));
  Bytes outside(32, 0);
  outside[31] = 2;  // 2 has order outside the subgroup here with overwhelming odds
  EXPECT_THROW(g.decode(outside), DecodeError);
  EXPECT_THROW(g.decode(Bytes(31, 1)), DecodeError);
}

TEST(GroupTest, RejectsBadParameters) {
  const SchnorrGroup& g = SchnorrGroup::default_group();
  EXPECT_THROW(SchnorrGroup(g.order(), g.prime(), 1), ParamError);
  EXPECT_THROW(SchnorrGroup(g.order(), g.prime() + 2, g.g()), ParamError);
}

TEST(ProofTest, CompletenessDefaultGroup) {
  const SchnorrGroup& g = SchnorrGroup::default_group();
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto values = poly_values(6, 3, g.order(), rng);
    const SharingProof proof = prove_sharing(values, 3, g, ctx(trial), rng);
    ASSERT_TRUE(verify_sharing(proof, 6, 3, g, ctx(trial)));
    EXPECT_FALSE(verify_sharing(proof, 6, 3, g, ctx(trial + 1)));
  }
}

TEST(ProofTest, CompletenessThousandTrials) {
  const SchnorrGroup& g = small_group();
  Rng rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto values = poly_values(5, 2, g.order(), rng);
    ASSERT_TRUE(verify_sharing(prove_sharing(values, 2, g, ctx(trial), rng), 5, 2, g, ctx(trial)));
  }
}

TEST(ProofTest, MutationsReject) {
  const SchnorrGroup& g = SchnorrGroup::default_group();
  Rng rng(5);
  const auto values = poly_values(5, 2, g.order(), rng);
  const SharingProof proof = prove_sharing(values, 2, g, ctx(0), rng);
  for (std::size_t j = 0; j <= 5; ++j) {
    SharingProof bad = proof;
    bad.z[j] = g.order().add(bad.z[j], 1);
    EXPECT_FALSE(verify_sharing(bad, 5, 2, g, ctx(0)));
    bad = proof;
    bad.commitments[j] = g.mul(bad.commitments[j], g.generator());
    EXPECT_FALSE(verify_sharing(bad, 5, 2, g, ctx(0)));
  }
  SharingProof shorter = proof;
  shorter.z.pop_back();
  EXPECT_FALSE(verify_sharing(shorter, 5, 2, g, ctx(0)));
  SharingProof wrong_c = proof;
  wrong_c.challenge ^= 1;
  EXPECT_FALSE(verify_sharing(wrong_c, 5, 2, g, ctx(0)));
}

TEST(ProofTest, NonPolynomialSharesReject) {
  const SchnorrGroup& g = small_group();
  Rng rng(6);
  int accepted = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto values = poly_values(6, 4, g.order(), rng);
    accepted += verify_sharing(prove_sharing(values, 3, g, ctx(trial), rng), 6, 3, g, ctx(trial));
  }
  EXPECT_LE(accepted, 2);
}

TEST(ProofTest, SchnorrRelationReproducesNonce) {
  const SchnorrGroup& g = SchnorrGroup::default_group();
  const Modulus& q = g.order();
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const u128 s = rng.uniform_below(q.value()), t = rng.uniform_below(q.value());
    const u128 c = rng.uniform_below(q.value());
    const u128 z = q.add(t, q.mul(c, s));
    EXPECT_EQ(g.mul(g.exp_g(z), g.exp(g.exp_g(s), q.neg(c))), g.exp_g(t));
  }
}

TEST(CommitmentChecks, ShareAndAggregate) {
  const SchnorrGroup& g = SchnorrGroup::default_group();
  const Modulus& q = g.order();
  EXPECT_TRUE(committee_share_check(42, g.exp_g(42), g));
  EXPECT_FALSE(committee_share_check(43, g.exp_g(42), g));
  EXPECT_TRUE(committee_share_check(0, g.identity(), g));
  std::vector<GroupElement> commits;
  u128 sum = 0;
  Rng rng(8);
  for (int i = 0; i < 5; ++i) {
    const u128 s = rng.uniform_below(q.value());
    commits.push_back(g.exp_g(s));
    sum = q.add(sum, s);
  }
  EXPECT_TRUE(aggregate_commitment_check(commits, sum, g));
  commits[2] = g.exp_g(7);
  EXPECT_FALSE(aggregate_commitment_check(commits, sum, g));
  EXPECT_TRUE(aggregate_commitment_check({}, 0, g));
}

TEST(ProofTest, SerializationRoundTrip) {
  const SchnorrGroup& g = SchnorrGroup::default_group();
  Rng rng(9);
  const auto values = poly_values(4, 1, g.order(), rng);
  const SharingProof proof = prove_sharing(values, 1, g, ctx(3), rng);
  ByteWriter w;
  write_proof(w, proof);
  EXPECT_EQ(w.size(), 5 * 32 + 5 * 16 + 32u);
  const Bytes buf = w.take();
  ByteReader r(buf);
  const SharingProof back = read_proof(r, 4, g);
  EXPECT_TRUE(r.done());
  EXPECT_EQ(back.commitments, proof.commitments);
  EXPECT_EQ(back.z, proof.z);
  EXPECT_EQ(back.challenge, proof.challenge);
  EXPECT_TRUE(verify_sharing(back, 4, 1, g, ctx(3)));
}

// Packed chunk polynomials pass with d = r - 1 at index 0 = f(0).
TEST(ProofTest, PackedSharingVerifies) {
  const SchnorrGroup& g = SchnorrGroup::default_group();
  ShareParams sp;
  sp.m = 7;
  sp.r = 5;
  sp.t = 2;
  sp.rho = 2;
  sp.field = g.order();
  PackedSharer sharer(sp);
  Rng rng(10);
  const std::vector<u128> secrets = {11, 12};
  const auto values = sharer.share(secrets, rng);
  EXPECT_TRUE(verify_sharing(prove_sharing(values, 4, g, ctx(1), rng), 7, 4, g, ctx(1)));
}

}  // namespace
}  // namespace opa
