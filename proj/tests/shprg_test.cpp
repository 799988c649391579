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

#include "opa/shprg.hpp"

#include <algorithm>
#include <map>

#include "gtest/gtest.h"
#include "opa/error.hpp"

namespace opa {
namespace {

PrgParams small_params(u128 q, u128 p, std::size_t lambda, std::size_t big_l) {
  PrgParams params;
  params.lambda = lambda;
  params.big_l = big_l;
  params.q = Modulus(q, false);
  params.p = Modulus(p, false);
  return params;
}

TEST(MatrixTest, Deterministic) {
  PrgParams params = small_params(pow2(61) - 1, pow2(20), 16, 8);
  params.matrix_seed[0] = 1;
  const PublicMatrix a = derive_matrix(params);
  const PublicMatrix b = derive_matrix(params);
  for (std::size_t l = 0; l < 8; ++l) {
    EXPECT_TRUE(std::ranges::equal(a.row(l), b.row(l)));
  }
  params.matrix_seed[31] ^= 0x40;
  const PublicMatrix c = derive_matrix(params);
  int diff = 0;
  for (std::size_t l = 0; l < 8; ++l) {
    for (std::size_t k = 0; k < 16; ++k) diff += a.row(l)[k] != c.row(l)[k];
  }
  EXPECT_GT(diff, 100);
}

TEST(MatrixTest, EntriesUniformChiSquared) {
  const PrgParams params = small_params(97, 4, 100, 1000);
  const PublicMatrix a = derive_matrix(params);
  std::vector<double> counts(97, 0.0);
  for (std::size_t l = 0; l < params.big_l; ++l) {
    for (u128 v : a.row(l)) counts[static_cast<std::size_t>(v)] += 1;
  }
  const double expected = 1e5 / 97.0;
  double chi2 = 0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 96 degrees of freedom; 0.001 upper quantile is about 140.
  EXPECT_LT(chi2, 140.0);
}

TEST(MatrixTest, TweakChangesSeed) {
  const Seed32 seed{};
  const Bytes model = {1, 2, 3};
  EXPECT_NE(tweak_matrix_seed(seed, 1, model), tweak_matrix_seed(seed, 2, model));
  EXPECT_EQ(tweak_matrix_seed(seed, 1, model), tweak_matrix_seed(seed, 1, model));
}

TEST(ExpandLwrTest, HandValue) {
  const PrgParams params = small_params(16, 4, 2, 2);
  const PublicMatrix a(params.q, 2, 2, {1, 2, 3, 4});
  const PrgSeed sd{{1, 1}, {}};
  EXPECT_EQ(expand_lwr(params, a, sd), (std::vector<u128>{0, 1}));
  const PrgSeed zero{{0, 0}, {}};
  EXPECT_EQ(expand_lwr(params, a, zero), (std::vector<u128>{0, 0}));
  const PrgSeed bad{{1}, {}};
  EXPECT_THROW(expand_lwr(params, a, bad), ParamError);
}

// Exhaustive over every pair of seeds at q=64, p=8, lambda=2.
TEST(ExpandLwrTest, PairGapExhaustive) {
  const PrgParams params = small_params(64, 8, 2, 2);
  const PublicMatrix a(params.q, 2, 2, {5, 17, 1, 0});
  for (u128 s0 = 0; s0 < 64; ++s0) {
    for (u128 s1 = 0; s1 < 64; ++s1) {
      const PrgSeed x{{s0, s1}, {}};
      const auto ex = expand_lwr(params, a, x);
      for (u128 t0 = 0; t0 < 64; ++t0) {
        for (u128 t1 = 0; t1 < 64; t1 += 3) {
          const PrgSeed y{{t0, t1}, {}};
          const PrgSeed sum{{(s0 + t0) % 64, (s1 + t1) % 64}, {}};
          const auto ey = expand_lwr(params, a, y);
          const auto es = expand_lwr(params, a, sum);
          for (int l = 0; l < 2; ++l) {
            const u128 gap = (es[l] + 8 - (ex[l] + ey[l]) % 8) % 8;
            ASSERT_LE(gap, 1u);
          }
        }
      }
    }
  }
}

TEST(ExpandLwrTest, KSummandGapRandomized) {
  Rng rng(21);
  PrgParams params = small_params(1021, 16, 2, 32);
  const PublicMatrix a = derive_matrix(params);
  for (std::size_t k = 1; k <= 8; ++k) {
    for (int trial = 0; trial < 200; ++trial) {
      PrgSeed total{{0, 0}, {}};
      std::vector<u128> sum_expand(params.big_l, 0);
      for (std::size_t i = 0; i < k; ++i) {
        const PrgSeed sd = sample_seed_lwr(params, rng);
        const auto ex = expand_lwr(params, a, sd);
        for (std::size_t l = 0; l < params.big_l; ++l) {
          sum_expand[l] = params.p.add(sum_expand[l], ex[l]);
        }
        for (int c = 0; c < 2; ++c) total.s[c] = params.q.add(total.s[c], sd.s[c]);
      }
      const auto whole = expand_lwr(params, a, total);
      for (std::size_t l = 0; l < params.big_l; ++l) {
        ASSERT_LT(params.p.sub(whole[l], sum_expand[l]), k);
      }
    }
  }
}

TEST(ExpandLweTest, HandAndExactHomomorphism) {
  const PrgParams params = small_params(97, 4, 2, 2);
  const PublicMatrix id(params.q, 2, 2, {1, 0, 0, 1});
  EXPECT_EQ(expand_lwe(params, id, PrgSeed{{5, 6}, {1, -1}}, 1), (std::vector<u128>{6, 5}));
  EXPECT_EQ(expand_lwe(params, id, PrgSeed{{0, 0}, {0, 0}}, 1), (std::vector<u128>{0, 0}));
  EXPECT_THROW(expand_lwe(params, id, PrgSeed{{0, 0}, {2, 0}}, 1), ParamError);

  Rng rng(4);
  const PrgParams big = small_params(pow2(61) - 1, pow2(20), 8, 16);
  const PublicMatrix a = derive_matrix(big);
  const PrgSeed s1 = sample_seed_lwe(big, 2, rng);
  const PrgSeed s2 = sample_seed_lwe(big, 2, rng);
  PrgSeed sum = s1;
  for (std::size_t k = 0; k < 8; ++k) sum.s[k] = big.q.add(s1.s[k], s2.s[k]);
  for (std::size_t l = 0; l < 16; ++l) sum.e[l] = s1.e[l] + s2.e[l];
  const auto e1 = expand_lwe(big, a, s1, lwe_error_bound(2));
  const auto e2 = expand_lwe(big, a, s2, lwe_error_bound(2));
  const auto es = expand_lwe(big, a, sum, 2 * lwe_error_bound(2));
  for (std::size_t l = 0; l < 16; ++l) EXPECT_EQ(big.q.add(e1[l], e2[l]), es[l]);
}

TEST(ExpandLweTest, ErrorsShiftedPositive) {
  Rng rng(8);
  const PrgParams params = small_params(pow2(61) - 1, pow2(20), 4, 5000);
  const PrgSeed sd = sample_seed_lwe(params, 3, rng);
  std::map<std::int64_t, int> seen;
  for (std::int64_t e : sd.e) {
    ASSERT_GE(e, 1);
    ASSERT_LE(e, lwe_error_bound(3));
    ++seen[e];
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(EncodeLwrTest, HandValues) {
  const EncodeParams ep = EncodeParams::lwr(4, 3);
  const Modulus p(pow2(20), false);
  EXPECT_EQ(ep.delta, 48u);
  EXPECT_EQ(encode_lwr(2, 5, ep, p), 102u);
  EXPECT_EQ(encode_lwr(0, 0, ep, p), 1u);
  EXPECT_EQ(encode_lwr(1, 15, ep, p), 64u);
  EXPECT_THROW(encode_lwr(1, 16, ep, p), RangeError);
  const Modulus tiny(400, false);
  EXPECT_EQ(lwr_summand_limit(ep, tiny), 2u);  // 2*144 < 352 <= 3*144
  EXPECT_THROW(encode_lwr(3, 0, ep, tiny), RangeError);
}

TEST(EncodeLwrTest, DecodeHandTraces) {
  const EncodeParams ep = EncodeParams::lwr(4, 3);
  EXPECT_EQ(decode_lwr(144 + 15 + 3 - 2, ep), 3);
  EXPECT_EQ(decode_lwr(3, ep), 0);
  EXPECT_EQ(decode_lwr(48 * 5 + 45 + 3, ep), 5);
}

// Every aggregate (sum x, sum r, e') reachable by n <= 5 summands decodes
// to sum x.
TEST(EncodeLwrTest, RoundTripExhaustiveOverAggregates) {
  for (std::uint64_t n = 1; n <= 5; ++n) {
    for (unsigned kappa = 0; kappa <= 3; ++kappa) {
      const EncodeParams ep = EncodeParams::lwr(kappa, n);
      const u128 rmax = pow2(kappa) - 1;
      for (u128 sx = 0; sx < 20; ++sx) {
        for (u128 sr = 0; sr <= n * rmax; ++sr) {
          for (u128 e = 0; e < n; ++e) {
            const u128 x_agg = ep.delta * sx + sr + n - e;
            ASSERT_EQ(decode_lwr(x_agg, ep), static_cast<i128>(sx));
          }
        }
      }
    }
  }
}

// Tuple-level brute force with actual encodings reduced mod p.
TEST(EncodeLwrTest, RoundTripTupleBruteForce) {
  const std::uint64_t n = 2;
  const EncodeParams ep = EncodeParams::lwr(2, n);
  const Modulus p(pow2(12), false);
  const u128 xmax = lwr_summand_limit(ep, p);
  ASSERT_GE(xmax, 5u);
  for (u128 x0 = 0; x0 <= xmax; ++x0) {
    for (u128 x1 = 0; x1 <= xmax; ++x1) {
      for (u128 r0 = 0; r0 < 4; ++r0) {
        for (u128 r1 = 0; r1 < 4; ++r1) {
          for (u128 e = 0; e < n; ++e) {
            const u128 agg = p.sub(
                p.add(encode_lwr(x0, r0, ep, p), encode_lwr(x1, r1, ep, p)), e);
            ASSERT_EQ(decode_lwr(agg, ep), static_cast<i128>(x0 + x1));
          }
        }
      }
    }
  }
}

TEST(EncodeLwrTest, InputBits) {
  const Modulus p(pow2(53), false);
  const EncodeParams ep = EncodeParams::lwr(16, 1000);
  EXPECT_EQ(lwr_input_bits(ep, p), 17);
  EXPECT_GE(lwr_summand_limit(ep, p), pow2(16) - 1);
}

TEST(EncodeLweTest, HandValues) {
  const Modulus q(pow2(10), false), p(pow2(4), false);
  const EncodeParams ep = EncodeParams::lwe(q, p, 1);
  EXPECT_EQ(ep.delta, 64u);
  EXPECT_EQ(encode_lwe(0, ep, q), 0u);
  EXPECT_EQ(decode_lwe(0, ep), 0);
  EXPECT_EQ(decode_lwe(192 + 20, ep), 3);
  // Negative error pulls the aggregate below the boundary.
  EXPECT_EQ(decode_lwe(448 - 10, ep), 6);
  EXPECT_EQ(encode_lwe(3, ep, q), 192u);
  EXPECT_THROW(encode_lwe(16, ep, q), RangeError);
}

TEST(SecondMaskTest, DeterministicAndCancels) {
  const Modulus p(97, true);
  Digest16 d1{}, d2{};
  d2[0] = 1;
  const auto m1 = second_mask(d1, 10000, p);
  EXPECT_EQ(m1, second_mask(d1, 10000, p));
  const auto m2 = second_mask(d2, 10000, p);
  std::size_t equal = 0;
  for (std::size_t l = 0; l < m1.size(); ++l) equal += m1[l] == m2[l];
  EXPECT_LE(equal, 2 * 10000 / 97);
  for (std::size_t l = 0; l < 100; ++l) {
    const u128 x = l % 97;
    EXPECT_EQ(p.sub(p.add(m1[l], x), m1[l]), x);
  }
}

// sd + sd' over fresh sd' hits every residue exactly once.
TEST(LeakageTest, OneTimePadUniform) {
  const Modulus q(97, true);
  for (u128 sd = 0; sd < 97; sd += 13) {
    std::vector<int> hits(97, 0);
    for (u128 fresh = 0; fresh < 97; ++fresh) ++hits[static_cast<std::size_t>(q.add(sd, fresh))];
    EXPECT_TRUE(std::ranges::all_of(hits, [](int h) { return h == 1; }));
  }
}

}  // namespace
}  // namespace opa
