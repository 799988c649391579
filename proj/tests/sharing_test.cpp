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

#include "opa/sharing.hpp"

#include <algorithm>
#include <numeric>

#include "gtest/gtest.h"
#include "opa/error.hpp"

namespace opa {
namespace {

ShareParams field_params(std::size_t m, std::size_t r, std::size_t t, std::size_t rho,
                         u128 q) {
  ShareParams sp;
  sp.m = m;
  sp.r = r;
  sp.t = t;
  sp.rho = rho;
  sp.field = Modulus::prime(q);
  return sp;
}

// All size-k subsets of {0..n-1}.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (pick[i]) s.push_back(i);
    }
    out.push_back(s);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

template <typename T>
std::vector<T> pick(const std::vector<T>& all, const std::vector<std::size_t>& idx) {
  std::vector<T> out;
  for (std::size_t i : idx) out.push_back(all[i]);
  return out;
}

TEST(FieldShamirTest, HandShares) {
  const ShareParams sp = field_params(3, 2, 1, 1, 97);
  const auto shares = share_field(Poly(sp.field, {5, 3}), sp);
  ASSERT_EQ(shares.size(), 3u);
  EXPECT_EQ(shares[0], (FieldShare{1, 8}));
  EXPECT_EQ(shares[1], (FieldShare{2, 11}));
  EXPECT_EQ(shares[2], (FieldShare{3, 14}));
  const std::vector<FieldShare> two = {shares[0], shares[2]};
  EXPECT_EQ(reconstruct_field(two, sp), 5u);
}

TEST(FieldShamirTest, DegreeZeroCopiesSecret) {
  const ShareParams sp = field_params(5, 1, 0, 1, 97);
  Rng rng(1);
  for (const FieldShare& s : share_field(42, sp, rng)) EXPECT_EQ(s.value, 42u);
}

TEST(FieldShamirTest, Errors) {
  const ShareParams sp = field_params(3, 2, 1, 1, 97);
  Rng rng(2);
  const auto shares = share_field(9, sp, rng);
  const std::vector<FieldShare> one = {shares[0]};
  EXPECT_THROW(reconstruct_field(one, sp), ThresholdError);
  const std::vector<FieldShare> dup = {shares[0], shares[0]};
  EXPECT_THROW(reconstruct_field(dup, sp), ParamError);
  ShareParams small = field_params(5, 2, 1, 1, 5);
  EXPECT_THROW(share_field(1, small, rng), ParamError);
  ShareParams composite = sp;
  composite.field = Modulus(91, false);
  EXPECT_THROW(share_field(1, composite, rng), ParamError);
}

TEST(FieldShamirTest, EveryRSubsetAgrees) {
  Rng rng(3);
  for (std::size_t m = 2; m <= 8; ++m) {
    for (std::size_t r = 1; r <= m; ++r) {
      const ShareParams sp = field_params(m, r, r - 1, 1, 10007);
      const u128 secret = rng.uniform_below(10007);
      const auto shares = share_field(secret, sp, rng);
      for (std::size_t k = r; k <= m; ++k) {
        for (const auto& s : subsets(m, k)) {
          ASSERT_EQ(reconstruct_field(pick(shares, s), sp), secret);
        }
      }
    }
  }
}

// r-1 shares are consistent with every candidate secret.
TEST(FieldShamirTest, PrivacyWitness) {
  const ShareParams sp = field_params(5, 3, 2, 1, 97);
  Rng rng(4);
  const auto shares = share_field(11, sp, rng);
  for (u128 candidate = 0; candidate < 97; ++candidate) {
    const std::vector<u128> xs = {0, 1, 2};
    const std::vector<u128> ys = {candidate, shares[0].value, shares[1].value};
    // Interpolate through (0, candidate) and the two shares; degree <= 2.
    for (u128 x : {u128{0}, u128{1}, u128{2}}) {
      const auto lam = lagrange_at(xs, x, sp.field);
      u128 v = 0;
      for (int k = 0; k < 3; ++k) v = sp.field.add(v, sp.field.mul(lam[k], ys[k]));
      EXPECT_EQ(v, ys[x]);
    }
  }
}

TEST(PackedFieldTest, HandExample) {
  const ShareParams sp = field_params(3, 3, 1, 2, 97);
  const std::vector<u128> secrets = {10, 20};
  const std::vector<u128> qc = {7};
  const Poly f = packed_polynomial(secrets, qc, sp);
  EXPECT_EQ(f.eval(4), 10u);
  EXPECT_EQ(f.eval(5), 20u);
  // 7(X-4)(X-5) - 10(X-5) + 20(X-4) by hand.
  const auto shares = share_packed_field(secrets, qc, sp);
  EXPECT_EQ(shares[0].value, 64u);
  EXPECT_EQ(shares[1].value, 32u);
  EXPECT_EQ(shares[2].value, 14u);
  EXPECT_EQ(reconstruct_packed_field(shares, sp), secrets);
}

TEST(PackedFieldTest, ZeroSecretsZeroShares) {
  const ShareParams sp = field_params(6, 4, 2, 2, 97);
  const std::vector<u128> secrets = {0, 0}, qc = {0, 0};
  for (const auto& s : share_packed_field(secrets, qc, sp)) EXPECT_EQ(s.value, 0u);
}

TEST(PackedFieldTest, RhoOneIsShamirAtMPlusOne) {
  const ShareParams sp = field_params(5, 3, 2, 1, 10007);
  const std::vector<u128> secret = {1234};
  Rng rng(6);
  const auto shares = share_packed_field(secret, sp, rng);
  std::vector<u128> xs, ys;
  for (std::size_t k = 0; k < 3; ++k) {
    xs.push_back(shares[k].index);
    ys.push_back(shares[k].value);
  }
  const auto lam = lagrange_at(xs, 6, sp.field);
  EXPECT_EQ(sp.field.dot(lam, ys), 1234u);
}

TEST(PackedFieldTest, AllRSubsetsRecoverSecrets) {
  Rng rng(7);
  for (std::size_t m = 3; m <= 6; ++m) {
    for (std::size_t rho = 1; 2 * m >= 3 * rho; ++rho) {
      for (std::size_t r = rho; r <= m; ++r) {
        const ShareParams sp = field_params(m, r, r - rho, rho, 10007);
        if (r - rho >= r) continue;
        std::vector<u128> secrets(rho);
        for (u128& s : secrets) s = rng.uniform_below(10007);
        const auto shares = share_packed_field(secrets, sp, rng);
        for (const auto& s : subsets(m, r)) {
          ASSERT_EQ(reconstruct_packed_field(pick(shares, s), sp), secrets);
        }
      }
    }
  }
}

TEST(PackedFieldTest, Homomorphism) {
  const ShareParams sp = field_params(6, 4, 2, 2, 97);
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<u128> a = {rng.uniform_below(97), rng.uniform_below(97)};
    const std::vector<u128> b = {rng.uniform_below(97), rng.uniform_below(97)};
    const auto sa = share_packed_field(a, sp, rng);
    const auto sb = share_packed_field(b, sp, rng);
    std::vector<FieldShare> sum;
    for (std::size_t j = 0; j < sa.size(); ++j) sum.push_back(add_shares(sa[j], sb[j], sp.field));
    const auto rec = reconstruct_packed_field(sum, sp);
    EXPECT_EQ(rec[0], sp.field.add(a[0], b[0]));
    EXPECT_EQ(rec[1], sp.field.add(a[1], b[1]));
  }
}

// t shares plus any alternative secret vector fit a degree <= r-1 polynomial.
TEST(PackedFieldTest, PrivacyWitness) {
  const ShareParams sp = field_params(7, 5, 3, 2, 10007);
  Rng rng(9);
  const std::vector<u128> secrets = {5, 6};
  const auto shares = share_packed_field(secrets, sp, rng);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<u128> alt = {rng.uniform_below(10007), rng.uniform_below(10007)};
    const std::vector<u128> xs = {shares[1].index, shares[4].index, shares[6].index, 8, 9};
    const std::vector<u128> ys = {shares[1].value, shares[4].value, shares[6].value, alt[0], alt[1]};
    // The interpolant through these r points has degree <= r-1 and matches.
    for (std::size_t k = 0; k < xs.size(); ++k) {
      EXPECT_EQ(sp.field.dot(lagrange_at(xs, xs[k], sp.field), ys), ys[k]);
    }
  }
}

TEST(PackedFieldTest, SharerMatchesPolynomial) {
  const ShareParams sp = field_params(50, 34, 16, 16, 10007);
  PackedSharer sharer(sp);
  Rng rng(10);
  std::vector<u128> secrets(16), qc(18);
  for (u128& s : secrets) s = rng.uniform_below(10007);
  for (u128& c : qc) c = rng.uniform_below(10007);
  const auto fast = sharer.share(secrets, qc);
  const Poly f = packed_polynomial(secrets, qc, sp);
  ASSERT_EQ(fast.size(), 51u);
  for (std::size_t j = 0; j <= 50; ++j) EXPECT_EQ(fast[j], f.eval(j));
  std::vector<std::uint16_t> idx(34);
  std::iota(idx.begin(), idx.end(), 3);
  PackedReconstructor rec(sp, idx);
  std::vector<u128> vals;
  for (std::uint16_t i : idx) vals.push_back(fast[i]);
  EXPECT_EQ(rec.slots(vals), secrets);
  EXPECT_EQ(rec.at_zero(vals), fast[0]);
}

TEST(PackedFieldTest, ParameterRules) {
  Rng rng(11);
  const std::vector<u128> secrets(40, 1);
  EXPECT_THROW(share_packed_field(secrets, field_params(50, 45, 5, 40, 10007), rng), ParamError);
  EXPECT_THROW(field_params(50, 34, 19, 16, 10007).validate_packed(), ParamError);
  EXPECT_NO_THROW(field_params(50, 34, 16, 16, 10007).validate_packed());
}

TEST(IntegerShamirTest, HandExample) {
  ShareParams sp;
  sp.m = 2;
  sp.r = 2;
  sp.t = 1;
  sp.ell_s = 8;
  const std::vector<BigInt> coeffs = {5};
  const auto shares = share_integer(3, coeffs, sp);
  EXPECT_EQ(shares[0].value, 11);
  EXPECT_EQ(shares[1].value, 16);
  EXPECT_EQ(reconstruct_integer(shares, sp), 12);
}

TEST(IntegerShamirTest, ZeroAndDivisibility) {
  ShareParams sp;
  sp.m = 6;
  sp.r = 4;
  sp.t = 3;
  sp.ell_s = 32;
  sp.kappa_s = 20;
  sp.ell_r = min_ell_r(sp);
  sp.validate_integer();
  const std::vector<BigInt> zero(3, BigInt(0));
  for (const auto& s : share_integer(0, zero, sp)) EXPECT_EQ(s.value, 0);
  const BigInt delta = factorial(6);
  Rng rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const BigInt secret = rng.uniform_u64(1ULL << 32);
    const auto shares = share_integer(secret, sp, rng);
    const std::vector<IntegerShare> sub = {shares[5], shares[1], shares[3], shares[2]};
    const BigInt rec = reconstruct_integer(sub, sp);
    ASSERT_EQ(rec % (delta * delta), 0);
    ASSERT_EQ(rec / (delta * delta), secret);
  }
  EXPECT_THROW(share_integer(BigInt(1) << 32, sp, rng), RangeError);
}

TEST(IntegerShamirTest, LinearHomomorphism) {
  ShareParams sp;
  sp.m = 5;
  sp.r = 3;
  sp.t = 2;
  sp.ell_s = 16;
  sp.ell_r = 40;
  Rng rng(13);
  for (int k = 1; k <= 10; ++k) {
    std::vector<IntegerShare> acc;
    BigInt total = 0;
    for (int i = 0; i < k; ++i) {
      const BigInt s = rng.uniform_u64(1 << 16);
      total += 3 * s;
      auto sh = share_integer(s, sp, rng);
      for (auto& x : sh) x.value *= 3;
      if (acc.empty()) {
        acc = sh;
      } else {
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] = add_shares(acc[j], sh[j]);
      }
    }
    const BigInt d = factorial(5);
    EXPECT_EQ(reconstruct_integer(acc, sp), total * d * d);
  }
}

TEST(PackedIntegerTest, DivisibilityAndRoundTrip) {
  ShareParams sp;
  sp.m = 7;
  sp.r = 5;
  sp.t = 3;
  sp.rho = 2;
  sp.ell_s = 20;
  sp.ell_r = 30;
  Rng rng(14);
  const BigInt d = factorial(7);
  const BigInt d3 = d * d * d;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::vector<BigInt> secrets = {BigInt(rng.uniform_u64(1 << 20)),
                                         BigInt(rng.uniform_u64(1 << 20))};
    const auto shares = share_packed_integer(secrets, sp, rng);
    const std::vector<IntegerShare> sub = {shares[6], shares[0], shares[2], shares[3], shares[5]};
    const auto rec = reconstruct_packed_integer(sub, sp);
    for (int k = 0; k < 2; ++k) {
      ASSERT_EQ(rec[k] % d3, 0);
      ASSERT_EQ(rec[k] / d3, secrets[k]);
    }
  }
  const std::vector<BigInt> zs = {0, 0}, zq = {0, 0, 0};
  for (const auto& s : share_packed_integer(zs, zq, sp)) EXPECT_EQ(s.value, 0);
}

TEST(PackedIntegerTest, RhoOneMatchesPlainUpToDelta) {
  ShareParams sp;
  sp.m = 4;
  sp.r = 3;
  sp.t = 2;
  sp.rho = 1;
  sp.ell_s = 10;
  Rng rng(15);
  const BigInt d = factorial(4);
  for (int trial = 0; trial < 100; ++trial) {
    const BigInt s = rng.uniform_u64(1 << 10);
    const std::vector<BigInt> secrets = {s};
    const auto packed = reconstruct_packed_integer(share_packed_integer(secrets, sp, rng), sp);
    std::vector<BigInt> coeffs = {BigInt(rng.uniform_u64(1000)), BigInt(rng.uniform_u64(1000))};
    const BigInt plain = reconstruct_integer(share_integer(s, coeffs, sp), sp);
    EXPECT_EQ(packed[0], plain * d);
  }
}

TEST(SweepingTest, ClosedFormSmall) {
  ShareParams sp;
  sp.m = 3;
  sp.r = 2;
  sp.t = 1;
  sp.rho = 1;
  const std::vector<std::uint16_t> c = {2};
  // 36 (X - 2) / (4 - 2)
  EXPECT_EQ(sweeping_polynomial(c, 1, sp), (std::vector<BigInt>{-36, 18}));
}

BigInt eval_big(const std::vector<BigInt>& f, std::int64_t x) {
  BigInt acc = 0;
  for (std::size_t k = f.size(); k-- > 0;) acc = acc * x + f[k];
  return acc;
}

TEST(SweepingTest, DefiningEvaluationsWhenIntegral) {
  ShareParams sp;
  sp.m = 6;
  sp.r = 4;
  sp.t = 2;
  sp.rho = 2;
  const BigInt d = factorial(6);
  const BigInt bound = sweeping_coefficient_bound(sp);
  int integral = 0, nonintegral = 0;
  for (const auto& pair : subsets(6, 2)) {
    const std::vector<std::uint16_t> c = {static_cast<std::uint16_t>(pair[0] + 1),
                                          static_cast<std::uint16_t>(pair[1] + 1)};
    for (std::size_t slot = 1; slot <= 2; ++slot) {
      std::vector<BigInt> f;
      try {
        f = sweeping_polynomial(c, slot, sp);
      } catch (const MathError&) {
        ++nonintegral;
        continue;
      }
      ++integral;
      EXPECT_LE(f.size(), sp.r);
      EXPECT_EQ(eval_big(f, 6 + static_cast<std::int64_t>(slot)), d * d);
      EXPECT_EQ(eval_big(f, 6 + static_cast<std::int64_t>(3 - slot)), 0);
      for (std::uint16_t x : c) EXPECT_EQ(eval_big(f, x), 0);
      for (const BigInt& coef : f) EXPECT_LE(abs(coef), bound);
    }
  }
  EXPECT_GT(integral, 0);
  // 7 and 11 exceed m and appear as denominators for some corrupt sets.
  EXPECT_GT(nonintegral, 0);
}

TEST(SweepingTest, NonIntegralCaseRejected) {
  ShareParams sp;
  sp.m = 4;
  sp.r = 3;
  sp.t = 1;
  sp.rho = 2;
  const std::vector<std::uint16_t> c = {1};
  // denominator (4 + 2) - 1 = 5 does not divide 24^2
  EXPECT_THROW(sweeping_polynomial(c, 2, sp), MathError);
  const std::vector<std::uint16_t> wrong = {1, 2};
  EXPECT_THROW(sweeping_polynomial(wrong, 1, sp), ParamError);
}

TEST(SerializationTest, RoundTrips) {
  ByteWriter w;
  write_share(w, FieldShare{513, (static_cast<u128>(1) << 100) + 7});
  write_share(w, IntegerShare{2, BigInt(-123456789) * (BigInt(1) << 90)});
  write_share(w, IntegerShare{3, 0});
  const Bytes buf = w.take();
  EXPECT_EQ(buf[0], 0x01);
  EXPECT_EQ(buf[1], 0x02);
  ByteReader r(buf);
  EXPECT_EQ(read_field_share(r), (FieldShare{513, (static_cast<u128>(1) << 100) + 7}));
  EXPECT_EQ(read_integer_share(r).value, BigInt(-123456789) * (BigInt(1) << 90));
  EXPECT_EQ(read_integer_share(r).value, 0);
  EXPECT_TRUE(r.done());
}

TEST(ChunkTest, LittleEndianZeroPadded) {
  const std::vector<u128> seed = {1, 2, 3, 4, 5};
  const auto chunks = chunk_seed(seed, 2);
  ASSERT_EQ(chunks.size(), 3u);
  EXPECT_EQ(chunks[0], (std::vector<u128>{1, 2}));
  EXPECT_EQ(chunks[2], (std::vector<u128>{5, 0}));
  EXPECT_EQ(unchunk_seed(chunks, 5), seed);
  EXPECT_EQ(chunk_seed(std::vector<u128>(2048), 16).size(), 128u);
}

}  // namespace
}  // namespace opa
