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

#include "opa/ringmath.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "gtest/gtest.h"
#include "opa/error.hpp"
#include "opa/rng.hpp"

namespace opa {
namespace {

using boost::multiprecision::cpp_int;

cpp_int big(u128 x) {
  cpp_int v = static_cast<std::uint64_t>(x >> 64);
  v <<= 64;
  v += static_cast<std::uint64_t>(x);
  return v;
}

u128 small(const cpp_int& v) {
  u128 hi = static_cast<std::uint64_t>(v >> 64);
  u128 lo = static_cast<std::uint64_t>(v & cpp_int(0xffffffffffffffffULL));
  return (hi << 64) | lo;
}

TEST(FeTest, HandValues) {
  const Modulus m97 = Modulus::prime(97);
  EXPECT_EQ(fe_add(Fe(5, m97), Fe(95, m97)).value(), 3);
  EXPECT_EQ(fe_inv(Fe(2, m97)).value(), 49);
  for (u128 x = 0; x < 97; ++x) {
    EXPECT_EQ(fe_mul(Fe(1, m97), Fe(x, m97)).value(), x);
  }
  EXPECT_EQ(fe_sub(Fe(3, m97), Fe(5, m97)).value(), 95);
}

TEST(FeTest, Errors) {
  const Modulus m97 = Modulus::prime(97);
  const Modulus m101 = Modulus::prime(101);
  EXPECT_THROW(fe_add(Fe(1, m97), Fe(1, m101)), ParamError);
  EXPECT_THROW(fe_inv(Fe(0, m97)), MathError);
  EXPECT_THROW(Modulus(2, true), ParamError);
  EXPECT_THROW(Modulus::prime(91), ParamError);
  EXPECT_THROW(Fe(97, m97), RangeError);
  const Modulus m16(16, false);
  EXPECT_THROW(fe_inv(Fe(4, m16)), MathError);
}

TEST(FeTest, InverseIsIdentityOnRandomPairs) {
  Rng rng(7);
  for (const Modulus& m : {Modulus::prime(10007), Modulus::mersenne127(),
                           Modulus::prime(parse_u128("2^61-1"))}) {
    for (int trial = 0; trial < 500; ++trial) {
      const u128 a = 1 + rng.uniform_below(m.value() - 1);
      const u128 b = rng.uniform_below(m.value());
      EXPECT_EQ(m.mul(m.mul(b, a), m.inv(a)), b);
    }
  }
}

TEST(ModulusTest, MatchesBigIntegerOracle) {
  Rng rng(11);
  const u128 generic = parse_u128("2^127+45");
  for (const Modulus& m : {Modulus::mersenne127(), Modulus(generic, false),
                           Modulus(parse_u128("2^128-159"), true),
                           Modulus(parse_u128("2^64+13"), false),
                           Modulus(parse_u128("2^63+29"), false)}) {
    const cpp_int mv = big(m.value());
    for (int trial = 0; trial < 300; ++trial) {
      const u128 a = rng.uniform_below(m.value());
      const u128 b = rng.uniform_below(m.value());
      EXPECT_EQ(m.mul(a, b), small((big(a) * big(b)) % mv));
      EXPECT_EQ(m.add(a, b), small((big(a) + big(b)) % mv));
      EXPECT_EQ(m.sub(a, b), small((big(a) + mv - big(b)) % mv));
    }
  }
}

TEST(ModulusTest, DotMatchesNaiveSum) {
  Rng rng(3);
  const Modulus m = Modulus::mersenne127();
  std::vector<u128> a(3000), b(3000);
  cpp_int acc = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k] = rng.uniform_below(m.value());
    b[k] = rng.uniform_below(m.value());
    acc += big(a[k]) * big(b[k]);
  }
  EXPECT_EQ(m.dot(a, b), small(acc % big(m.value())));
  // Worst case for the lazy accumulator: every term at its maximum.
  std::fill(a.begin(), a.end(), m.value() - 1);
  std::fill(b.begin(), b.end(), m.value() - 1);
  EXPECT_EQ(m.dot(a, b), 3000 % m.value());
}

TEST(ModulusTest, SignedLifts) {
  const Modulus m = Modulus::prime(97);
  EXPECT_EQ(m.from_signed(-1), 96);
  EXPECT_EQ(m.from_signed(-97), 0);
  EXPECT_EQ(m.from_signed(-195), 96);
  EXPECT_EQ(m.to_signed(96), -1);
  EXPECT_EQ(m.to_signed(48), 48);
  EXPECT_EQ(m.to_signed(49), -48);
}

TEST(RoundDownTest, HandValues) {
  const Modulus q(16, false), p(4, false);
  EXPECT_EQ(round_down(7, q, p), 1);
  EXPECT_EQ(round_down(0, q, p), 0);
  EXPECT_EQ(round_down(15, q, p), 3);
  EXPECT_THROW(round_down(3, p, q), ParamError);
  EXPECT_EQ(round_down(Fe(7, q), p).modulus(), p);
}

TEST(RoundDownTest, WideMatchesBigInteger) {
  Rng rng(5);
  const Modulus q = Modulus::mersenne127();
  const Modulus p(pow2(53), false);
  for (int trial = 0; trial < 1000; ++trial) {
    const u128 x = rng.uniform_below(q.value());
    EXPECT_EQ(round_down(x, q, p), small(big(x) * big(p.value()) / big(q.value())));
  }
  EXPECT_EQ(round_down(q.value() - 1, q, p), p.value() - 1);
}

// Exhaustive over all pairs for several q <= 2^12.
TEST(RoundDownTest, PairwiseGapAndMonotone) {
  for (u128 qv : {u128{97}, u128{256}, u128{1021}, u128{4096}}) {
    for (u128 pv : {u128{4}, u128{7}, u128{64}}) {
      const Modulus q(qv, false), p(pv, false);
      u128 prev = 0;
      for (u128 x = 0; x < qv; ++x) {
        const u128 rx = round_down(x, q, p);
        ASSERT_GE(rx, prev);
        prev = rx;
      }
      const u128 step = qv > 1024 ? 7 : 1;
      for (u128 x = 0; x < qv; x += step) {
        for (u128 y = 0; y < qv; ++y) {
          const u128 sum = round_down(x, q, p) + round_down(y, q, p);
          if (x + y < qv) {
            const u128 whole = round_down(x + y, q, p);
            ASSERT_TRUE(whole == sum || whole == sum + 1)
                << "q=" << to_string(qv) << " x=" << to_string(x) << " y=" << to_string(y);
          } else {
            const u128 whole = round_down(x + y - qv, q, p);
            const u128 s = sum % pv;
            ASSERT_TRUE(whole == s || whole == (s + 1) % pv || (whole + 1) % pv == s);
          }
        }
      }
    }
  }
}

TEST(PolyTest, HandValues) {
  const Modulus m = Modulus::prime(97);
  const Poly f(m, {5, 3});
  EXPECT_EQ(poly_eval(f, Fe(1, m)).value(), 8);
  EXPECT_EQ(poly_eval(f, Fe(0, m)).value(), 5);
  EXPECT_EQ(poly_eval(f, Fe(2, m)).value(), 11);
  EXPECT_THROW(poly_eval(f, Fe(2, Modulus::prime(101))), ParamError);
  const Poly padded(m, {5, 3, 0, 0});
  EXPECT_EQ(padded.eval(40), f.eval(40));
}

TEST(PolyTest, MulLinearHasRoot) {
  const Modulus m = Modulus::prime(10007);
  Poly f(m, {1});
  for (u128 root : {3, 9, 27}) f.mul_linear(root);
  EXPECT_EQ(f.size(), 4u);
  EXPECT_EQ(f.eval(3), 0);
  EXPECT_EQ(f.eval(9), 0);
  EXPECT_EQ(f.eval(27), 0);
  EXPECT_EQ(f.eval(1), m.from_signed(-2 * -8 * -26));
}

TEST(LagrangeTest, HandCoefficients) {
  const Modulus m = Modulus::prime(97);
  const std::vector<u128> xs = {1, 3};
  const auto lam = lagrange_at(xs, 0, m);
  EXPECT_EQ(lam[0], 50);
  EXPECT_EQ(lam[1], 48);
  EXPECT_EQ(m.add(m.mul(lam[0], 8), m.mul(lam[1], 14)), 5);
}

TEST(ParseTest, Forms) {
  EXPECT_EQ(parse_u128("2^127-1"), Modulus::mersenne127().value());
  EXPECT_EQ(parse_u128("2^53"), pow2(53));
  EXPECT_EQ(parse_u128("0x10"), 16);
  EXPECT_EQ(parse_u128("10007"), 10007);
  EXPECT_EQ(parse_u128("2^4+3"), 19);
  EXPECT_EQ(to_string(parse_u128("340282366920938463463374607431768211455")),
            "340282366920938463463374607431768211455");
  EXPECT_EQ(to_string(i128{-42}), "-42");
  EXPECT_THROW(parse_u128("340282366920938463463374607431768211456"), RangeError);
  EXPECT_THROW(parse_u128("12a"), ParamError);
}

TEST(PrimalityTest, KnownValues) {
  EXPECT_TRUE(is_probable_prime(Modulus::mersenne127().value()));
  EXPECT_TRUE(is_probable_prime(parse_u128("2^61-1")));
  EXPECT_TRUE(is_probable_prime(parse_u128("2^31-1")));
  EXPECT_FALSE(is_probable_prime(parse_u128("2^64+1")));
  EXPECT_FALSE(is_probable_prime(3215031751));  // strong pseudoprime to 2,3,5,7
  EXPECT_TRUE(is_probable_prime(10007));
}

}  // namespace
}  // namespace opa
