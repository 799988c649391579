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

#include "opa/group.hpp"

#include <boost/multiprecision/miller_rabin.hpp>

#include <algorithm>
#include <iterator>
#include <random>

#include "opa/error.hpp"

namespace opa {
namespace {

using Int = SchnorrGroup::Int;

Int to_big(u128 x) {
  Int v = static_cast<std::uint64_t>(x >> 64);
  v <<= 64;
  return v + static_cast<std::uint64_t>(x);
}

bool probably_prime(const Int& n) {
  // Fixed-seed engine: primality of public constants must be reproducible.
  std::mt19937_64 gen(0x4f5041);
  return boost::multiprecision::miller_rabin_test(n, 40, gen);
}

}  // namespace

SchnorrGroup::SchnorrGroup(const Modulus& q, const Int& big_p, const Int& g)
    : q_(q), p_(big_p), g_(g) {
  const Int qb = to_big(q.value());
  if (!q.is_prime()) throw ParamError("group order must be prime");
  if ((p_ - 1) % qb != 0) throw ParamError("q does not divide P - 1");
  if (!probably_prime(p_)) throw ParamError("P is not prime");
  if (g_ <= 1 || g_ >= p_ || powm(g_, qb, p_) != 1) throw ParamError("g does not generate the order-q subgroup");
  width_ = (msb(p_) + 8) / 8;
  const unsigned bits = q.bits();
  g_pow2_.reserve(bits);
  Int cur = g_;
  for (unsigned i = 0; i < bits; ++i) {
    g_pow2_.push_back(cur);
    cur = cur * cur % p_;
  }
}

SchnorrGroup SchnorrGroup::generate(const Modulus& q, Rng& rng) {
  const Int qb = to_big(q.value());
  for (Int k = 2;; k += 2) {
    const Int p = k * qb + 1;
    if (!probably_prime(p)) continue;
    for (;;) {
      Int h = 2 + to_big(rng.uniform_below(static_cast<u128>(1) << 120)) % (p - 3);
      const Int g = powm(h, k, p);
      if (g != 1) return SchnorrGroup(q, p, g);
    }
  }
}

const SchnorrGroup& SchnorrGroup::default_group() {
  static const SchnorrGroup group(
      Modulus::mersenne127(),
      Int("0x80000000000000000000000000000082fffffffffffffffffffffffffffffef9"),
      Int("0x279f519e8a2db10ce1777a5a415db5664c0edf69a42b3732161762d4e65dfa76"));
  return group;
}

Int SchnorrGroup::to_int(const GroupElement& e) const {
  if (e.data.size() != width_) throw DecodeError("group element has wrong width");
  Int v = 0;
  import_bits(v, e.data.begin(), e.data.end(), 8, true);
  return v;
}

GroupElement SchnorrGroup::from_int(const Int& x) const {
  Bytes raw;
  export_bits(x, std::back_inserter(raw), 8, true);
  GroupElement e;
  e.data.assign(width_ - raw.size(), 0);
  e.data.insert(e.data.end(), raw.begin(), raw.end());
  return e;
}

GroupElement SchnorrGroup::identity() const { return from_int(1); }
GroupElement SchnorrGroup::generator() const { return from_int(g_); }

GroupElement SchnorrGroup::exp(const GroupElement& base, u128 e) const {
  return from_int(powm(to_int(base), to_big(e), p_));
}

GroupElement SchnorrGroup::exp_g(u128 e) const {
  e = q_.reduce(e);
  Int acc = 1;
  for (unsigned i = 0; e != 0; ++i, e >>= 1) {
    if (e & 1) acc = acc * g_pow2_[i] % p_;
  }
  return from_int(acc);
}

GroupElement SchnorrGroup::mul(const GroupElement& a, const GroupElement& b) const {
  return from_int(to_int(a) * to_int(b) % p_);
}

GroupElement SchnorrGroup::inv(const GroupElement& a) const {
  // a^(q-1) = a^-1 inside the order-q subgroup.
  return from_int(powm(to_int(a), to_big(q_.value() - 1), p_));
}

GroupElement SchnorrGroup::decode(ByteView bytes) const {
  GroupElement e{Bytes(bytes.begin(), bytes.end())};
  const Int v = to_int(e);
  if (v == 0 || v >= p_) throw DecodeError("group element out of range");
  if (powm(v, to_big(q_.value()), p_) != 1) throw DecodeError("element outside the prime-order subgroup");
  return e;
}

}  // namespace opa
