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

#include "opa/error.hpp"
#include "opa/xof.hpp"

namespace opa {

void PrgParams::validate() const {
  if (lambda == 0) throw ParamError("lambda must be positive");
  if (big_l == 0) throw ParamError("output length L must be positive");
  if (p.value() >= q.value()) throw ParamError("PRG needs p < q");
}

PublicMatrix::PublicMatrix(const Modulus& q, std::size_t lambda, std::size_t big_l,
                           std::vector<u128> entries)
    : q_(q), lambda_(lambda), big_l_(big_l), entries_(std::move(entries)) {
  if (entries_.size() != lambda * big_l) throw ParamError("matrix size mismatch");
  for (u128 v : entries_) {
    if (v >= q.value()) throw RangeError("matrix entry not canonical");
  }
}

PublicMatrix derive_matrix(const PrgParams& params) {
  params.validate();
  std::vector<u128> entries;
  entries.reserve(params.lambda * params.big_l);
  for (std::size_t l = 0; l < params.big_l; ++l) {
    Xof xof("OPA-A");
    xof.absorb(params.matrix_seed).absorb_u64(l);
    for (std::size_t k = 0; k < params.lambda; ++k) {
      entries.push_back(xof.uniform_below(params.q.value()));
    }
  }
  return PublicMatrix(params.q, params.lambda, params.big_l, std::move(entries));
}

Seed32 tweak_matrix_seed(const Seed32& seed, std::uint64_t iteration, ByteView model_hash) {
  Xof xof("OPA-TWEAK");
  xof.absorb(seed).absorb_u64(iteration).absorb(model_hash);
  Seed32 out;
  xof.squeeze(out);
  return out;
}

PrgSeed sample_seed_lwr(const PrgParams& params, Rng& rng) {
  PrgSeed sd;
  sd.s.resize(params.lambda);
  for (u128& v : sd.s) v = rng.uniform_below(params.q.value());
  return sd;
}

std::int64_t lwe_error_bound(unsigned eta) { return 2 * static_cast<std::int64_t>(eta) + 1; }

PrgSeed sample_seed_lwe(const PrgParams& params, unsigned eta, Rng& rng) {
  PrgSeed sd = sample_seed_lwr(params, rng);
  sd.e.resize(params.big_l);
  for (std::int64_t& e : sd.e) e = rng.cbd(eta) + static_cast<std::int64_t>(eta) + 1;
  return sd;
}

namespace {

void check_dims(const PrgParams& params, const PublicMatrix& a, const PrgSeed& sd) {
  if (a.lambda() != params.lambda || a.big_l() != params.big_l ||
      !(a.q() == params.q)) {
    throw ParamError("matrix does not match PRG parameters");
  }
  if (sd.s.size() != params.lambda) throw ParamError("seed dimension mismatch");
}

}  // namespace

std::vector<u128> expand_lwr(const PrgParams& params, const PublicMatrix& a,
                             const PrgSeed& sd) {
  check_dims(params, a, sd);
  std::vector<u128> out(params.big_l);
  for (std::size_t l = 0; l < params.big_l; ++l) {
    out[l] = round_down(params.q.dot(a.row(l), sd.s), params.q, params.p);
  }
  return out;
}

std::vector<u128> expand_lwe(const PrgParams& params, const PublicMatrix& a,
                             const PrgSeed& sd, std::int64_t error_bound) {
  check_dims(params, a, sd);
  if (sd.e.size() != params.big_l) throw ParamError("error vector length mismatch");
  for (std::int64_t e : sd.e) {
    if (e > error_bound || e < -error_bound) throw ParamError("LWE error exceeds bound");
  }
  std::vector<u128> out(params.big_l);
  for (std::size_t l = 0; l < params.big_l; ++l) {
    out[l] = params.q.add(params.q.dot(a.row(l), sd.s), params.q.from_signed(sd.e[l]));
  }
  return out;
}

EncodeParams EncodeParams::lwr(unsigned kappa_s, std::uint64_t n) {
  if (n == 0) throw ParamError("n must be positive");
  if (kappa_s >= 100) throw ParamError("kappa_s too large");
  return EncodeParams{kappa_s, n, pow2(kappa_s) * n};
}

EncodeParams EncodeParams::lwe(const Modulus& q, const Modulus& p, std::uint64_t n) {
  if (n == 0) throw ParamError("n must be positive");
  if (p.value() >= q.value()) throw ParamError("LWE encoding needs p < q");
  return EncodeParams{0, n, q.value() / p.value()};
}

u128 lwr_summand_limit(const EncodeParams& ep, const Modulus& p) {
  if (p.value() <= ep.delta) return 0;
  const u128 budget = p.value() - ep.delta;
  const u128 unit = ep.delta * ep.n;
  // largest x with x * unit < budget
  return (budget - 1) / unit;
}

int lwr_input_bits(const EncodeParams& ep, const Modulus& p) {
  if (p.value() <= ep.delta) return -1;
  const u128 budget = p.value() - ep.delta;
  int bits = -1;
  // n * 2^l * delta < p - delta
  for (unsigned l = 0; l < 127; ++l) {
    const U256 prod = mul_wide(static_cast<u128>(ep.n) << l, ep.delta);
    if (prod.hi != 0 || prod.lo >= budget) break;
    bits = static_cast<int>(l);
  }
  return bits;
}

u128 encode_lwr(u128 x, u128 r, const EncodeParams& ep, const Modulus& p) {
  if (x > lwr_summand_limit(ep, p)) throw RangeError("input exceeds per-summand budget");
  if (r >= pow2(ep.kappa_s)) throw RangeError("encoding randomness out of range");
  return p.reduce(ep.delta * x + r + 1);
}

u128 encode_lwr(u128 x, const EncodeParams& ep, const Modulus& p, Rng& rng) {
  return encode_lwr(x, rng.uniform_below(pow2(ep.kappa_s)), ep, p);
}

i128 decode_lwr(u128 x_agg, const EncodeParams& ep) {
  if (x_agg == 0) return -1;
  return static_cast<i128>((x_agg - 1) / ep.delta + 1) - 1;
}

u128 encode_lwe(u128 x, const EncodeParams& ep, const Modulus& q) {
  const U256 prod = mul_wide(x, ep.delta);
  if (prod.hi != 0 || prod.lo >= q.value()) throw RangeError("input exceeds LWE message space");
  return prod.lo;
}

i128 decode_lwe(u128 x_agg, const EncodeParams& ep) {
  const i128 v = decode_lwr(x_agg, ep);
  return v < 0 ? 0 : v;
}

std::vector<u128> second_mask(const Digest16& dig, std::size_t big_l, const Modulus& p) {
  Xof xof("OPA-MASK2");
  xof.absorb(dig);
  std::vector<u128> out(big_l);
  for (u128& v : out) v = xof.uniform_below(p.value());
  return out;
}

}  // namespace opa
