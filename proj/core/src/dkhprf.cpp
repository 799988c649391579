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

#include "opa/dkhprf.hpp"

#include <set>

#include "opa/error.hpp"
#include "opa/sharing.hpp"
#include "opa/xof.hpp"

namespace opa {

u128 DprfParams::delta() const {
  u128 d = 1;
  for (std::size_t k = 2; k <= m; ++k) {
    d *= k;
    if (d >> 63) throw ParamError("m! does not fit in 63 bits");
  }
  return d;
}

std::vector<std::string> DprfParams::violations() const {
  std::vector<std::string> out;
  if (key_dim == 0) out.push_back("key dimension must be positive");
  if (!(p.value() < q.value())) out.push_back("need p < q");
  if (!(u.value() < p.value())) out.push_back("need u < p");
  if (!(v.value() < u.value())) out.push_back("need v < u");
  if (r == 0 || r > m) out.push_back("need 1 <= r <= m");
  if (!q.is_prime()) out.push_back("q must be prime for key sharing");
  if (m > 20) {
    out.push_back("m! exceeds 63 bits");
    return out;
  }
  const u128 d = delta();
  if (!(p.value() / u.value() > (d + 1) * r * d)) {
    out.push_back("floor(p/u) > (Delta+1) r Delta fails");
  }
  if (!(u.value() / v.value() > d * r)) out.push_back("floor(u/v) > Delta r fails");
  return out;
}

void DprfParams::validate() const {
  const auto v = violations();
  if (!v.empty()) throw ParamError("DPRF parameters: " + v.front());
}

std::vector<u128> hash_point(ByteView x, const DprfParams& params) {
  Xof xof("OPA-HPT");
  xof.absorb(x);
  std::vector<u128> h(params.key_dim);
  for (u128& e : h) e = xof.uniform_below(params.q.value());
  return h;
}

DprfKey sample_key(const DprfParams& params, Rng& rng) {
  DprfKey k(params.key_dim);
  for (u128& e : k) e = rng.uniform_below(params.q.value());
  return k;
}

std::vector<DprfKeyShare> share_key(const DprfKey& key, const DprfParams& params, Rng& rng) {
  if (key.size() != params.key_dim) throw ParamError("key dimension mismatch");
  ShareParams sp;
  sp.m = params.m;
  sp.r = params.r;
  sp.t = params.r - 1;
  sp.field = params.q;
  std::vector<DprfKeyShare> out(params.m);
  for (std::size_t j = 0; j < params.m; ++j) {
    out[j].index = static_cast<std::uint16_t>(j + 1);
    out[j].k.resize(params.key_dim);
  }
  for (std::size_t z = 0; z < params.key_dim; ++z) {
    const auto shares = share_field(key[z], sp, rng);
    for (std::size_t j = 0; j < params.m; ++j) out[j].k[z] = shares[j].value;
  }
  return out;
}

u128 inner_round_p(std::span<const u128> h, std::span<const u128> k, const DprfParams& params) {
  return round_down(params.q.dot(h, k), params.q, params.p);
}

u128 lift_to_u(u128 y_p, const DprfParams& params) {
  return round_down(params.p.mul(params.delta(), y_p), params.p, params.u);
}

u128 dprf_eval_hashed(std::span<const u128> h, std::span<const u128> key,
                      const DprfParams& params) {
  const u128 yu = lift_to_u(inner_round_p(h, key, params), params);
  return round_down(params.u.mul(params.delta(), yu), params.u, params.v);
}

u128 dprf_eval(const DprfKey& key, ByteView x, const DprfParams& params) {
  return dprf_eval_hashed(hash_point(x, params), key, params);
}

u128 p_eval_hashed(std::span<const u128> h, std::span<const u128> key_share,
                   const DprfParams& params) {
  return lift_to_u(inner_round_p(h, key_share, params), params);
}

u128 p_eval(const DprfKeyShare& share, ByteView x, const DprfParams& params) {
  return p_eval_hashed(hash_point(x, params), share.k, params);
}

std::vector<std::int64_t> combine_coefficients_signed(std::span<const std::uint16_t> indices,
                                                      const DprfParams& params) {
  std::set<std::uint16_t> seen;
  for (std::uint16_t i : indices) {
    if (i == 0 || i > params.m) throw ParamError("partial index out of range");
    if (!seen.insert(i).second) throw ParamError("duplicate partial index");
  }
  if (indices.size() < params.r) throw ThresholdError("fewer partials than the threshold");
  const BigInt delta = factorial(params.m);
  std::vector<std::int64_t> out(params.r);
  for (std::size_t j = 0; j < params.r; ++j) {
    BigInt num = delta, den = 1;
    for (std::size_t z = 0; z < params.r; ++z) {
      if (z == j) continue;
      num *= static_cast<std::int64_t>(indices[z]);
      den *= static_cast<std::int64_t>(indices[z]) - static_cast<std::int64_t>(indices[j]);
    }
    if (num % den != 0) throw MathError("Delta * lambda is not integral");
    out[j] = static_cast<std::int64_t>(num / den);
  }
  return out;
}

std::vector<u128> combine_coefficients(std::span<const std::uint16_t> indices,
                                       const DprfParams& params) {
  const auto c = combine_coefficients_signed(indices, params);
  std::vector<u128> out(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) out[j] = params.u.from_signed(c[j]);
  return out;
}

u128 combine(std::span<const DprfPartial> partials, const DprfParams& params) {
  std::vector<std::uint16_t> idx;
  for (const DprfPartial& pt : partials) idx.push_back(pt.index);
  const auto c = combine_coefficients(idx, params);
  u128 acc = 0;
  for (std::size_t j = 0; j < params.r; ++j) {
    acc = params.u.add(acc, params.u.mul(c[j], params.u.reduce(partials[j].y)));
  }
  return round_down(acc, params.u, params.v);
}

}  // namespace opa
