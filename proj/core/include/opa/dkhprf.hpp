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

// Distributed almost-key-homomorphic PRF from LWR with the double rounding
// schedule Z_q -> Z_p -> Z_u -> Z_v and offset Delta = m!.

#ifndef OPA_DKHPRF_HPP_
#define OPA_DKHPRF_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "opa/bytes.hpp"
#include "opa/ringmath.hpp"
#include "opa/rng.hpp"

namespace opa {

struct DprfParams {
  std::size_t key_dim = 4;
  Modulus q{(static_cast<u128>(1) << 31) - 1, true};
  Modulus p{static_cast<u128>(1) << 20, false};
  Modulus u{static_cast<u128>(1) << 13, false};
  Modulus v{static_cast<u128>(1) << 9, false};
  std::size_t m = 3;
  std::size_t r = 2;

  // m!, as long as it fits in 64 bits.
  u128 delta() const;
  // Human-readable list of violated rules (empty when valid).
  std::vector<std::string> violations() const;
  // Throws ParamError listing the first violation.
  void validate() const;
};

using DprfKey = std::vector<u128>;

struct DprfKeyShare {
  std::uint16_t index = 0;
  std::vector<u128> k;
};

struct DprfPartial {
  std::uint16_t index = 0;
  u128 y = 0;
};

// Xof("OPA-HPT").absorb(x), key_dim entries uniform in Z_q.
std::vector<u128> hash_point(ByteView x, const DprfParams& params);

DprfKey sample_key(const DprfParams& params, Rng& rng);
// Independent degree r-1 Shamir polynomial per key coordinate over Z_q.
std::vector<DprfKeyShare> share_key(const DprfKey& key, const DprfParams& params, Rng& rng);

// floor_p(<h, k>) in Z_p.
u128 inner_round_p(std::span<const u128> h, std::span<const u128> k, const DprfParams& params);
// floor_u(Delta * y mod p) in Z_u.
u128 lift_to_u(u128 y_p, const DprfParams& params);

// Y = floor_v(Delta floor_u(Delta floor_p(<H(x), k>)))
u128 dprf_eval(const DprfKey& key, ByteView x, const DprfParams& params);
u128 dprf_eval_hashed(std::span<const u128> h, std::span<const u128> key, const DprfParams& params);
// y_i = floor_u(Delta floor_p(<H(x), k_i>))
u128 p_eval(const DprfKeyShare& share, ByteView x, const DprfParams& params);
u128 p_eval_hashed(std::span<const u128> h, std::span<const u128> key_share,
                   const DprfParams& params);

// Delta * lambda_j (Lagrange at zero over the first r indices) reduced mod u.
std::vector<u128> combine_coefficients(std::span<const std::uint16_t> indices,
                                       const DprfParams& params);
// Exact signed integers Delta * lambda_j.
std::vector<std::int64_t> combine_coefficients_signed(std::span<const std::uint16_t> indices,
                                                      const DprfParams& params);
// floor_v(sum_j Delta lambda_j y_j mod u) over the first r partials.
u128 combine(std::span<const DprfPartial> partials, const DprfParams& params);

}  // namespace opa

#endif  // OPA_DKHPRF_HPP_
