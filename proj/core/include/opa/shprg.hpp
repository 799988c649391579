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

// Seed-homomorphic PRGs from LWR (Expand(s) = round_p(A^T s)) and LWE
// (Expand(s, e) = A s + e), and the input encodings that absorb their
// homomorphism error.

#ifndef OPA_SHPRG_HPP_
#define OPA_SHPRG_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "opa/bytes.hpp"
#include "opa/ringmath.hpp"
#include "opa/rng.hpp"

namespace opa {

using Seed32 = std::array<std::uint8_t, 32>;
using Digest16 = std::array<std::uint8_t, 16>;

struct PrgParams {
  std::size_t lambda = 0;
  std::size_t big_l = 0;
  Modulus q = Modulus::mersenne127();
  Modulus p{pow2(53), false};
  Seed32 matrix_seed{};

  // Throws ParamError unless lambda > 0, big_l > 0 and p < q.
  void validate() const;
};

// Stored as big_l rows of length lambda: row l is column l of A, so the
// LWR output coordinate l is round_p(<row l, s>) and the LWE output
// coordinate l is <row l, s> + e_l.
class PublicMatrix {
 public:
  PublicMatrix(const Modulus& q, std::size_t lambda, std::size_t big_l,
               std::vector<u128> entries);

  const Modulus& q() const { return q_; }
  std::size_t lambda() const { return lambda_; }
  std::size_t big_l() const { return big_l_; }
  std::span<const u128> row(std::size_t l) const {
    return {entries_.data() + l * lambda_, lambda_};
  }

 private:
  Modulus q_;
  std::size_t lambda_;
  std::size_t big_l_;
  std::vector<u128> entries_;
};

// Row l is Xof("OPA-A").absorb(matrix_seed).absorb_u64(l) sampled with
// uniform_below(q), lambda times.
PublicMatrix derive_matrix(const PrgParams& params);

// Optional per-iteration matrix seed: SHAKE256("OPA-TWEAK" || seed ||
// iteration || model_hash), 32 bytes.
Seed32 tweak_matrix_seed(const Seed32& seed, std::uint64_t iteration, ByteView model_hash);

struct PrgSeed {
  std::vector<u128> s;
  // LWE only; empty in LWR mode.
  std::vector<std::int64_t> e;
};

PrgSeed sample_seed_lwr(const PrgParams& params, Rng& rng);
// Errors are centered-binomial(eta) shifted by eta + 1 into [1, 2*eta + 1].
PrgSeed sample_seed_lwe(const PrgParams& params, unsigned eta, Rng& rng);
std::int64_t lwe_error_bound(unsigned eta);

std::vector<u128> expand_lwr(const PrgParams& params, const PublicMatrix& a,
                             const PrgSeed& sd);
std::vector<u128> expand_lwe(const PrgParams& params, const PublicMatrix& a,
                             const PrgSeed& sd, std::int64_t error_bound);

struct EncodeParams {
  unsigned kappa_s = 0;
  std::uint64_t n = 0;
  u128 delta = 0;

  // delta = 2^kappa_s * n
  static EncodeParams lwr(unsigned kappa_s, std::uint64_t n);
  // delta = floor(q / p)
  static EncodeParams lwe(const Modulus& q, const Modulus& p, std::uint64_t n);
};

// Largest x accepted by encode_lwr: x * delta * n < p - delta.
u128 lwr_summand_limit(const EncodeParams& ep, const Modulus& p);
// Largest bit length l with n * 2^l < (p - delta) / delta, or -1 if none.
int lwr_input_bits(const EncodeParams& ep, const Modulus& p);

// delta*x + r + 1 mod p, r uniform in [0, 2^kappa_s).
u128 encode_lwr(u128 x, const EncodeParams& ep, const Modulus& p, Rng& rng);
u128 encode_lwr(u128 x, u128 r, const EncodeParams& ep, const Modulus& p);
// ceil(X / delta) - 1
i128 decode_lwr(u128 x_agg, const EncodeParams& ep);

u128 encode_lwe(u128 x, const EncodeParams& ep, const Modulus& q);
// ceil(X / delta) - 1, clamped below at 0.
i128 decode_lwe(u128 x_agg, const EncodeParams& ep);

// L elements of Z_p from Xof("OPA-MASK2").absorb(dig).
std::vector<u128> second_mask(const Digest16& dig, std::size_t big_l, const Modulus& p);

}  // namespace opa

#endif  // OPA_SHPRG_HPP_
