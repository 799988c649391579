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

// Shamir secret sharing over a prime field and over the integers, plain and
// packed. Party j holds f(j) for j in [1, m]; packed secrets sit at m+1..m+rho.

#ifndef OPA_SHARING_HPP_
#define OPA_SHARING_HPP_

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>
#include <vector>

#include "opa/bytes.hpp"
#include "opa/ringmath.hpp"
#include "opa/rng.hpp"

namespace opa {

using BigInt = boost::multiprecision::cpp_int;

struct ShareParams {
  std::size_t m = 0;
  std::size_t r = 0;
  std::size_t t = 0;
  std::size_t rho = 1;
  Modulus field = Modulus::mersenne127();
  unsigned kappa_s = 40;
  unsigned ell_s = 64;
  unsigned ell_r = 0;

  // t < r <= m, prime field larger than m + rho.
  void validate_field() const;
  // Adds t <= r - rho and 2m >= 3 rho.
  void validate_packed() const;
  // t < r <= m and ell_r >= min_ell_r(); rho is honoured.
  void validate_integer() const;
};

struct FieldShare {
  std::uint16_t index = 0;
  u128 value = 0;
  friend bool operator==(const FieldShare&, const FieldShare&) = default;
};

struct IntegerShare {
  std::uint16_t index = 0;
  BigInt value;
  friend bool operator==(const IntegerShare&, const IntegerShare&) = default;
};

// m! as a big integer.
BigInt factorial(std::size_t m);

// Degree r-1 polynomial with f(0) = secret and uniform higher coefficients.
std::vector<FieldShare> share_field(u128 secret, const ShareParams& sp, Rng& rng);
// Shares from an explicit polynomial (f(0) is the secret).
std::vector<FieldShare> share_field(const Poly& f, const ShareParams& sp);
// Interpolates f(0) from the first r shares. Throws ThresholdError with
// fewer than r shares, ParamError on a duplicate or out-of-range index.
u128 reconstruct_field(std::span<const FieldShare> shares, const ShareParams& sp);

// f(X) = q(X) * prod_i (X - (m+i)) + sum_i s_i L_i(X) with deg q = r-rho-1.
Poly packed_polynomial(std::span<const u128> secrets, std::span<const u128> q_coeffs,
                       const ShareParams& sp);
std::vector<FieldShare> share_packed_field(std::span<const u128> secrets,
                                           const ShareParams& sp, Rng& rng);
std::vector<FieldShare> share_packed_field(std::span<const u128> secrets,
                                           std::span<const u128> q_coeffs,
                                           const ShareParams& sp);
std::vector<u128> reconstruct_packed_field(std::span<const FieldShare> shares,
                                           const ShareParams& sp);

// Precomputed linear map from (secrets, q coefficients) to the evaluations
// f(0), f(1), ..., f(m); used on the client hot path.
class PackedSharer {
 public:
  explicit PackedSharer(const ShareParams& sp);

  const ShareParams& params() const { return sp_; }
  // Returns m+1 values: index 0 is f(0), index j is party j's share.
  std::vector<u128> share(std::span<const u128> secrets, Rng& rng) const;
  std::vector<u128> share(std::span<const u128> secrets,
                          std::span<const u128> q_coeffs) const;

 private:
  ShareParams sp_;
  std::size_t cols_;
  std::vector<u128> table_;  // (m+1) x (rho + r - rho), row major
};

// Precomputed Lagrange map from r fixed indices to the packed slots m+1..m+rho
// (and optionally to 0).
class PackedReconstructor {
 public:
  PackedReconstructor(const ShareParams& sp, std::span<const std::uint16_t> indices);

  std::span<const std::uint16_t> indices() const { return indices_; }
  // values[k] is the share of indices()[k].
  std::vector<u128> slots(std::span<const u128> values) const;
  u128 at_zero(std::span<const u128> values) const;

 private:
  ShareParams sp_;
  std::vector<std::uint16_t> indices_;
  std::vector<u128> table_;  // rho x r
  std::vector<u128> zero_;   // r
};

FieldShare add_shares(const FieldShare& a, const FieldShare& b, const Modulus& field);
IntegerShare add_shares(const IntegerShare& a, const IntegerShare& b);

// Integer variants. Secrets must lie in [0, 2^ell_s); randomness is drawn
// from [0, 2^(ell_r + kappa_s)). Reconstruction returns Delta^2 * s (plain)
// and Delta^3 * s_k per slot (packed), Delta = m!.
std::vector<IntegerShare> share_integer(const BigInt& secret, const ShareParams& sp, Rng& rng);
std::vector<IntegerShare> share_integer(const BigInt& secret, std::span<const BigInt> coeffs,
                                        const ShareParams& sp);
BigInt reconstruct_integer(std::span<const IntegerShare> shares, const ShareParams& sp);

std::vector<IntegerShare> share_packed_integer(std::span<const BigInt> secrets,
                                               const ShareParams& sp, Rng& rng);
std::vector<IntegerShare> share_packed_integer(std::span<const BigInt> secrets,
                                               std::span<const BigInt> q_coeffs,
                                               const ShareParams& sp);
std::vector<BigInt> reconstruct_packed_integer(std::span<const IntegerShare> shares,
                                               const ShareParams& sp);

// Integer polynomial of degree <= r-1 equal to Delta^2 at m+slot, 0 at the
// other packed positions and 0 on every index in `corrupt` (|corrupt| = r-rho).
// Coefficients lowest degree first. Throws MathError when no integral
// polynomial exists for these points.
std::vector<BigInt> sweeping_polynomial(std::span<const std::uint16_t> corrupt, std::size_t slot,
                                        const ShareParams& sp);
// Upper bound on |coefficient| over every sweeping polynomial for sp.
BigInt sweeping_coefficient_bound(const ShareParams& sp);
// ell_s + ceil(log2(h_max * (r-1) * rho)) + 1
unsigned min_ell_r(const ShareParams& sp);

// Wire format: index u16 LE, value u128 LE.
void write_share(ByteWriter& w, const FieldShare& s);
FieldShare read_field_share(ByteReader& r);
// Wire format: index u16 LE, u32 LE magnitude length, magnitude LE, sign byte.
void write_share(ByteWriter& w, const IntegerShare& s);
IntegerShare read_integer_share(ByteReader& r);

// ceil(lambda / rho) chunks, little-endian by coordinate, zero padded.
std::vector<std::vector<u128>> chunk_seed(std::span<const u128> seed, std::size_t rho);
std::vector<u128> unchunk_seed(std::span<const std::vector<u128>> chunks, std::size_t lambda);

}  // namespace opa

#endif  // OPA_SHARING_HPP_
