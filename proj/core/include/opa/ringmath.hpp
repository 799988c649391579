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

// Exact modular arithmetic over moduli up to 128 bits and the rounding map
// between moduli. All routines are integer-only; nothing here is
// constant-time.

#ifndef OPA_RINGMATH_HPP_
#define OPA_RINGMATH_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace opa {

using u128 = unsigned __int128;
using i128 = __int128;

// Unsigned 256-bit value as two 128-bit halves.
struct U256 {
  u128 hi = 0;
  u128 lo = 0;
};

U256 mul_wide(u128 a, u128 b);

// x mod m for any m >= 1.
u128 mod_wide(const U256& x, u128 m);

// floor(x / m); requires x.hi < m so the quotient fits in 128 bits.
u128 div_wide(const U256& x, u128 m, u128* remainder = nullptr);

unsigned bit_length(u128 x);
u128 pow2(unsigned k);

std::string to_string(u128 x);
std::string to_string(i128 x);

// Accepts decimal, 0x-prefixed hex, or the forms "2^k", "2^k-c", "2^k+c".
u128 parse_u128(std::string_view text);

// Probabilistic Miller-Rabin over fixed bases; exact below 3.3e24.
bool is_probable_prime(u128 n);

class Modulus {
 public:
  // Throws ParamError when value < 3.
  Modulus(u128 value, bool is_prime);

  // Runs a primality test and throws ParamError if value is composite.
  static Modulus prime(u128 value);
  static Modulus mersenne127();

  u128 value() const { return value_; }
  bool is_prime() const { return is_prime_; }
  unsigned bits() const { return bits_; }

  u128 reduce(u128 x) const;
  u128 reduce_wide(const U256& x) const;
  u128 from_signed(i128 x) const;
  // Symmetric lift into (-value/2, value/2].
  i128 to_signed(u128 x) const;

  u128 add(u128 a, u128 b) const;
  u128 sub(u128 a, u128 b) const;
  u128 neg(u128 a) const;
  u128 mul(u128 a, u128 b) const;
  u128 pow(u128 base, u128 exp) const;
  // Throws MathError when gcd(a, value) != 1.
  u128 inv(u128 a) const;

  // sum_k a[k]*b[k] mod value with lazy reduction on the Mersenne path.
  u128 dot(std::span<const u128> a, std::span<const u128> b) const;

  friend bool operator==(const Modulus& x, const Modulus& y) {
    return x.value_ == y.value_;
  }

 private:
  enum class Kind : std::uint8_t { kSmall, kMersenne127, kGeneric };

  u128 value_;
  bool is_prime_;
  unsigned bits_;
  Kind kind_;
};

// A canonical residue tagged with its modulus.
class Fe {
 public:
  Fe(u128 residue, const Modulus& modulus);
  static Fe from_signed(i128 x, const Modulus& modulus);

  u128 value() const { return residue_; }
  const Modulus& modulus() const { return modulus_; }

  friend bool operator==(const Fe& a, const Fe& b) {
    return a.residue_ == b.residue_ && a.modulus_ == b.modulus_;
  }

 private:
  u128 residue_;
  Modulus modulus_;
};

Fe fe_add(const Fe& a, const Fe& b);
Fe fe_sub(const Fe& a, const Fe& b);
Fe fe_mul(const Fe& a, const Fe& b);
Fe fe_inv(const Fe& a);

inline Fe operator+(const Fe& a, const Fe& b) { return fe_add(a, b); }
inline Fe operator-(const Fe& a, const Fe& b) { return fe_sub(a, b); }
inline Fe operator*(const Fe& a, const Fe& b) { return fe_mul(a, b); }

// floor(x * p / q) for x in [0, q), computed in 256-bit integer arithmetic.
u128 round_down(u128 x, const Modulus& q, const Modulus& p);
Fe round_down(const Fe& x, const Modulus& p);

// Polynomial with coefficients in a single ring, lowest degree first.
class Poly {
 public:
  explicit Poly(const Modulus& modulus) : modulus_(modulus) {}
  Poly(const Modulus& modulus, std::vector<u128> coeffs);

  const Modulus& modulus() const { return modulus_; }
  std::span<const u128> coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }

  u128 eval(u128 x) const;

  // this * (X - root)
  void mul_linear(u128 root);
  void add_scaled(const Poly& other, u128 scale);

 private:
  Modulus modulus_;
  std::vector<u128> coeffs_;
};

Fe poly_eval(const Poly& f, const Fe& x);

// Lagrange basis coefficients for interpolating at `at` from the points
// `xs` (distinct, as field elements): returns L_k(at) for each k.
std::vector<u128> lagrange_at(std::span<const u128> xs, u128 at,
                              const Modulus& field);

}  // namespace opa

#endif  // OPA_RINGMATH_HPP_
