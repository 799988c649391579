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

// Prime-order group abstraction for share commitments, with a Schnorr
// subgroup of Z_P^* as the default backend.

#ifndef OPA_GROUP_HPP_
#define OPA_GROUP_HPP_

#include <boost/multiprecision/cpp_int.hpp>
#include <memory>
#include <vector>

#include "opa/bytes.hpp"
#include "opa/ringmath.hpp"
#include "opa/rng.hpp"

namespace opa {

// Canonical fixed-width encoding of a group element.
struct GroupElement {
  Bytes data;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

class GroupBackend {
 public:
  virtual ~GroupBackend() = default;

  virtual const Modulus& order() const = 0;
  virtual std::size_t encoded_size() const = 0;
  virtual GroupElement identity() const = 0;
  virtual GroupElement generator() const = 0;
  virtual GroupElement exp(const GroupElement& base, u128 e) const = 0;
  virtual GroupElement exp_g(u128 e) const { return exp(generator(), e); }
  virtual GroupElement mul(const GroupElement& a, const GroupElement& b) const = 0;
  virtual GroupElement inv(const GroupElement& a) const = 0;
  // Throws DecodeError unless bytes encode a member of the subgroup.
  virtual GroupElement decode(ByteView bytes) const = 0;
};

// Order-q subgroup of Z_P^* with P = k q + 1 prime. Not constant time.
class SchnorrGroup final : public GroupBackend {
 public:
  using Int = boost::multiprecision::cpp_int;

  // Checks P prime, q | P - 1, g != 1 and g^q = 1; throws ParamError.
  SchnorrGroup(const Modulus& q, const Int& big_p, const Int& g);

  // Searches k = 2, 4, ... for a prime P = k q + 1 and derives g = h^k.
  static SchnorrGroup generate(const Modulus& q, Rng& rng);
  // Cached 256-bit group for q = 2^127 - 1.
  static const SchnorrGroup& default_group();

  const Modulus& order() const override { return q_; }
  std::size_t encoded_size() const override { return width_; }
  GroupElement identity() const override;
  GroupElement generator() const override;
  GroupElement exp(const GroupElement& base, u128 e) const override;
  GroupElement exp_g(u128 e) const override;
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inv(const GroupElement& a) const override;
  GroupElement decode(ByteView bytes) const override;

  const Int& prime() const { return p_; }
  const Int& g() const { return g_; }

 private:
  Int to_int(const GroupElement& e) const;
  GroupElement from_int(const Int& x) const;

  Modulus q_;
  Int p_;
  Int g_;
  std::size_t width_;
  std::vector<Int> g_pow2_;  // g^(2^i), i < bit length of q
};

}  // namespace opa

#endif  // OPA_GROUP_HPP_
