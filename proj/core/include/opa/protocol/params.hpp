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

#ifndef OPA_PROTOCOL_PARAMS_HPP_
#define OPA_PROTOCOL_PARAMS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "opa/dkhprf.hpp"
#include "opa/ringmath.hpp"
#include "opa/sharing.hpp"
#include "opa/shprg.hpp"

namespace opa {

enum class Mode { kLwr, kLwe, kPrimeLwr };
enum class Security { kSemiHonest, kActiveAbort };

std::string to_string(Mode mode);
std::string to_string(Security security);
Mode parse_mode(const std::string& s);
Security parse_security(const std::string& s);

struct ProtocolParams {
  Mode mode = Mode::kLwr;
  Security security = Security::kSemiHonest;

  std::size_t n = 1000;      // clients per iteration
  std::size_t universe = 0;  // N, committee candidates; 0 means n
  std::size_t m = 50;
  std::size_t t = 16;
  std::size_t r = 34;
  std::size_t rho = 16;
  std::size_t big_l = 1;
  std::size_t groups = 1;  // committees; client i reports to group i mod groups

  double delta = 0.1;     // client dropout budget
  double delta_c = 0.01;  // committee dropout fraction
  double eta = 0.01;      // corrupt fraction of the population
  double eta_c = 0.32;    // corrupt fraction tolerated inside a committee

  std::size_t lambda = 2048;
  Modulus q = Modulus::mersenne127();
  Modulus p{pow2(53), false};
  unsigned kappa_s = 16;
  unsigned input_bits = 16;  // inputs lie in [0, 2^input_bits)
  unsigned lwe_eta = 2;      // centred binomial parameter, LWE mode
  Seed32 matrix_seed{};

  // PRIME_LWR only; m and r are taken from the fields above.
  DprfParams dprf;

  std::size_t universe_size() const { return universe == 0 ? n : universe; }
  std::size_t chunks() const { return (lambda + rho - 1) / rho; }

  PrgParams prg() const;
  EncodeParams encode() const;
  ShareParams share() const;
  DprfParams dprf_params() const;
  // Modulus of the masked vector: p (LWR), q (LWE) or v (PRIME_LWR).
  const Modulus& ct_modulus() const;
};

// Defaults from the evaluation section: lambda 2048, p = 2^53, m 50, r 34,
// rho 16, n 1000.
ProtocolParams default_params();

struct RuleResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<RuleResult> check_rules(const ProtocolParams& params);
// Throws ParamError naming every failing rule.
void validate(const ProtocolParams& params);

// e^{-2 d^2 m}: tail of the corrupt fraction of a size-m committee.
double hypergeom_tail_bound(std::size_t m, double d);
// Union bound over `groups` committees, capped at 1.
double union_tail_bound(double per_group, std::size_t groups);
// d = 1/3 - delta_c - eta.
double committee_tail_bound(const ProtocolParams& params);

// Encoding for PRIME_LWR: Encode(x) = x w + o, Decode(X) = floor(X / w).
struct PrimeCodec {
  u128 o = 0;
  u128 w = 0;
  u128 max_sum = 0;  // largest aggregate that decodes exactly
  u128 b_lo = 0;     // aggregate error lies in [-b_lo, b_hi]
  u128 b_hi = 0;
};
PrimeCodec prime_codec(const ProtocolParams& params);
// floor(p / (n^2 r Delta^2)), exclusive bound on the aggregate.
u128 prime_input_bound(const ProtocolParams& params);

struct CommitteeAssignment {
  std::size_t m = 0;
  std::vector<std::vector<std::uint32_t>> members;  // [group][j - 1] -> universe id

  std::size_t groups() const { return members.size(); }
  std::size_t group_of(std::uint32_t client) const { return client % members.size(); }
};

CommitteeAssignment sample_committee(std::size_t universe, std::size_t m, std::size_t groups,
                                     const Seed32& beacon);

}  // namespace opa

#endif  // OPA_PROTOCOL_PARAMS_HPP_
