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

// Scenario configuration for the simulator and its JSON form.

#ifndef OPA_SIM_CONFIG_HPP_
#define OPA_SIM_CONFIG_HPP_

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "opa/protocol/params.hpp"
#include "opa/rng.hpp"

namespace opa::sim {

struct LatencyModel {
  double base_min_us = 21;
  double base_max_us = 100;
  double jitter_fraction = 0.2;  // multiplicative, uniform in [-j, j]
  std::uint64_t rng_seed = 0;

  // Throws ParamError unless 0 <= min <= max and 0 <= jitter < 1.
  void validate() const;
  double sample_us(Rng& rng) const;
};

enum class Adversary {
  kNone,
  kEquivocatingServer,      // splits the committee between two online sets
  kInconsistentShareClient, // client 0 sends member 1 a share off its commitment
  kReplayingServer,         // forwards a ciphertext from the previous iteration
};

std::string to_string(Adversary a);
Adversary parse_adversary(const std::string& s);

struct ScenarioConfig {
  ProtocolParams params;
  std::size_t iterations = 1;
  double dropout = 0;            // fraction of clients dropped per iteration
  double committee_dropout = 0;  // fraction of each committee dropped per iteration
  std::uint64_t seed = 1;
  bool null_cipher = false;
  bool unchecked = false;  // skip parameter validation (negative tests only)
  LatencyModel latency;
  Adversary adversary = Adversary::kNone;
  std::string out;
  std::string format = "json";

  std::size_t dropped_clients() const;
  std::size_t dropped_members() const;
};

nlohmann::json to_json(const ScenarioConfig& cfg);
// Missing keys keep their defaults; throws ParamError on malformed values.
ScenarioConfig scenario_from_json(const nlohmann::json& j, ScenarioConfig base = {});

}  // namespace opa::sim

#endif  // OPA_SIM_CONFIG_HPP_
