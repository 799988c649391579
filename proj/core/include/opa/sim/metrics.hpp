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

#ifndef OPA_SIM_METRICS_HPP_
#define OPA_SIM_METRICS_HPP_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "opa/sim/config.hpp"
#include "opa/sim/session.hpp"

namespace opa::sim {

inline constexpr const char* kMetricsSchema = "opa-metrics/1";

nlohmann::json metrics_to_json(const ScenarioConfig& cfg, const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> metrics_from_json(const nlohmann::json& j);
std::string metrics_to_csv(const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> metrics_from_csv(const std::string& csv);

// format is "json" or "csv"; throws Error when the file cannot be written.
void emit_metrics(const ScenarioConfig& cfg, const std::vector<MetricsRecord>& records,
                  const std::string& format, const std::string& path);

}  // namespace opa::sim

#endif  // OPA_SIM_METRICS_HPP_
