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

#include "opa/sim/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "opa/error.hpp"

namespace opa::sim {
namespace {

using nlohmann::json;

json role_json(const RoleMetrics& m) {
  return {{"compute_ms", m.compute_ms},
          {"max_compute_ms", m.max_compute_ms},
          {"bytes_sent", m.bytes_sent},
          {"bytes_received", m.bytes_received},
          {"messages_sent", m.messages_sent}};
}

RoleMetrics role_from_json(const json& j) {
  RoleMetrics m;
  m.compute_ms = j.at("compute_ms").get<double>();
  m.max_compute_ms = j.at("max_compute_ms").get<double>();
  m.bytes_sent = j.at("bytes_sent").get<std::uint64_t>();
  m.bytes_received = j.at("bytes_received").get<std::uint64_t>();
  m.messages_sent = j.at("messages_sent").get<std::size_t>();
  return m;
}

const char* const kRoles[] = {"client", "committee", "server"};

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

json metrics_to_json(const ScenarioConfig& cfg, const std::vector<MetricsRecord>& records) {
  json iters = json::array();
  for (const MetricsRecord& r : records) {
    iters.push_back({{"iteration", r.iteration},
                     {"outcome", r.outcome},
                     {"exact", r.exact},
                     {"injected", r.injected},
                     {"online", r.online},
                     {"committee_replies", r.committee_replies},
                     {"completion_us", r.completion_us},
                     {"bytes_dropped", r.bytes_dropped},
                     {"client", role_json(r.client)},
                     {"committee", role_json(r.committee)},
                     {"server", role_json(r.server)}});
  }
  return {{"schema", kMetricsSchema}, {"config", to_json(cfg)}, {"iterations", iters}};
}

std::vector<MetricsRecord> metrics_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != kMetricsSchema) {
      throw DecodeError("unknown metrics schema");
    }
    std::vector<MetricsRecord> out;
    for (const json& it : j.at("iterations")) {
      MetricsRecord r;
      r.iteration = it.at("iteration").get<std::uint64_t>();
      r.outcome = it.at("outcome").get<std::string>();
      r.exact = it.at("exact").get<bool>();
      r.injected = it.at("injected").get<bool>();
      r.online = it.at("online").get<std::size_t>();
      r.committee_replies = it.at("committee_replies").get<std::size_t>();
      r.completion_us = it.at("completion_us").get<double>();
      r.bytes_dropped = it.at("bytes_dropped").get<std::uint64_t>();
      r.client = role_from_json(it.at("client"));
      r.committee = role_from_json(it.at("committee"));
      r.server = role_from_json(it.at("server"));
      out.push_back(r);
    }
    return out;
  } catch (const json::exception& e) {
    throw DecodeError(std::string("bad metrics json: ") + e.what());
  }
}

std::string metrics_to_csv(const std::vector<MetricsRecord>& records) {
  std::ostringstream os;
  os << "iteration,outcome,exact,injected,online,committee_replies,completion_us,bytes_dropped";
  for (const char* role : kRoles) {
    os << ',' << role << "_compute_ms," << role << "_max_compute_ms," << role << "_bytes_sent,"
       << role << "_bytes_received," << role << "_messages_sent";
  }
  os << '\n';
  for (const MetricsRecord& r : records) {
    os << r.iteration << ',' << r.outcome << ',' << int(r.exact) << ',' << int(r.injected) << ','
       << r.online << ',' << r.committee_replies << ',' << fmt_double(r.completion_us) << ','
       << r.bytes_dropped;
    for (const RoleMetrics* m : {&r.client, &r.committee, &r.server}) {
      os << ',' << fmt_double(m->compute_ms) << ',' << fmt_double(m->max_compute_ms) << ','
         << m->bytes_sent << ',' << m->bytes_received << ',' << m->messages_sent;
    }
    os << '\n';
  }
  return os.str();
}

std::vector<MetricsRecord> metrics_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw DecodeError("empty metrics csv");
  std::vector<MetricsRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 8 + 15) throw DecodeError("metrics csv row has " + std::to_string(f.size()) +
                                              " fields");
    try {
      MetricsRecord r;
      r.iteration = std::stoull(f[0]);
      r.outcome = f[1];
      r.exact = f[2] == "1";
      r.injected = f[3] == "1";
      r.online = std::stoull(f[4]);
      r.committee_replies = std::stoull(f[5]);
      r.completion_us = std::stod(f[6]);
      r.bytes_dropped = std::stoull(f[7]);
      std::size_t k = 8;
      for (RoleMetrics* m : {&r.client, &r.committee, &r.server}) {
        m->compute_ms = std::stod(f[k++]);
        m->max_compute_ms = std::stod(f[k++]);
        m->bytes_sent = std::stoull(f[k++]);
        m->bytes_received = std::stoull(f[k++]);
        m->messages_sent = std::stoull(f[k++]);
      }
      out.push_back(r);
    } catch (const std::logic_error&) {
      throw DecodeError("bad number in metrics csv");
    }
  }
  return out;
}

void emit_metrics(const ScenarioConfig& cfg, const std::vector<MetricsRecord>& records,
                  const std::string& format, const std::string& path) {
  std::string text;
  if (format == "json") {
    text = metrics_to_json(cfg, records).dump(2) + "\n";
  } else if (format == "csv") {
    text = metrics_to_csv(records);
  } else {
    throw ParamError("unknown metrics format '" + format + "'");
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw Error("cannot write metrics to " + path);
}

}  // namespace opa::sim
