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

// Command-line front end for the simulator.
//
// Exit codes: 0 success, 1 runtime or I/O failure, 2 parameter validation
// failure, 3 protocol abort in every iteration.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "opa/error.hpp"
#include "opa/sim/config.hpp"
#include "opa/sim/metrics.hpp"
#include "opa/sim/session.hpp"

namespace {

using opa::sim::ScenarioConfig;

constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitAllAborted = 3;

// Flags shared by every subcommand; unset ones leave the config untouched.
struct Overrides {
  std::string config;
  std::optional<std::string> mode, security, format, out, adversary;
  std::optional<std::size_t> clients, universe, committee, recon, corrupt_thresh, pack, vec_len,
      iters, groups, lambda;
  std::optional<unsigned> input_bits;
  std::optional<double> dropout, committee_dropout, latency_min, latency_max, jitter;
  std::optional<std::uint64_t> seed;
  bool null_cipher = false;
  bool unchecked = false;

  void attach(CLI::App* app, bool with_adversary) {
    app->add_option("--config", config, "JSON scenario file; flags override it")
        ->check(CLI::ExistingFile);
    app->add_option("--mode", mode, "lwr | lwe | prime-lwr");
    app->add_option("--security", security, "semi-honest | active");
    app->add_option("--clients", clients, "number of clients n");
    app->add_option("--universe", universe, "client id universe (default n)");
    app->add_option("--committee", committee, "committee size m");
    app->add_option("--recon", recon, "reconstruction threshold r");
    app->add_option("--corrupt-thresh", corrupt_thresh, "corruption threshold t");
    app->add_option("--pack", pack, "secrets per packed sharing rho");
    app->add_option("--vec-len", vec_len, "input vector length L");
    app->add_option("--groups", groups, "client groups, one committee each");
    app->add_option("--lambda", lambda, "seed dimension");
    app->add_option("--input-bits", input_bits, "inputs drawn below 2^bits");
    app->add_option("--iters", iters, "iterations");
    app->add_option("--dropout", dropout, "client dropout fraction per iteration");
    app->add_option("--committee-dropout", committee_dropout,
                    "committee dropout fraction per iteration");
    app->add_option("--seed", seed, "session seed");
    app->add_option("--latency-min-us", latency_min, "minimum base delay");
    app->add_option("--latency-max-us", latency_max, "maximum base delay");
    app->add_option("--jitter", jitter, "multiplicative jitter half-width");
    app->add_option("--out", out, "metrics output path");
    app->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app->add_flag("--null-cipher", null_cipher, "identity encryption, for profiling");
    app->add_flag("--unchecked", unchecked, "skip parameter validation");
    if (with_adversary) {
      app->add_option("--adversary", adversary,
                      "equivocating-server | inconsistent-share-client | replaying-server")
          ->required();
    }
  }

  ScenarioConfig build() const {
    ScenarioConfig cfg;
    bool config_sets_security = false;
    if (!config.empty()) {
      std::ifstream f(config);
      nlohmann::json j;
      try {
        f >> j;
      } catch (const nlohmann::json::exception& e) {
        throw opa::ParamError(config + ": " + e.what());
      }
      cfg = opa::sim::scenario_from_json(j);
      config_sets_security = j.is_object() && j.contains("security");
    }
    opa::ProtocolParams& pp = cfg.params;
    if (mode) pp.mode = opa::parse_mode(*mode);
    if (security) pp.security = opa::parse_security(*security);
    if (clients) pp.n = *clients;
    if (universe) pp.universe = *universe;
    if (committee) pp.m = *committee;
    if (recon) pp.r = *recon;
    if (corrupt_thresh) pp.t = *corrupt_thresh;
    if (pack) pp.rho = *pack;
    if (vec_len) pp.big_l = *vec_len;
    if (groups) pp.groups = *groups;
    if (lambda) pp.lambda = *lambda;
    if (input_bits) pp.input_bits = *input_bits;
    if (iters) cfg.iterations = *iters;
    if (dropout) cfg.dropout = *dropout;
    if (committee_dropout) cfg.committee_dropout = *committee_dropout;
    if (seed) {
      cfg.seed = *seed;
      cfg.latency.rng_seed = *seed;
    }
    if (latency_min) cfg.latency.base_min_us = *latency_min;
    if (latency_max) cfg.latency.base_max_us = *latency_max;
    if (jitter) cfg.latency.jitter_fraction = *jitter;
    if (out) cfg.out = *out;
    if (format) cfg.format = *format;
    if (null_cipher) cfg.null_cipher = true;
    if (unchecked) cfg.unchecked = true;
    if (adversary) {
      cfg.adversary = opa::sim::parse_adversary(*adversary);
      if (!security && !config_sets_security) pp.security = opa::Security::kActiveAbort;
    }
    return cfg;
  }
};

// Returns kExitInvalid after printing the report when the config is bad.
std::optional<int> check(const ScenarioConfig& cfg) {
  if (cfg.unchecked) return std::nullopt;
  const opa::sim::ParamReport rep = opa::sim::verify_params(cfg);
  if (rep.ok) return std::nullopt;
  std::cerr << rep.text();
  return kExitInvalid;
}

void print_iteration(const opa::sim::MetricsRecord& m) {
  std::printf("iter %llu  %-18s |C|=%zu  exact=%d  client=%.3fms  committee=%.3fms  "
              "server=%.3fms  completion=%.1fus  bytes=%llu\n",
              static_cast<unsigned long long>(m.iteration), m.outcome.c_str(), m.online,
              int(m.exact), m.client.max_compute_ms, m.committee.max_compute_ms,
              m.server.compute_ms, m.completion_us,
              static_cast<unsigned long long>(m.bytes_sent()));
}

int cmd_run(const Overrides& o) {
  const ScenarioConfig cfg = o.build();
  if (auto bad = check(cfg)) return *bad;
  const opa::sim::SessionOutput out = opa::sim::run_session(cfg);
  std::size_t ok = 0;
  for (const auto& m : out.metrics) {
    print_iteration(m);
    ok += m.outcome == "ok";
  }
  const auto audit = opa::sim::single_send_audit(out);
  if (!audit.ok) std::cerr << "single-send audit failed:\n" << audit.detail;
  if (!cfg.out.empty()) opa::sim::emit_metrics(cfg, out.metrics, cfg.format, cfg.out);
  if (!audit.ok) return kExitRuntime;
  return ok == 0 && !out.metrics.empty() ? kExitAllAborted : 0;
}

int cmd_verify(const Overrides& o) {
  const ScenarioConfig cfg = o.build();
  const opa::sim::ParamReport rep = opa::sim::verify_params(cfg);
  std::cout << rep.text();
  return rep.ok ? 0 : kExitInvalid;
}

// Succeeds when every injected iteration aborted; a wrong aggregate fails.
int cmd_bench(const Overrides& o) {
  const ScenarioConfig cfg = o.build();
  if (auto bad = check(cfg)) return *bad;
  const opa::sim::SessionOutput out = opa::sim::run_session(cfg);
  std::size_t injected = 0, aborted = 0, wrong = 0;
  for (const auto& m : out.metrics) {
    print_iteration(m);
    if (m.outcome == "ok" && !m.exact) ++wrong;
    if (!m.injected) continue;
    ++injected;
    aborted += m.outcome != "ok";
  }
  std::printf("adversary %s: %zu injected, %zu aborted, %zu wrong aggregates\n",
              opa::sim::to_string(cfg.adversary).c_str(), injected, aborted, wrong);
  if (!cfg.out.empty()) opa::sim::emit_metrics(cfg, out.metrics, cfg.format, cfg.out);
  return wrong == 0 && aborted == injected ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for one-shot private aggregation sessions"};
  app.require_subcommand(1);
  Overrides run_o, verify_o, bench_o;
  CLI::App* run = app.add_subcommand("run", "run a multi-iteration session");
  CLI::App* verify = app.add_subcommand("verify-params", "check every parameter rule");
  CLI::App* bench = app.add_subcommand("bench", "run a fault-injection script");
  run_o.attach(run, false);
  verify_o.attach(verify, false);
  bench_o.attach(bench, true);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    if (run->parsed()) return cmd_run(run_o);
    if (verify->parsed()) return cmd_verify(verify_o);
    return cmd_bench(bench_o);
  } catch (const opa::ParamError& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const opa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
