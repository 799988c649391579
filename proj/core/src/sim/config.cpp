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

#include "opa/sim/config.hpp"

#include <cmath>

#include "opa/error.hpp"

namespace opa::sim {
namespace {

using nlohmann::json;

std::string modulus_text(const Modulus& m) {
  const u128 v = m.value();
  if (v == Modulus::mersenne127().value()) return "2^127-1";
  if ((v & (v - 1)) == 0) return "2^" + std::to_string(bit_length(v) - 1);
  return opa::to_string(v);
}

Modulus parse_modulus(const json& j, bool need_prime) {
  const u128 v = j.is_string() ? parse_u128(j.get<std::string>()) : j.get<std::uint64_t>();
  if (need_prime) return Modulus::prime(v);
  return Modulus(v, is_probable_prime(v));
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void LatencyModel::validate() const {
  if (!(base_min_us >= 0 && base_min_us <= base_max_us)) {
    throw ParamError("latency needs 0 <= min <= max");
  }
  if (!(jitter_fraction >= 0 && jitter_fraction < 1)) throw ParamError("jitter must lie in [0, 1)");
}

double LatencyModel::sample_us(Rng& rng) const {
  const double base = base_min_us + (base_max_us - base_min_us) * rng.uniform01();
  return base * (1 + jitter_fraction * (2 * rng.uniform01() - 1));
}

std::string to_string(Adversary a) {
  switch (a) {
    case Adversary::kNone: return "none";
    case Adversary::kEquivocatingServer: return "equivocating-server";
    case Adversary::kInconsistentShareClient: return "inconsistent-share-client";
    case Adversary::kReplayingServer: return "replaying-server";
  }
  return "?";
}

Adversary parse_adversary(const std::string& s) {
  for (Adversary a : {Adversary::kNone, Adversary::kEquivocatingServer,
                      Adversary::kInconsistentShareClient, Adversary::kReplayingServer}) {
    if (to_string(a) == s) return a;
  }
  throw ParamError("unknown adversary: " + s);
}

std::size_t ScenarioConfig::dropped_clients() const {
  return static_cast<std::size_t>(std::floor(dropout * static_cast<double>(params.n) + 1e-9));
}

std::size_t ScenarioConfig::dropped_members() const {
  return static_cast<std::size_t>(
      std::floor(committee_dropout * static_cast<double>(params.m) + 1e-9));
}

json to_json(const ScenarioConfig& cfg) {
  const ProtocolParams& pp = cfg.params;
  std::string seed_hex;
  for (std::uint8_t b : pp.matrix_seed) {
    static const char* digits = "0123456789abcdef";
    seed_hex += digits[b >> 4];
    seed_hex += digits[b & 15];
  }
  return json{
      {"mode", to_string(pp.mode)},
      {"security", to_string(pp.security)},
      {"clients", pp.n},
      {"universe", pp.universe},
      {"committee", pp.m},
      {"recon", pp.r},
      {"corrupt_thresh", pp.t},
      {"pack", pp.rho},
      {"vec_len", pp.big_l},
      {"groups", pp.groups},
      {"lambda", pp.lambda},
      {"q", modulus_text(pp.q)},
      {"p", modulus_text(pp.p)},
      {"kappa_s", pp.kappa_s},
      {"input_bits", pp.input_bits},
      {"lwe_eta", pp.lwe_eta},
      {"delta", pp.delta},
      {"delta_c", pp.delta_c},
      {"eta", pp.eta},
      {"eta_c", pp.eta_c},
      {"matrix_seed", seed_hex},
      {"dprf",
       {{"key_dim", pp.dprf.key_dim},
        {"q", modulus_text(pp.dprf.q)},
        {"p", modulus_text(pp.dprf.p)},
        {"u", modulus_text(pp.dprf.u)},
        {"v", modulus_text(pp.dprf.v)}}},
      {"iterations", cfg.iterations},
      {"dropout", cfg.dropout},
      {"committee_dropout", cfg.committee_dropout},
      {"seed", cfg.seed},
      {"null_cipher", cfg.null_cipher},
      {"unchecked", cfg.unchecked},
      {"latency",
       {{"min_us", cfg.latency.base_min_us},
        {"max_us", cfg.latency.base_max_us},
        {"jitter", cfg.latency.jitter_fraction},
        {"seed", cfg.latency.rng_seed}}},
      {"adversary", to_string(cfg.adversary)},
      {"out", cfg.out},
      {"format", cfg.format},
  };
}

ScenarioConfig scenario_from_json(const json& j, ScenarioConfig cfg) {
  try {
    ProtocolParams& pp = cfg.params;
    if (j.contains("mode")) pp.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("security")) pp.security = parse_security(j.at("security").get<std::string>());
    read(j, "clients", pp.n);
    read(j, "universe", pp.universe);
    read(j, "committee", pp.m);
    read(j, "recon", pp.r);
    read(j, "corrupt_thresh", pp.t);
    read(j, "pack", pp.rho);
    read(j, "vec_len", pp.big_l);
    read(j, "groups", pp.groups);
    read(j, "lambda", pp.lambda);
    if (j.contains("q")) pp.q = parse_modulus(j.at("q"), true);
    if (j.contains("p")) pp.p = parse_modulus(j.at("p"), false);
    read(j, "kappa_s", pp.kappa_s);
    read(j, "input_bits", pp.input_bits);
    read(j, "lwe_eta", pp.lwe_eta);
    read(j, "delta", pp.delta);
    read(j, "delta_c", pp.delta_c);
    read(j, "eta", pp.eta);
    read(j, "eta_c", pp.eta_c);
    if (j.contains("matrix_seed")) {
      const Bytes b = from_hex(j.at("matrix_seed").get<std::string>());
      if (b.size() != pp.matrix_seed.size()) throw ParamError("matrix_seed must be 32 bytes");
      std::copy(b.begin(), b.end(), pp.matrix_seed.begin());
    }
    if (j.contains("dprf")) {
      const json& d = j.at("dprf");
      read(d, "key_dim", pp.dprf.key_dim);
      if (d.contains("q")) pp.dprf.q = parse_modulus(d.at("q"), true);
      if (d.contains("p")) pp.dprf.p = parse_modulus(d.at("p"), false);
      if (d.contains("u")) pp.dprf.u = parse_modulus(d.at("u"), false);
      if (d.contains("v")) pp.dprf.v = parse_modulus(d.at("v"), false);
    }
    read(j, "iterations", cfg.iterations);
    read(j, "dropout", cfg.dropout);
    read(j, "committee_dropout", cfg.committee_dropout);
    read(j, "seed", cfg.seed);
    read(j, "null_cipher", cfg.null_cipher);
    read(j, "unchecked", cfg.unchecked);
    if (j.contains("latency")) {
      const json& l = j.at("latency");
      read(l, "min_us", cfg.latency.base_min_us);
      read(l, "max_us", cfg.latency.base_max_us);
      read(l, "jitter", cfg.latency.jitter_fraction);
      read(l, "seed", cfg.latency.rng_seed);
    }
    if (j.contains("adversary")) cfg.adversary = parse_adversary(j.at("adversary").get<std::string>());
    read(j, "out", cfg.out);
    read(j, "format", cfg.format);
  } catch (const json::exception& e) {
    throw ParamError(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

}  // namespace opa::sim
