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

#include "opa/protocol/params.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>
#include <sstream>

#include "opa/error.hpp"
#include "opa/xof.hpp"

namespace opa {
namespace {

using Rational = boost::multiprecision::cpp_rational;

BigInt ceil_div(const Rational& x) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  BigInt q = num / den;
  if (q * den < num) ++q;
  return q;
}

Rational rat(u128 v) {
  BigInt b = static_cast<std::uint64_t>(v >> 64);
  b <<= 64;
  b += static_cast<std::uint64_t>(v);
  return Rational(b);
}

u128 to_u128(const BigInt& b) {
  if (b < 0 || boost::multiprecision::msb(b == 0 ? BigInt(1) : b) >= 128) {
    throw ParamError("value does not fit in 128 bits");
  }
  return (static_cast<u128>(static_cast<std::uint64_t>(b >> 64)) << 64) |
         static_cast<std::uint64_t>(b & BigInt(~std::uint64_t{0}));
}

// Largest total of negative / positive combine coefficients over r-subsets.
void coefficient_extremes(const DprfParams& dp, BigInt& neg, BigInt& pos) {
  neg = 0;
  pos = 0;
  std::vector<std::uint16_t> idx(dp.r);
  std::iota(idx.begin(), idx.end(), 1);
  std::size_t visited = 0;
  while (true) {
    if (++visited > 2'000'000) throw ParamError("too many committee subsets to bound");
    BigInt sn = 0, sp = 0;
    for (std::int64_t c : combine_coefficients_signed(idx, dp)) {
      if (c < 0) sn -= c; else sp += c;
    }
    neg = std::max(neg, sn);
    pos = std::max(pos, sp);
    std::size_t k = dp.r;
    while (k > 0 && idx[k - 1] == dp.m - dp.r + k) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < dp.r; ++j) idx[j] = static_cast<std::uint16_t>(idx[j - 1] + 1);
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kLwr: return "lwr";
    case Mode::kLwe: return "lwe";
    case Mode::kPrimeLwr: return "prime-lwr";
  }
  return "?";
}

std::string to_string(Security security) {
  return security == Security::kSemiHonest ? "semi-honest" : "active";
}

Mode parse_mode(const std::string& s) {
  if (s == "lwr" || s == "LWR") return Mode::kLwr;
  if (s == "lwe" || s == "LWE") return Mode::kLwe;
  if (s == "prime-lwr" || s == "PRIME_LWR" || s == "prime") return Mode::kPrimeLwr;
  throw ParamError("unknown mode: " + s);
}

Security parse_security(const std::string& s) {
  if (s == "semi-honest" || s == "SEMI_HONEST") return Security::kSemiHonest;
  if (s == "active" || s == "ACTIVE_ABORT") return Security::kActiveAbort;
  throw ParamError("unknown security level: " + s);
}

PrgParams ProtocolParams::prg() const {
  PrgParams pp;
  pp.lambda = lambda;
  pp.big_l = big_l;
  pp.q = q;
  pp.p = p;
  pp.matrix_seed = matrix_seed;
  return pp;
}

EncodeParams ProtocolParams::encode() const {
  return mode == Mode::kLwe ? EncodeParams::lwe(q, p, n) : EncodeParams::lwr(kappa_s, n);
}

ShareParams ProtocolParams::share() const {
  ShareParams sp;
  sp.m = m;
  sp.r = r;
  sp.t = t;
  sp.rho = mode == Mode::kPrimeLwr ? 1 : rho;
  sp.field = mode == Mode::kPrimeLwr ? dprf.q : q;
  return sp;
}

DprfParams ProtocolParams::dprf_params() const {
  DprfParams dp = dprf;
  dp.m = m;
  dp.r = r;
  return dp;
}

const Modulus& ProtocolParams::ct_modulus() const {
  switch (mode) {
    case Mode::kLwr: return p;
    case Mode::kLwe: return q;
    case Mode::kPrimeLwr: return dprf.v;
  }
  return p;
}

ProtocolParams default_params() { return ProtocolParams{}; }

double hypergeom_tail_bound(std::size_t m, double d) {
  return std::exp(-2.0 * d * d * static_cast<double>(m));
}

double union_tail_bound(double per_group, std::size_t groups) {
  return std::min(1.0, per_group * static_cast<double>(groups));
}

double committee_tail_bound(const ProtocolParams& params) {
  const double d = 1.0 / 3.0 - params.delta_c - params.eta;
  if (d <= 0) return 1.0;
  return union_tail_bound(hypergeom_tail_bound(params.m, d), params.groups);
}

u128 prime_input_bound(const ProtocolParams& params) {
  const DprfParams dp = params.dprf_params();
  const u128 d = dp.delta();
  const u128 denom = static_cast<u128>(params.n) * params.n * params.r * d * d;
  return denom == 0 ? 0 : dp.p.value() / denom;
}

// Aggregate error ΣEval - AUX for n' summands lies strictly inside
// (-(v/u) N Z - n' E1, (v/u) P Z + 1) with
//   E1 = Δ²v/p + Δv/u + 1   (per-key rounding loss of Eval)
//   Z  = Δ u n' / p + 1     (committee-side rounding loss)
// and N, P the worst negative / positive totals of the Δλ_j.
PrimeCodec prime_codec(const ProtocolParams& params) {
  const DprfParams dp = params.dprf_params();
  if (dp.m > 20 || dp.r == 0 || dp.r > dp.m) throw ParamError("DPRF committee shape invalid");
  const Rational delta = rat(dp.delta());
  const Rational p = rat(dp.p.value()), u = rat(dp.u.value()), v = rat(dp.v.value());
  BigInt neg, pos;
  coefficient_extremes(dp, neg, pos);
  const Rational e1 = delta * delta * v / p + delta * v / u + 1;
  BigInt o = 1, w = 0;
  std::vector<std::pair<BigInt, BigInt>> bounds;
  for (std::size_t k = 1; k <= params.n; ++k) {
    const Rational z = delta * u * static_cast<unsigned>(k) / p + 1;
    const BigInt b_lo = ceil_div(v / u * Rational(neg) * z + e1 * static_cast<unsigned>(k)) - 1;
    const BigInt b_hi = ceil_div(v / u * Rational(pos) * z + 1) - 1;
    bounds.emplace_back(b_lo, b_hi);
    const BigInt need = (b_lo + k - 1) / k;
    o = std::max(o, need);
  }
  PrimeCodec codec;
  for (std::size_t k = 1; k <= params.n; ++k) {
    w = std::max(w, BigInt(o * k + bounds[k - 1].second + 1));
  }
  codec.o = to_u128(o);
  codec.w = to_u128(w);
  codec.b_lo = to_u128(bounds.back().first);
  codec.b_hi = to_u128(bounds.back().second);
  codec.max_sum = dp.v.value() > codec.w ? (dp.v.value() - codec.w) / codec.w : 0;
  return codec;
}

std::vector<RuleResult> check_rules(const ProtocolParams& pp) {
  std::vector<RuleResult> out;
  auto add = [&](std::string name, bool pass, std::string detail) {
    out.push_back({std::move(name), pass, std::move(detail)});
  };
  const bool shape_ok = pp.m > 0 && pp.r > 0 && pp.r <= pp.m && pp.t < pp.r;
  add("threshold shape", shape_ok,
      "t=" + std::to_string(pp.t) + " < r=" + std::to_string(pp.r) + " <= m=" +
          std::to_string(pp.m));
  add("unique set r > (m+t)/2", 2 * pp.r > pp.m + pp.t,
      "2r=" + std::to_string(2 * pp.r) + " vs m+t=" + std::to_string(pp.m + pp.t));
  add("clients present", pp.n > 0 && pp.big_l > 0,
      "n=" + std::to_string(pp.n) + " L=" + std::to_string(pp.big_l));
  add("dropout budgets in [0,1)",
      pp.delta >= 0 && pp.delta < 1 && pp.delta_c >= 0 && pp.delta_c < 1 && pp.eta >= 0,
      "delta=" + fmt(pp.delta) + " delta_C=" + fmt(pp.delta_c));
  add("committee budget delta_C + eta_C < 1/3", pp.delta_c + pp.eta_c < 1.0 / 3.0,
      "margin " + fmt(1.0 / 3.0 - pp.delta_c - pp.eta_c));
  add("corrupt committee tail", true,
      "Pr <= " + fmt(committee_tail_bound(pp)) + " (d = 1/3 - delta_C - eta)");
  {
    const double lhs = 2.0 * pp.m * pp.eta_c;
    const double rhs = (1.0 - pp.delta_c) * pp.m - static_cast<double>(pp.rho) + 1;
    add("error-correcting feasibility 2m eta_C < (1-delta_C)m - rho + 1", lhs < rhs,
        fmt(lhs) + " < " + fmt(rhs));
  }
  add("committee survivors reach r", (1.0 - pp.delta_c) * pp.m >= static_cast<double>(pp.r),
      "(1-delta_C)m=" + fmt((1.0 - pp.delta_c) * pp.m) + ", tolerates " +
          std::to_string(pp.m >= pp.r ? pp.m - pp.r : 0) + " committee dropouts");
  add("universe covers committees", pp.universe_size() >= pp.m * pp.groups && pp.groups > 0,
      "N=" + std::to_string(pp.universe_size()) + " vs m*groups=" +
          std::to_string(pp.m * pp.groups));

  if (pp.mode != Mode::kPrimeLwr) {
    add("packing m >= 3 rho / 2", 2 * pp.m >= 3 * pp.rho,
        "3rho/2=" + fmt(1.5 * pp.rho) + " vs m=" + std::to_string(pp.m));
    add("packed threshold t <= r - rho", pp.rho >= 1 && pp.rho <= pp.r && pp.t <= pp.r - pp.rho,
        "r-rho=" + std::to_string(pp.r >= pp.rho ? pp.r - pp.rho : 0));
    add("field q prime and > m + rho",
        pp.q.is_prime() && pp.q.value() > static_cast<u128>(pp.m + pp.rho), "q=" + to_string(pp.q.value()));
    add("p < q", pp.p.value() < pp.q.value(), "p=" + to_string(pp.p.value()));
    add("seed dimension", pp.lambda > 0, "lambda=" + std::to_string(pp.lambda) + ", " +
                                             std::to_string(pp.chunks()) + " shares per member");
  }
  if (pp.mode == Mode::kLwr) {
    const EncodeParams ep = pp.encode();
    const int bits = pp.p.value() > ep.delta ? lwr_input_bits(ep, pp.p) : -1;
    add("LWR encode budget", bits >= static_cast<int>(pp.input_bits),
        "max input bits " + std::to_string(bits) + " vs " + std::to_string(pp.input_bits));
  }
  if (pp.mode == Mode::kLwe) {
    const EncodeParams ep = pp.encode();
    const u128 noise = static_cast<u128>(pp.n) * static_cast<u128>(lwe_error_bound(pp.lwe_eta));
    add("LWE noise n B < Delta/2", noise < ep.delta / 2,
        "nB=" + to_string(noise) + " Delta/2=" + to_string(ep.delta / 2));
    const u128 max_in = pow2(pp.input_bits) - 1;
    const U256 top = mul_wide(max_in * pp.n, ep.delta);
    add("LWE message space", top.hi == 0 && top.lo + noise < pp.q.value(),
        "n(2^bits-1) Delta + nB < q");
  }
  if (pp.mode == Mode::kPrimeLwr) {
    const DprfParams dp = pp.dprf_params();
    const auto v = dp.violations();
    add("DPRF constraints", v.empty(), v.empty() ? "ok" : v.front());
    add("semi-honest only", pp.security == Security::kSemiHonest,
        "active security is not defined for the DPRF mode");
    if (v.empty()) {
      const u128 d = dp.delta();
      const u128 need = std::max(pp.r * d + pp.r * d * d, static_cast<u128>(pp.n) * d);
      add("floor(p/u) > max(r Delta + r Delta^2, n Delta)", dp.p.value() / dp.u.value() > need,
          to_string(dp.p.value() / dp.u.value()) + " > " + to_string(need));
      const u128 max_total = (pow2(pp.input_bits) - 1) * pp.n;
      const u128 stated = prime_input_bound(pp);
      add("aggregate < p/(n^2 r Delta^2)", max_total < stated,
          to_string(max_total) + " < " + to_string(stated));
      const PrimeCodec codec = prime_codec(pp);
      add("aggregate decodes below v", codec.max_sum > 0 && max_total <= codec.max_sum,
          to_string(max_total) + " <= " + to_string(codec.max_sum) + " (w=" +
              to_string(codec.w) + ", o=" + to_string(codec.o) + ")");
    }
  }
  return out;
}

void validate(const ProtocolParams& params) {
  std::string failed;
  for (const RuleResult& r : check_rules(params)) {
    if (r.pass) continue;
    if (!failed.empty()) failed += "; ";
    failed += r.name + " (" + r.detail + ")";
  }
  if (!failed.empty()) throw ParamError("parameter rules violated: " + failed);
}

CommitteeAssignment sample_committee(std::size_t universe, std::size_t m, std::size_t groups,
                                     const Seed32& beacon) {
  if (m == 0 || groups == 0) throw ParamError("committee needs m, groups >= 1");
  if (universe < m * groups) throw ParamError("universe too small for the committees");
  Xof xof("OPA-BEACON");
  xof.absorb(beacon).absorb_u64(universe).absorb_u64(m).absorb_u64(groups);
  // Partial Fisher-Yates over [0, universe).
  std::vector<std::uint32_t> ids(universe);
  std::iota(ids.begin(), ids.end(), 0u);
  const std::size_t take = m * groups;
  for (std::size_t k = 0; k < take; ++k) {
    const std::size_t left = universe - k;
    const std::size_t pick = k + (left > 1 ? static_cast<std::size_t>(xof.uniform_below(left)) : 0);
    std::swap(ids[k], ids[pick]);
  }
  CommitteeAssignment out;
  out.m = m;
  out.members.resize(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    out.members[g].assign(ids.begin() + g * m, ids.begin() + (g + 1) * m);
  }
  return out;
}

}  // namespace opa
