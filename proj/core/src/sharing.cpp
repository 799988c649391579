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

#include "opa/sharing.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <iterator>
#include <set>

#include "opa/error.hpp"

namespace opa {
namespace {

void check_indices(std::span<const std::uint16_t> idx, std::size_t m) {
  std::set<std::uint16_t> seen;
  for (std::uint16_t i : idx) {
    if (i == 0 || i > m) throw ParamError("share index out of range");
    if (!seen.insert(i).second) throw ParamError("duplicate share index");
  }
}

template <typename S>
std::vector<std::uint16_t> first_r_indices(std::span<const S> shares, const ShareParams& sp) {
  std::vector<std::uint16_t> idx;
  idx.reserve(shares.size());
  for (const S& s : shares) idx.push_back(s.index);
  check_indices(idx, sp.m);
  if (shares.size() < sp.r) throw ThresholdError("fewer shares than the reconstruction threshold");
  idx.resize(sp.r);
  return idx;
}

u128 power(const Modulus& f, u128 base, std::size_t e) {
  return f.pow(base, static_cast<u128>(e));
}

BigInt pow2_big(unsigned k) { return BigInt(1) << k; }

BigInt uniform_big(Rng& rng, unsigned bits) {
  BigInt v = 0;
  unsigned left = bits;
  while (left > 0) {
    const unsigned take = std::min(left, 64u);
    std::uint64_t w = rng();
    if (take < 64) w &= (1ULL << take) - 1;
    v = (v << take) | w;
    left -= take;
  }
  return v;
}

// Delta * prod_{z != j} (x_z - at) / (x_z - x_j), exact.
BigInt integer_lagrange(std::span<const std::uint16_t> xs, std::size_t j, std::int64_t at,
                        const BigInt& delta) {
  BigInt num = delta, den = 1;
  for (std::size_t z = 0; z < xs.size(); ++z) {
    if (z == j) continue;
    num *= static_cast<std::int64_t>(xs[z]) - at;
    den *= static_cast<std::int64_t>(xs[z]) - static_cast<std::int64_t>(xs[j]);
  }
  if (num % den != 0) throw MathError("integer Lagrange coefficient is not integral");
  return num / den;
}

// Delta * prod_{j != i} (x - pos_j) / (pos_i - pos_j) with pos_k = m + k.
BigInt integer_slot_basis(std::size_t i, std::int64_t x, const ShareParams& sp,
                          const BigInt& delta) {
  BigInt num = delta, den = 1;
  const auto m = static_cast<std::int64_t>(sp.m);
  for (std::size_t j = 1; j <= sp.rho; ++j) {
    if (j == i) continue;
    num *= x - (m + static_cast<std::int64_t>(j));
    den *= static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j);
  }
  if (num % den != 0) throw MathError("slot basis is not integral");
  return num / den;
}

}  // namespace

void ShareParams::validate_field() const {
  if (r == 0 || r > m) throw ParamError("need 1 <= r <= m");
  if (t >= r) throw ParamError("need t < r");
  if (m > 0xffff) throw ParamError("at most 65535 parties");
  if (!field.is_prime()) throw ParamError("Shamir field modulus must be prime");
  if (field.value() <= static_cast<u128>(m + rho)) {
    throw ParamError("field must exceed every evaluation point");
  }
}

void ShareParams::validate_packed() const {
  validate_field();
  if (rho == 0) throw ParamError("packing factor must be positive");
  if (rho > r || t > r - rho) throw ParamError("packed sharing needs t <= r - rho");
  if (2 * m < 3 * rho) throw ParamError("packed sharing needs m >= 3 rho / 2");
}

void ShareParams::validate_integer() const {
  if (r == 0 || r > m) throw ParamError("need 1 <= r <= m");
  if (t >= r) throw ParamError("need t < r");
  if (rho == 0 || rho > r) throw ParamError("need 1 <= rho <= r");
  if (m > 0xffff) throw ParamError("at most 65535 parties");
  if (ell_r < min_ell_r(*this)) throw ParamError("randomness length ell_r too short");
}

BigInt factorial(std::size_t m) {
  BigInt f = 1;
  for (std::size_t k = 2; k <= m; ++k) f *= k;
  return f;
}

std::vector<FieldShare> share_field(const Poly& f, const ShareParams& sp) {
  sp.validate_field();
  if (!(f.modulus() == sp.field)) throw ParamError("polynomial modulus differs from field");
  if (f.size() > sp.r) throw ParamError("sharing polynomial degree exceeds r-1");
  std::vector<FieldShare> out(sp.m);
  for (std::size_t j = 1; j <= sp.m; ++j) {
    out[j - 1] = {static_cast<std::uint16_t>(j), f.eval(j)};
  }
  return out;
}

std::vector<FieldShare> share_field(u128 secret, const ShareParams& sp, Rng& rng) {
  sp.validate_field();
  std::vector<u128> coeffs(sp.r);
  coeffs[0] = sp.field.reduce(secret);
  for (std::size_t c = 1; c < sp.r; ++c) coeffs[c] = rng.uniform_below(sp.field.value());
  return share_field(Poly(sp.field, std::move(coeffs)), sp);
}

u128 reconstruct_field(std::span<const FieldShare> shares, const ShareParams& sp) {
  sp.validate_field();
  const auto idx = first_r_indices(shares, sp);
  std::vector<u128> xs(idx.begin(), idx.end());
  const auto lam = lagrange_at(xs, 0, sp.field);
  u128 acc = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    acc = sp.field.add(acc, sp.field.mul(lam[k], shares[k].value));
  }
  return acc;
}

Poly packed_polynomial(std::span<const u128> secrets, std::span<const u128> q_coeffs,
                       const ShareParams& sp) {
  sp.validate_packed();
  if (secrets.size() != sp.rho) throw ParamError("packed secret must have rho entries");
  if (q_coeffs.size() != sp.r - sp.rho) throw ParamError("q(X) must have r-rho coefficients");
  const Modulus& f = sp.field;
  Poly out(f, std::vector<u128>(q_coeffs.begin(), q_coeffs.end()));
  if (out.size() == 0) out = Poly(f, {0});
  for (std::size_t i = 1; i <= sp.rho; ++i) out.mul_linear(sp.m + i);
  for (std::size_t i = 1; i <= sp.rho; ++i) {
    Poly basis(f, {1});
    u128 den = 1;
    for (std::size_t j = 1; j <= sp.rho; ++j) {
      if (j == i) continue;
      basis.mul_linear(sp.m + j);
      den = f.mul(den, f.from_signed(static_cast<i128>(i) - static_cast<i128>(j)));
    }
    out.add_scaled(basis, f.mul(f.reduce(secrets[i - 1]), f.inv(den)));
  }
  return out;
}

std::vector<FieldShare> share_packed_field(std::span<const u128> secrets,
                                           std::span<const u128> q_coeffs,
                                           const ShareParams& sp) {
  const Poly f = packed_polynomial(secrets, q_coeffs, sp);
  std::vector<FieldShare> out(sp.m);
  for (std::size_t j = 1; j <= sp.m; ++j) {
    out[j - 1] = {static_cast<std::uint16_t>(j), f.eval(j)};
  }
  return out;
}

std::vector<FieldShare> share_packed_field(std::span<const u128> secrets,
                                           const ShareParams& sp, Rng& rng) {
  sp.validate_packed();
  std::vector<u128> qc(sp.r - sp.rho);
  for (u128& c : qc) c = rng.uniform_below(sp.field.value());
  return share_packed_field(secrets, qc, sp);
}

std::vector<u128> reconstruct_packed_field(std::span<const FieldShare> shares,
                                           const ShareParams& sp) {
  sp.validate_packed();
  const auto idx = first_r_indices(shares, sp);
  PackedReconstructor rec(sp, idx);
  std::vector<u128> values(sp.r);
  for (std::size_t k = 0; k < sp.r; ++k) values[k] = shares[k].value;
  return rec.slots(values);
}

PackedSharer::PackedSharer(const ShareParams& sp) : sp_(sp), cols_(sp.r) {
  sp.validate_packed();
  const Modulus& f = sp.field;
  std::vector<u128> pos(sp.rho);
  for (std::size_t i = 0; i < sp.rho; ++i) pos[i] = sp.m + 1 + i;
  table_.resize((sp.m + 1) * cols_);
  for (std::size_t j = 0; j <= sp.m; ++j) {
    u128* row = table_.data() + j * cols_;
    const auto basis = lagrange_at(pos, j, f);
    std::copy(basis.begin(), basis.end(), row);
    u128 z = 1;
    for (u128 pk : pos) z = f.mul(z, f.sub(j, pk));
    for (std::size_t c = 0; c < sp.r - sp.rho; ++c) {
      row[sp.rho + c] = f.mul(z, power(f, j, c));
    }
  }
}

std::vector<u128> PackedSharer::share(std::span<const u128> secrets,
                                      std::span<const u128> q_coeffs) const {
  if (secrets.size() != sp_.rho) throw ParamError("packed secret must have rho entries");
  if (q_coeffs.size() != sp_.r - sp_.rho) throw ParamError("q(X) must have r-rho coefficients");
  std::vector<u128> in(cols_);
  std::copy(secrets.begin(), secrets.end(), in.begin());
  std::copy(q_coeffs.begin(), q_coeffs.end(), in.begin() + static_cast<std::ptrdiff_t>(sp_.rho));
  std::vector<u128> out(sp_.m + 1);
  for (std::size_t j = 0; j <= sp_.m; ++j) {
    out[j] = sp_.field.dot(std::span<const u128>(table_.data() + j * cols_, cols_), in);
  }
  return out;
}

std::vector<u128> PackedSharer::share(std::span<const u128> secrets, Rng& rng) const {
  std::vector<u128> qc(sp_.r - sp_.rho);
  for (u128& c : qc) c = rng.uniform_below(sp_.field.value());
  return share(secrets, qc);
}

PackedReconstructor::PackedReconstructor(const ShareParams& sp,
                                         std::span<const std::uint16_t> indices)
    : sp_(sp), indices_(indices.begin(), indices.end()) {
  sp.validate_packed();
  check_indices(indices_, sp.m);
  if (indices_.size() != sp.r) throw ThresholdError("reconstructor needs exactly r indices");
  std::vector<u128> xs(indices_.begin(), indices_.end());
  table_.reserve(sp.rho * sp.r);
  for (std::size_t k = 1; k <= sp.rho; ++k) {
    const auto lam = lagrange_at(xs, sp.m + k, sp.field);
    table_.insert(table_.end(), lam.begin(), lam.end());
  }
  zero_ = lagrange_at(xs, 0, sp.field);
}

std::vector<u128> PackedReconstructor::slots(std::span<const u128> values) const {
  if (values.size() != sp_.r) throw ParamError("expected r share values");
  std::vector<u128> out(sp_.rho);
  for (std::size_t k = 0; k < sp_.rho; ++k) {
    out[k] = sp_.field.dot(std::span<const u128>(table_.data() + k * sp_.r, sp_.r), values);
  }
  return out;
}

u128 PackedReconstructor::at_zero(std::span<const u128> values) const {
  if (values.size() != sp_.r) throw ParamError("expected r share values");
  return sp_.field.dot(zero_, values);
}

FieldShare add_shares(const FieldShare& a, const FieldShare& b, const Modulus& field) {
  if (a.index != b.index) throw ParamError("adding shares with different indices");
  return {a.index, field.add(a.value, b.value)};
}

IntegerShare add_shares(const IntegerShare& a, const IntegerShare& b) {
  if (a.index != b.index) throw ParamError("adding shares with different indices");
  return {a.index, a.value + b.value};
}

std::vector<IntegerShare> share_integer(const BigInt& secret, std::span<const BigInt> coeffs,
                                        const ShareParams& sp) {
  if (sp.r == 0 || sp.r > sp.m || sp.t >= sp.r) throw ParamError("need t < r <= m");
  if (secret < 0 || secret >= pow2_big(sp.ell_s)) throw RangeError("secret outside [0, 2^ell_s)");
  if (coeffs.size() != sp.r - 1) throw ParamError("expected r-1 random coefficients");
  const BigInt delta = factorial(sp.m);
  std::vector<IntegerShare> out(sp.m);
  for (std::size_t j = 1; j <= sp.m; ++j) {
    BigInt acc = 0;
    for (std::size_t c = coeffs.size(); c-- > 0;) acc = acc * j + coeffs[c];
    acc = acc * j + secret * delta;
    out[j - 1] = {static_cast<std::uint16_t>(j), acc};
  }
  return out;
}

std::vector<IntegerShare> share_integer(const BigInt& secret, const ShareParams& sp, Rng& rng) {
  std::vector<BigInt> coeffs(sp.r == 0 ? 0 : sp.r - 1);
  for (BigInt& c : coeffs) c = uniform_big(rng, sp.ell_r + sp.kappa_s);
  return share_integer(secret, coeffs, sp);
}

BigInt reconstruct_integer(std::span<const IntegerShare> shares, const ShareParams& sp) {
  const auto idx = first_r_indices(shares, sp);
  const BigInt delta = factorial(sp.m);
  BigInt acc = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    acc += integer_lagrange(idx, k, 0, delta) * shares[k].value;
  }
  return acc;
}

std::vector<IntegerShare> share_packed_integer(std::span<const BigInt> secrets,
                                               std::span<const BigInt> q_coeffs,
                                               const ShareParams& sp) {
  if (sp.r == 0 || sp.r > sp.m || sp.rho == 0 || sp.rho > sp.r) {
    throw ParamError("need 1 <= rho <= r <= m");
  }
  if (secrets.size() != sp.rho) throw ParamError("packed secret must have rho entries");
  if (q_coeffs.size() != sp.r - sp.rho) throw ParamError("q(X) must have r-rho coefficients");
  for (const BigInt& s : secrets) {
    if (s < 0 || s >= pow2_big(sp.ell_s)) throw RangeError("secret outside [0, 2^ell_s)");
  }
  const BigInt delta = factorial(sp.m);
  const auto m = static_cast<std::int64_t>(sp.m);
  std::vector<IntegerShare> out(sp.m);
  for (std::size_t j = 1; j <= sp.m; ++j) {
    const auto x = static_cast<std::int64_t>(j);
    BigInt qv = 0;
    for (std::size_t c = q_coeffs.size(); c-- > 0;) qv = qv * x + q_coeffs[c];
    BigInt z = 1;
    for (std::size_t i = 1; i <= sp.rho; ++i) z *= x - (m + static_cast<std::int64_t>(i));
    BigInt acc = qv * z;
    for (std::size_t i = 1; i <= sp.rho; ++i) {
      acc += secrets[i - 1] * delta * integer_slot_basis(i, x, sp, delta);
    }
    out[j - 1] = {static_cast<std::uint16_t>(j), acc};
  }
  return out;
}

std::vector<IntegerShare> share_packed_integer(std::span<const BigInt> secrets,
                                               const ShareParams& sp, Rng& rng) {
  std::vector<BigInt> qc(sp.r >= sp.rho ? sp.r - sp.rho : 0);
  for (BigInt& c : qc) c = uniform_big(rng, sp.ell_r + sp.kappa_s);
  return share_packed_integer(secrets, qc, sp);
}

std::vector<BigInt> reconstruct_packed_integer(std::span<const IntegerShare> shares,
                                               const ShareParams& sp) {
  const auto idx = first_r_indices(shares, sp);
  const BigInt delta = factorial(sp.m);
  std::vector<BigInt> out(sp.rho, 0);
  for (std::size_t k = 1; k <= sp.rho; ++k) {
    const auto at = static_cast<std::int64_t>(sp.m + k);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      out[k - 1] += integer_lagrange(idx, j, at, delta) * shares[j].value;
    }
  }
  return out;
}

std::vector<BigInt> sweeping_polynomial(std::span<const std::uint16_t> corrupt, std::size_t slot,
                                        const ShareParams& sp) {
  if (sp.rho == 0 || sp.rho > sp.r) throw ParamError("need 1 <= rho <= r");
  if (corrupt.size() != sp.r - sp.rho) throw ParamError("corrupt set must have r - rho members");
  if (slot == 0 || slot > sp.rho) throw ParamError("slot out of range");
  check_indices(corrupt, sp.m);
  const BigInt delta = factorial(sp.m);
  const auto m = static_cast<std::int64_t>(sp.m);
  const auto target = m + static_cast<std::int64_t>(slot);
  // Delta^2 * N(X) / D with N monic over the vanishing points.
  std::vector<BigInt> num = {BigInt(1)};
  BigInt den = 1;
  auto mul_linear = [&num](std::int64_t root) {
    std::vector<BigInt> next(num.size() + 1, BigInt(0));
    for (std::size_t k = 0; k < num.size(); ++k) {
      next[k + 1] += num[k];
      next[k] -= num[k] * root;
    }
    num = std::move(next);
  };
  for (std::uint16_t c : corrupt) {
    mul_linear(c);
    den *= target - static_cast<std::int64_t>(c);
  }
  for (std::size_t j = 1; j <= sp.rho; ++j) {
    if (j == slot) continue;
    mul_linear(m + static_cast<std::int64_t>(j));
    den *= static_cast<std::int64_t>(slot) - static_cast<std::int64_t>(j);
  }
  std::vector<BigInt> out;
  out.reserve(num.size());
  for (const BigInt& c : num) {
    const BigInt scaled = c * delta * delta;
    if (scaled % den != 0) throw MathError("sweeping polynomial has a non-integral coefficient");
    out.push_back(scaled / den);
  }
  return out;
}

BigInt sweeping_coefficient_bound(const ShareParams& sp) {
  const BigInt delta = factorial(sp.m);
  BigInt bound = delta * delta;
  for (std::size_t k = 0; k + sp.rho < sp.r; ++k) bound *= sp.m + 1;
  for (std::size_t k = 1; k < sp.rho; ++k) bound *= sp.m + sp.rho + 1;
  return bound;
}

unsigned min_ell_r(const ShareParams& sp) {
  const BigInt prod = sweeping_coefficient_bound(sp) * std::max<std::size_t>(sp.r - 1, 1) *
                      std::max<std::size_t>(sp.rho, 1);
  // ceil(log2(prod))
  unsigned bits = static_cast<unsigned>(msb(prod)) + 1;
  if (prod == (BigInt(1) << (bits - 1))) --bits;
  return sp.ell_s + bits + 1;
}

void write_share(ByteWriter& w, const FieldShare& s) {
  w.u16(s.index);
  w.u128le(s.value);
}

FieldShare read_field_share(ByteReader& r) {
  FieldShare s;
  s.index = r.u16();
  s.value = r.u128le();
  return s;
}

void write_share(ByteWriter& w, const IntegerShare& s) {
  w.u16(s.index);
  Bytes mag;
  const BigInt magnitude = abs(s.value);
  export_bits(magnitude, std::back_inserter(mag), 8, false);
  if (s.value == 0) mag.clear();
  w.blob(mag);
  w.u8(s.value < 0 ? 1 : 0);
}

IntegerShare read_integer_share(ByteReader& r) {
  IntegerShare s;
  s.index = r.u16();
  const ByteView mag = r.blob();
  BigInt v = 0;
  if (!mag.empty()) import_bits(v, mag.begin(), mag.end(), 8, false);
  const std::uint8_t sign = r.u8();
  if (sign > 1) throw DecodeError("bad sign byte");
  s.value = sign ? BigInt(-v) : v;
  return s;
}

std::vector<std::vector<u128>> chunk_seed(std::span<const u128> seed, std::size_t rho) {
  if (rho == 0) throw ParamError("chunk size must be positive");
  const std::size_t n = (seed.size() + rho - 1) / rho;
  std::vector<std::vector<u128>> out(n, std::vector<u128>(rho, 0));
  for (std::size_t k = 0; k < seed.size(); ++k) out[k / rho][k % rho] = seed[k];
  return out;
}

std::vector<u128> unchunk_seed(std::span<const std::vector<u128>> chunks, std::size_t lambda) {
  std::vector<u128> out;
  out.reserve(lambda);
  for (const auto& c : chunks) {
    for (u128 v : c) {
      if (out.size() == lambda) break;
      out.push_back(v);
    }
  }
  if (out.size() != lambda) throw ParamError("not enough chunk data for lambda");
  return out;
}

}  // namespace opa
