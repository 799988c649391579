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

#include "opa/ringmath.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "opa/error.hpp"

namespace opa {
namespace {

constexpr u128 kMersenne127 = (static_cast<u128>(1) << 127) - 1;
constexpr u128 kTwo64 = static_cast<u128>(1) << 64;

inline u128 fold_m127(u128 x) {
  x = (x & kMersenne127) + (x >> 127);
  x = (x & kMersenne127) + (x >> 127);
  return x == kMersenne127 ? 0 : x;
}

// a*b for a, b < 2^127; result reduced mod 2^127-1 only partially (< 2^128).
inline u128 mul_m127_lazy(u128 a, u128 b) {
  U256 p = mul_wide(a, b);
  // 2^128 == 2 (mod 2^127-1)
  return (p.lo & kMersenne127) + (p.lo >> 127) + (p.hi << 1);
}

}  // namespace

U256 mul_wide(u128 a, u128 b) {
  const std::uint64_t a0 = static_cast<std::uint64_t>(a);
  const std::uint64_t a1 = static_cast<std::uint64_t>(a >> 64);
  const std::uint64_t b0 = static_cast<std::uint64_t>(b);
  const std::uint64_t b1 = static_cast<std::uint64_t>(b >> 64);
  const u128 p00 = static_cast<u128>(a0) * b0;
  const u128 p01 = static_cast<u128>(a0) * b1;
  const u128 p10 = static_cast<u128>(a1) * b0;
  const u128 p11 = static_cast<u128>(a1) * b1;
  const u128 mid = (p00 >> 64) + static_cast<std::uint64_t>(p01) +
                   static_cast<std::uint64_t>(p10);
  U256 out;
  out.lo = (mid << 64) | static_cast<std::uint64_t>(p00);
  out.hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
  return out;
}

u128 div_wide(const U256& x, u128 m, u128* remainder) {
  if (m == 0) throw MathError("division by zero");
  if (x.hi >= m) throw MathError("div_wide: quotient overflows 128 bits");
  u128 r = x.hi;
  u128 q = 0;
  for (int i = 127; i >= 0; --i) {
    const bool carry = (r >> 127) != 0;
    r = (r << 1) | ((x.lo >> i) & 1);
    q <<= 1;
    if (carry || r >= m) {
      r -= m;
      q |= 1;
    }
  }
  if (remainder != nullptr) *remainder = r;
  return q;
}

u128 mod_wide(const U256& x, u128 m) {
  if (m == 0) throw MathError("modulus zero");
  U256 y{x.hi % m, x.lo};
  u128 r = 0;
  div_wide(y, m, &r);
  return r;
}

unsigned bit_length(u128 x) {
  const auto hi = static_cast<std::uint64_t>(x >> 64);
  if (hi != 0) return 128 - static_cast<unsigned>(__builtin_clzll(hi));
  const auto lo = static_cast<std::uint64_t>(x);
  if (lo != 0) return 64 - static_cast<unsigned>(__builtin_clzll(lo));
  return 0;
}

u128 pow2(unsigned k) {
  if (k >= 128) throw RangeError("pow2 exponent exceeds 127");
  return static_cast<u128>(1) << k;
}

std::string to_string(u128 x) {
  if (x == 0) return "0";
  std::string s;
  while (x != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(x % 10)));
    x /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::string to_string(i128 x) {
  if (x < 0) return "-" + to_string(static_cast<u128>(-(x + 1)) + 1);
  return to_string(static_cast<u128>(x));
}

namespace {

u128 parse_plain(std::string_view t) {
  if (t.empty()) throw ParamError("empty integer literal");
  u128 v = 0;
  if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) {
    for (char c : t.substr(2)) {
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else throw ParamError("bad hex digit in integer literal");
      if (v >> 124) throw RangeError("integer literal exceeds 128 bits");
      v = (v << 4) | static_cast<unsigned>(d);
    }
    return v;
  }
  for (char c : t) {
    if (c < '0' || c > '9') throw ParamError("bad digit in integer literal");
    const u128 next = v * 10 + static_cast<unsigned>(c - '0');
    if (v > (~static_cast<u128>(0)) / 10 || next < v * 10) {
      throw RangeError("integer literal exceeds 128 bits");
    }
    v = next;
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

u128 parse_u128(std::string_view text) {
  std::string_view t = trim(text);
  if (t.size() > 2 && t[0] == '2' && t[1] == '^') {
    std::string_view rest = t.substr(2);
    std::size_t op = rest.find_first_of("+-");
    const u128 k = parse_plain(trim(rest.substr(0, op)));
    if (k > 128) throw RangeError("2^k literal exceeds 128 bits");
    if (op == std::string_view::npos) {
      if (k == 128) throw RangeError("2^128 does not fit");
      return pow2(static_cast<unsigned>(k));
    }
    const u128 c = parse_plain(trim(rest.substr(op + 1)));
    if (rest[op] == '-') {
      if (k == 128) return (~static_cast<u128>(0)) - c + 1;
      const u128 base = pow2(static_cast<unsigned>(k));
      if (c > base) throw RangeError("negative integer literal");
      return base - c;
    }
    if (k == 128) throw RangeError("2^128 does not fit");
    const u128 base = pow2(static_cast<unsigned>(k));
    if (base + c < base) throw RangeError("integer literal exceeds 128 bits");
    return base + c;
  }
  return parse_plain(t);
}

bool is_probable_prime(u128 n) {
  if (n < 2) return false;
  static constexpr std::array<unsigned, 16> kBases = {
      2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  for (unsigned b : kBases) {
    if (n == b) return true;
    if (n % b == 0) return false;
  }
  // Modulus requires value >= 3; n is odd and > 53 here.
  const Modulus mod(n, false);
  u128 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (unsigned b : kBases) {
    u128 x = mod.pow(b, d);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mod.mul(x, x);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Modulus::Modulus(u128 value, bool is_prime)
    : value_(value), is_prime_(is_prime), bits_(bit_length(value)) {
  if (value < 3) throw ParamError("modulus must be at least 3");
  if (value == kMersenne127) {
    kind_ = Kind::kMersenne127;
  } else if (value < kTwo64) {
    kind_ = Kind::kSmall;
  } else {
    kind_ = Kind::kGeneric;
  }
}

Modulus Modulus::prime(u128 value) {
  if (!is_probable_prime(value)) {
    throw ParamError("modulus " + to_string(value) + " is not prime");
  }
  return Modulus(value, true);
}

Modulus Modulus::mersenne127() { return Modulus(kMersenne127, true); }

u128 Modulus::reduce(u128 x) const {
  if (kind_ == Kind::kMersenne127) return fold_m127(x);
  return x % value_;
}

u128 Modulus::reduce_wide(const U256& x) const {
  if (kind_ == Kind::kMersenne127) {
    // x = hi*2^128 + lo, hi*2^128 == 2*hi; fold hi first so the sum fits.
    const u128 h = fold_m127(x.hi);
    return fold_m127(fold_m127(x.lo) + (h << 1));
  }
  return mod_wide(x, value_);
}

u128 Modulus::from_signed(i128 x) const {
  if (x >= 0) return reduce(static_cast<u128>(x));
  const u128 mag = reduce(static_cast<u128>(-(x + 1)) + 1);
  return mag == 0 ? 0 : value_ - mag;
}

i128 Modulus::to_signed(u128 x) const {
  if (x > value_ / 2) return -static_cast<i128>(value_ - x);
  return static_cast<i128>(x);
}

u128 Modulus::add(u128 a, u128 b) const {
  const u128 s = a + b;
  // s may wrap only when value_ > 2^127.
  if (s < a || s >= value_) return s - value_;
  return s;
}

u128 Modulus::sub(u128 a, u128 b) const {
  return a >= b ? a - b : a + (value_ - b);
}

u128 Modulus::neg(u128 a) const { return a == 0 ? 0 : value_ - a; }

u128 Modulus::mul(u128 a, u128 b) const {
  switch (kind_) {
    case Kind::kSmall:
      return (a * b) % value_;
    case Kind::kMersenne127:
      return fold_m127(mul_m127_lazy(a, b));
    case Kind::kGeneric:
      break;
  }
  return mod_wide(mul_wide(a, b), value_);
}

u128 Modulus::pow(u128 base, u128 exp) const {
  u128 result = 1;
  base = reduce(base);
  while (exp != 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

u128 Modulus::inv(u128 a) const {
  a = reduce(a);
  if (value_ > kMersenne127 && is_prime_) {
    // Cofactors below would overflow i128; Fermat is exact for primes.
    if (a == 0) throw MathError("zero is not invertible");
    return pow(a, value_ - 2);
  }
  // Extended Euclid on signed 128-bit cofactors; |cofactor| <= value_.
  u128 r0 = value_, r1 = a;
  i128 t0 = 0, t1 = 1;
  while (r1 != 0) {
    const u128 q = r0 / r1;
    const u128 r2 = r0 - q * r1;
    const i128 t2 = t0 - static_cast<i128>(q) * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (r0 != 1) {
    throw MathError("element " + to_string(a) + " not invertible mod " +
                    to_string(value_));
  }
  return from_signed(t0);
}

u128 Modulus::dot(std::span<const u128> a, std::span<const u128> b) const {
  if (a.size() != b.size()) throw ParamError("dot: length mismatch");
  if (kind_ == Kind::kMersenne127) {
    u128 acc = 0;
    std::uint64_t carries = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const u128 term = mul_m127_lazy(a[k], b[k]);
      acc += term;
      if (acc < term) ++carries;
    }
    // carries * 2^128 == 2 * carries
    return fold_m127(fold_m127(acc) + 2 * static_cast<u128>(carries));
  }
  u128 acc = 0;
  for (std::size_t k = 0; k < a.size(); ++k) acc = add(acc, mul(a[k], b[k]));
  return acc;
}

Fe::Fe(u128 residue, const Modulus& modulus)
    : residue_(residue), modulus_(modulus) {
  if (residue >= modulus.value()) {
    throw RangeError("residue not canonical");
  }
}

Fe Fe::from_signed(i128 x, const Modulus& modulus) {
  return Fe(modulus.from_signed(x), modulus);
}

namespace {
void check_same(const Fe& a, const Fe& b) {
  if (!(a.modulus() == b.modulus())) throw ParamError("modulus mismatch");
}
}  // namespace

Fe fe_add(const Fe& a, const Fe& b) {
  check_same(a, b);
  return Fe(a.modulus().add(a.value(), b.value()), a.modulus());
}

Fe fe_sub(const Fe& a, const Fe& b) {
  check_same(a, b);
  return Fe(a.modulus().sub(a.value(), b.value()), a.modulus());
}

Fe fe_mul(const Fe& a, const Fe& b) {
  check_same(a, b);
  return Fe(a.modulus().mul(a.value(), b.value()), a.modulus());
}

Fe fe_inv(const Fe& a) { return Fe(a.modulus().inv(a.value()), a.modulus()); }

u128 round_down(u128 x, const Modulus& q, const Modulus& p) {
  if (p.value() >= q.value()) throw ParamError("round_down needs p < q");
  if (x >= q.value()) throw RangeError("round_down input not canonical");
  // x*p < q*p and x < q, so the quotient is below p.
  const U256 y = mul_wide(x, p.value());
  if (y.hi == 0) return y.lo / q.value();
  if (q.value() == kMersenne127) {
    // y = a*2^127 + b  ==>  y = a*(2^127-1) + (a + b)
    u128 quot = (y.hi << 1) | (y.lo >> 127);
    u128 rem = (y.lo & kMersenne127) + quot;
    while (rem >= kMersenne127) {
      rem -= kMersenne127;
      ++quot;
    }
    return quot;
  }
  return div_wide(y, q.value());
}

Fe round_down(const Fe& x, const Modulus& p) {
  return Fe(round_down(x.value(), x.modulus(), p), p);
}

Poly::Poly(const Modulus& modulus, std::vector<u128> coeffs)
    : modulus_(modulus), coeffs_(std::move(coeffs)) {
  for (u128 c : coeffs_) {
    if (c >= modulus_.value()) throw RangeError("coefficient not canonical");
  }
}

u128 Poly::eval(u128 x) const {
  x = modulus_.reduce(x);
  u128 acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = modulus_.add(modulus_.mul(acc, x), *it);
  }
  return acc;
}

void Poly::mul_linear(u128 root) {
  root = modulus_.reduce(root);
  coeffs_.push_back(0);
  for (std::size_t k = coeffs_.size() - 1; k > 0; --k) {
    coeffs_[k] = modulus_.sub(coeffs_[k - 1], modulus_.mul(root, coeffs_[k]));
  }
  coeffs_[0] = modulus_.neg(modulus_.mul(root, coeffs_[0]));
}

void Poly::add_scaled(const Poly& other, u128 scale) {
  if (!(other.modulus_ == modulus_)) throw ParamError("modulus mismatch");
  if (other.coeffs_.size() > coeffs_.size()) {
    coeffs_.resize(other.coeffs_.size(), 0);
  }
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) {
    coeffs_[k] = modulus_.add(coeffs_[k], modulus_.mul(scale, other.coeffs_[k]));
  }
}

Fe poly_eval(const Poly& f, const Fe& x) {
  if (!(f.modulus() == x.modulus())) throw ParamError("modulus mismatch");
  return Fe(f.eval(x.value()), f.modulus());
}

std::vector<u128> lagrange_at(std::span<const u128> xs, u128 at,
                              const Modulus& field) {
  const std::size_t k = xs.size();
  std::vector<u128> num(k, 1), den(k, 1);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      if (xs[i] == xs[j]) throw ParamError("duplicate interpolation point");
      num[i] = field.mul(num[i], field.sub(at, xs[j]));
      den[i] = field.mul(den[i], field.sub(xs[i], xs[j]));
    }
  }
  // One inversion for all denominators.
  std::vector<u128> prefix(k + 1, 1);
  for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = field.mul(prefix[i], den[i]);
  u128 inv_all = field.inv(prefix[k]);
  std::vector<u128> out(k);
  for (std::size_t i = k; i-- > 0;) {
    const u128 inv_i = field.mul(inv_all, prefix[i]);
    inv_all = field.mul(inv_all, den[i]);
    out[i] = field.mul(num[i], inv_i);
  }
  return out;
}

}  // namespace opa
