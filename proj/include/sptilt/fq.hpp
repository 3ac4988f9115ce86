#pragma once

#include <cstdint>
#include <vector>

#include "sptilt/core.hpp"
#include "sptilt/intmath.hpp"

namespace sptilt {

namespace detail {

// Minimal F_p[x] arithmetic on coefficient vectors, used only to bootstrap
// the reduction polynomial of F_{p^k}.
inline void fpx_trim(std::vector<u64>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::vector<u64> fpx_mulmod(const std::vector<u64>& a, const std::vector<u64>& b,
                                   const std::vector<u64>& mod, u64 p) {
  std::vector<u64> r(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  // mod is monic
  for (std::size_t i = r.size(); i-- > mod.size() - 1;) {
    if (i + 1 < mod.size()) break;
    u64 c = r[i];
    if (c == 0) continue;
    std::size_t off = i - (mod.size() - 1);
    for (std::size_t j = 0; j < mod.size(); ++j) r[off + j] = (r[off + j] + (p - 1) * c % p * mod[j]) % p;
  }
  r.resize(mod.size() - 1);
  fpx_trim(r);
  return r;
}

inline std::vector<u64> fpx_powmod(std::vector<u64> base, u64 e, const std::vector<u64>& mod, u64 p) {
  std::vector<u64> r = {1};
  while (e > 0) {
    if (e & 1) r = fpx_mulmod(r, base, mod, p);
    base = fpx_mulmod(base, base, mod, p);
    e >>= 1;
  }
  return r;
}

inline std::vector<u64> fpx_gcd(std::vector<u64> a, std::vector<u64> b, u64 p) {
  fpx_trim(a);
  fpx_trim(b);
  while (!b.empty()) {
    // a mod b with b made monic on the fly
    u64 lead = b.back();
    u64 inv = powmod(lead, p - 2, p);
    std::vector<u64> bm = b;
    for (auto& c : bm) c = c * inv % p;
    while (a.size() >= bm.size() && !a.empty()) {
      u64 c = a.back();
      std::size_t off = a.size() - bm.size();
      for (std::size_t j = 0; j < bm.size(); ++j) a[off + j] = (a[off + j] + (p - c % p) * bm[j]) % p;
      fpx_trim(a);
    }
    std::swap(a, b);
  }
  return a;
}

// Rabin irreducibility test for a monic polynomial over F_p.
inline bool fpx_irreducible(const std::vector<u64>& g, u64 p) {
  const std::size_t k = g.size() - 1;
  if (k == 0) return false;
  std::vector<u64> x = {0, 1};
  // x^(p^k) == x mod g
  std::vector<u64> h = x;
  for (std::size_t i = 0; i < k; ++i) h = fpx_powmod(h, p, g, p);
  std::vector<u64> diff = h;
  diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
  diff[1] = (diff[1] + p - 1) % p;
  fpx_trim(diff);
  if (!diff.empty()) return false;
  auto kf = factor_u64(k);
  for (auto [t, e] : kf) {
    std::vector<u64> hh = x;
    for (std::size_t i = 0; i < k / t; ++i) hh = fpx_powmod(hh, p, g, p);
    std::vector<u64> d = hh;
    d.resize(std::max<std::size_t>(d.size(), 2), 0);
    d[1] = (d[1] + p - 1) % p;
    fpx_trim(d);
    auto gg = fpx_gcd(g, d, p);
    if (gg.size() != 1) return false;
  }
  return true;
}

}  // namespace detail

// The field F_q, q = p^k <= 2^16. Elements are encoded as integers in
// [0, q): the base-p digits are the coefficients of the residue in
// F_p[t]/(g) for the smallest monic irreducible g of degree k.
class Fq {
 public:
  explicit Fq(std::uint32_t q) : q_(q) {
    auto [p, k] = prime_power_split(q);
    if (k == 0 || q > (1u << 16)) throw input_error("q must be a prime power <= 2^16");
    p_ = static_cast<std::uint32_t>(p);
    k_ = static_cast<std::uint32_t>(k);
    if (k_ > 1) find_reduction();
  }

  std::uint32_t q() const { return q_; }
  std::uint32_t p() const { return p_; }
  std::uint32_t degree() const { return k_; }
  const std::vector<std::uint32_t>& reduction() const { return red_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    if (k_ == 1) return (a + b) % p_;
    std::uint32_t r = 0, mul = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      r += (a % p_ + b % p_) % p_ * mul;
      a /= p_;
      b /= p_;
      mul *= p_;
    }
    return r;
  }

  std::uint32_t neg(std::uint32_t a) const {
    if (k_ == 1) return (p_ - a % p_) % p_;
    std::uint32_t r = 0, mul = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      r += (p_ - a % p_) % p_ * mul;
      a /= p_;
      mul *= p_;
    }
    return r;
  }

  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (k_ == 1) return static_cast<std::uint32_t>(static_cast<u64>(a) * b % p_);
    std::uint32_t da[17] = {0}, db[17] = {0}, dr[33] = {0};
    for (std::uint32_t i = 0; i < k_; ++i, a /= p_) da[i] = a % p_;
    for (std::uint32_t i = 0; i < k_; ++i, b /= p_) db[i] = b % p_;
    for (std::uint32_t i = 0; i < k_; ++i)
      for (std::uint32_t j = 0; j < k_; ++j) dr[i + j] = (dr[i + j] + da[i] * db[j]) % p_;
    // reduce by red_ (monic of degree k)
    for (int i = 2 * static_cast<int>(k_) - 2; i >= static_cast<int>(k_); --i) {
      std::uint32_t c = dr[i];
      if (c == 0) continue;
      dr[i] = 0;
      for (std::uint32_t j = 0; j < k_; ++j)
        dr[i - k_ + j] = (dr[i - k_ + j] + (p_ - red_[j]) * c) % p_;
    }
    std::uint32_t r = 0, mul_ = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      r += dr[i] * mul_;
      mul_ *= p_;
    }
    return r;
  }

  std::uint32_t pow(std::uint32_t a, u64 e) const {
    std::uint32_t r = 1;
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) throw input_error("division by zero in F_q");
    return pow(a, static_cast<u64>(q_) - 2);
  }

  friend bool operator==(const Fq& a, const Fq& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Fq& a, const Fq& b) { return a.q_ != b.q_; }

 private:
  void find_reduction() {
    // smallest monic irreducible of degree k over F_p, by integer encoding
    for (u64 code = 0;; ++code) {
      std::vector<u64> g(k_ + 1, 0);
      u64 c = code;
      for (std::uint32_t i = 0; i < k_; ++i, c /= p_) g[i] = c % p_;
      if (c > 0) throw internal_error("no irreducible polynomial found");
      g[k_] = 1;
      if (detail::fpx_irreducible(g, p_)) {
        red_.assign(k_, 0);
        for (std::uint32_t i = 0; i < k_; ++i) red_[i] = static_cast<std::uint32_t>(g[i]);
        return;
      }
    }
  }

  std::uint32_t q_, p_ = 0, k_ = 0;
  std::vector<std::uint32_t> red_;  // low k coefficients of the reduction poly
};

}  // namespace sptilt
