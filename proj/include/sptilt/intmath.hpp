#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "sptilt/core.hpp"

namespace sptilt {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw input_error("integer overflow in addition");
  return r;
}

inline i64 checked_sub(i64 a, i64 b) {
  i64 r;
  if (__builtin_sub_overflow(a, b, &r)) throw input_error("integer overflow in subtraction");
  return r;
}

inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw input_error("integer overflow in multiplication");
  return r;
}

inline u64 checked_mul_u64(u64 a, u64 b) {
  u64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw input_error("integer overflow in multiplication");
  return r;
}

inline u64 gcd_u64(u64 a, u64 b) {
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

inline u64 lcm_u64(u64 a, u64 b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul_u64(a / gcd_u64(a, b), b);
}

// g = ax + by
inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  if (b == 0) {
    x = (a < 0) ? -1 : 1;
    y = 0;
    return a < 0 ? -a : a;
  }
  i64 x1, y1;
  i64 g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = checked_sub(x1, checked_mul(a / b, y1));
  return g;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Deterministic for all 64-bit inputs with this witness set.
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace detail {

// Pollard-Brent with a fixed seed sequence: splits composites that survive
// trial division; primality of the pieces is certified by Miller-Rabin.
inline u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  Rng rng(n ^ 0x9e3779b97f4a7c15ULL);
  while (true) {
    u64 y = rng.below(n - 1) + 1, c = rng.below(n - 1) + 1, m = 128;
    u64 g = 1, r = 1, q = 1, x = 0, ys = 0;
    while (g == 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = (mulmod(y, y, n) + c) % n;
      for (u64 k = 0; k < r && g == 1; k += m) {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = (mulmod(y, y, n) + c) % n;
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = gcd_u64(q, n);
      }
      r <<= 1;
    }
    if (g == n) {
      g = 1;
      while (g == 1) {
        ys = (mulmod(ys, ys, n) + c) % n;
        g = gcd_u64(x > ys ? x - ys : ys - x, n);
      }
    }
    if (g != n) return g;
  }
}

inline void factor_rec(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_brent(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace detail

// Prime factorisation of a 64-bit integer, sorted, as (prime, exponent).
inline std::vector<std::pair<u64, int>> factor_u64(u64 n) {
  if (n == 0) throw input_error("cannot factor 0");
  std::vector<u64> primes;
  for (u64 p = 2; p < 10000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  detail::factor_rec(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<u64, int>> out;
  for (u64 p : primes) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.emplace_back(p, 1);
  }
  return out;
}

// Returns (p, k) with n = p^k if n is a prime power, nullopt-style via k = 0.
inline std::pair<u64, int> prime_power_split(u64 n) {
  if (n < 2) return {0, 0};
  auto f = factor_u64(n);
  if (f.size() != 1) return {0, 0};
  return f[0];
}

}  // namespace sptilt
