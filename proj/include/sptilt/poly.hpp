#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "sptilt/core.hpp"
#include "sptilt/fq.hpp"

namespace sptilt {

// Polynomial over F_q, little-endian coefficient codes, no trailing zeros.
// The field is passed explicitly to each operation.
struct Poly {
  std::vector<std::uint32_t> c;

  bool is_zero() const { return c.empty(); }
  int deg() const { return static_cast<int>(c.size()) - 1; }
  std::uint32_t lead() const { return c.back(); }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }
  friend bool operator!=(const Poly& a, const Poly& b) { return a.c != b.c; }
};

inline Poly poly_zero() { return {}; }
inline Poly poly_const(std::uint32_t v) { return v == 0 ? Poly{} : Poly{{v}}; }
inline Poly poly_x() { return Poly{{0, 1}}; }

inline void poly_trim(Poly& a) {
  while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
}

inline Poly poly_add(const Fq& F, const Poly& a, const Poly& b) {
  Poly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < r.c.size(); ++i)
    r.c[i] = F.add(i < a.c.size() ? a.c[i] : 0, i < b.c.size() ? b.c[i] : 0);
  poly_trim(r);
  return r;
}

inline Poly poly_neg(const Fq& F, const Poly& a) {
  Poly r = a;
  for (auto& x : r.c) x = F.neg(x);
  return r;
}

inline Poly poly_sub(const Fq& F, const Poly& a, const Poly& b) {
  return poly_add(F, a, poly_neg(F, b));
}

inline Poly poly_scale(const Fq& F, const Poly& a, std::uint32_t s) {
  if (s == 0) return {};
  Poly r = a;
  for (auto& x : r.c) x = F.mul(x, s);
  poly_trim(r);
  return r;
}

inline Poly poly_mul(const Fq& F, const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Poly r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
  }
  poly_trim(r);
  return r;
}

inline std::pair<Poly, Poly> poly_divmod(const Fq& F, Poly a, const Poly& b) {
  if (b.is_zero()) throw input_error("polynomial division by zero");
  const std::uint32_t inv_lead = F.inv(b.lead());
  Poly q;
  if (a.c.size() >= b.c.size()) q.c.assign(a.c.size() - b.c.size() + 1, 0);
  while (!a.is_zero() && a.c.size() >= b.c.size()) {
    std::uint32_t coef = F.mul(a.lead(), inv_lead);
    std::size_t off = a.c.size() - b.c.size();
    q.c[off] = coef;
    for (std::size_t j = 0; j < b.c.size(); ++j)
      a.c[off + j] = F.sub(a.c[off + j], F.mul(coef, b.c[j]));
    poly_trim(a);
  }
  poly_trim(q);
  return {q, a};
}

inline Poly poly_mod(const Fq& F, const Poly& a, const Poly& b) { return poly_divmod(F, a, b).second; }
inline Poly poly_div(const Fq& F, const Poly& a, const Poly& b) { return poly_divmod(F, a, b).first; }

inline bool poly_divides(const Fq& F, const Poly& d, const Poly& a) {
  if (d.is_zero()) return a.is_zero();
  return poly_mod(F, a, d).is_zero();
}

inline Poly poly_monic(const Fq& F, const Poly& a) {
  if (a.is_zero() || a.lead() == 1) return a;
  return poly_scale(F, a, F.inv(a.lead()));
}

inline Poly poly_gcd(const Fq& F, Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = poly_mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(F, a);
}

// monic g = x*a + y*b
inline Poly poly_ext_gcd(const Fq& F, const Poly& a, const Poly& b, Poly& x, Poly& y) {
  Poly r0 = a, r1 = b;
  Poly x0 = poly_const(1), x1 = poly_zero();
  Poly y0 = poly_zero(), y1 = poly_const(1);
  while (!r1.is_zero()) {
    auto [q, r] = poly_divmod(F, r0, r1);
    Poly nx = poly_sub(F, x0, poly_mul(F, q, x1));
    Poly ny = poly_sub(F, y0, poly_mul(F, q, y1));
    r0 = std::move(r1);
    r1 = std::move(r);
    x0 = std::move(x1);
    x1 = std::move(nx);
    y0 = std::move(y1);
    y1 = std::move(ny);
  }
  if (r0.is_zero()) {
    x = poly_zero();
    y = poly_zero();
    return poly_zero();
  }
  std::uint32_t inv = F.inv(r0.lead());
  x = poly_scale(F, x0, inv);
  y = poly_scale(F, y0, inv);
  return poly_monic(F, r0);
}

inline Poly poly_lcm(const Fq& F, const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return poly_monic(F, poly_div(F, poly_mul(F, a, b), poly_gcd(F, a, b)));
}

inline Poly poly_powmod(const Fq& F, Poly base, u64 e, const Poly& mod) {
  Poly r = poly_mod(F, poly_const(1), mod);
  base = poly_mod(F, base, mod);
  while (e > 0) {
    if (e & 1) r = poly_mod(F, poly_mul(F, r, base), mod);
    base = poly_mod(F, poly_mul(F, base, base), mod);
    e >>= 1;
  }
  return r;
}

inline Poly poly_derivative(const Fq& F, const Poly& a) {
  Poly r;
  if (a.c.size() <= 1) return r;
  r.c.resize(a.c.size() - 1, 0);
  for (std::size_t i = 1; i < a.c.size(); ++i) {
    // i mod p lies in the prime field, whose elements are the codes < p
    r.c[i - 1] = F.mul(a.c[i], static_cast<std::uint32_t>(i % F.p()));
  }
  poly_trim(r);
  return r;
}

// canonical order: degree first, then coefficients from the top
inline bool poly_less(const Poly& a, const Poly& b) {
  if (a.c.size() != b.c.size()) return a.c.size() < b.c.size();
  for (std::size_t i = a.c.size(); i-- > 0;)
    if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
  return false;
}

// ---- printing / parsing ---------------------------------------------------

inline std::string poly_to_string(const Poly& a) {
  if (a.is_zero()) return "0";
  std::string s;
  for (std::size_t i = a.c.size(); i-- > 0;) {
    if (a.c[i] == 0) continue;
    if (!s.empty()) s += "+";
    const bool unit = a.c[i] == 1;
    if (i == 0) {
      s += std::to_string(a.c[i]);
    } else {
      if (!unit) s += std::to_string(a.c[i]);
      s += "x";
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s;
}

inline Poly poly_from_string(const Fq& F, const std::string& str) {
  Poly r;
  std::size_t i = 0;
  auto fail = [&]() { throw input_error("cannot parse polynomial: " + str); };
  if (str.empty()) fail();
  while (i < str.size()) {
    if (str[i] == '+') ++i;
    if (i >= str.size()) fail();
    u64 coef = 1;
    bool saw_digits = false;
    u64 digits = 0;
    while (i < str.size() && str[i] >= '0' && str[i] <= '9') {
      digits = digits * 10 + static_cast<u64>(str[i] - '0');
      saw_digits = true;
      ++i;
    }
    if (saw_digits) coef = digits;
    std::size_t expo = 0;
    if (i < str.size() && (str[i] == 'x' || str[i] == 'X')) {
      ++i;
      expo = 1;
      if (i < str.size() && str[i] == '^') {
        ++i;
        std::size_t e = 0;
        bool saw = false;
        while (i < str.size() && str[i] >= '0' && str[i] <= '9') {
          e = e * 10 + static_cast<std::size_t>(str[i] - '0');
          saw = true;
          ++i;
        }
        if (!saw) fail();
        expo = e;
      }
    } else if (!saw_digits) {
      fail();
    }
    if (coef >= F.q()) throw input_error("coefficient out of range for F_q: " + str);
    if (expo > 4096) throw input_error("polynomial degree too large: " + str);
    if (r.c.size() < expo + 1) r.c.resize(expo + 1, 0);
    r.c[expo] = F.add(r.c[expo], static_cast<std::uint32_t>(coef));
  }
  poly_trim(r);
  return r;
}

// ---- factorisation ----------------------------------------------------------

namespace detail {

inline Poly poly_pth_root(const Fq& F, const Poly& a) {
  // a = g(x^p) with coefficients in F_{p^k}; the p-th root has coefficients
  // c^(p^(k-1))
  Poly r;
  const std::uint32_t p = F.p();
  r.c.resize(a.c.size() / p + 1, 0);
  u64 e = 1;
  for (std::uint32_t i = 1; i < F.degree(); ++i) e *= p;
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    if (i % p != 0) throw internal_error("not a p-th power");
    r.c[i / p] = F.pow(a.c[i], e);
  }
  poly_trim(r);
  return r;
}

inline void squarefree_decomposition(const Fq& F, const Poly& f,
                                     std::vector<std::pair<Poly, int>>& out, int mult) {
  // Yun's algorithm adapted to characteristic p
  Poly fp = poly_derivative(F, f);
  if (fp.is_zero()) {
    if (f.deg() <= 0) return;
    squarefree_decomposition(F, poly_pth_root(F, f), out, mult * static_cast<int>(F.p()));
    return;
  }
  Poly c = poly_gcd(F, f, fp);
  Poly w = poly_div(F, f, c);
  int i = 1;
  while (w.deg() > 0) {
    Poly y = poly_gcd(F, w, c);
    Poly z = poly_div(F, w, y);
    if (z.deg() > 0) out.emplace_back(poly_monic(F, z), mult * i);
    w = y;
    c = poly_div(F, c, y);
    ++i;
  }
  if (c.deg() > 0) squarefree_decomposition(F, c, out, mult);
}

// one random split of a squarefree product of irreducibles of degree d
inline bool edf_split(const Fq& F, const Poly& f, int d, Rng& rng, Poly& out_factor) {
  const int n = f.deg();
  Poly h;
  h.c.resize(static_cast<std::size_t>(n), 0);
  for (auto& c : h.c) c = static_cast<std::uint32_t>(rng.below(F.q()));
  poly_trim(h);
  if (h.deg() < 1) return false;
  Poly g = poly_gcd(F, f, h);
  if (g.deg() > 0 && g.deg() < n) {
    out_factor = g;
    return true;
  }
  Poly acc;
  if (F.p() == 2) {
    // trace map over F_{2^(m*d)}
    const std::uint32_t m = F.degree();
    acc = h;
    Poly cur = h;
    for (std::uint32_t i = 1; i < m * static_cast<std::uint32_t>(d); ++i) {
      cur = poly_mod(F, poly_mul(F, cur, cur), f);
      acc = poly_add(F, acc, cur);
    }
  } else {
    // h^((q^d-1)/2) = N^((q-1)/2) with N the product of the q^i-Frobenius
    // orbit of h
    Poly nrm = poly_mod(F, h, f);
    Poly fr = nrm;
    for (int i = 1; i < d; ++i) {
      fr = poly_powmod(F, fr, F.q(), f);
      nrm = poly_mod(F, poly_mul(F, nrm, fr), f);
    }
    acc = poly_powmod(F, nrm, (static_cast<u64>(F.q()) - 1) / 2, f);
    acc = poly_sub(F, acc, poly_const(1));
  }
  g = poly_gcd(F, f, acc);
  if (g.deg() > 0 && g.deg() < n) {
    out_factor = g;
    return true;
  }
  return false;
}

inline void equal_degree_factor(const Fq& F, const Poly& f, int d, Rng& rng,
                                std::vector<Poly>& out) {
  if (f.deg() == d) {
    out.push_back(poly_monic(F, f));
    return;
  }
  Poly g;
  while (!edf_split(F, f, d, rng, g)) {
  }
  equal_degree_factor(F, g, d, rng, out);
  equal_degree_factor(F, poly_div(F, f, g), d, rng, out);
}

}  // namespace detail

// Full factorisation of a nonzero polynomial into monic irreducibles with
// multiplicities, sorted canonically. Squarefree decomposition, then
// distinct-degree splitting, then Cantor-Zassenhaus with a seeded RNG.
inline std::vector<std::pair<Poly, int>> poly_factor(const Fq& F, const Poly& f0,
                                                     u64 seed = kDefaultSeed) {
  if (f0.is_zero()) throw input_error("cannot factor the zero polynomial");
  std::vector<std::pair<Poly, int>> sqf;
  detail::squarefree_decomposition(F, poly_monic(F, f0), sqf, 1);
  Rng rng(seed ^ 0xfac708ULL);
  std::vector<std::pair<Poly, int>> out;
  for (auto& [part, mult] : sqf) {
    // distinct-degree
    Poly rest = part;
    Poly h = poly_mod(F, poly_x(), rest);
    for (int d = 1; rest.deg() > 0 && 2 * d <= rest.deg(); ++d) {
      h = poly_powmod(F, h, F.q(), rest);
      Poly g = poly_gcd(F, rest, poly_sub(F, h, poly_mod(F, poly_x(), rest)));
      if (g.deg() > 0) {
        std::vector<Poly> irr;
        detail::equal_degree_factor(F, g, d, rng, irr);
        for (auto& p : irr) out.emplace_back(p, mult);
        rest = poly_div(F, rest, g);
        h = poly_mod(F, h, rest);
      }
    }
    if (rest.deg() > 0) out.emplace_back(poly_monic(F, rest), mult);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
  return out;
}

inline bool poly_irreducible(const Fq& F, const Poly& f, u64 seed = kDefaultSeed) {
  if (f.deg() < 1) return false;
  auto fac = poly_factor(F, f, seed);
  return fac.size() == 1 && fac[0].second == 1;
}

}  // namespace sptilt
