#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sptilt/core.hpp"
#include "sptilt/intmath.hpp"
#include "sptilt/poly.hpp"

namespace sptilt {

template <class E>
using Mat = std::vector<std::vector<E>>;

// Euclidean-domain operations for Z. Elements are checked 64-bit integers;
// inputs whose reduction would overflow are rejected rather than silently
// wrapped.
struct ZOps {
  using Elem = i64;
  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool is_zero(Elem a) const { return a == 0; }
  bool is_unit(Elem a) const { return a == 1 || a == -1; }
  Elem add(Elem a, Elem b) const { return checked_add(a, b); }
  Elem sub(Elem a, Elem b) const { return checked_sub(a, b); }
  Elem mul(Elem a, Elem b) const { return checked_mul(a, b); }
  Elem neg(Elem a) const { return checked_sub(0, a); }
  std::pair<Elem, Elem> divmod(Elem a, Elem b) const {
    Elem q = a / b, r = a % b;
    return {q, r};
  }
  Elem div(Elem a, Elem b) const { return a / b; }
  bool divides(Elem d, Elem a) const { return d == 0 ? a == 0 : a % d == 0; }
  u64 norm(Elem a) const { return a < 0 ? static_cast<u64>(-(a + 1)) + 1 : static_cast<u64>(a); }
  Elem canonical(Elem a) const { return a < 0 ? neg(a) : a; }
  Elem gcd(Elem a, Elem b) const {
    u64 g = gcd_u64(norm(a), norm(b));
    return static_cast<Elem>(g);
  }
  Elem lcm(Elem a, Elem b) const { return static_cast<Elem>(lcm_u64(norm(a), norm(b))); }
  Elem bezout(Elem a, Elem b, Elem& x, Elem& y) const { return sptilt::ext_gcd(a, b, x, y); }
  std::string to_string(Elem a) const { return std::to_string(a); }
  Elem from_string(const std::string& s) const {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw input_error("cannot parse integer: " + s);
    return v;
  }
  // |R/(d)|, nullopt when infinite
  std::optional<u64> residue_card(Elem d) const {
    if (d == 0) return std::nullopt;
    return norm(d);
  }
};

// Internal 128-bit integer ops: the classic intermediate-entry swell of
// Smith reduction is absorbed by the wider type, and results are narrowed
// back to 64 bits afterwards.
struct Z128Ops {
  using Elem = i128;
  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool is_zero(Elem a) const { return a == 0; }
  bool is_unit(Elem a) const { return a == 1 || a == -1; }
  static Elem ck(Elem r, bool of) {
    if (of) throw input_error("integer overflow in matrix reduction");
    return r;
  }
  Elem add(Elem a, Elem b) const {
    Elem r;
    return ck(r, __builtin_add_overflow(a, b, &r));
  }
  Elem sub(Elem a, Elem b) const {
    Elem r;
    return ck(r, __builtin_sub_overflow(a, b, &r));
  }
  Elem mul(Elem a, Elem b) const {
    Elem r;
    return ck(r, __builtin_mul_overflow(a, b, &r));
  }
  Elem neg(Elem a) const { return sub(0, a); }
  std::pair<Elem, Elem> divmod(Elem a, Elem b) const { return {a / b, a % b}; }
  Elem div(Elem a, Elem b) const { return a / b; }
  bool divides(Elem d, Elem a) const { return d == 0 ? a == 0 : a % d == 0; }
  u64 norm(Elem a) const {
    if (a < 0) a = -a;  // i128 min never appears: checked arithmetic
    u128 ua = static_cast<u128>(a);
    return ua > ~0ull ? ~0ull : static_cast<u64>(ua);
  }
  Elem canonical(Elem a) const { return a < 0 ? -a : a; }
  Elem gcd(Elem a, Elem b) const {
    a = canonical(a);
    b = canonical(b);
    while (b != 0) {
      Elem r = a % b;
      a = b;
      b = r;
    }
    return a;
  }
  Elem bezout(Elem a, Elem b, Elem& x, Elem& y) const {
    if (b == 0) {
      x = a < 0 ? -1 : 1;
      y = 0;
      return canonical(a);
    }
    Elem x1, y1;
    Elem g = bezout(b, a % b, x1, y1);
    x = y1;
    y = sub(x1, mul(a / b, y1));
    return g;
  }
  std::string to_string(Elem a) const {
    if (a == 0) return "0";
    bool neg_ = a < 0;
    std::string s;
    u128 v = neg_ ? static_cast<u128>(-a) : static_cast<u128>(a);
    while (v > 0) {
      s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
      v /= 10;
    }
    return neg_ ? "-" + s : s;
  }
};

// Euclidean-domain operations for F_q[x].
struct PolyOps {
  Fq F;
  explicit PolyOps(Fq f) : F(std::move(f)) {}
  using Elem = Poly;
  Elem zero() const { return poly_zero(); }
  Elem one() const { return poly_const(1); }
  bool is_zero(const Elem& a) const { return a.is_zero(); }
  bool is_unit(const Elem& a) const { return a.deg() == 0; }
  Elem add(const Elem& a, const Elem& b) const { return poly_add(F, a, b); }
  Elem sub(const Elem& a, const Elem& b) const { return poly_sub(F, a, b); }
  Elem mul(const Elem& a, const Elem& b) const { return poly_mul(F, a, b); }
  Elem neg(const Elem& a) const { return poly_neg(F, a); }
  std::pair<Elem, Elem> divmod(const Elem& a, const Elem& b) const { return poly_divmod(F, a, b); }
  Elem div(const Elem& a, const Elem& b) const { return poly_div(F, a, b); }
  bool divides(const Elem& d, const Elem& a) const { return poly_divides(F, d, a); }
  u64 norm(const Elem& a) const { return a.is_zero() ? 0 : static_cast<u64>(a.deg()) + 1; }
  Elem canonical(const Elem& a) const { return poly_monic(F, a); }
  Elem gcd(const Elem& a, const Elem& b) const { return poly_gcd(F, a, b); }
  Elem lcm(const Elem& a, const Elem& b) const { return poly_lcm(F, a, b); }
  Elem bezout(const Elem& a, const Elem& b, Elem& x, Elem& y) const {
    return poly_ext_gcd(F, a, b, x, y);
  }
  std::string to_string(const Elem& a) const { return poly_to_string(a); }
  Elem from_string(const std::string& s) const { return poly_from_string(F, s); }
  std::optional<u64> residue_card(const Elem& d) const {
    if (d.is_zero()) return std::nullopt;
    u64 card = 1;
    for (int i = 0; i < d.deg(); ++i) card = checked_mul_u64(card, F.q());
    return card;
  }
};

template <class Ops>
Mat<typename Ops::Elem> identity_matrix(const Ops& ops, std::size_t n) {
  Mat<typename Ops::Elem> m(n, std::vector<typename Ops::Elem>(n, ops.zero()));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = ops.one();
  return m;
}

template <class Ops>
Mat<typename Ops::Elem> mat_mul(const Ops& ops, const Mat<typename Ops::Elem>& a,
                                const Mat<typename Ops::Elem>& b) {
  const std::size_t m = a.size(), k = b.size(), n = k == 0 ? 0 : b[0].size();
  Mat<typename Ops::Elem> r(m, std::vector<typename Ops::Elem>(n, ops.zero()));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (ops.is_zero(a[i][t])) continue;
      for (std::size_t j = 0; j < n; ++j)
        r[i][j] = ops.add(r[i][j], ops.mul(a[i][t], b[t][j]));
    }
  return r;
}

template <class Ops>
struct SnfResult {
  Mat<typename Ops::Elem> d;                     // diagonal form
  Mat<typename Ops::Elem> u;                     // row transform, m x m
  Mat<typename Ops::Elem> v;                     // column transform, n x n
  std::vector<typename Ops::Elem> invariant_factors;  // nonzero diagonal, canonical
  std::size_t rank = 0;
};

// Smith normal form with U*A*V = D, D diagonal with d_1 | d_2 | ... .
// Column and row entries are cleared with one unimodular 2x2 Bezout block
// per entry, which keeps transform growth near the gcd scale; the identity
// U*A*V = D is verified before returning.
template <class Ops>
SnfResult<Ops> smith_normal_form(const Ops& ops, const Mat<typename Ops::Elem>& a) {
  using E = typename Ops::Elem;
  const std::size_t m = a.size(), n = m == 0 ? 0 : a[0].size();
  for (const auto& row : a)
    if (row.size() != n) throw input_error("matrix rows have unequal lengths");

  SnfResult<Ops> res;
  res.d = a;
  res.u = identity_matrix(ops, m);
  res.v = identity_matrix(ops, n);
  Mat<E>& d = res.d;
  Mat<E>& u = res.u;
  Mat<E>& v = res.v;

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(d[i], d[j]);
    std::swap(u[i], u[j]);
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < m; ++r) std::swap(d[r][i], d[r][j]);
    for (std::size_t r = 0; r < n; ++r) std::swap(v[r][i], v[r][j]);
  };
  auto add_row = [&](std::size_t dst, std::size_t src, const E& c) {  // row dst += c * row src
    for (std::size_t j = 0; j < n; ++j) d[dst][j] = ops.add(d[dst][j], ops.mul(c, d[src][j]));
    for (std::size_t j = 0; j < m; ++j) u[dst][j] = ops.add(u[dst][j], ops.mul(c, u[src][j]));
  };
  auto add_col = [&](std::size_t dst, std::size_t src, const E& c) {  // col dst += c * col src
    for (std::size_t r = 0; r < m; ++r) d[r][dst] = ops.add(d[r][dst], ops.mul(c, d[r][src]));
    for (std::size_t r = 0; r < n; ++r) v[r][dst] = ops.add(v[r][dst], ops.mul(c, v[r][src]));
  };
  // rows (t, i): [t] <- x*[t] + y*[i], [i] <- -(b/g)*[t0] + (a/g)*[i0];
  // determinant one, makes d[t][t] = gcd and d[i][t] = 0 in one step
  auto gcd_rows = [&](std::size_t t, std::size_t i) {
    const E a0 = d[t][t], b0 = d[i][t];
    if (ops.is_zero(b0)) return;
    if (ops.divides(a0, b0)) {
      add_row(i, t, ops.neg(ops.div(b0, a0)));
      return;
    }
    E x, y;
    E g = ops.bezout(a0, b0, x, y);
    const E as = ops.div(a0, g), bs = ops.div(b0, g);
    for (std::size_t j = 0; j < n; ++j) {
      E rt = ops.add(ops.mul(x, d[t][j]), ops.mul(y, d[i][j]));
      E ri = ops.sub(ops.mul(as, d[i][j]), ops.mul(bs, d[t][j]));
      d[t][j] = std::move(rt);
      d[i][j] = std::move(ri);
    }
    for (std::size_t j = 0; j < m; ++j) {
      E rt = ops.add(ops.mul(x, u[t][j]), ops.mul(y, u[i][j]));
      E ri = ops.sub(ops.mul(as, u[i][j]), ops.mul(bs, u[t][j]));
      u[t][j] = std::move(rt);
      u[i][j] = std::move(ri);
    }
  };
  auto gcd_cols = [&](std::size_t t, std::size_t j) {
    const E a0 = d[t][t], b0 = d[t][j];
    if (ops.is_zero(b0)) return;
    if (ops.divides(a0, b0)) {
      add_col(j, t, ops.neg(ops.div(b0, a0)));
      return;
    }
    E x, y;
    E g = ops.bezout(a0, b0, x, y);
    const E as = ops.div(a0, g), bs = ops.div(b0, g);
    for (std::size_t r = 0; r < m; ++r) {
      E ct = ops.add(ops.mul(x, d[r][t]), ops.mul(y, d[r][j]));
      E cj = ops.sub(ops.mul(as, d[r][j]), ops.mul(bs, d[r][t]));
      d[r][t] = std::move(ct);
      d[r][j] = std::move(cj);
    }
    for (std::size_t r = 0; r < n; ++r) {
      E ct = ops.add(ops.mul(x, v[r][t]), ops.mul(y, v[r][j]));
      E cj = ops.sub(ops.mul(as, v[r][j]), ops.mul(bs, v[r][t]));
      v[r][t] = std::move(ct);
      v[r][j] = std::move(cj);
    }
  };

  const std::size_t steps = std::min(m, n);
  for (std::size_t t = 0; t < steps; ++t) {
    while (true) {
      // minimal-norm nonzero entry of the lower-right submatrix
      bool found = false;
      std::size_t pi = t, pj = t;
      u64 best = 0;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (ops.is_zero(d[i][j])) continue;
          u64 nm = ops.norm(d[i][j]);
          if (!found || nm < best) {
            found = true;
            best = nm;
            pi = i;
            pj = j;
          }
        }
      if (!found) {
        t = steps;  // submatrix is zero, done
        break;
      }
      swap_rows(t, pi);
      swap_cols(t, pj);

      for (std::size_t i = t + 1; i < m; ++i) gcd_rows(t, i);
      for (std::size_t j = t + 1; j < n; ++j) gcd_cols(t, j);
      // column clearing can refill the pivot column
      bool clean = true;
      for (std::size_t i = t + 1; i < m && clean; ++i)
        if (!ops.is_zero(d[i][t])) clean = false;
      for (std::size_t j = t + 1; j < n && clean; ++j)
        if (!ops.is_zero(d[t][j])) clean = false;
      if (!clean) continue;

      // pivot is lone; enforce that it divides the rest of the submatrix
      bool divides_all = true;
      for (std::size_t i = t + 1; i < m && divides_all; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!ops.divides(d[t][t], d[i][j])) {
            add_row(t, i, ops.one());
            divides_all = false;
            break;
          }
      if (divides_all) break;
    }
    if (t >= steps) break;
  }

  // unit-normalise the diagonal
  for (std::size_t t = 0; t < steps; ++t) {
    if (ops.is_zero(d[t][t])) continue;
    E canon = ops.canonical(d[t][t]);
    if (!(canon == d[t][t])) {
      E unit = ops.div(canon, d[t][t]);
      for (std::size_t j = 0; j < n; ++j) d[t][j] = ops.mul(unit, d[t][j]);
      for (std::size_t j = 0; j < m; ++j) u[t][j] = ops.mul(unit, u[t][j]);
    }
    res.invariant_factors.push_back(d[t][t]);
    ++res.rank;
  }

  Mat<E> check = mat_mul(ops, mat_mul(ops, u, a), v);
  if (check != d) throw internal_error("smith normal form transform check failed");
  return res;
}

// Integer matrices run through the 128-bit ops internally; the results are
// narrowed back, rejecting inputs whose transforms genuinely exceed 64 bits.
inline SnfResult<ZOps> smith_normal_form(const ZOps&, const Mat<i64>& a) {
  Mat<i128> wide(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) wide[i].assign(a[i].begin(), a[i].end());
  auto res = smith_normal_form(Z128Ops{}, wide);
  auto narrow = [](i128 v) {
    if (v > static_cast<i128>(std::numeric_limits<i64>::max()) ||
        v < static_cast<i128>(std::numeric_limits<i64>::min()))
      throw input_error("matrix reduction exceeds the 64-bit range");
    return static_cast<i64>(v);
  };
  SnfResult<ZOps> out;
  out.rank = res.rank;
  auto narrow_mat = [&](const Mat<i128>& m) {
    Mat<i64> r(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      r[i].reserve(m[i].size());
      for (i128 e : m[i]) r[i].push_back(narrow(e));
    }
    return r;
  };
  out.d = narrow_mat(res.d);
  out.u = narrow_mat(res.u);
  out.v = narrow_mat(res.v);
  for (i128 f : res.invariant_factors) out.invariant_factors.push_back(narrow(f));
  return out;
}

// Invariant factors of the cokernel of a relation matrix: gens x rels
// columns. Returns (nonunit factors forming a divisibility chain, free rank).
template <class Ops>
std::pair<std::vector<typename Ops::Elem>, std::uint32_t> cokernel_invariants(
    const Ops& ops, const Mat<typename Ops::Elem>& rel, std::size_t gens) {
  if (rel.size() != gens) throw input_error("relation matrix has wrong number of rows");
  auto res = smith_normal_form(ops, rel);
  std::vector<typename Ops::Elem> factors;
  for (const auto& f : res.invariant_factors)
    if (!ops.is_unit(f)) factors.push_back(f);
  auto free_rank = static_cast<std::uint32_t>(gens - res.rank);
  return {factors, free_rank};
}

}  // namespace sptilt
