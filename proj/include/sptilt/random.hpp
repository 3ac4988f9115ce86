#pragma once

#include <string>
#include <vector>

#include "sptilt/core.hpp"
#include "sptilt/module.hpp"
#include "sptilt/ring.hpp"
#include "sptilt/spectrum.hpp"
#include "sptilt/spfiltration.hpp"

namespace sptilt {

// Random finite poset on <= max_primes elements: a random DAG on p0..pk
// with edges i -> j only for i < j, then transitively closed by the model.
inline SpectrumModel random_poset(Rng& rng, std::size_t max_primes, bool dualising = false) {
  const std::size_t n = 1 + rng.below(max_primes);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  std::vector<std::pair<std::string, std::string>> rel;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.below(100) < 35) rel.emplace_back(names[i], names[j]);
  return SpectrumModel::finite_poset(names, rel, dualising);
}

inline PrimeSet random_subset(const SpectrumModel& m, Rng& rng) {
  if (m.is_dedekind()) {
    static const char* pool[] = {"2", "3", "5", "7", "11", "13", "17", "19", "23", "29"};
    std::vector<std::string> picks;
    for (const char* p : pool)
      if (rng.coin() && rng.coin()) picks.push_back(p);
    const bool cof = rng.coin();
    const bool gen = rng.below(4) == 0;
    return cof ? m.cofinite_closed_set(picks, gen) : m.finite_closed_set(picks, gen);
  }
  PrimeSet s = m.empty_set();
  for (std::size_t i = 0; i < m.size(); ++i)
    if (rng.coin()) s = m.unite(s, m.singleton(Prime::finite(static_cast<std::uint32_t>(i))));
  return s;
}

inline PrimeSet random_spc_closed(const SpectrumModel& m, Rng& rng) {
  if (m.is_dedekind()) {
    // trichotomy: empty, closed points (finite or cofinite), or everything
    switch (rng.below(4)) {
      case 0: return m.empty_set();
      case 1: return m.full_set();
      default: {
        PrimeSet s = random_subset(m, rng);
        return s.has_generic() ? m.full_set() : s;
      }
    }
  }
  return m.specialization_closure(random_subset(m, rng));
}

// Random valid filtration with psi(1) = {} and at most max_active stored
// degrees: a decreasing chain of specialisation-closed sets ending at 0.
inline SpFiltration random_filtration(const SpectrumModel& m, Rng& rng,
                                      std::size_t max_active = 5) {
  const std::size_t active = 1 + rng.below(max_active);
  std::vector<PrimeSet> levels(active, m.empty_set());
  PrimeSet cur = random_spc_closed(m, rng);
  for (std::size_t i = active; i-- > 0;) {
    // grow as we go down so the chain decreases upward
    cur = m.unite(cur, random_spc_closed(m, rng));
    cur = m.specialization_closure(cur);
    levels[i] = cur;
  }
  const int d_min = -static_cast<int>(active) + 1;
  return SpFiltration(m, d_min, levels).canonical();
}

// Repairs a random filtration into one satisfying the weak Cousin
// condition by enlarging lower levels until stable.
inline SpFiltration random_weak_cousin_filtration(const SpectrumModel& m, Rng& rng,
                                                  std::size_t max_active = 5) {
  if (m.is_dedekind()) {
    // weak Cousin over a dedekind model: any level containing a closed
    // point forces the next level down to be everything
    const std::size_t active = 1 + rng.below(max_active);
    std::vector<PrimeSet> levels(active, m.empty_set());
    PrimeSet top = random_spc_closed(m, rng);
    levels[active - 1] = top;
    for (std::size_t i = active - 1; i-- > 0;) {
      bool has_closed = levels[i + 1].cofinite() || !levels[i + 1].closed_list().empty();
      levels[i] = has_closed ? m.full_set() : random_spc_closed(m, rng);
    }
    return SpFiltration(m, -static_cast<int>(active) + 1, levels).canonical();
  }
  SpFiltration phi = random_filtration(m, rng, max_active);
  for (int guard = 0; guard < 256; ++guard) {
    auto rep = weak_cousin(phi);
    if (rep.ok) return phi;
    SpFiltration c = phi.canonical();
    std::vector<PrimeSet> levels;
    int lo = c.d_min() - 1;
    for (int j = lo; j <= c.d_max(); ++j) levels.push_back(c.level(j));
    for (const auto& viol : rep.violations) {
      const int idx = viol.degree - 1 - lo;
      if (idx >= 0 && idx < static_cast<int>(levels.size()))
        levels[static_cast<std::size_t>(idx)] = m.specialization_closure(
            m.unite(levels[static_cast<std::size_t>(idx)], m.singleton(viol.p)));
    }
    // restore the decreasing property downward
    for (std::size_t i = levels.size(); i-- > 1;)
      levels[i - 1] = m.unite(levels[i - 1], levels[i]);
    phi = SpFiltration(m, lo, levels).canonical();
  }
  throw internal_error("weak Cousin repair did not converge");
}

inline RingDesc random_quotient_ring(Rng& rng) {
  if (rng.coin()) {
    static const u64 qs[] = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16};
    const std::uint32_t q = static_cast<std::uint32_t>(qs[rng.below(10)]);
    Fq F(q);
    const int deg = 1 + static_cast<int>(rng.below(8));
    Poly f;
    f.c.assign(static_cast<std::size_t>(deg) + 1, 0);
    for (int i = 0; i < deg; ++i) f.c[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(rng.below(q));
    f.c[static_cast<std::size_t>(deg)] = 1;
    return RingDesc(QuotPolyRing{q, f});
  }
  return RingDesc(QuotZRing{static_cast<i64>(2 + rng.below(999999))});
}

// Small enough for element-by-element oracles (|R| stays below ~1000).
inline RingDesc random_small_quotient_ring(Rng& rng) {
  if (rng.coin()) {
    static const u64 qs[] = {2, 3, 4};
    const std::uint32_t q = static_cast<std::uint32_t>(qs[rng.below(3)]);
    const int deg = 1 + static_cast<int>(rng.below(q == 2 ? 6 : 4));
    Poly f;
    f.c.assign(static_cast<std::size_t>(deg) + 1, 0);
    for (int i = 0; i < deg; ++i) f.c[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(rng.below(q));
    f.c[static_cast<std::size_t>(deg)] = 1;
    return RingDesc(QuotPolyRing{q, f});
  }
  return RingDesc(QuotZRing{static_cast<i64>(2 + rng.below(718))});
}

// The acceptance mix: Z/n, F_q[x]/(f), small products of those, and Z.
inline RingDesc random_ring(Rng& rng) {
  switch (rng.below(8)) {
    case 0: return RingDesc(ZZRing{});
    case 1:
    case 2: {
      std::vector<RingDesc> fs;
      const std::size_t k = 2 + rng.below(2);
      for (std::size_t i = 0; i < k; ++i) fs.push_back(random_quotient_ring(rng));
      return RingDesc(ProductRing{std::move(fs)});
    }
    default: return random_quotient_ring(rng);
  }
}

// Random module with bounded cardinality over a quotient-based ring (free
// generators allowed over any base).
inline FgModule random_module(const RingDesc& ring, Rng& rng, u64 card_bound = 2000) {
  auto comps = flatten_ring(ring);
  FgModule raw = zero_module(ring);
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const Component& c = comps[ci];
    const std::size_t k = rng.below(4);
    if (c.is_poly()) {
      auto& part = std::get<PolyPart>(raw.parts[ci]);
      const Fq& F = *c.field;
      for (std::size_t t = 0; t < k; ++t) {
        const int max_deg = c.kind == Component::Kind::quot_poly ? c.f.deg() : 4;
        const int deg = 1 + static_cast<int>(rng.below(static_cast<u64>(max_deg)));
        Poly g;
        g.c.assign(static_cast<std::size_t>(deg) + 1, 0);
        for (int i = 0; i < deg; ++i)
          g.c[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(rng.below(F.q()));
        g.c[static_cast<std::size_t>(deg)] = 1;
        part.factors.push_back(g);
      }
      if (rng.below(3) == 0) part.free_rank = 1;
    } else {
      auto& part = std::get<ZPart>(raw.parts[ci]);
      const i64 cap = c.kind == Component::Kind::quot_integers ? c.n : 60;
      for (std::size_t t = 0; t < k; ++t)
        part.factors.push_back(2 + static_cast<i64>(rng.below(static_cast<u64>(cap))));
      if (rng.below(3) == 0) part.free_rank = 1;
    }
  }
  FgModule m = canonical_module(ring, raw);
  // trim factors until the size bound holds (free parts over PIDs may stay)
  while (true) {
    bool trimmed = false;
    try {
      auto card = module_card(ring, m);
      if (!card || *card <= card_bound) break;
    } catch (const input_error&) {
      // overflow counts as too large
    }
    for (auto& p : m.parts) {
      bool done = std::visit(
          [&](auto& part) {
            if (!part.factors.empty()) {
              part.factors.pop_back();
              return true;
            }
            return false;
          },
          p);
      if (done) {
        trimmed = true;
        break;
      }
    }
    if (!trimmed) break;
  }
  return canonical_module(ring, m);
}

}  // namespace sptilt
