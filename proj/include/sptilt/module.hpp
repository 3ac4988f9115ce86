#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sptilt/core.hpp"
#include "sptilt/ring.hpp"
#include "sptilt/snf.hpp"
#include "sptilt/spectrum.hpp"

namespace sptilt {

// A finitely generated module in invariant-factor normal form, one part per
// flattened ring component. Generators of a part are ordered factors first,
// then the free generators.
struct ZPart {
  std::uint32_t free_rank = 0;
  std::vector<i64> factors;  // divisibility chain, canonical (positive)
};

struct PolyPart {
  std::uint32_t free_rank = 0;
  std::vector<Poly> factors;  // divisibility chain, monic
};

using ModulePart = std::variant<ZPart, PolyPart>;

struct FgModule {
  std::vector<ModulePart> parts;

  friend bool operator==(const FgModule& a, const FgModule& b) {
    if (a.parts.size() != b.parts.size()) return false;
    for (std::size_t i = 0; i < a.parts.size(); ++i) {
      if (a.parts[i].index() != b.parts[i].index()) return false;
      if (std::holds_alternative<ZPart>(a.parts[i])) {
        const auto &x = std::get<ZPart>(a.parts[i]), &y = std::get<ZPart>(b.parts[i]);
        if (x.free_rank != y.free_rank || x.factors != y.factors) return false;
      } else {
        const auto &x = std::get<PolyPart>(a.parts[i]), &y = std::get<PolyPart>(b.parts[i]);
        if (x.free_rank != y.free_rank || x.factors != y.factors) return false;
      }
    }
    return true;
  }
  friend bool operator!=(const FgModule& a, const FgModule& b) { return !(a == b); }
};

// A finite or cofinite set of prime elements of one component, or the whole
// component spectrum (`full` covers the generic point of dedekind models).
template <class E>
struct ComponentSet {
  bool full = false;
  bool cofinite = false;
  std::vector<E> list;  // members, or exceptions when cofinite
};

namespace part_ops {

template <class Ops>
struct View {
  const Ops& ops;
  std::optional<typename Ops::Elem> modulus;
};

inline View<ZOps> z_view(const ZOps& ops, const Component& c) {
  return {ops, c.kind == Component::Kind::quot_integers ? std::optional<i64>(c.n) : std::nullopt};
}

inline View<PolyOps> poly_view(const PolyOps& ops, const Component& c) {
  return {ops, c.kind == Component::Kind::quot_poly ? std::optional<Poly>(c.f) : std::nullopt};
}

enum class FactorClass { drop, free_generator, proper };

// Classify a raw factor: units contribute nothing, zero (or the modulus)
// contributes a free generator, anything else a proper cyclic factor.
template <class Ops>
FactorClass classify(const View<Ops>& v, typename Ops::Elem& e) {
  e = v.ops.canonical(e);
  if (v.modulus) {
    e = v.ops.gcd(e, *v.modulus);
    if (v.ops.is_zero(e) || e == *v.modulus) return FactorClass::free_generator;
  } else if (v.ops.is_zero(e)) {
    return FactorClass::free_generator;
  }
  if (v.ops.is_unit(e)) return FactorClass::drop;
  return FactorClass::proper;
}

// gcd/lcm smoothing into a divisibility chain
template <class Ops>
void chainify(const View<Ops>& v, std::vector<typename Ops::Elem>& f) {
  std::sort(f.begin(), f.end(),
            [&](const auto& a, const auto& b) { return v.ops.norm(a) < v.ops.norm(b); });
  const std::size_t cap = f.size() * f.size() + 2;
  for (std::size_t pass = 0; pass < cap; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i + 1 < f.size(); ++i)
      for (std::size_t j = i + 1; j < f.size(); ++j) {
        if (v.ops.divides(f[i], f[j])) continue;
        auto g = v.ops.gcd(f[i], f[j]);
        auto l = v.ops.canonical(v.ops.div(v.ops.mul(f[i], f[j]), g));
        f[i] = g;
        f[j] = l;
        changed = true;
      }
    if (!changed) return;
  }
  throw internal_error("invariant factor chain did not converge");
}

template <class Ops, class Part>
Part canonical_part(const View<Ops>& v, const Part& raw) {
  Part out;
  out.free_rank = raw.free_rank;
  for (auto e : raw.factors) {
    switch (classify(v, e)) {
      case FactorClass::drop: break;
      case FactorClass::free_generator: ++out.free_rank; break;
      case FactorClass::proper: out.factors.push_back(e); break;
    }
  }
  chainify(v, out.factors);
  // smoothing can create units (gcd of coprime factors) or the modulus
  // (lcm reaching it); classify once more, which keeps the chain intact
  std::vector<typename Ops::Elem> chained;
  chained.swap(out.factors);
  for (auto e : chained) {
    switch (classify(v, e)) {
      case FactorClass::drop: break;
      case FactorClass::free_generator: ++out.free_rank; break;
      case FactorClass::proper: out.factors.push_back(e); break;
    }
  }
  return out;
}

template <class Ops>
int valuation(const View<Ops>& v, typename Ops::Elem e, const typename Ops::Elem& p) {
  int val = 0;
  while (!v.ops.is_zero(e) && v.ops.divides(p, e)) {
    e = v.ops.div(e, p);
    ++val;
  }
  return val;
}

// The V-part of a factor d: the product of p^{v_p(d)} over primes p in the
// component set. Cofinite sets are handled by dividing out the exceptions,
// so no factorisation of d is ever needed.
template <class Ops>
typename Ops::Elem v_part(const View<Ops>& v, const ComponentSet<typename Ops::Elem>& s,
                          typename Ops::Elem d) {
  if (s.full) return d;
  if (s.cofinite) {
    for (const auto& p : s.list) {
      while (v.ops.divides(p, d)) d = v.ops.div(d, p);
    }
    return v.ops.canonical(d);
  }
  auto r = v.ops.one();
  for (const auto& p : s.list) {
    int val = valuation(v, d, p);
    for (int i = 0; i < val; ++i) r = v.ops.mul(r, p);
  }
  return v.ops.canonical(r);
}

}  // namespace part_ops

// ---- module-level API -------------------------------------------------------

inline void require_alignment(const std::vector<Component>& comps, const FgModule& m) {
  if (comps.size() != m.parts.size())
    throw input_error("module has " + std::to_string(m.parts.size()) + " parts but the ring has " +
                      std::to_string(comps.size()) + " components");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const bool poly = comps[i].is_poly();
    if (poly != std::holds_alternative<PolyPart>(m.parts[i]))
      throw input_error("module part " + std::to_string(i) + " has the wrong coefficient type");
  }
}

inline FgModule canonical_module(const RingDesc& ring, const FgModule& raw) {
  auto comps = flatten_ring(ring);
  require_alignment(comps, raw);
  FgModule out;
  const ZOps zops;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i].is_poly()) {
      PolyOps pops(*comps[i].field);
      out.parts.emplace_back(
          part_ops::canonical_part(part_ops::poly_view(pops, comps[i]), std::get<PolyPart>(raw.parts[i])));
    } else {
      out.parts.emplace_back(
          part_ops::canonical_part(part_ops::z_view(zops, comps[i]), std::get<ZPart>(raw.parts[i])));
    }
  }
  return out;
}

inline FgModule zero_module(const RingDesc& ring) {
  FgModule m;
  for (const auto& c : flatten_ring(ring)) {
    if (c.is_poly())
      m.parts.emplace_back(PolyPart{});
    else
      m.parts.emplace_back(ZPart{});
  }
  return m;
}

// R as a module over itself
inline FgModule ring_as_module(const RingDesc& ring) {
  FgModule m = zero_module(ring);
  for (auto& p : m.parts)
    std::visit([](auto& part) { part.free_rank = 1; }, p);
  return m;
}

inline bool module_is_zero(const FgModule& m) {
  for (const auto& p : m.parts) {
    bool z = std::visit([](const auto& part) { return part.free_rank == 0 && part.factors.empty(); }, p);
    if (!z) return false;
  }
  return true;
}

inline FgModule module_direct_sum(const RingDesc& ring, const FgModule& a, const FgModule& b) {
  auto comps = flatten_ring(ring);
  require_alignment(comps, a);
  require_alignment(comps, b);
  FgModule raw;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i].is_poly()) {
      PolyPart p = std::get<PolyPart>(a.parts[i]);
      const auto& q = std::get<PolyPart>(b.parts[i]);
      p.free_rank += q.free_rank;
      p.factors.insert(p.factors.end(), q.factors.begin(), q.factors.end());
      raw.parts.emplace_back(std::move(p));
    } else {
      ZPart p = std::get<ZPart>(a.parts[i]);
      const auto& q = std::get<ZPart>(b.parts[i]);
      p.free_rank += q.free_rank;
      p.factors.insert(p.factors.end(), q.factors.begin(), q.factors.end());
      raw.parts.emplace_back(std::move(p));
    }
  }
  return canonical_module(ring, raw);
}

inline std::optional<u64> module_card(const RingDesc& ring, const FgModule& m) {
  auto comps = flatten_ring(ring);
  require_alignment(comps, m);
  u64 card = 1;
  const ZOps zops;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    std::optional<u64> ring_card;
    if (comps[i].is_poly()) {
      PolyOps pops(*comps[i].field);
      auto v = part_ops::poly_view(pops, comps[i]);
      ring_card = v.modulus ? pops.residue_card(*v.modulus) : std::nullopt;
      const auto& part = std::get<PolyPart>(m.parts[i]);
      for (const auto& f : part.factors) card = checked_mul_u64(card, *pops.residue_card(f));
      for (std::uint32_t r = 0; r < part.free_rank; ++r) {
        if (!ring_card) return std::nullopt;
        card = checked_mul_u64(card, *ring_card);
      }
    } else {
      auto v = part_ops::z_view(zops, comps[i]);
      ring_card = v.modulus ? zops.residue_card(*v.modulus) : std::nullopt;
      const auto& part = std::get<ZPart>(m.parts[i]);
      for (const auto& f : part.factors) card = checked_mul_u64(card, *zops.residue_card(f));
      for (std::uint32_t r = 0; r < part.free_rank; ++r) {
        if (!ring_card) return std::nullopt;
        card = checked_mul_u64(card, *ring_card);
      }
    }
  }
  return card;
}

// ---- presentations ----------------------------------------------------------

// Cokernel of a presentation matrix over one component (rows = generators).
// Over quotient rings the modulus relations are appended before running SNF.
inline ModulePart part_from_presentation_z(const Component& c, Mat<i64> rel) {
  const ZOps ops;
  const std::size_t gens = rel.size();
  if (c.kind == Component::Kind::quot_integers) {
    for (std::size_t i = 0; i < gens; ++i) {
      std::vector<i64> col(gens, 0);
      col[i] = c.n;
      for (std::size_t r = 0; r < gens; ++r) rel[r].push_back(col[r]);
    }
  }
  auto [factors, free_rank] = cokernel_invariants(ops, rel, gens);
  ZPart part;
  part.free_rank = free_rank;
  part.factors = std::move(factors);
  return part;
}

inline ModulePart part_from_presentation_poly(const Component& c, Mat<Poly> rel) {
  PolyOps ops(*c.field);
  const std::size_t gens = rel.size();
  if (c.kind == Component::Kind::quot_poly) {
    for (std::size_t i = 0; i < gens; ++i) {
      for (std::size_t r = 0; r < gens; ++r) rel[r].push_back(r == i ? c.f : poly_zero());
    }
  }
  auto [factors, free_rank] = cokernel_invariants(ops, rel, gens);
  PolyPart part;
  part.free_rank = free_rank;
  part.factors = std::move(factors);
  return part;
}

// ---- component sets -----------------------------------------------------------

using AnyComponentSet = std::variant<ComponentSet<i64>, ComponentSet<Poly>>;

// Split a PrimeSet of the ring's spectrum into per-component prime lists.
inline std::vector<AnyComponentSet> component_sets(const SpectrumOf& spec, const PrimeSet& v) {
  auto comps = flatten_ring(spec.ring);
  spec.model.require_set(v);
  std::vector<AnyComponentSet> out;
  if (spec.model.is_dedekind()) {
    const Component& c = comps[0];
    const bool full = v.has_generic();  // spc-closed + generic point => everything
    if (c.is_poly()) {
      ComponentSet<Poly> s;
      s.full = full;
      s.cofinite = v.cofinite();
      if (!full)
        for (const auto& l : v.closed_list()) s.list.push_back(poly_from_string(*c.field, l));
      out.emplace_back(std::move(s));
    } else {
      ComponentSet<i64> s;
      s.full = full;
      s.cofinite = v.cofinite();
      if (!full)
        for (const auto& l : v.closed_list()) s.list.push_back(ZOps{}.from_string(l));
      out.emplace_back(std::move(s));
    }
    return out;
  }
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    std::size_t comp_primes = 0, in_v = 0;
    if (comps[ci].is_poly()) {
      ComponentSet<Poly> s;
      for (std::size_t i = 0; i < spec.primes.size(); ++i) {
        if (spec.primes[i].component != ci) continue;
        ++comp_primes;
        if (spec.model.member(v, Prime::finite(static_cast<std::uint32_t>(i)))) {
          s.list.push_back(std::get<Poly>(spec.primes[i].elem));
          ++in_v;
        }
      }
      s.full = comp_primes == in_v;
      out.emplace_back(std::move(s));
    } else {
      ComponentSet<i64> s;
      for (std::size_t i = 0; i < spec.primes.size(); ++i) {
        if (spec.primes[i].component != ci) continue;
        ++comp_primes;
        if (spec.model.member(v, Prime::finite(static_cast<std::uint32_t>(i)))) {
          s.list.push_back(std::get<i64>(spec.primes[i].elem));
          ++in_v;
        }
      }
      s.full = comp_primes == in_v;
      out.emplace_back(std::move(s));
    }
  }
  return out;
}

// ---- support ------------------------------------------------------------------

inline PrimeSet module_support(const SpectrumOf& spec, const FgModule& m, u64 seed = kDefaultSeed) {
  auto comps = flatten_ring(spec.ring);
  require_alignment(comps, m);
  const SpectrumModel& model = spec.model;
  PrimeSet acc = model.empty_set();
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const Component& c = comps[ci];
    // free part: the whole component spectrum
    const std::uint32_t free_rank =
        std::visit([](const auto& p) { return p.free_rank; }, m.parts[ci]);
    if (free_rank > 0) {
      if (model.is_dedekind()) return model.full_set();
      for (std::size_t i = 0; i < spec.primes.size(); ++i)
        if (spec.primes[i].component == ci)
          acc = model.unite(acc, model.singleton(Prime::finite(static_cast<std::uint32_t>(i))));
      continue;
    }
    if (c.is_poly()) {
      const auto& part = std::get<PolyPart>(m.parts[ci]);
      if (part.factors.empty()) continue;
      if (model.is_dedekind()) {
        // primes dividing the largest invariant factor
        for (auto& [p, e] : poly_factor(*c.field, part.factors.back(), seed))
          acc = model.unite(acc, model.singleton(Prime::closed(poly_to_string(p))));
      } else {
        PolyOps ops(*c.field);
        for (std::size_t i = 0; i < spec.primes.size(); ++i) {
          if (spec.primes[i].component != ci) continue;
          if (ops.divides(std::get<Poly>(spec.primes[i].elem), part.factors.back()))
            acc = model.unite(acc, model.singleton(Prime::finite(static_cast<std::uint32_t>(i))));
        }
      }
    } else {
      const auto& part = std::get<ZPart>(m.parts[ci]);
      if (part.factors.empty()) continue;
      if (model.is_dedekind()) {
        for (auto [p, e] : factor_u64(static_cast<u64>(part.factors.back())))
          acc = model.unite(acc, model.singleton(Prime::closed(std::to_string(p))));
      } else {
        for (std::size_t i = 0; i < spec.primes.size(); ++i) {
          if (spec.primes[i].component != ci) continue;
          if (part.factors.back() % std::get<i64>(spec.primes[i].elem) == 0)
            acc = model.unite(acc, model.singleton(Prime::finite(static_cast<std::uint32_t>(i))));
        }
      }
    }
  }
  return acc;
}

// ---- torsion radical and annihilators ------------------------------------------

// A submodule presented by scalar multiples of the ambient generators:
// generator g of the submodule maps to scalar * e_target inside its part.
struct SubmoduleEmbedding {
  struct Gen {
    std::uint32_t part;
    std::uint32_t target;  // ambient generator index: factors first, then free
    std::variant<i64, Poly> scalar;
  };
  std::vector<Gen> gens;
};

struct SubmoduleResult {
  FgModule submodule;
  SubmoduleEmbedding embedding;
};

namespace part_ops {

// Gamma_V on one part: keep the V-part of every cyclic factor; a free
// generator behaves like a factor equal to the modulus (PID free parts are
// torsionfree and contribute only when V is everything).
template <class Ops, class Part>
void torsion_radical_part(const View<Ops>& v, const ComponentSet<typename Ops::Elem>& s,
                          const Part& part, std::uint32_t part_index, Part& out,
                          SubmoduleEmbedding& emb,
                          std::vector<typename Ops::Elem>* quotient_factors,
                          std::uint32_t* quotient_free) {
  using E = typename Ops::Elem;
  std::uint32_t idx = 0;
  for (const auto& d : part.factors) {
    E dv = v_part(v, s, d);
    if (v.ops.is_unit(dv)) {
      if (quotient_factors) quotient_factors->push_back(d);
    } else if (dv == d) {
      out.factors.push_back(dv);
      emb.gens.push_back({part_index, idx, v.ops.one()});
    } else {
      out.factors.push_back(dv);
      emb.gens.push_back({part_index, idx, v.ops.div(d, dv)});
      if (quotient_factors) quotient_factors->push_back(v.ops.div(d, dv));
    }
    ++idx;
  }
  for (std::uint32_t r = 0; r < part.free_rank; ++r, ++idx) {
    if (v.modulus) {
      E dv = v_part(v, s, *v.modulus);
      if (v.ops.is_unit(dv)) {
        if (quotient_free) ++*quotient_free;
      } else if (dv == *v.modulus) {
        ++out.free_rank;
        emb.gens.push_back({part_index, idx, v.ops.one()});
      } else {
        out.factors.push_back(dv);
        emb.gens.push_back({part_index, idx, v.ops.div(*v.modulus, dv)});
        if (quotient_factors) quotient_factors->push_back(v.ops.div(*v.modulus, dv));
      }
    } else {
      // free over a PID: torsion only when V is the whole spectrum
      if (s.full) {
        ++out.free_rank;
        emb.gens.push_back({part_index, idx, v.ops.one()});
      } else if (quotient_free) {
        ++*quotient_free;
      }
    }
  }
}

}  // namespace part_ops

struct TorsionRadicalResult {
  SubmoduleResult sub;       // Gamma_V(M) with its embedding
  FgModule quotient;         // M / Gamma_V(M)
};

inline TorsionRadicalResult torsion_radical(const SpectrumOf& spec, const FgModule& m,
                                            const PrimeSet& v_set) {
  auto comps = flatten_ring(spec.ring);
  require_alignment(comps, m);
  if (!spec.model.is_specialisation_closed(v_set))
    throw input_error("torsion radical requires a specialisation-closed set");
  auto sets = component_sets(spec, v_set);
  TorsionRadicalResult res;
  const ZOps zops;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    if (comps[ci].is_poly()) {
      PolyOps pops(*comps[ci].field);
      auto view = part_ops::poly_view(pops, comps[ci]);
      PolyPart out;
      std::vector<Poly> qf;
      std::uint32_t qfree = 0;
      part_ops::torsion_radical_part(view, std::get<ComponentSet<Poly>>(sets[ci]),
                                     std::get<PolyPart>(m.parts[ci]),
                                     static_cast<std::uint32_t>(ci), out, res.sub.embedding, &qf,
                                     &qfree);
      res.sub.submodule.parts.emplace_back(std::move(out));
      PolyPart qp;
      qp.free_rank = qfree;
      qp.factors = std::move(qf);
      res.quotient.parts.emplace_back(std::move(qp));
    } else {
      auto view = part_ops::z_view(zops, comps[ci]);
      ZPart out;
      std::vector<i64> qf;
      std::uint32_t qfree = 0;
      part_ops::torsion_radical_part(view, std::get<ComponentSet<i64>>(sets[ci]),
                                     std::get<ZPart>(m.parts[ci]), static_cast<std::uint32_t>(ci),
                                     out, res.sub.embedding, &qf, &qfree);
      res.sub.submodule.parts.emplace_back(std::move(out));
      ZPart qp;
      qp.free_rank = qfree;
      qp.factors = std::move(qf);
      res.quotient.parts.emplace_back(std::move(qp));
    }
  }
  res.sub.submodule = canonical_module(spec.ring, res.sub.submodule);
  res.quotient = canonical_module(spec.ring, res.quotient);
  return res;
}

// Ann(M) as an ideal: zero when a part has a free generator, else the
// largest invariant factor (the unit ideal for a zero part).
inline Ideal annihilator_ideal(const RingDesc& ring, const FgModule& m) {
  auto comps = flatten_ring(ring);
  require_alignment(comps, m);
  Ideal out;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    if (comps[ci].is_poly()) {
      const auto& part = std::get<PolyPart>(m.parts[ci]);
      Poly g;
      if (part.free_rank > 0)
        g = poly_zero();
      else if (part.factors.empty())
        g = poly_const(1);
      else
        g = part.factors.back();
      out.gens.emplace_back(canon_ideal_gen_poly(comps[ci], g));
    } else {
      const auto& part = std::get<ZPart>(m.parts[ci]);
      i64 g;
      if (part.free_rank > 0)
        g = 0;
      else if (part.factors.empty())
        g = 1;
      else
        g = part.factors.back();
      out.gens.emplace_back(canon_ideal_gen_z(comps[ci], g));
    }
  }
  return out;
}

namespace part_ops {

// ann_M(I) = { m : m * I = 0 } on one part, for I = (g):
// in R/(d) this is (d : g) * R/(d), a cyclic module of order gcd(d, g).
template <class Ops, class Part>
void ann_part(const View<Ops>& v, const typename Ops::Elem& g, const Part& part,
              std::uint32_t part_index, Part& out, SubmoduleEmbedding& emb,
              std::vector<typename Ops::Elem>* quotient_factors, std::uint32_t* quotient_free) {
  using E = typename Ops::Elem;
  auto handle = [&](const E& d, std::uint32_t target) {
    E gc = v.ops.gcd(d, g);  // gcd(0, g) = g, gcd(d, 0) = d
    if (v.ops.is_zero(d) && v.ops.is_zero(g)) {
      // free PID generator annihilated by the zero ideal: everything
      ++out.free_rank;
      emb.gens.push_back({part_index, target, v.ops.one()});
      return;
    }
    if (v.ops.is_zero(d)) {
      // free PID generator, g != 0: only 0 is killed; quotient is free
      if (quotient_free) ++*quotient_free;
      return;
    }
    E c = v.ops.div(d, gc);  // multiplier; also the quotient factor
    if (!v.ops.is_unit(gc)) {
      out.factors.push_back(v.ops.canonical(gc));
      emb.gens.push_back({part_index, target, c});
    }
    if (quotient_factors && !v.ops.is_unit(c)) quotient_factors->push_back(v.ops.canonical(c));
  };
  std::uint32_t idx = 0;
  for (const auto& d : part.factors) handle(d, idx++);
  for (std::uint32_t r = 0; r < part.free_rank; ++r)
    handle(v.modulus ? *v.modulus : v.ops.zero(), idx++);
}

}  // namespace part_ops

struct AnnResult {
  SubmoduleResult sub;  // ann_M(I)
  FgModule quotient;    // M / ann_M(I)
};

inline AnnResult ann_by_ideal(const RingDesc& ring, const FgModule& m, const Ideal& ideal) {
  auto comps = flatten_ring(ring);
  require_alignment(comps, m);
  if (ideal.gens.size() != comps.size())
    throw input_error("ideal has the wrong number of components");
  AnnResult res;
  const ZOps zops;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    if (comps[ci].is_poly()) {
      PolyOps pops(*comps[ci].field);
      auto view = part_ops::poly_view(pops, comps[ci]);
      PolyPart out;
      std::vector<Poly> qf;
      std::uint32_t qfree = 0;
      part_ops::ann_part(view, canon_ideal_gen_poly(comps[ci], std::get<Poly>(ideal.gens[ci])),
                         std::get<PolyPart>(m.parts[ci]), static_cast<std::uint32_t>(ci), out,
                         res.sub.embedding, &qf, &qfree);
      res.sub.submodule.parts.emplace_back(std::move(out));
      PolyPart qp;
      qp.free_rank = qfree;
      qp.factors = std::move(qf);
      res.quotient.parts.emplace_back(std::move(qp));
    } else {
      auto view = part_ops::z_view(zops, comps[ci]);
      ZPart out;
      std::vector<i64> qf;
      std::uint32_t qfree = 0;
      part_ops::ann_part(view, canon_ideal_gen_z(comps[ci], std::get<i64>(ideal.gens[ci])),
                         std::get<ZPart>(m.parts[ci]), static_cast<std::uint32_t>(ci), out,
                         res.sub.embedding, &qf, &qfree);
      res.sub.submodule.parts.emplace_back(std::move(out));
      ZPart qp;
      qp.free_rank = qfree;
      qp.factors = std::move(qf);
      res.quotient.parts.emplace_back(std::move(qp));
    }
  }
  res.sub.submodule = canonical_module(ring, res.sub.submodule);
  res.quotient = canonical_module(ring, res.quotient);
  return res;
}

// ---- ring-level ideals ----------------------------------------------------------

// t(R) = Gamma_V(R) as an ideal: (n / n_V) over Z/n, (f / f_V) over
// F_q[x]/(f); over a PID the ideal is R for V = Spec and 0 otherwise.
inline Ideal t_ideal(const SpectrumOf& spec, const PrimeSet& v_set) {
  auto comps = flatten_ring(spec.ring);
  if (!spec.model.is_specialisation_closed(v_set))
    throw input_error("torsion ideal requires a specialisation-closed set");
  auto sets = component_sets(spec, v_set);
  Ideal out;
  const ZOps zops;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    if (comps[ci].is_poly()) {
      PolyOps pops(*comps[ci].field);
      auto view = part_ops::poly_view(pops, comps[ci]);
      const auto& s = std::get<ComponentSet<Poly>>(sets[ci]);
      Poly g;
      if (view.modulus) {
        Poly fv = part_ops::v_part(view, s, *view.modulus);
        g = poly_div(*comps[ci].field, *view.modulus, fv);
      } else {
        g = s.full ? poly_const(1) : poly_zero();
      }
      out.gens.emplace_back(canon_ideal_gen_poly(comps[ci], g));
    } else {
      auto view = part_ops::z_view(zops, comps[ci]);
      const auto& s = std::get<ComponentSet<i64>>(sets[ci]);
      i64 g;
      if (view.modulus) {
        i64 nv = part_ops::v_part(view, s, *view.modulus);
        g = *view.modulus / nv;
      } else {
        g = s.full ? 1 : 0;
      }
      out.gens.emplace_back(canon_ideal_gen_z(comps[ci], g));
    }
  }
  return out;
}

// (0 : I), the annihilator ideal of an ideal I = (g) per component.
inline Ideal annihilator_of_ideal(const RingDesc& ring, const Ideal& ideal) {
  auto comps = flatten_ring(ring);
  if (ideal.gens.size() != comps.size())
    throw input_error("ideal has the wrong number of components");
  Ideal out;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    if (comps[ci].is_poly()) {
      const Fq& F = *comps[ci].field;
      Poly g = canon_ideal_gen_poly(comps[ci], std::get<Poly>(ideal.gens[ci]));
      Poly r;
      if (comps[ci].kind == Component::Kind::quot_poly) {
        r = poly_div(F, comps[ci].f, poly_gcd(F, comps[ci].f, g));
      } else {
        r = g.is_zero() ? poly_const(1) : poly_zero();
      }
      out.gens.emplace_back(canon_ideal_gen_poly(comps[ci], r));
    } else {
      i64 g = canon_ideal_gen_z(comps[ci], std::get<i64>(ideal.gens[ci]));
      i64 r;
      if (comps[ci].kind == Component::Kind::quot_integers) {
        r = comps[ci].n / static_cast<i64>(gcd_u64(static_cast<u64>(comps[ci].n), static_cast<u64>(g)));
      } else {
        r = g == 0 ? 1 : 0;
      }
      out.gens.emplace_back(canon_ideal_gen_z(comps[ci], r));
    }
  }
  return out;
}

// R/I as a module
inline FgModule ring_mod_ideal(const RingDesc& ring, const Ideal& ideal) {
  auto comps = flatten_ring(ring);
  if (ideal.gens.size() != comps.size())
    throw input_error("ideal has the wrong number of components");
  FgModule raw = zero_module(ring);
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    if (comps[ci].is_poly()) {
      std::get<PolyPart>(raw.parts[ci]).factors.push_back(std::get<Poly>(ideal.gens[ci]));
    } else {
      std::get<ZPart>(raw.parts[ci]).factors.push_back(std::get<i64>(ideal.gens[ci]));
    }
  }
  return canonical_module(ring, raw);
}

// tr_{R/t(R)}(R) = Ann(t(R))
inline Ideal trace_of_quotient(const SpectrumOf& spec, const PrimeSet& v_set) {
  return annihilator_of_ideal(spec.ring, t_ideal(spec, v_set));
}

}  // namespace sptilt
