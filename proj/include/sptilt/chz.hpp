#pragma once

#include <string>
#include <variant>
#include <vector>

#include "sptilt/core.hpp"
#include "sptilt/module.hpp"
#include "sptilt/ring.hpp"
#include "sptilt/spectrum.hpp"

namespace sptilt {

struct HerCriterionResult {
  bool pass = false;
  FgModule t_R;              // Gamma_V(R) as a module
  Ideal t_ideal_gens;        // Gamma_V(R) as an ideal
  Ideal ann;                 // Ann(t(R))
  PrimeSet quotient_support; // Supp(R / Ann(t(R)))
};

// The derived-equivalence criterion for the hereditary torsion pair of
// Mod(R) supported on V: pass iff Supp(R/Ann(Gamma_V(R))) lies inside V.
// Over the built-in commutative noetherian rings this always passes; the
// caller treats `pass == false` as an internal-consistency failure.
inline HerCriterionResult her_criterion(const SpectrumOf& spec, const PrimeSet& v) {
  if (!spec.model.is_specialisation_closed(v))
    throw input_error("her_criterion requires a specialisation-closed set");
  HerCriterionResult res;
  res.t_ideal_gens = t_ideal(spec, v);
  res.t_R = torsion_radical(spec, ring_as_module(spec.ring), v).sub.submodule;
  res.ann = annihilator_of_ideal(spec.ring, res.t_ideal_gens);
  FgModule r_mod_ann = ring_mod_ideal(spec.ring, res.ann);
  res.quotient_support = module_support(spec, r_mod_ann);
  res.pass = spec.model.subset(res.quotient_support, v);
  return res;
}

using ComponentMatrix = std::variant<Mat<i64>, Mat<Poly>>;

// A short CHZ-sequence F -> M -> T -> 0 with F torsionfree and T torsion
// with respect to V, together with the map F -> M as one scalar matrix per
// ring component (rows indexed by the generators of M, factors first).
struct ChzWitness {
  RingDesc ring;
  FgModule m;
  PrimeSet v;
  FgModule f;
  std::vector<ComponentMatrix> map_f;
  FgModule t;
  bool tag_f_torsionfree = false;
  bool tag_t_torsion = false;
};

struct WitnessCheck {
  bool ok = true;
  std::vector<std::string> reasons;
};

namespace detail {

template <class Ops, class Part>
std::vector<typename Ops::Elem> generator_orders(const part_ops::View<Ops>& v, const Part& part) {
  std::vector<typename Ops::Elem> orders = part.factors;
  for (std::uint32_t r = 0; r < part.free_rank; ++r)
    orders.push_back(v.modulus ? *v.modulus : v.ops.zero());
  return orders;
}

// cokernel of the map given by `cols` into the part with the given
// generator orders (0 = free over the PID)
template <class Ops>
std::pair<std::vector<typename Ops::Elem>, std::uint32_t> cokernel_of_map(
    const Ops& ops, const std::vector<typename Ops::Elem>& orders,
    const Mat<typename Ops::Elem>& cols) {
  const std::size_t gens = orders.size();
  Mat<typename Ops::Elem> rel(gens);
  for (std::size_t i = 0; i < gens; ++i) {
    if (!cols.empty()) rel[i] = cols[i];
  }
  for (std::size_t i = 0; i < gens; ++i) {
    if (ops.is_zero(orders[i])) continue;
    for (std::size_t r = 0; r < gens; ++r) rel[r].push_back(r == i ? orders[i] : ops.zero());
  }
  return cokernel_invariants(ops, rel, gens);
}

}  // namespace detail

// Builds the short CHZ-sequence for M from the trace identity
// tr_{R/t(R)}(M) = ann_M(t(R)): F = (R/t(R))^k maps onto ann_M(t(R)) and
// T = M / ann_M(t(R)).
inline ChzWitness short_chz_witness(const SpectrumOf& spec, const FgModule& m_raw,
                                    const PrimeSet& v) {
  if (!spec.model.is_specialisation_closed(v))
    throw input_error("short_chz_witness requires a specialisation-closed set");
  auto comps = flatten_ring(spec.ring);
  FgModule m = canonical_module(spec.ring, m_raw);

  ChzWitness w{spec.ring, m, v, zero_module(spec.ring), {}, zero_module(spec.ring), false, false};
  Ideal t_id = t_ideal(spec, v);
  AnnResult ann = ann_by_ideal(spec.ring, m, t_id);
  w.t = ann.quotient;

  // F: one copy of R/t(R) per generator of ann_M(t(R)), mapped by the
  // recorded embedding scalars
  const ZOps zops;
  FgModule f_raw = zero_module(spec.ring);
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    std::size_t k = 0;
    for (const auto& g : ann.sub.embedding.gens)
      if (g.part == ci) ++k;
    if (comps[ci].is_poly()) {
      PolyOps pops(*comps[ci].field);
      auto view = part_ops::poly_view(pops, comps[ci]);
      auto orders = detail::generator_orders(view, std::get<PolyPart>(m.parts[ci]));
      Mat<Poly> colsm(orders.size());
      for (auto& row : colsm) row.assign(k, poly_zero());
      std::size_t j = 0;
      for (const auto& g : ann.sub.embedding.gens) {
        if (g.part != ci) continue;
        colsm[g.target][j] = std::get<Poly>(g.scalar);
        auto& fp = std::get<PolyPart>(f_raw.parts[ci]);
        fp.factors.push_back(std::get<Poly>(t_id.gens[ci]));
        ++j;
      }
      w.map_f.emplace_back(std::move(colsm));
    } else {
      Mat<i64> colsm;
      auto view = part_ops::z_view(zops, comps[ci]);
      auto orders = detail::generator_orders(view, std::get<ZPart>(m.parts[ci]));
      colsm.assign(orders.size(), {});
      for (auto& row : colsm) row.assign(k, 0);
      std::size_t j = 0;
      for (const auto& g : ann.sub.embedding.gens) {
        if (g.part != ci) continue;
        colsm[g.target][j] = std::get<i64>(g.scalar);
        auto& fp = std::get<ZPart>(f_raw.parts[ci]);
        fp.factors.push_back(std::get<i64>(t_id.gens[ci]));
        ++j;
      }
      w.map_f.emplace_back(std::move(colsm));
    }
  }
  w.f = canonical_module(spec.ring, f_raw);

  w.tag_f_torsionfree = module_is_zero(torsion_radical(spec, w.f, v).sub.submodule);
  w.tag_t_torsion = spec.model.subset(module_support(spec, w.t), v);
  if (!w.tag_t_torsion)
    throw internal_error("CHZ criterion violated: T is not supported in V (bug)");
  if (!w.tag_f_torsionfree)
    throw internal_error("CHZ construction produced a torsion F (bug)");
  return w;
}

// Pure validator; trusts nothing about the producer. Checks that the map is
// well defined, that T is the cokernel of F -> M, that Gamma_V(F) = 0 and
// that Supp(T) <= V.
inline WitnessCheck verify_witness(const SpectrumOf& spec, const ChzWitness& w) {
  WitnessCheck out;
  auto fail = [&](const std::string& r) {
    out.ok = false;
    out.reasons.push_back(r);
  };
  auto comps = flatten_ring(spec.ring);
  FgModule m, f, t;
  try {
    m = canonical_module(spec.ring, w.m);
    f = canonical_module(spec.ring, w.f);
    t = canonical_module(spec.ring, w.t);
  } catch (const input_error& e) {
    fail(std::string("malformed witness: ") + e.what());
    return out;
  }
  if (w.map_f.size() != comps.size()) {
    fail("map has the wrong number of components");
    return out;
  }
  if (!spec.model.is_specialisation_closed(w.v)) {
    fail("V is not specialisation-closed");
    return out;
  }

  const ZOps zops;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    auto run = [&](auto view, const auto& m_part, const auto& f_part, const auto& t_part,
                   const auto& cols) {
      const auto& ops = view.ops;
      auto m_orders = detail::generator_orders(view, m_part);
      auto f_orders = detail::generator_orders(view, f_part);
      if (cols.size() != m_orders.size()) {
        fail("map rows do not match the generators of M");
        return;
      }
      for (const auto& row : cols)
        if (row.size() != f_orders.size()) {
          fail("map columns do not match the generators of F");
          return;
        }
      // well-definedness: order(F_j) * entry must vanish on generator i
      for (std::size_t jcol = 0; jcol < f_orders.size(); ++jcol)
        for (std::size_t i = 0; i < m_orders.size(); ++i) {
          auto prod = ops.mul(f_orders[jcol], cols[i][jcol]);
          if (!ops.divides(m_orders[i], prod)) {
            fail("map not well-defined on generator " + std::to_string(jcol));
            return;
          }
        }
      auto [factors, free_rank] = detail::cokernel_of_map(ops, m_orders, cols);
      std::decay_t<decltype(m_part)> coker_raw;
      coker_raw.free_rank = free_rank;
      coker_raw.factors = std::move(factors);
      auto coker = part_ops::canonical_part(view, coker_raw);
      if (coker.factors != t_part.factors || coker.free_rank != t_part.free_rank) {
        fail("image != kernel: T is not the cokernel of the map");
        return;
      }
    };
    if (comps[ci].is_poly()) {
      PolyOps pops(*comps[ci].field);
      if (!std::holds_alternative<Mat<Poly>>(w.map_f[ci])) {
        fail("map component has the wrong coefficient type");
        continue;
      }
      run(part_ops::poly_view(pops, comps[ci]), std::get<PolyPart>(m.parts[ci]),
          std::get<PolyPart>(f.parts[ci]), std::get<PolyPart>(t.parts[ci]),
          std::get<Mat<Poly>>(w.map_f[ci]));
    } else {
      if (!std::holds_alternative<Mat<i64>>(w.map_f[ci])) {
        fail("map component has the wrong coefficient type");
        continue;
      }
      run(part_ops::z_view(zops, comps[ci]), std::get<ZPart>(m.parts[ci]),
          std::get<ZPart>(f.parts[ci]), std::get<ZPart>(t.parts[ci]),
          std::get<Mat<i64>>(w.map_f[ci]));
    }
  }

  if (!module_is_zero(torsion_radical(spec, f, w.v).sub.submodule))
    fail("F not torsionfree over V");
  if (!spec.model.subset(module_support(spec, t), w.v)) fail("T not supported in V");
  return out;
}

}  // namespace sptilt
