#pragma once

#include <chrono>
#include <string>
#include <variant>
#include <vector>

#include "sptilt/chz.hpp"
#include "sptilt/core.hpp"
#include "sptilt/heartclass.hpp"
#include "sptilt/module.hpp"
#include "sptilt/ring.hpp"
#include "sptilt/spectrum.hpp"
#include "sptilt/spfiltration.hpp"

namespace sptilt {

struct OracleReport {
  std::string case_id;
  std::string inputs;       // serialised inputs
  std::string closed_form;  // rendering of the production-path result
  std::string brute_force;  // rendering of the brute-force result
  bool agree = false;
  std::chrono::microseconds elapsed{0};
};

// ---- H_t-support brute force ---------------------------------------------------

// Direct search for specialisation-closed W, W' with
// U = (W & V) | (W' & V^c). Exponential; guarded by size caps.
inline bool ht_support_bruteforce(const SpectrumModel& m, const PrimeSet& v, const PrimeSet& u) {
  if (m.is_dedekind()) throw input_error("brute force requires a finite poset");
  if (m.size() > 20) throw input_error("poset too large");
  if (!m.is_specialisation_closed(v))
    throw input_error("tilting support must be specialisation-closed");
  auto ups = m.enumerate_spc_closed();
  if (ups.size() > 4096) throw input_error("poset too large");
  const PrimeSet vc = m.complement(v);
  for (const auto& w : ups)
    for (const auto& wp : ups) {
      PrimeSet cand = m.unite(m.intersect(w, v), m.intersect(wp, vc));
      if (m.equal(cand, u)) return true;
    }
  return false;
}

// ---- elementwise module machinery ----------------------------------------------

// Element-by-element computations over a finite base ring. Elements of the
// module are odometer codes over the generator residue cardinalities; the
// per-generator kill sets {s in R_c : s * r = 0} are materialised as
// bitmasks over the component ring.
class ElementwiseEnv {
 public:
  ElementwiseEnv(const SpectrumOf& spec, const FgModule& m, u64 card_cap = 100000)
      : spec_(spec), comps_(flatten_ring(spec.ring)) {
    require_alignment(comps_, m);
    for (const auto& c : comps_)
      if (!c.is_quotient()) throw input_error("elementwise oracle requires a finite base ring");
    auto card = module_card(spec.ring, m);
    if (!card || *card > card_cap) throw input_error("module too large for the elementwise oracle");
    total_ = *card;

    for (std::size_t ci = 0; ci < comps_.size(); ++ci) {
      const Component& c = comps_[ci];
      u64 rc = c.is_poly() ? *PolyOps(*c.field).residue_card(c.f)
                           : static_cast<u64>(c.n);
      if (rc > 20000) throw input_error("base ring too large for the elementwise oracle");
      ring_cards_.push_back(rc);
    }

    const ZOps zops;
    for (std::size_t ci = 0; ci < comps_.size(); ++ci) {
      const Component& c = comps_[ci];
      auto add_gen = [&](u64 card_i, std::vector<std::vector<u64>> kill) {
        gens_.push_back(Gen{static_cast<std::uint32_t>(ci), card_i, std::move(kill)});
      };
      if (c.is_poly()) {
        const Fq& F = *c.field;
        PolyOps pops(F);
        auto orders = detail::generator_orders(part_ops::poly_view(pops, c),
                                               std::get<PolyPart>(m.parts[ci]));
        for (const auto& d : orders) {
          const u64 card_i = *pops.residue_card(d);
          std::vector<std::vector<u64>> kill(card_i, zero_mask(ring_cards_[ci]));
          for (u64 r = 0; r < card_i; ++r) {
            Poly rp = decode_poly(F, r);
            for (u64 s = 0; s < ring_cards_[ci]; ++s) {
              Poly sp = decode_poly(F, s);
              if (poly_mod(F, poly_mul(F, sp, rp), d).is_zero()) set_bit(kill[r], s);
            }
          }
          add_gen(card_i, std::move(kill));
        }
      } else {
        auto orders = detail::generator_orders(part_ops::z_view(zops, c),
                                               std::get<ZPart>(m.parts[ci]));
        for (const auto& d : orders) {
          const u64 card_i = static_cast<u64>(d);
          std::vector<std::vector<u64>> kill(card_i, zero_mask(ring_cards_[ci]));
          for (u64 r = 0; r < card_i; ++r)
            for (u64 s = 0; s < ring_cards_[ci]; ++s)
              if (s * r % static_cast<u64>(d) == 0) set_bit(kill[r], s);
          add_gen(card_i, std::move(kill));
        }
      }
    }
  }

  u64 total() const { return total_; }
  std::size_t gen_count() const { return gens_.size(); }
  const std::vector<Component>& comps() const { return comps_; }

  std::vector<u64> decode(u64 code) const {
    std::vector<u64> r(gens_.size());
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      r[i] = code % gens_[i].card;
      code /= gens_[i].card;
    }
    return r;
  }

  // mask over ring elements of one component that avoid the prime (s not in p)
  std::vector<u64> not_in_prime_mask(std::uint32_t ci, const std::variant<i64, Poly>& elem) const {
    std::vector<u64> mask = zero_mask(ring_cards_[ci]);
    const Component& c = comps_[ci];
    for (u64 s = 0; s < ring_cards_[ci]; ++s) {
      bool in_p;
      if (c.is_poly()) {
        in_p = poly_divides(*c.field, std::get<Poly>(elem), decode_poly(*c.field, s));
      } else {
        in_p = s % static_cast<u64>(std::get<i64>(elem)) == 0;
      }
      if (!in_p) set_bit(mask, s);
    }
    return mask;
  }

  // Supp(R*m) <= V, tested prime by prime via the kill masks:
  // for every prime p of the spectrum outside V there must exist s outside
  // p with s*m = 0.
  std::vector<bool> gamma_membership(const PrimeSet& v) const {
    std::vector<std::pair<std::uint32_t, std::vector<u64>>> outside;  // (component, s-mask)
    if (spec_.model.is_dedekind()) throw input_error("elementwise oracle requires a finite base ring");
    for (std::size_t i = 0; i < spec_.primes.size(); ++i) {
      Prime p = Prime::finite(static_cast<std::uint32_t>(i));
      if (spec_.model.member(v, p)) continue;
      outside.emplace_back(spec_.primes[i].component,
                           not_in_prime_mask(spec_.primes[i].component, spec_.primes[i].elem));
    }
    std::vector<bool> member(total_, true);
    std::vector<u64> res(gens_.size(), 0);
    for (u64 code = 0; code < total_; ++code) {
      bool ok = true;
      for (const auto& [ci, pmask] : outside) {
        std::vector<u64> acc = pmask;
        for (std::size_t g = 0; g < gens_.size(); ++g) {
          if (gens_[g].comp != ci) continue;
          and_into(acc, gens_[g].kill[res[g]]);
        }
        if (!any_bit(acc)) {
          ok = false;
          break;
        }
      }
      member[code] = ok;
      // odometer increment
      for (std::size_t g = 0; g < gens_.size(); ++g) {
        if (++res[g] < gens_[g].card) break;
        res[g] = 0;
      }
    }
    return member;
  }

  // membership in the submodule described by embedding data: a targeted
  // generator must be a multiple of the recorded scalar, every other
  // generator must vanish
  std::vector<bool> embedded_membership(const SubmoduleEmbedding& emb) const {
    std::vector<std::vector<bool>> allowed(gens_.size());
    std::vector<bool> targeted(gens_.size(), false);
    for (std::size_t g = 0; g < gens_.size(); ++g)
      allowed[g].assign(gens_[g].card, false);
    // generator index: embedding targets are per part; convert to flat index
    std::vector<std::size_t> part_base(comps_.size(), 0);
    {
      std::size_t base = 0;
      for (std::size_t ci = 0; ci < comps_.size(); ++ci) {
        part_base[ci] = base;
        for (const auto& g : gens_)
          if (g.comp == ci) ++base;
      }
    }
    for (const auto& e : emb.gens) {
      const std::size_t flat = part_base[e.part] + e.target;
      targeted[flat] = true;
      const Component& c = comps_[e.part];
      for (u64 r = 0; r < gens_[flat].card; ++r) {
        bool ok;
        if (c.is_poly()) {
          ok = poly_divides(*c.field, std::get<Poly>(e.scalar), decode_poly(*c.field, r));
        } else {
          const u64 sc = static_cast<u64>(std::get<i64>(e.scalar));
          ok = r % sc == 0;
        }
        if (ok) allowed[flat][r] = true;
      }
    }
    for (std::size_t g = 0; g < gens_.size(); ++g)
      if (!targeted[g]) allowed[g][0] = true;  // only zero allowed
    std::vector<bool> member(total_, false);
    std::vector<u64> res(gens_.size(), 0);
    for (u64 code = 0; code < total_; ++code) {
      bool ok = true;
      for (std::size_t g = 0; g < gens_.size(); ++g)
        if (!allowed[g][res[g]]) {
          ok = false;
          break;
        }
      member[code] = ok;
      for (std::size_t g = 0; g < gens_.size(); ++g) {
        if (++res[g] < gens_[g].card) break;
        res[g] = 0;
      }
    }
    return member;
  }

  static Poly decode_poly(const Fq& F, u64 code) {
    Poly p;
    while (code > 0) {
      p.c.push_back(static_cast<std::uint32_t>(code % F.q()));
      code /= F.q();
    }
    poly_trim(p);
    return p;
  }

 private:
  struct Gen {
    std::uint32_t comp;
    u64 card;
    std::vector<std::vector<u64>> kill;  // per residue: bitmask over R_c
  };

  static std::vector<u64> zero_mask(u64 bits) { return std::vector<u64>((bits + 63) / 64, 0); }
  static void set_bit(std::vector<u64>& m, u64 i) { m[i / 64] |= 1ull << (i % 64); }
  static void and_into(std::vector<u64>& a, const std::vector<u64>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] &= b[i];
  }
  static bool any_bit(const std::vector<u64>& m) {
    for (u64 w : m)
      if (w) return true;
    return false;
  }

  const SpectrumOf& spec_;
  std::vector<Component> comps_;
  std::vector<u64> ring_cards_;
  std::vector<Gen> gens_;
  u64 total_ = 0;
};

// Gamma_V by element enumeration, as a membership vector over the module.
inline std::vector<bool> gamma_elementwise(const SpectrumOf& spec, const FgModule& m,
                                           const PrimeSet& v, u64 card_cap = 100000) {
  ElementwiseEnv env(spec, canonical_module(spec.ring, m), card_cap);
  return env.gamma_membership(v);
}

// Structural Gamma_V versus the elementwise loop, as membership vectors.
inline bool gamma_agrees(const SpectrumOf& spec, const FgModule& m_raw, const PrimeSet& v,
                         u64 card_cap = 100000) {
  FgModule m = canonical_module(spec.ring, m_raw);
  ElementwiseEnv env(spec, m, card_cap);
  auto brute = env.gamma_membership(v);
  auto structural = env.embedded_membership(torsion_radical(spec, m, v).sub.embedding);
  return brute == structural;
}

// Elementwise {r in R : r * t(R) = 0} compared against the ideal
// Ann(Gamma_V(R)) computed by ideal arithmetic.
inline bool trace_identity_agrees(const SpectrumOf& spec, const PrimeSet& v, u64 card_cap = 5000) {
  FgModule r_mod = ring_as_module(spec.ring);
  ElementwiseEnv env(spec, r_mod, card_cap);
  auto t_set = env.gamma_membership(v);  // t(R) elementwise

  // ring multiplication on codes, generator by generator (each part of R
  // has exactly one generator, the unit)
  auto comps = flatten_ring(spec.ring);
  const u64 total = env.total();
  std::vector<std::vector<u64>> decoded(total);
  for (u64 e = 0; e < total; ++e) decoded[e] = env.decode(e);
  auto product_is_zero = [&](const std::vector<u64>& rv, const std::vector<u64>& tv) {
    for (std::size_t g = 0; g < rv.size(); ++g) {
      const Component& c = comps[g];
      bool zero;
      if (c.is_poly()) {
        Poly prod = poly_mul(*c.field, ElementwiseEnv::decode_poly(*c.field, rv[g]),
                             ElementwiseEnv::decode_poly(*c.field, tv[g]));
        zero = poly_mod(*c.field, prod, c.f).is_zero();
      } else {
        zero = (rv[g] * tv[g]) % static_cast<u64>(c.n) == 0;
      }
      if (!zero) return false;
    }
    return true;
  };
  std::vector<bool> ann_set(total, true);
  for (u64 r = 0; r < total; ++r) {
    bool kills_all = true;
    for (u64 t = 0; t < total && kills_all; ++t) {
      if (!t_set[t]) continue;
      kills_all = product_is_zero(decoded[r], decoded[t]);
    }
    ann_set[r] = kills_all;
  }

  Ideal ann = annihilator_of_ideal(spec.ring, t_ideal(spec, v));
  for (u64 r = 0; r < total; ++r) {
    const auto& rv = decoded[r];
    bool in_ideal = true;
    for (std::size_t g = 0; g < rv.size(); ++g) {
      const Component& c = comps[g];
      if (c.is_poly()) {
        if (!poly_divides(*c.field, std::get<Poly>(ann.gens[g]),
                          ElementwiseEnv::decode_poly(*c.field, rv[g])))
          in_ideal = false;
      } else {
        if (rv[g] % static_cast<u64>(std::get<i64>(ann.gens[g])) != 0) in_ideal = false;
      }
      if (!in_ideal) break;
    }
    if (in_ideal != ann_set[r]) return false;
  }
  return true;
}

// ---- filtration oracles ---------------------------------------------------------

// decompose-then-recompose must reproduce the filtration, step supports
// must read off the filtration, and every step must satisfy the TiltStep
// interleaving invariants.
inline bool filtration_roundtrip_ok(const SpFiltration& psi_raw) {
  SpFiltration psi = psi_raw.canonical();
  auto steps = decompose(psi);
  if (recompose(psi.model(), steps) != psi) return false;
  const SpectrumModel& m = psi.model();
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto& st = steps[k];
    if (!m.equal(st.torsion_support, psi.level(-static_cast<int>(k)))) return false;
    if (!st.child.level(1).is_empty() || !st.parent.level(1).is_empty()) return false;
    for (int j = st.child.d_min() - 2; j <= st.child.d_max() + 1; ++j) {
      if (!m.subset(st.parent.level(j + 1), st.child.level(j))) return false;
      if (!m.subset(st.child.level(j), st.parent.level(j))) return false;
      if (!m.is_specialisation_closed(st.child.level(j))) return false;
    }
    if (!m.equal(torsion_support_between(st.child, st.parent), st.torsion_support)) return false;
  }
  return true;
}

// torsion_support_between against the pointwise heart-degree test:
// p belongs to supp(T) iff p lies in child(-n_p) for n_p = heart degree in
// the parent. Dedekind models are probed at the generic point plus a finite
// sample of closed points.
inline bool support_formula_pointwise_ok(const SpFiltration& child, const SpFiltration& parent) {
  const SpectrumModel& m = child.model();
  PrimeSet supp = torsion_support_between(child, parent);
  std::vector<Prime> probes;
  if (m.is_dedekind()) {
    probes.push_back(Prime::generic());
    std::vector<std::string> labels;
    auto collect = [&](const SpFiltration& f) {
      SpFiltration c = f.canonical();
      for (const auto& l : c.stored_levels())
        for (const auto& s : l.closed_list()) labels.push_back(s);
    };
    collect(child);
    collect(parent);
    for (const auto& l : labels) probes.push_back(Prime::closed(l));
    for (int extra = 0; extra < 3; ++extra) {
      Prime p = m.representative_closed(labels);
      labels.push_back(p.label());
      probes.push_back(p);
    }
  } else {
    for (std::size_t i = 0; i < m.size(); ++i)
      probes.push_back(Prime::finite(static_cast<std::uint32_t>(i)));
  }
  for (const Prime& p : probes) {
    const int np = heart_degree(parent, p);
    const bool pointwise = m.member(child.level(-np), p);
    if (pointwise != m.member(supp, p)) return false;
  }
  return true;
}

}  // namespace sptilt
