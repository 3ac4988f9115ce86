#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "sptilt/core.hpp"
#include "sptilt/spectrum.hpp"
#include "sptilt/spfiltration.hpp"

namespace sptilt {

// A hereditary torsion pair in the heart H_phi, determined by its support.
struct SupportTorsionPair {
  SpFiltration heart;
  PrimeSet support;
  bool finite_type = true;
};

// The bijection between hereditary torsion pairs of finite type in H_phi
// and specialisation-closed subsets, available once phi is restrictable.
class FiniteTypeBijection {
 public:
  explicit FiniteTypeBijection(SpFiltration heart) : heart_(std::move(heart)) {}

  const SpFiltration& heart() const { return heart_; }

  SupportTorsionPair encode(const PrimeSet& v) const {
    heart_.model().require_set(v);
    if (!heart_.model().is_specialisation_closed(v))
      throw input_error("support of a finite-type pair must be specialisation-closed");
    return SupportTorsionPair{heart_, v, true};
  }

  PrimeSet decode(const SupportTorsionPair& t) const {
    if (t.heart != heart_) throw input_error("torsion pair belongs to a different heart");
    return t.support;
  }

  std::vector<SupportTorsionPair> enumerate() const {
    std::vector<SupportTorsionPair> out;
    heart_.model().for_each_spc_closed(
        [&](const PrimeSet& v) { out.push_back(SupportTorsionPair{heart_, v, true}); });
    return out;
  }

 private:
  SpFiltration heart_;
};

inline FiniteTypeBijection finite_type_pairs(const SpFiltration& phi) {
  phi.require_valid();
  if (is_restrictable(phi) == Restrictable::no)
    throw input_error("bijection only established for restrictable hearts");
  return FiniteTypeBijection(phi.canonical());
}

enum class PerfectAssumption { automatic, assumed };

struct HtSupportResult {
  bool is_support = false;
  // true when the perfectness hypothesis was neither assumed nor implied by
  // Krull dimension <= 1, so the verdict is conditional on it
  bool conditional = false;
  // a witnessing pair U = (W & V) | (W' & V^c) when is_support holds
  std::optional<std::pair<PrimeSet, PrimeSet>> witness;
};

// Membership test for supports of hereditary torsion classes in the heart
// of the HRS-tilt of Mod(R) at the (perfect) torsion pair supported on V:
// U is such a support iff U = (W & V) | (W' & V^c) for specialisation-
// closed W, W'. Closed form: the V-part of U must be relatively closed in
// V and likewise for the complement part.
inline HtSupportResult is_ht_support(const SpectrumModel& m, const PrimeSet& v, const PrimeSet& u,
                                     PerfectAssumption perfect = PerfectAssumption::automatic) {
  m.require_set(v);
  m.require_set(u);
  if (!m.is_specialisation_closed(v))
    throw input_error("tilting support must be specialisation-closed");
  HtSupportResult res;
  res.conditional = perfect == PerfectAssumption::automatic && m.krull_dim() > 1;
  const PrimeSet vc = m.complement(v);
  const PrimeSet uv = m.intersect(u, v);
  const PrimeSet uvc = m.intersect(u, vc);
  const PrimeSet w = m.specialization_closure(uv);
  const PrimeSet wp = m.specialization_closure(uvc);
  res.is_support = m.equal(m.intersect(w, v), uv) && m.equal(m.intersect(wp, vc), uvc);
  if (res.is_support) res.witness = std::make_pair(w, wp);
  return res;
}

inline void require_same_heart(const SupportTorsionPair& a, const SupportTorsionPair& b) {
  if (a.heart != b.heart) throw input_error("torsion pairs live in different hearts");
}

inline SupportTorsionPair meet(const SupportTorsionPair& a, const SupportTorsionPair& b) {
  require_same_heart(a, b);
  return SupportTorsionPair{a.heart, a.heart.model().intersect(a.support, b.support),
                            a.finite_type && b.finite_type};
}

inline SupportTorsionPair join(const SupportTorsionPair& a, const SupportTorsionPair& b) {
  require_same_heart(a, b);
  return SupportTorsionPair{a.heart, a.heart.model().unite(a.support, b.support),
                            a.finite_type && b.finite_type};
}

enum class CategoryLevel { module_category, derived_category, derived_category_smashing };

// Which subsets of Spec(R) classify localising subcategories at each level:
// all of them in D(R), the specialisation-closed ones in Mod(R) and for
// smashing subcategories of D(R).
inline std::function<bool(const PrimeSet&)> localising_predicate(const SpectrumModel& m,
                                                                 CategoryLevel level) {
  switch (level) {
    case CategoryLevel::derived_category:
      return [m](const PrimeSet& s) {
        m.require_set(s);
        return true;
      };
    case CategoryLevel::module_category:
    case CategoryLevel::derived_category_smashing:
      return [m](const PrimeSet& s) { return m.is_specialisation_closed(s); };
  }
  throw input_error("unknown category level");
}

}  // namespace sptilt
