#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sptilt/core.hpp"
#include "sptilt/spectrum.hpp"

namespace sptilt {

// A decreasing Z-indexed family of specialisation-closed subsets with a
// finite description: phi(i) = Spec for i < d_min and phi(i) = {} for
// i > d_max. Raw levels may be untrimmed or even invalid; validate()
// reports violations as data and canonical() trims.
class SpFiltration {
 public:
  struct Violation {
    int degree;
    std::string reason;
  };

  SpFiltration(SpectrumModel model, int d_min, std::vector<PrimeSet> levels)
      : model_(std::move(model)), d_min_(d_min), levels_(std::move(levels)) {
    for (const auto& l : levels_) model_.require_set(l);
  }

  // the standard filtration: phi(i) = Spec for i <= 0, {} for i >= 1
  static SpFiltration standard(SpectrumModel model) { return SpFiltration(std::move(model), 1, {}); }

  const SpectrumModel& model() const { return model_; }
  int d_min() const { return d_min_; }
  int d_max() const { return d_min_ + static_cast<int>(levels_.size()) - 1; }
  const std::vector<PrimeSet>& stored_levels() const { return levels_; }

  PrimeSet level(int degree) const {
    if (degree < d_min_) return model_.full_set();
    if (degree > d_max()) return model_.empty_set();
    return levels_[static_cast<std::size_t>(degree - d_min_)];
  }

  std::vector<Violation> validate() const {
    std::vector<Violation> out;
    for (int j = d_min_; j <= d_max(); ++j) {
      if (!model_.is_specialisation_closed(level(j)))
        out.push_back({j, "level not specialisation-closed"});
    }
    for (int j = d_min_ - 1; j <= d_max(); ++j) {
      if (!model_.subset(level(j + 1), level(j)))
        out.push_back({j, j == d_min_ ? "not decreasing at degree d_min" : "not decreasing"});
    }
    return out;
  }

  bool is_valid() const { return validate().empty(); }

  void require_valid() const {
    auto v = validate();
    if (!v.empty())
      throw input_error("invalid sp-filtration at degree " + std::to_string(v.front().degree) +
                        ": " + v.front().reason);
  }

  // With the Spec-below / empty-above convention every representable
  // filtration is nondegenerate and intermediate; forms that would violate
  // this are unrepresentable and rejected at parse time.
  bool is_nondegenerate() const {
    require_valid();
    return true;
  }

  bool is_intermediate() const {
    require_valid();
    return true;
  }

  SpFiltration canonical() const {
    require_valid();
    std::size_t lo = 0, hi = levels_.size();
    const PrimeSet full = model_.full_set();
    while (lo < hi && levels_[lo] == full) ++lo;
    while (hi > lo && levels_[hi - 1].is_empty()) --hi;
    std::vector<PrimeSet> trimmed(levels_.begin() + static_cast<std::ptrdiff_t>(lo),
                                  levels_.begin() + static_cast<std::ptrdiff_t>(hi));
    int first = d_min_ + static_cast<int>(lo);
    if (trimmed.empty()) {
      // pure jump between Spec and {}: locate the first empty degree
      first = d_min_ + static_cast<int>(lo);
      // all raw levels up to lo were full, from hi on empty; jump at `first`
    }
    return SpFiltration(model_, first, std::move(trimmed));
  }

  bool is_canonical() const {
    if (levels_.empty()) return true;
    return levels_.front() != model_.full_set() && !levels_.back().is_empty();
  }

  friend bool operator==(const SpFiltration& a, const SpFiltration& b) {
    if (a.model_.sig() != b.model_.sig()) return false;
    SpFiltration ca = a.canonical(), cb = b.canonical();
    return ca.d_min_ == cb.d_min_ && ca.levels_ == cb.levels_;
  }
  friend bool operator!=(const SpFiltration& a, const SpFiltration& b) { return !(a == b); }

  bool is_standard() const { return *this == standard(model_); }

 private:
  SpectrumModel model_;
  int d_min_;
  std::vector<PrimeSet> levels_;
};

// One HRS-tilt edge between compactly generated t-structures: the child is
// obtained from the parent by tilting at the hereditary torsion pair of
// finite type supported on child(0).
struct TiltStep {
  SpFiltration parent;
  SpFiltration child;
  PrimeSet torsion_support;
};

struct CousinViolation {
  Prime q;
  int degree;  // q lies in phi(degree) but p is missing from phi(degree-1)
  Prime p;
};

struct WeakCousinReport {
  bool ok = true;
  std::vector<CousinViolation> violations;
};

// q in phi(j) forces every p maximal under q into phi(j-1). Only degrees
// d_min..d_max+1 can fail; outside, consecutive levels coincide.
inline WeakCousinReport weak_cousin(const SpFiltration& phi_raw) {
  phi_raw.require_valid();
  SpFiltration phi = phi_raw.canonical();
  const SpectrumModel& m = phi.model();
  WeakCousinReport rep;
  for (int j = phi.d_min(); j <= phi.d_max() + 1; ++j) {
    const PrimeSet cur = phi.level(j);
    const PrimeSet below = phi.level(j - 1);
    if (m.is_dedekind()) {
      // p maximal under a closed point is the generic point; the only
      // specialisation-closed set containing it is Spec itself
      bool has_closed = cur.cofinite() || !cur.closed_list().empty();
      if (has_closed && below != m.full_set()) {
        Prime q = cur.cofinite() ? m.representative_closed(cur.closed_list())
                                 : Prime::closed(cur.closed_list().front());
        rep.violations.push_back({q, j, Prime::generic()});
      }
      continue;
    }
    for (const Prime& q : m.primes_in(cur)) {
      for (const Prime& p : m.primes_in(m.maximal_under(q))) {
        if (!m.member(below, p)) rep.violations.push_back({q, j, p});
      }
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

inline SpFiltration shift(const SpFiltration& phi, int k) {
  phi.require_valid();
  SpFiltration c = phi.canonical();
  return SpFiltration(c.model(), c.d_min() + k, c.stored_levels());
}

// psi^<n>(i) = {} for i > 0 and psi(i-n) for i <= 0. Recovers the n-fold
// tilting parent; requires psi(1) = {}.
inline SpFiltration angle(const SpFiltration& psi_raw, int n) {
  if (n < 1) throw input_error("angle requires n >= 1");
  psi_raw.require_valid();
  SpFiltration psi = psi_raw.canonical();
  if (!psi.level(1).is_empty()) throw input_error("angle requires psi(1) to be empty");
  const int lo = std::min(psi.d_min() + n, 0);
  std::vector<PrimeSet> levels;
  for (int i = lo; i <= 1; ++i)
    levels.push_back(i <= 0 ? psi.level(i - n) : psi.model().empty_set());
  return SpFiltration(psi.model(), lo, std::move(levels)).canonical();
}

inline SpFiltration untilt(const SpFiltration& psi) { return angle(psi, 1); }

inline TiltStep untilt_step(const SpFiltration& psi_raw) {
  psi_raw.require_valid();
  SpFiltration psi = psi_raw.canonical();
  if (!psi.level(1).is_empty()) throw input_error("untilt_step requires psi(1) to be empty");
  return TiltStep{angle(psi, 1), psi, psi.level(0)};
}

// Child of tilting `parent` at the torsion pair supported on S:
// child(i) = parent(i+1) for i < 0, child(0) = S, child(i>0) = {}.
inline SpFiltration retilt(const SpFiltration& parent_raw, const PrimeSet& support) {
  parent_raw.require_valid();
  SpFiltration parent = parent_raw.canonical();
  const SpectrumModel& m = parent.model();
  m.require_set(support);
  if (!parent.level(1).is_empty()) throw input_error("retilt requires parent(1) to be empty");
  if (!m.is_specialisation_closed(support))
    throw input_error("torsion support must be specialisation-closed");
  if (!m.subset(support, parent.level(0)))
    throw input_error("torsion support must lie inside parent(0)");
  const int lo = parent.d_min() - 1;
  std::vector<PrimeSet> levels;
  for (int i = lo; i <= 1; ++i) {
    if (i < 0)
      levels.push_back(parent.level(i + 1));
    else if (i == 0)
      levels.push_back(support);
    else
      levels.push_back(m.empty_set());
  }
  return SpFiltration(m, lo, std::move(levels)).canonical();
}

// Chain of HRS-tilts from the standard filtration to psi. Entry k has
// child = psi^<k> and torsion support psi(-k); entry 0 ends at psi and the
// last entry starts at the standard filtration.
inline std::vector<TiltStep> decompose(const SpFiltration& psi_raw) {
  psi_raw.require_valid();
  SpFiltration cur = psi_raw.canonical();
  if (!cur.level(1).is_empty())
    throw input_error("decompose requires psi(1) to be empty; shift the filtration first");
  if (cur.d_min() < -4096)
    throw input_error("tilt chain longer than 4096 steps; shift the filtration first");
  std::vector<TiltStep> steps;
  while (!cur.is_standard()) {
    TiltStep s = untilt_step(cur);
    cur = s.parent;
    steps.push_back(std::move(s));
  }
  return steps;
}

// Re-applies a decompose() chain starting from the standard filtration.
inline SpFiltration recompose(const SpectrumModel& model, const std::vector<TiltStep>& steps) {
  SpFiltration cur = SpFiltration::standard(model);
  for (auto it = steps.rbegin(); it != steps.rend(); ++it)
    cur = retilt(cur, it->torsion_support);
  return cur;
}

// n_p = -max{ n : p in phi(n) }; the degree in which k(p) sits in the heart.
inline int heart_degree(const SpFiltration& phi_raw, const Prime& p) {
  phi_raw.require_valid();
  SpFiltration phi = phi_raw.canonical();
  phi.model().require(p);
  int best = phi.d_min() - 1;  // phi(d_min - 1) = Spec always contains p
  for (int j = phi.d_min(); j <= phi.d_max(); ++j)
    if (phi.model().member(phi.level(j), p)) best = j;
  return -best;
}

// supp(T) of the torsion pair tilting `parent` to `child`, as the union of
// child(j) \ parent(j+1); requires the interleaving
// parent(j+1) <= child(j) <= parent(j).
inline PrimeSet torsion_support_between(const SpFiltration& child_raw,
                                        const SpFiltration& parent_raw) {
  child_raw.require_valid();
  parent_raw.require_valid();
  SpFiltration child = child_raw.canonical(), parent = parent_raw.canonical();
  if (child.model().sig() != parent.model().sig())
    throw input_error("child and parent live over different spectra");
  const SpectrumModel& m = child.model();
  const int lo = std::min(child.d_min(), parent.d_min()) - 2;
  const int hi = std::max(child.d_max(), parent.d_max()) + 1;
  for (int j = lo; j <= hi; ++j) {
    if (!m.subset(parent.level(j + 1), child.level(j)) ||
        !m.subset(child.level(j), parent.level(j)))
      throw input_error("interleaving violated at degree " + std::to_string(j));
  }
  PrimeSet acc = m.empty_set();
  for (int j = lo; j <= hi; ++j)
    acc = m.unite(acc, m.subtract(child.level(j), parent.level(j + 1)));
  return acc;
}

enum class Restrictable { yes, no, yes_modulo_dualising };

inline const char* to_string(Restrictable r) {
  switch (r) {
    case Restrictable::yes: return "yes";
    case Restrictable::no: return "no";
    case Restrictable::yes_modulo_dualising: return "yes_modulo_dualising";
  }
  return "?";
}

// Weak Cousin failing rules restrictability out unconditionally; when it
// holds, the converse needs the ring to admit a dualising complex.
inline Restrictable is_restrictable(const SpFiltration& phi) {
  if (!weak_cousin(phi).ok) return Restrictable::no;
  return phi.model().admits_dualising_complex() ? Restrictable::yes
                                                : Restrictable::yes_modulo_dualising;
}

struct EquivalenceVerdict {
  enum class Kind { equivalent, not_equivalent, unknown };
  Kind kind;
  std::vector<TiltStep> certificate;  // for `equivalent`: tilt chain of the
                                      // shift-normalised filtration
  std::string reason;
};

inline const char* to_string(EquivalenceVerdict::Kind k) {
  switch (k) {
    case EquivalenceVerdict::Kind::equivalent: return "EQUIVALENT";
    case EquivalenceVerdict::Kind::not_equivalent: return "NOT_EQUIVALENT";
    case EquivalenceVerdict::Kind::unknown: return "UNKNOWN";
  }
  return "?";
}

// The one counterexample family with a proven negative answer: over a
// connected model of Krull dimension 1, the filtration Spec >= V >= V >= {}
// with V = all closed points makes the heart split as a product.
inline bool matches_product_counterexample(const SpFiltration& phi_canonical) {
  const SpectrumModel& m = phi_canonical.model();
  if (m.krull_dim() != 1 || !m.is_connected()) return false;
  const auto& ls = phi_canonical.stored_levels();
  if (ls.size() != 2 || ls[0] != ls[1]) return false;
  return ls[0] == m.closed_points();
}

inline EquivalenceVerdict derived_equivalence_verdict(const SpFiltration& phi_raw) {
  phi_raw.require_valid();
  SpFiltration phi = phi_raw.canonical();
  if (weak_cousin(phi).ok) {
    // normalise so phi(1) = {} before extracting the certificate chain
    SpFiltration norm = phi.stored_levels().empty() ? SpFiltration::standard(phi.model())
                                                    : shift(phi, -phi.d_max());
    return {EquivalenceVerdict::Kind::equivalent, decompose(norm), ""};
  }
  if (matches_product_counterexample(phi))
    return {EquivalenceVerdict::Kind::not_equivalent, {}, "heart decomposes as a product"};
  return {EquivalenceVerdict::Kind::unknown, {},
          "weak Cousin condition fails; no negative criterion applies"};
}

}  // namespace sptilt
