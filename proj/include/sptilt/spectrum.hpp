#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sptilt/core.hpp"
#include "sptilt/intmath.hpp"

namespace sptilt {

enum class ModelKind { finite_poset, dedekind };

// A point of Spec(R). Finite-poset primes are indices into the owning
// model; dedekind primes are the generic point or a labelled closed point.
class Prime {
 public:
  enum class Tag { finite, generic, closed };

  static Prime finite(std::uint32_t index) { return Prime(Tag::finite, index, {}); }
  static Prime generic() { return Prime(Tag::generic, 0, {}); }
  static Prime closed(std::string label) { return Prime(Tag::closed, 0, std::move(label)); }

  Tag tag() const { return tag_; }
  bool is_generic() const { return tag_ == Tag::generic; }
  bool is_closed_point() const { return tag_ == Tag::closed; }
  bool is_finite() const { return tag_ == Tag::finite; }
  std::uint32_t index() const { return index_; }
  const std::string& label() const { return label_; }

  friend bool operator==(const Prime& a, const Prime& b) {
    return a.tag_ == b.tag_ && a.index_ == b.index_ && a.label_ == b.label_;
  }
  friend bool operator!=(const Prime& a, const Prime& b) { return !(a == b); }

 private:
  Prime(Tag t, std::uint32_t i, std::string l) : tag_(t), index_(i), label_(std::move(l)) {}
  Tag tag_;
  std::uint32_t index_;
  std::string label_;
};

// shortlex: shorter strings first, then lexicographic. Keeps decimal prime
// labels in numeric order ("2" < "3" < "11") and groups polynomial labels
// roughly by degree.
inline bool shortlex_less(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// A subset of a spectrum. For finite posets an exact bitset; for the
// dedekind model a finite-or-cofinite set of closed points plus a flag for
// the generic point. Instances remember the owning model's signature so
// that mixed-model operations can be rejected.
class PrimeSet {
 public:
  PrimeSet() = default;

  ModelKind kind() const { return kind_; }
  std::uint64_t model_sig() const { return sig_; }

  // finite-poset representation
  std::uint64_t bits() const { return bits_; }
  // dedekind representation
  bool cofinite() const { return cofinite_; }
  const std::vector<std::string>& closed_list() const { return closed_; }
  bool has_generic() const { return generic_; }

  bool is_empty() const {
    if (kind_ == ModelKind::finite_poset) return bits_ == 0;
    return !generic_ && !cofinite_ && closed_.empty();
  }

  friend bool operator==(const PrimeSet& a, const PrimeSet& b) {
    return a.kind_ == b.kind_ && a.sig_ == b.sig_ && a.bits_ == b.bits_ &&
           a.cofinite_ == b.cofinite_ && a.generic_ == b.generic_ && a.closed_ == b.closed_;
  }
  friend bool operator!=(const PrimeSet& a, const PrimeSet& b) { return !(a == b); }

 private:
  friend class SpectrumModel;

  ModelKind kind_ = ModelKind::finite_poset;
  std::uint64_t sig_ = 0;
  std::uint64_t bits_ = 0;
  bool cofinite_ = false;
  std::vector<std::string> closed_;  // members if finite, exceptions if cofinite; shortlex-sorted
  bool generic_ = false;
};

// Spec(R) as a poset. Either a finite poset (<= 64 primes, order stored
// transitively closed as one bitset of specialisations per prime) or the
// symbolic dedekind model: one generic point below an unbounded family of
// pairwise-incomparable closed points (Spec Z, Spec F_q[x]).
class SpectrumModel {
 public:
  enum class LabelRule { opaque, prime_integer, monic_irreducible };

  // relations: pairs (p, q) meaning p \subseteq q, i.e. q is a
  // specialisation of p. Reflexive-transitive closure is taken here.
  static SpectrumModel finite_poset(std::vector<std::string> names,
                                    const std::vector<std::pair<std::string, std::string>>& relations,
                                    bool dualising = false) {
    SpectrumModel m;
    m.kind_ = ModelKind::finite_poset;
    m.names_ = std::move(names);
    if (m.names_.size() > 64) throw input_error("finite poset models support at most 64 primes");
    for (std::size_t i = 0; i < m.names_.size(); ++i)
      for (std::size_t j = i + 1; j < m.names_.size(); ++j)
        if (m.names_[i] == m.names_[j]) throw input_error("duplicate prime name: " + m.names_[i]);
    const std::size_t n = m.names_.size();
    m.up_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) m.up_[i] = 1ull << i;
    for (const auto& [p, q] : relations) {
      auto ip = m.find_name(p), iq = m.find_name(q);
      if (!ip || !iq) throw input_error("prime not in spectrum: " + (!ip ? p : q));
      m.up_[*ip] |= 1ull << *iq;
    }
    // Floyd-Warshall style transitive closure on bitsets
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (m.up_[i] & (1ull << k)) m.up_[i] |= m.up_[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && (m.up_[i] & (1ull << j)) && (m.up_[j] & (1ull << i)))
          throw input_error("specialization relation is not antisymmetric");
    m.dualising_ = dualising;
    m.compute_sig();
    return m;
  }

  static SpectrumModel dedekind(std::string label, bool dualising = true) {
    SpectrumModel m;
    m.kind_ = ModelKind::dedekind;
    m.label_ = std::move(label);
    m.dualising_ = dualising;
    if (m.label_ == "Z") {
      m.label_rule_ = LabelRule::prime_integer;
    } else {
      m.label_rule_ = LabelRule::opaque;
    }
    m.compute_sig();
    return m;
  }

  ModelKind kind() const { return kind_; }
  bool is_dedekind() const { return kind_ == ModelKind::dedekind; }
  std::uint64_t sig() const { return sig_; }
  bool admits_dualising_complex() const { return dualising_; }
  const std::string& label() const { return label_; }
  LabelRule label_rule() const { return label_rule_; }
  void set_label_rule(LabelRule r) {
    label_rule_ = r;
    compute_sig();
  }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::uint32_t i) const { return names_.at(i); }
  std::optional<std::uint32_t> find_name(const std::string& s) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == s) return static_cast<std::uint32_t>(i);
    return std::nullopt;
  }

  bool contains(const Prime& p) const {
    if (kind_ == ModelKind::finite_poset) return p.is_finite() && p.index() < names_.size();
    if (p.is_generic()) return true;
    return p.is_closed_point() && valid_label(p.label());
  }

  void require(const Prime& p) const {
    if (!contains(p)) throw input_error("prime not in spectrum");
  }

  Prime prime_by_label(const std::string& s) const {
    if (kind_ == ModelKind::finite_poset) {
      auto i = find_name(s);
      if (!i) throw input_error("prime not in spectrum: " + s);
      return Prime::finite(*i);
    }
    if (s == "generic") return Prime::generic();
    if (!valid_label(s)) throw input_error("prime not in spectrum: " + s);
    return Prime::closed(s);
  }

  std::string label_of(const Prime& p) const {
    require(p);
    if (kind_ == ModelKind::finite_poset) return names_[p.index()];
    return p.is_generic() ? "generic" : p.label();
  }

  // p \subseteq q, i.e. q \in \/(p)
  bool leq(const Prime& p, const Prime& q) const {
    require(p);
    require(q);
    if (kind_ == ModelKind::finite_poset) return (up_[p.index()] >> q.index()) & 1u;
    if (p.is_generic()) return true;
    if (q.is_generic()) return false;
    return p.label() == q.label();
  }

  // ---- sets -------------------------------------------------------------

  PrimeSet empty_set() const { return make_set(0, false, {}, false); }

  PrimeSet full_set() const {
    if (kind_ == ModelKind::finite_poset)
      return make_set(names_.empty() ? 0 : (~0ull >> (64 - names_.size())), false, {}, false);
    return make_set(0, true, {}, true);
  }

  // all closed points: maximal elements of a finite poset, or the cofinite
  // set with empty exception list in the dedekind model
  PrimeSet closed_points() const {
    if (kind_ == ModelKind::dedekind) return make_set(0, true, {}, false);
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (up_[i] == (1ull << i)) bits |= 1ull << i;
    return make_set(bits, false, {}, false);
  }

  PrimeSet singleton(const Prime& p) const {
    require(p);
    if (kind_ == ModelKind::finite_poset) return make_set(1ull << p.index(), false, {}, false);
    if (p.is_generic()) return make_set(0, false, {}, true);
    return make_set(0, false, {p.label()}, false);
  }

  PrimeSet set_of(const std::vector<Prime>& ps) const {
    PrimeSet r = empty_set();
    for (const auto& p : ps) r = unite(r, singleton(p));
    return r;
  }

  // Finite dedekind sets built directly from labels; generic included on demand.
  PrimeSet finite_closed_set(std::vector<std::string> labels, bool with_generic = false) const {
    if (kind_ != ModelKind::dedekind) throw input_error("finite_closed_set requires a dedekind model");
    for (const auto& l : labels)
      if (!valid_label(l)) throw input_error("prime not in spectrum: " + l);
    canon_labels(labels);
    return make_set(0, false, std::move(labels), with_generic);
  }

  PrimeSet cofinite_closed_set(std::vector<std::string> exceptions, bool with_generic = false) const {
    if (kind_ != ModelKind::dedekind) throw input_error("cofinite_closed_set requires a dedekind model");
    for (const auto& l : exceptions)
      if (!valid_label(l)) throw input_error("prime not in spectrum: " + l);
    canon_labels(exceptions);
    return make_set(0, true, std::move(exceptions), with_generic);
  }

  void require_set(const PrimeSet& s) const {
    if (s.kind() != kind_ || s.model_sig() != sig_)
      throw input_error("prime set does not belong to this spectrum");
  }

  void require_same(const PrimeSet& a, const PrimeSet& b) const {
    require_set(a);
    require_set(b);
  }

  bool member(const PrimeSet& s, const Prime& p) const {
    require_set(s);
    require(p);
    if (kind_ == ModelKind::finite_poset) return (s.bits() >> p.index()) & 1u;
    if (p.is_generic()) return s.has_generic();
    bool listed = std::binary_search(s.closed_list().begin(), s.closed_list().end(), p.label(),
                                     shortlex_less);
    return s.cofinite() ? !listed : listed;
  }

  PrimeSet unite(const PrimeSet& a, const PrimeSet& b) const {
    require_same(a, b);
    if (kind_ == ModelKind::finite_poset) return make_set(a.bits() | b.bits(), false, {}, false);
    bool gen = a.has_generic() || b.has_generic();
    if (!a.cofinite() && !b.cofinite())
      return make_set(0, false, merge_lists(a.closed_list(), b.closed_list()), gen);
    if (a.cofinite() && b.cofinite())
      return make_set(0, true, intersect_lists(a.closed_list(), b.closed_list()), gen);
    const PrimeSet& cof = a.cofinite() ? a : b;
    const PrimeSet& fin = a.cofinite() ? b : a;
    return make_set(0, true, subtract_lists(cof.closed_list(), fin.closed_list()), gen);
  }

  PrimeSet intersect(const PrimeSet& a, const PrimeSet& b) const {
    require_same(a, b);
    return complement(unite(complement(a), complement(b)));
  }

  PrimeSet subtract(const PrimeSet& a, const PrimeSet& b) const { return intersect(a, complement(b)); }

  PrimeSet complement(const PrimeSet& a) const {
    require_set(a);
    if (kind_ == ModelKind::finite_poset)
      return make_set(~a.bits() & full_set().bits(), false, {}, false);
    return make_set(0, !a.cofinite(), a.closed_list(), !a.has_generic());
  }

  bool equal(const PrimeSet& a, const PrimeSet& b) const {
    require_same(a, b);
    return a == b;
  }

  bool subset(const PrimeSet& a, const PrimeSet& b) const { return subtract(a, b).is_empty(); }

  // ---- closure operators --------------------------------------------------

  PrimeSet specialization_closure(const PrimeSet& u) const {
    require_set(u);
    if (kind_ == ModelKind::finite_poset) {
      std::uint64_t bits = 0;
      for (std::size_t i = 0; i < names_.size(); ++i)
        if ((u.bits() >> i) & 1u) bits |= up_[i];
      return make_set(bits, false, {}, false);
    }
    // closed points are closed; the generic point specialises to everything
    return u.has_generic() ? full_set() : u;
  }

  bool is_specialisation_closed(const PrimeSet& u) const {
    return equal(specialization_closure(u), u);
  }

  bool is_generalisation_closed(const PrimeSet& u) const {
    return is_specialisation_closed(complement(u));
  }

  // primes p maximal under q: p < q with nothing strictly between
  PrimeSet maximal_under(const Prime& q) const {
    require(q);
    if (kind_ == ModelKind::dedekind) {
      if (q.is_generic()) return empty_set();
      return make_set(0, false, {}, true);  // {generic}
    }
    std::uint64_t bits = 0;
    const std::uint64_t qb = 1ull << q.index();
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (i == q.index() || !((up_[i] >> q.index()) & 1u)) continue;
      bool covered = true;
      for (std::size_t t = 0; t < names_.size(); ++t) {
        if (t == i || t == q.index()) continue;
        if (((up_[i] >> t) & 1u) && ((up_[t] >> q.index()) & 1u)) {
          covered = false;
          break;
        }
      }
      (void)qb;
      if (covered) bits |= 1ull << i;
    }
    return make_set(bits, false, {}, false);
  }

  int krull_dim() const {
    if (kind_ == ModelKind::dedekind) return 1;
    // longest chain length - 1, by DP over the strict order
    const std::size_t n = names_.size();
    std::vector<int> height(n, -1);
    std::function<int(std::size_t)> h = [&](std::size_t i) -> int {
      if (height[i] >= 0) return height[i];
      int best = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i && ((up_[i] >> j) & 1u)) best = std::max(best, 1 + h(j));
      return height[i] = best;
    };
    int dim = n == 0 ? 0 : 0;
    for (std::size_t i = 0; i < n; ++i) dim = std::max(dim, h(i));
    return dim;
  }

  bool is_connected() const {
    if (kind_ == ModelKind::dedekind) return true;
    const std::size_t n = names_.size();
    if (n == 0) return true;
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack = {0};
    seen[0] = true;
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        if (seen[j] || i == j) continue;
        if (((up_[i] >> j) & 1u) || ((up_[j] >> i) & 1u)) {
          seen[j] = true;
          stack.push_back(j);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  }

  std::vector<Prime> primes_in(const PrimeSet& s) const {
    require_set(s);
    if (kind_ == ModelKind::dedekind) {
      if (s.cofinite()) throw input_error("cannot enumerate a cofinite prime set");
      std::vector<Prime> out;
      if (s.has_generic()) out.push_back(Prime::generic());
      for (const auto& l : s.closed_list()) out.push_back(Prime::closed(l));
      return out;
    }
    std::vector<Prime> out;
    for (std::size_t i = 0; i < names_.size(); ++i)
      if ((s.bits() >> i) & 1u) out.push_back(Prime::finite(static_cast<std::uint32_t>(i)));
    return out;
  }

  // Enumerates the up-closed subsets of a finite poset, one per antichain
  // of minimal elements, in increasing order of the antichain bitmask.
  // Deliberately not implemented by filtering all 2^n subsets, so the
  // property test against that filter stays meaningful.
  void for_each_spc_closed(const std::function<void(const PrimeSet&)>& fn) const {
    if (kind_ == ModelKind::dedekind) throw input_error("infinite spectrum");
    const std::size_t n = names_.size();
    if (n > 20) throw input_error("poset too large for enumeration");
    for (std::uint64_t a = 0; a < (1ull << n); ++a) {
      bool antichain = true;
      for (std::size_t i = 0; i < n && antichain; ++i) {
        if (!((a >> i) & 1u)) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j || !((a >> j) & 1u)) continue;
          if ((up_[i] >> j) & 1u) {
            antichain = false;
            break;
          }
        }
      }
      if (!antichain) continue;
      std::uint64_t bits = 0;
      for (std::size_t i = 0; i < n; ++i)
        if ((a >> i) & 1u) bits |= up_[i];
      fn(make_set(bits, false, {}, false));
    }
  }

  std::vector<PrimeSet> enumerate_spc_closed() const {
    std::vector<PrimeSet> out;
    for_each_spc_closed([&](const PrimeSet& s) { out.push_back(s); });
    return out;
  }

  // A concrete closed point avoiding the given labels; used to report one
  // representative violation when a cofinite family fails a condition.
  Prime representative_closed(const std::vector<std::string>& avoid) const {
    if (kind_ != ModelKind::dedekind) throw input_error("representative_closed requires a dedekind model");
    auto avoided = [&](const std::string& l) {
      return std::find(avoid.begin(), avoid.end(), l) != avoid.end();
    };
    for (u64 c = 2;; ++c) {
      if (label_rule_ == LabelRule::prime_integer && !is_prime_u64(c)) continue;
      std::string l = std::to_string(c);
      if (label_rule_ == LabelRule::opaque) l = "c" + l;
      if (label_rule_ == LabelRule::monic_irreducible) {
        if (!poly_label_candidate_) throw input_error("no label generator for this model");
        auto cand = poly_label_candidate_(c);
        if (!cand) continue;
        l = *cand;
      }
      if (!avoided(l)) return Prime::closed(l);
    }
  }

  // Installed by ring-backed dedekind models: validates/normalises labels
  // and supplies representative closed points.
  void set_label_validator(std::function<bool(const std::string&)> valid,
                           std::function<std::optional<std::string>(u64)> candidate) {
    label_rule_ = LabelRule::monic_irreducible;
    label_valid_ = std::move(valid);
    poly_label_candidate_ = std::move(candidate);
    compute_sig();
  }

 private:
  PrimeSet make_set(std::uint64_t bits, bool cof, std::vector<std::string> closed, bool gen) const {
    PrimeSet s;
    s.kind_ = kind_;
    s.sig_ = sig_;
    s.bits_ = bits;
    s.cofinite_ = cof;
    s.closed_ = std::move(closed);
    s.generic_ = gen;
    return s;
  }

  bool valid_label(const std::string& l) const {
    if (l.empty() || l == "generic") return false;
    switch (label_rule_) {
      case LabelRule::prime_integer: {
        if (l.size() > 19) return false;
        u64 v = 0;
        for (char c : l) {
          if (c < '0' || c > '9') return false;
          v = v * 10 + static_cast<u64>(c - '0');
        }
        return is_prime_u64(v);
      }
      case LabelRule::monic_irreducible:
        return label_valid_ ? label_valid_(l) : true;
      case LabelRule::opaque:
        return true;
    }
    return true;
  }

  static void canon_labels(std::vector<std::string>& v) {
    std::sort(v.begin(), v.end(), shortlex_less);
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  static std::vector<std::string> merge_lists(const std::vector<std::string>& a,
                                              const std::vector<std::string>& b) {
    std::vector<std::string> out;
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), shortlex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  static std::vector<std::string> intersect_lists(const std::vector<std::string>& a,
                                                  const std::vector<std::string>& b) {
    std::vector<std::string> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
                          shortlex_less);
    return out;
  }

  static std::vector<std::string> subtract_lists(const std::vector<std::string>& a,
                                                 const std::vector<std::string>& b) {
    std::vector<std::string> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
                        shortlex_less);
    return out;
  }

  void compute_sig() {
    u64 h = 1469598103934665603ull;
    auto mix = [&h](u64 v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    mix(kind_ == ModelKind::dedekind ? 2 : 1);
    mix(dualising_ ? 7 : 3);
    mix(static_cast<u64>(label_rule_) + 11);
    for (char c : label_) mix(static_cast<u64>(static_cast<unsigned char>(c)));
    mix(names_.size());
    for (const auto& nm : names_)
      for (char c : nm) mix(static_cast<u64>(static_cast<unsigned char>(c)));
    for (u64 u : up_) mix(u);
    sig_ = h;
  }

  ModelKind kind_ = ModelKind::finite_poset;
  std::vector<std::string> names_;
  std::vector<std::uint64_t> up_;
  std::string label_;
  LabelRule label_rule_ = LabelRule::opaque;
  bool dualising_ = false;
  std::uint64_t sig_ = 0;
  std::function<bool(const std::string&)> label_valid_;
  std::function<std::optional<std::string>(u64)> poly_label_candidate_;
};

}  // namespace sptilt
