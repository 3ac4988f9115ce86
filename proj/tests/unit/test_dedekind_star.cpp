#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "sptilt/heartclass.hpp"
#include "sptilt/oracle.hpp"
#include "sptilt/random.hpp"
#include "sptilt/ring.hpp"

using namespace sptilt;

// The dedekind model is symbolic; its finite shadows are star posets with
// one generic point under k closed points. A dedekind set whose description
// only mentions a finite label pool translates faithfully into any star
// containing that pool, with extra closed points standing in for the
// unnamed cofinite rest. Answers must agree across the translations and
// with the finite brute force.
namespace {

struct Star {
  SpectrumModel model;
  std::vector<std::string> closed;  // closed-point names (the pool + extras)
};

Star make_star(const std::vector<std::string>& pool, int extras) {
  std::vector<std::string> names = {"g"};
  std::vector<std::pair<std::string, std::string>> rel;
  std::vector<std::string> closed = pool;
  for (int e = 0; e < extras; ++e) closed.push_back("extra" + std::to_string(e));
  for (const auto& c : closed) {
    names.push_back(c);
    rel.emplace_back("g", c);
  }
  return Star{SpectrumModel::finite_poset(names, rel), closed};
}

PrimeSet translate(const Star& star, const SpectrumModel& z, const PrimeSet& s) {
  PrimeSet out = star.model.empty_set();
  if (s.has_generic()) out = star.model.unite(out, star.model.singleton(star.model.prime_by_label("g")));
  std::set<std::string> listed(s.closed_list().begin(), s.closed_list().end());
  for (const auto& c : star.closed) {
    const bool member = s.cofinite() ? listed.count(c) == 0 : listed.count(c) > 0;
    if (member) out = star.model.unite(out, star.model.singleton(star.model.prime_by_label(c)));
  }
  (void)z;
  return out;
}

std::vector<std::string> pool_of(const std::vector<PrimeSet>& sets) {
  std::set<std::string> pool;
  for (const auto& s : sets)
    for (const auto& l : s.closed_list()) pool.insert(l);
  return {pool.begin(), pool.end()};
}

}  // namespace

TEST_CASE("dedekind H_t-support test agrees with star-poset brute force") {
  auto z = dedekind_model("Z");
  Rng rng(401);
  for (int t = 0; t < 150; ++t) {
    PrimeSet v = random_spc_closed(z, rng);
    PrimeSet u = random_subset(z, rng);
    bool ded = is_ht_support(z, v, u).is_support;
    for (int extras = 1; extras <= 3; ++extras) {
      Star star = make_star(pool_of({v, u}), extras);
      PrimeSet vs = translate(star, z, v);
      PrimeSet us = translate(star, z, u);
      CHECK(ded == is_ht_support(star.model, vs, us).is_support);
      CHECK(ded == ht_support_bruteforce(star.model, vs, us));
    }
  }
}

TEST_CASE("dedekind weak Cousin agrees with star-poset filtrations") {
  auto z = dedekind_model("Z");
  Rng rng(409);
  for (int t = 0; t < 150; ++t) {
    SpFiltration phi = random_filtration(z, rng, 4);
    SpFiltration c = phi.canonical();
    std::vector<PrimeSet> levels(c.stored_levels());
    bool ded = weak_cousin(phi).ok;
    for (int extras = 1; extras <= 3; ++extras) {
      Star star = make_star(pool_of(levels), extras);
      std::vector<PrimeSet> tr;
      for (const auto& l : levels) tr.push_back(translate(star, z, l));
      SpFiltration fin(star.model, c.d_min(), tr);
      CHECK(fin.is_valid());
      CHECK(ded == weak_cousin(fin).ok);
    }
  }
}

TEST_CASE("dedekind torsion-support formula agrees with star posets") {
  auto z = dedekind_model("Z");
  Rng rng(419);
  for (int t = 0; t < 100; ++t) {
    SpFiltration child = random_filtration(z, rng, 4);
    SpFiltration parent = angle(child, 1);
    PrimeSet supp = torsion_support_between(child, parent);
    SpFiltration cc = child.canonical(), pc = parent.canonical();
    std::vector<PrimeSet> all(cc.stored_levels());
    for (const auto& l : pc.stored_levels()) all.push_back(l);
    all.push_back(supp);
    for (int extras = 1; extras <= 2; ++extras) {
      Star star = make_star(pool_of(all), extras);
      std::vector<PrimeSet> trc, trp;
      for (const auto& l : cc.stored_levels()) trc.push_back(translate(star, z, l));
      for (const auto& l : pc.stored_levels()) trp.push_back(translate(star, z, l));
      SpFiltration fchild(star.model, cc.d_min(), trc);
      SpFiltration fparent(star.model, pc.d_min(), trp);
      PrimeSet fsupp = torsion_support_between(fchild, fparent);
      CHECK(star.model.equal(fsupp, translate(star, z, supp)));
    }
  }
}

TEST_CASE("the dimension-1 pipeline over F_q[x] mirrors the integer case") {
  auto m = dedekind_model("F2[x]");
  auto v = m.cofinite_closed_set({});
  SpFiltration phi(m, -1, {m.full_set(), v, m.empty_set()});
  CHECK(weak_cousin(phi).ok);
  CHECK(is_restrictable(phi) == Restrictable::yes);
  auto verdict = derived_equivalence_verdict(phi);
  CHECK(verdict.kind == EquivalenceVerdict::Kind::equivalent);
  REQUIRE(verdict.certificate.size() == 1);

  Rng rng(431);
  static const char* labels[] = {"x", "x+1", "x^2+x+1", "x^3+x+1", "x^3+x^2+1"};
  for (int t = 0; t < 50; ++t) {
    std::vector<std::string> picks;
    for (const char* l : labels)
      if (rng.coin()) picks.push_back(l);
    PrimeSet u = rng.coin() ? m.finite_closed_set(picks, rng.coin())
                            : m.cofinite_closed_set(picks, rng.coin());
    CHECK(is_ht_support(m, v, u).is_support);
  }

  SpFiltration twice(m, -2, {m.full_set(), v, v, m.empty_set()});
  auto rep = weak_cousin(twice);
  CHECK(!rep.ok);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].q.is_closed_point());  // a representative irreducible
  CHECK(derived_equivalence_verdict(twice).kind == EquivalenceVerdict::Kind::not_equivalent);
}

TEST_CASE("the product counterexample pattern matches on finite star models") {
  Star star = make_star({"m1", "m2"}, 0);
  auto v = star.model.closed_points();
  SpFiltration bad(star.model, -2, {star.model.full_set(), v, v, star.model.empty_set()});
  auto verdict = derived_equivalence_verdict(bad);
  CHECK(verdict.kind == EquivalenceVerdict::Kind::not_equivalent);
  CHECK(verdict.reason == "heart decomposes as a product");

  // same filtration over a disconnected union of two chains: no claim
  auto disc = SpectrumModel::finite_poset({"g1", "m1", "g2", "m2"},
                                          {{"g1", "m1"}, {"g2", "m2"}});
  auto dv = disc.closed_points();
  SpFiltration dbad(disc, -2, {disc.full_set(), dv, dv, disc.empty_set()});
  CHECK(derived_equivalence_verdict(dbad).kind == EquivalenceVerdict::Kind::unknown);

  // and V smaller than all closed points: no claim either
  auto partial = star.model.singleton(star.model.prime_by_label("m1"));
  SpFiltration pbad(star.model, -2,
                    {star.model.full_set(), partial, partial, star.model.empty_set()});
  CHECK(derived_equivalence_verdict(pbad).kind == EquivalenceVerdict::Kind::unknown);
}
