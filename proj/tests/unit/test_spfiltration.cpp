#include <doctest.h>

#include "sptilt/random.hpp"
#include "sptilt/ring.hpp"
#include "sptilt/spfiltration.hpp"

using namespace sptilt;

namespace {

SpFiltration make(const SpectrumModel& m, int d_min, std::vector<PrimeSet> levels) {
  return SpFiltration(m, d_min, std::move(levels));
}

// [Spec, V, {}] with V in degree 0
SpFiltration one_tilt(const SpectrumModel& m, const PrimeSet& v) {
  return make(m, -1, {m.full_set(), v, m.empty_set()});
}

}  // namespace

TEST_CASE("validate") {
  auto z = dedekind_model("Z");
  CHECK(make(z, 0, {z.full_set(), z.empty_set()}).is_valid());

  auto bad_order = make(z, 0, {z.finite_closed_set({"2"}), z.finite_closed_set({"2", "3"})});
  auto v1 = bad_order.validate();
  REQUIRE(!v1.empty());
  CHECK(v1[0].reason == "not decreasing at degree d_min");

  auto bad_level = make(z, 0, {z.singleton(Prime::generic()), z.empty_set()});
  auto v2 = bad_level.validate();
  REQUIRE(!v2.empty());
  CHECK(v2[0].reason == "level not specialisation-closed");
}

TEST_CASE("canonical trimming and equality") {
  auto z = dedekind_model("Z");
  auto v = z.cofinite_closed_set({});
  auto phi = one_tilt(z, v);
  auto c = phi.canonical();
  CHECK(c.stored_levels().size() == 1);
  CHECK(c.d_min() == 0);
  CHECK(phi == c);
  // degrees -2..2 with the jump after 0: the standard filtration untrimmed
  CHECK(SpFiltration::standard(z) == make(z, -2, {z.full_set(), z.full_set(), z.full_set(),
                                                  z.empty_set(), z.empty_set()}));
  CHECK(SpFiltration::standard(z) != shift(SpFiltration::standard(z), 2));
  CHECK(phi.is_nondegenerate());
  CHECK(phi.is_intermediate());
}

TEST_CASE("weak Cousin on Spec Z") {
  auto z = dedekind_model("Z");
  auto v = z.cofinite_closed_set({});  // all closed points

  auto rep1 = weak_cousin(one_tilt(z, v));
  CHECK(rep1.ok);
  CHECK(rep1.violations.empty());

  // Spec >= V >= V >= {} fails: q any closed point at degree 0 needs the
  // generic point in phi(-1) = V
  auto twice = make(z, -2, {z.full_set(), v, v, z.empty_set()});
  auto rep2 = weak_cousin(twice);
  CHECK(!rep2.ok);
  REQUIRE(rep2.violations.size() == 1);
  CHECK(rep2.violations[0].degree == 0);
  CHECK(rep2.violations[0].p.is_generic());
  CHECK(rep2.violations[0].q.is_closed_point());
}

TEST_CASE("weak Cousin is vacuous over antichains") {
  auto m = SpectrumModel::finite_poset({"x", "y", "z"}, {});
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    auto phi = random_filtration(m, rng, 4);
    CHECK(weak_cousin(phi).ok);
  }
}

TEST_CASE("angle") {
  auto z = dedekind_model("Z");
  auto v = z.cofinite_closed_set({});
  auto psi = one_tilt(z, v);

  // psi^<1> recovers the parent: here the standard filtration
  CHECK(angle(psi, 1) == SpFiltration::standard(z));
  for (int n = 1; n <= 3; ++n) CHECK(angle(SpFiltration::standard(z), n) == SpFiltration::standard(z));

  auto blocked = shift(psi, 2);  // psi(1) != {}
  CHECK_THROWS_AS(angle(blocked, 1), input_error);
}

TEST_CASE("angle composition law on random filtrations") {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    SpectrumModel m = (t % 3 == 0) ? dedekind_model("Z") : random_poset(rng, 6);
    auto psi = random_filtration(m, rng, 5);
    CHECK(angle(psi, 2) == angle(angle(psi, 1), 1));
    CHECK(angle(psi, 3) == angle(angle(psi, 2), 1));
  }
}

TEST_CASE("untilt_step") {
  auto z = dedekind_model("Z");
  auto v = z.cofinite_closed_set({});
  auto psi = one_tilt(z, v);

  auto step = untilt_step(psi);
  CHECK(step.parent == SpFiltration::standard(z));
  CHECK(z.equal(step.torsion_support, v));
  CHECK(step.child == psi);

  auto triv = untilt_step(SpFiltration::standard(z));
  CHECK(triv.parent == SpFiltration::standard(z));
  CHECK(z.equal(triv.torsion_support, z.full_set()));

  // [Spec, V, W, {}] -> parent [Spec, V, {}] shifted so parent(0) = V
  auto w = z.finite_closed_set({"2"});
  auto two = make(z, -2, {z.full_set(), v, w, z.empty_set()});
  auto step2 = untilt_step(two);
  CHECK(z.equal(step2.torsion_support, w));
  CHECK(z.equal(step2.parent.level(0), v));
  CHECK(z.equal(step2.parent.level(-1), z.full_set()));
}

TEST_CASE("decompose examples") {
  auto z = dedekind_model("Z");
  auto v = z.cofinite_closed_set({});

  CHECK(decompose(SpFiltration::standard(z)).empty());

  auto steps1 = decompose(one_tilt(z, v));
  REQUIRE(steps1.size() == 1);
  CHECK(z.equal(steps1[0].torsion_support, v));

  auto steps2 = decompose(make(z, -2, {z.full_set(), v, v, z.empty_set()}));
  REQUIRE(steps2.size() == 2);
  CHECK(z.equal(steps2[0].torsion_support, v));
  CHECK(z.equal(steps2[1].torsion_support, v));
}

TEST_CASE("decompose/recompose round trip with step supports") {
  Rng rng(13);
  for (int t = 0; t < 200; ++t) {
    SpectrumModel m = (t % 4 == 0) ? dedekind_model("Z") : random_poset(rng, 6);
    auto psi = random_filtration(m, rng, 5);
    auto steps = decompose(psi);
    CHECK(recompose(m, steps) == psi);
    for (std::size_t k = 0; k < steps.size(); ++k) {
      CHECK(m.equal(steps[k].torsion_support, psi.canonical().level(-static_cast<int>(k))));
      // TiltStep invariants
      CHECK(steps[k].child.level(1).is_empty());
      CHECK(steps[k].parent.level(1).is_empty());
      for (int j = -8; j <= 2; ++j) {
        CHECK(m.subset(steps[k].parent.level(j + 1), steps[k].child.level(j)));
        CHECK(m.subset(steps[k].child.level(j), steps[k].parent.level(j)));
        CHECK(m.is_specialisation_closed(steps[k].child.level(j)));
      }
    }
  }
}

TEST_CASE("heart_degree") {
  auto z = dedekind_model("Z");
  auto v = z.finite_closed_set({"2", "5"});

  auto std_f = SpFiltration::standard(z);
  CHECK(heart_degree(std_f, Prime::generic()) == 0);
  CHECK(heart_degree(std_f, z.prime_by_label("7")) == 0);

  auto psi = one_tilt(z, v);
  CHECK(heart_degree(psi, z.prime_by_label("2")) == 0);
  CHECK(heart_degree(psi, z.prime_by_label("3")) == 1);
  CHECK(heart_degree(psi, Prime::generic()) == 1);

  // [Spec, V, V, {}] with V in degrees 0 and 1
  auto twice = make(z, -1, {z.full_set(), v, v, z.empty_set()});
  CHECK(heart_degree(twice, z.prime_by_label("2")) == -1);
  CHECK(heart_degree(twice, z.prime_by_label("3")) == 1);
}

TEST_CASE("heart_degree monotonicity over all pairs of finite posets") {
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    auto m = random_poset(rng, 6);
    auto phi = random_filtration(m, rng, 5);
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j) {
        Prime p = Prime::finite(static_cast<std::uint32_t>(i));
        Prime q = Prime::finite(static_cast<std::uint32_t>(j));
        if (m.leq(p, q)) CHECK(heart_degree(phi, p) >= heart_degree(phi, q));
      }
  }
}

TEST_CASE("torsion_support_between") {
  auto z = dedekind_model("Z");
  auto v = z.finite_closed_set({"2", "3"});
  auto psi = one_tilt(z, v);

  // child == parent is the tilt at the whole heart, supported everywhere
  CHECK(z.equal(torsion_support_between(psi, psi), z.full_set()));
  CHECK(z.equal(torsion_support_between(psi, SpFiltration::standard(z)), v));

  // child equal to the parent shifted into itself: psi(j) = phi(j+1)
  auto parent = one_tilt(z, v);
  auto child = shift(parent, -1);
  CHECK(torsion_support_between(child, parent).is_empty());

  // interleaving violations are reported with a degree
  auto w = z.finite_closed_set({"5"});
  CHECK_THROWS_AS(torsion_support_between(one_tilt(z, w), one_tilt(z, v)), input_error);
}

TEST_CASE("torsion_support_between is consistent with untilt") {
  Rng rng(19);
  for (int t = 0; t < 200; ++t) {
    SpectrumModel m = (t % 4 == 0) ? dedekind_model("Z") : random_poset(rng, 6);
    auto psi = random_filtration(m, rng, 5);
    CHECK(m.equal(torsion_support_between(psi, angle(psi, 1)), psi.canonical().level(0)));
  }
}

TEST_CASE("restrictability and the derived-equivalence verdict") {
  auto z = dedekind_model("Z");
  auto vmax = z.cofinite_closed_set({});

  auto good = one_tilt(z, vmax);
  CHECK(is_restrictable(good) == Restrictable::yes);
  auto verdict = derived_equivalence_verdict(good);
  CHECK(verdict.kind == EquivalenceVerdict::Kind::equivalent);
  CHECK(verdict.certificate.size() == 1);

  auto bad = make(z, -2, {z.full_set(), vmax, vmax, z.empty_set()});
  CHECK(is_restrictable(bad) == Restrictable::no);
  auto nv = derived_equivalence_verdict(bad);
  CHECK(nv.kind == EquivalenceVerdict::Kind::not_equivalent);
  CHECK(nv.reason == "heart decomposes as a product");

  // weak Cousin failure off the counterexample pattern stays UNKNOWN
  auto v2 = z.finite_closed_set({"2"});
  auto unknown = make(z, -2, {z.full_set(), v2, v2, z.empty_set()});
  CHECK(derived_equivalence_verdict(unknown).kind == EquivalenceVerdict::Kind::unknown);

  // 2-chain poset: abstract, so restrictable only modulo a dualising complex
  auto chain = SpectrumModel::finite_poset({"g", "m"}, {{"g", "m"}});
  auto top = chain.singleton(chain.prime_by_label("m"));
  auto f = SpFiltration(chain, -1, {chain.full_set(), top, chain.empty_set()});
  CHECK(is_restrictable(f) == Restrictable::yes_modulo_dualising);
  CHECK(derived_equivalence_verdict(f).kind == EquivalenceVerdict::Kind::equivalent);
}

TEST_CASE("angle preserves the weak Cousin condition") {
  Rng rng(29);
  for (int t = 0; t < 200; ++t) {
    SpectrumModel m = (t % 4 == 0) ? dedekind_model("Z") : random_poset(rng, 5);
    auto phi = random_weak_cousin_filtration(m, rng, 4);
    REQUIRE(weak_cousin(phi).ok);
    for (int n = 1; n <= 3; ++n) CHECK(weak_cousin(angle(phi, n)).ok);
  }
}

TEST_CASE("verdict certificates verify against the filtration") {
  Rng rng(37);
  for (int t = 0; t < 60; ++t) {
    SpectrumModel m = (t % 3 == 0) ? dedekind_model("Z") : random_poset(rng, 5, true);
    auto phi = random_weak_cousin_filtration(m, rng, 4);
    auto v = derived_equivalence_verdict(phi);
    REQUIRE(v.kind == EquivalenceVerdict::Kind::equivalent);
    // the chain recomposes to the shift-normalised filtration
    SpFiltration c = phi.canonical();
    SpFiltration norm =
        c.stored_levels().empty() ? SpFiltration::standard(m) : shift(c, -c.d_max());
    CHECK(recompose(m, v.certificate) == norm);
  }
}
