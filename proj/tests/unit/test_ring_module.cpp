#include <doctest.h>

#include "sptilt/module.hpp"
#include "sptilt/oracle.hpp"
#include "sptilt/random.hpp"
#include "sptilt/ring.hpp"

using namespace sptilt;

namespace {

FgModule z_module(const RingDesc& ring, std::uint32_t free_rank, std::vector<i64> factors) {
  FgModule m = zero_module(ring);
  auto& p = std::get<ZPart>(m.parts[0]);
  p.free_rank = free_rank;
  p.factors = std::move(factors);
  return canonical_module(ring, m);
}

}  // namespace

TEST_CASE("spectrum_of") {
  auto z12 = RingDesc(QuotZRing{12});
  auto s = spectrum_of(z12);
  CHECK(s.model.size() == 2);
  CHECK(s.model.names() == std::vector<std::string>{"2", "3"});
  CHECK(s.model.krull_dim() == 0);
  CHECK(s.model.admits_dualising_complex());

  CHECK(spectrum_of(RingDesc(ZZRing{})).model.is_dedekind());

  // x^2 + x = x(x+1) over F_2
  Fq F2(2);
  auto qp = RingDesc(QuotPolyRing{2, poly_from_string(F2, "x^2+x")});
  auto sp = spectrum_of(qp);
  CHECK(sp.model.names() == std::vector<std::string>{"x", "x+1"});

  auto prod = RingDesc(ProductRing{{z12, qp}});
  auto spp = spectrum_of(prod);
  CHECK(spp.model.names() == std::vector<std::string>{"0:2", "0:3", "1:x", "1:x+1"});
  CHECK(spp.model.krull_dim() == 0);

  auto mixed = RingDesc(ProductRing{{RingDesc(ZZRing{}), z12}});
  CHECK_THROWS_AS(spectrum_of(mixed), input_error);

  CHECK_THROWS_AS(RingDesc(QuotZRing{1}), input_error);
  CHECK_THROWS_AS(RingDesc(QuotPolyRing{2, poly_from_string(F2, "1")}), input_error);
}

TEST_CASE("canonical module forms") {
  auto z12 = RingDesc(QuotZRing{12});
  // factor 12 is the whole ring: becomes a free generator; 8 generates (4)
  auto m = z_module(z12, 0, {12, 8, 1});
  const auto& p = std::get<ZPart>(m.parts[0]);
  CHECK(p.free_rank == 1);
  CHECK(p.factors == std::vector<i64>{4});

  // chain smoothing: [4, 6] over Z -> [2, 12]
  auto zz = RingDesc(ZZRing{});
  auto c = z_module(zz, 0, {4, 6});
  CHECK(std::get<ZPart>(c.parts[0]).factors == std::vector<i64>{2, 12});

  CHECK(module_card(zz, c) == 24);
  CHECK(!module_card(zz, z_module(zz, 1, {})).has_value());
  CHECK(module_card(z12, ring_as_module(z12)) == 12);
}

TEST_CASE("direct sums re-canonicalise") {
  auto zz = RingDesc(ZZRing{});
  auto a = z_module(zz, 0, {2});
  auto b = z_module(zz, 0, {3});
  auto s = module_direct_sum(zz, a, b);
  CHECK(std::get<ZPart>(s.parts[0]).factors == std::vector<i64>{6});
}

TEST_CASE("module support") {
  auto zz = RingDesc(ZZRing{});
  auto spec = spectrum_of(zz);
  auto m12 = z_module(zz, 0, {12});
  auto supp = module_support(spec, m12);
  CHECK(spec.model.equal(supp, spec.model.finite_closed_set({"2", "3"})));

  auto free2 = z_module(zz, 2, {});
  CHECK(spec.model.equal(module_support(spec, free2), spec.model.full_set()));

  CHECK(module_support(spec, zero_module(zz)).is_empty());

  // support is specialisation-closed
  Rng rng(79);
  for (int t = 0; t < 100; ++t) {
    RingDesc ring = random_quotient_ring(rng);
    auto sp = spectrum_of(ring);
    auto m = random_module(ring, rng, 5000);
    CHECK(sp.model.is_specialisation_closed(module_support(sp, m)));
  }
}

TEST_CASE("torsion radical, worked Z/12 example") {
  auto z12 = RingDesc(QuotZRing{12});
  auto spec = spectrum_of(z12);
  auto v2 = spec.model.singleton(spec.model.prime_by_label("2"));

  auto r = ring_as_module(z12);
  auto res = torsion_radical(spec, r, v2);
  // Gamma_{(2)}(Z/12) = {0,3,6,9} = 3*(Z/12), cyclic of order 4
  CHECK(std::get<ZPart>(res.sub.submodule.parts[0]).factors == std::vector<i64>{4});
  CHECK(std::get<ZPart>(res.sub.submodule.parts[0]).free_rank == 0);
  REQUIRE(res.sub.embedding.gens.size() == 1);
  CHECK(std::get<i64>(res.sub.embedding.gens[0].scalar) == 3);
  // quotient Z/12 / {0,3,6,9} = Z/3
  CHECK(std::get<ZPart>(res.quotient.parts[0]).factors == std::vector<i64>{3});

  // V = Spec: everything is torsion; V = {}: nothing is
  CHECK(torsion_radical(spec, r, spec.model.full_set()).sub.submodule == r);
  CHECK(module_is_zero(torsion_radical(spec, r, spec.model.empty_set()).sub.submodule));

  CHECK_THROWS_AS(torsion_radical(spectrum_of(RingDesc(ZZRing{})), ring_as_module(RingDesc(ZZRing{})),
                                  spectrum_of(RingDesc(ZZRing{})).model.singleton(Prime::generic())),
                  input_error);
}

TEST_CASE("torsion radical over a PID") {
  auto zz = RingDesc(ZZRing{});
  auto spec = spectrum_of(zz);
  auto m = z_module(zz, 1, {12});  // Z + Z/12

  // V = Spec: the radical is the whole module
  CHECK(torsion_radical(spec, m, spec.model.full_set()).sub.submodule == m);

  // V = all closed points: the torsion part
  auto closed = spec.model.cofinite_closed_set({});
  auto tors = torsion_radical(spec, m, closed);
  CHECK(std::get<ZPart>(tors.sub.submodule.parts[0]).factors == std::vector<i64>{12});
  CHECK(std::get<ZPart>(tors.sub.submodule.parts[0]).free_rank == 0);
  CHECK(std::get<ZPart>(tors.quotient.parts[0]).free_rank == 1);
  CHECK(std::get<ZPart>(tors.quotient.parts[0]).factors.empty());

  // V = {(2)}: the 2-primary part
  auto v2 = spec.model.finite_closed_set({"2"});
  auto two = torsion_radical(spec, m, v2);
  CHECK(std::get<ZPart>(two.sub.submodule.parts[0]).factors == std::vector<i64>{4});
}

TEST_CASE("torsion radical laws on random modules") {
  Rng rng(83);
  for (int t = 0; t < 500; ++t) {
    RingDesc ring = (t % 5 == 0) ? RingDesc(ZZRing{}) : random_quotient_ring(rng);
    auto spec = spectrum_of(ring);
    auto m = random_module(ring, rng, 3000);
    auto v = random_spc_closed(spec.model, rng);
    auto res = torsion_radical(spec, m, v);
    // Supp(Gamma_V M) <= V
    CHECK(spec.model.subset(module_support(spec, res.sub.submodule), v));
    // Gamma_V(Gamma_V M) = Gamma_V M
    CHECK(torsion_radical(spec, res.sub.submodule, v).sub.submodule == res.sub.submodule);
    // Gamma_V(M / Gamma_V M) = 0
    CHECK(module_is_zero(torsion_radical(spec, res.quotient, v).sub.submodule));
    // M in T_V <=> Supp(M) <= V <=> Gamma_V(M) = M
    const bool supp_in = spec.model.subset(module_support(spec, m), v);
    CHECK(supp_in == (res.sub.submodule == m));
  }
}

TEST_CASE("annihilators") {
  auto zz = RingDesc(ZZRing{});
  // Ann(Z/4 + Z/6) = (12)
  auto m = z_module(zz, 0, {4, 6});
  CHECK(std::get<i64>(annihilator_ideal(zz, m).gens[0]) == 12);
  CHECK(std::get<i64>(annihilator_ideal(zz, z_module(zz, 2, {})).gens[0]) == 0);
  CHECK(std::get<i64>(annihilator_ideal(zz, zero_module(zz)).gens[0]) == 1);

  // ann_{Z/12}((3)) = (4)/(12), cyclic of order 3 generated by 4
  auto z12 = RingDesc(QuotZRing{12});
  Ideal three;
  three.gens.emplace_back(static_cast<i64>(3));
  auto res = ann_by_ideal(z12, ring_as_module(z12), three);
  CHECK(std::get<ZPart>(res.sub.submodule.parts[0]).factors == std::vector<i64>{3});
  REQUIRE(res.sub.embedding.gens.size() == 1);
  CHECK(std::get<i64>(res.sub.embedding.gens[0].scalar) == 4);
  CHECK(std::get<ZPart>(res.quotient.parts[0]).factors == std::vector<i64>{4});
}

TEST_CASE("t(R), its annihilator and the trace ideal") {
  auto z12 = RingDesc(QuotZRing{12});
  auto spec = spectrum_of(z12);
  auto v2 = spec.model.singleton(spec.model.prime_by_label("2"));

  auto t = t_ideal(spec, v2);
  CHECK(std::get<i64>(t.gens[0]) == 3);  // t(R) = 3*(Z/12) = {0,3,6,9}
  auto tr = trace_of_quotient(spec, v2);
  CHECK(std::get<i64>(tr.gens[0]) == 4);  // Ann(t(R)) = (4)

  // V = {}: t(R) = 0 (generator = modulus), trace = R
  auto t0 = t_ideal(spec, spec.model.empty_set());
  CHECK(std::get<i64>(t0.gens[0]) == 12);
  CHECK(std::get<i64>(trace_of_quotient(spec, spec.model.empty_set()).gens[0]) == 1);

  // domains are torsionfree at closed sets
  auto zz = RingDesc(ZZRing{});
  auto zspec = spectrum_of(zz);
  auto closed = zspec.model.finite_closed_set({"2", "7"});
  CHECK(std::get<i64>(t_ideal(zspec, closed).gens[0]) == 0);
  CHECK(std::get<i64>(trace_of_quotient(zspec, closed).gens[0]) == 1);
}

TEST_CASE("presentation matrices") {
  auto zz = RingDesc(ZZRing{});
  auto part = part_from_presentation_z(flatten_ring(zz)[0], {{2, 0}, {0, 3}});
  FgModule m{{part}};
  m = canonical_module(zz, m);
  CHECK(std::get<ZPart>(m.parts[0]).factors == std::vector<i64>{6});

  // zero 1x1 matrix presents a free module of rank 1
  auto part0 = part_from_presentation_z(flatten_ring(zz)[0], {{0}});
  FgModule f{{part0}};
  f = canonical_module(zz, f);
  CHECK(std::get<ZPart>(f.parts[0]).free_rank == 1);
  CHECK(std::get<ZPart>(f.parts[0]).factors.empty());

  // over Z/4, one generator with relation 2: Z/2
  auto z4 = RingDesc(QuotZRing{4});
  auto pq = part_from_presentation_z(flatten_ring(z4)[0], {{2}});
  FgModule q{{pq}};
  q = canonical_module(z4, q);
  CHECK(std::get<ZPart>(q.parts[0]).factors == std::vector<i64>{2});
}

TEST_CASE("chain smoothing agrees with smith normal form of the diagonal") {
  // two algebraic routes to the invariant factors of a factor multiset
  Rng rng(131);
  ZOps zops;
  auto zz = RingDesc(ZZRing{});
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 1 + rng.below(4);
    std::vector<i64> raw;
    Mat<i64> diag(k, std::vector<i64>(k, 0));
    for (std::size_t i = 0; i < k; ++i) {
      i64 d = 2 + static_cast<i64>(rng.below(50));
      raw.push_back(d);
      diag[i][i] = d;
    }
    auto via_snf = cokernel_invariants(zops, diag, k).first;
    auto m = canonical_module(zz, FgModule{{ZPart{0, raw}}});
    CHECK(std::get<ZPart>(m.parts[0]).factors == via_snf);
  }
  // and over F_q[x]
  Fq F(3);
  PolyOps pops(F);
  auto fx = RingDesc(PolyRing{3});
  for (int t = 0; t < 60; ++t) {
    const std::size_t k = 1 + rng.below(3);
    std::vector<Poly> raw;
    Mat<Poly> diag(k, std::vector<Poly>(k, poly_zero()));
    for (std::size_t i = 0; i < k; ++i) {
      const int deg = 1 + static_cast<int>(rng.below(3));
      Poly g;
      g.c.assign(static_cast<std::size_t>(deg) + 1, 0);
      for (int d = 0; d < deg; ++d) g.c[static_cast<std::size_t>(d)] = static_cast<std::uint32_t>(rng.below(3));
      g.c[static_cast<std::size_t>(deg)] = 1;
      raw.push_back(g);
      diag[i][i] = g;
    }
    auto via_snf = cokernel_invariants(pops, diag, k).first;
    auto m = canonical_module(fx, FgModule{{PolyPart{0, raw}}});
    CHECK(std::get<PolyPart>(m.parts[0]).factors == via_snf);
  }
}

TEST_CASE("full polynomial rings as bases") {
  auto fx = RingDesc(PolyRing{4});
  auto spec = spectrum_of(fx);
  CHECK(spec.model.is_dedekind());
  CHECK(spec.model.label() == "F4[x]");

  // module F_4[x]/(x^2+x): support {x, x+1}
  Fq F(4);
  FgModule m = zero_module(fx);
  std::get<PolyPart>(m.parts[0]).factors.push_back(poly_from_string(F, "x^2+x"));
  m = canonical_module(fx, m);
  auto supp = module_support(spec, m);
  CHECK(spec.model.equal(supp, spec.model.finite_closed_set({"x", "x+1"})));

  // torsion radical at one closed point picks the primary part
  auto vx = spec.model.finite_closed_set({"x"});
  auto rad = torsion_radical(spec, m, vx);
  CHECK(std::get<PolyPart>(rad.sub.submodule.parts[0]).factors ==
        std::vector<Poly>{poly_from_string(F, "x")});
}

TEST_CASE("retilt input checking") {
  auto z = dedekind_model("Z");
  auto parent = SpFiltration::standard(z);
  CHECK_THROWS_AS(retilt(parent, z.singleton(Prime::generic())), input_error);  // not spc-closed
  auto small = SpFiltration(z, -1, {z.full_set(), z.finite_closed_set({"2"}), z.empty_set()});
  // support must sit inside parent(0)
  CHECK_THROWS_AS(retilt(small, z.finite_closed_set({"3"})), input_error);
  CHECK_NOTHROW(retilt(small, z.finite_closed_set({"2"})));
}

TEST_CASE("product rings compute componentwise") {
  auto prod = RingDesc(ProductRing{{RingDesc(QuotZRing{4}), RingDesc(QuotZRing{9})}});
  auto spec = spectrum_of(prod);
  REQUIRE(spec.model.size() == 2);

  auto r = ring_as_module(prod);
  auto v = spec.model.singleton(spec.model.prime_by_label("0:2"));
  auto res = torsion_radical(spec, r, v);
  // component 0 fully torsion, component 1 torsionfree w.r.t. v
  CHECK(std::get<ZPart>(res.sub.submodule.parts[0]).free_rank == 1);
  CHECK(std::get<ZPart>(res.sub.submodule.parts[1]).free_rank == 0);
  CHECK(std::get<ZPart>(res.sub.submodule.parts[1]).factors.empty());

  auto ann = annihilator_ideal(prod, r);
  CHECK(std::get<i64>(ann.gens[0]) == 4);  // zero ideal in Z/4
  CHECK(std::get<i64>(ann.gens[1]) == 9);
}
