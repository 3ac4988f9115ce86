#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "sptilt/chz.hpp"
#include "sptilt/core.hpp"
#include "sptilt/heartclass.hpp"
#include "sptilt/module.hpp"
#include "sptilt/oracle.hpp"
#include "sptilt/ring.hpp"
#include "sptilt/snf.hpp"
#include "sptilt/spectrum.hpp"
#include "sptilt/spfiltration.hpp"

namespace sptilt {

using json = nlohmann::json;

// ---- spectra ----------------------------------------------------------------

inline json model_to_json(const SpectrumModel& m) {
  json j;
  if (m.is_dedekind()) {
    j["kind"] = "dedekind";
    j["label"] = m.label();
    j["dualising"] = m.admits_dualising_complex();
    return j;
  }
  j["kind"] = "finite_poset";
  j["primes"] = m.names();
  // covering pairs only; the closure is recomputed on parse
  json rel = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Prime q = Prime::finite(static_cast<std::uint32_t>(i));
    for (const Prime& p : m.primes_in(m.maximal_under(q)))
      rel.push_back(json::array({m.name(p.index()), m.name(q.index())}));
  }
  j["specializes_to"] = rel;
  j["dualising"] = m.admits_dualising_complex();
  return j;
}

inline SpectrumModel model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw input_error("spectrum model must be an object with a \"kind\" field");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "dedekind") {
    const std::string label = j.value("label", std::string("Z"));
    return dedekind_model(label, j.value("dualising", true));
  }
  if (kind != "finite_poset") throw input_error("unknown spectrum kind: " + kind);
  std::vector<std::string> names = j.at("primes").get<std::vector<std::string>>();
  std::vector<std::pair<std::string, std::string>> rel;
  if (j.contains("specializes_to"))
    for (const auto& e : j.at("specializes_to")) {
      if (!e.is_array() || e.size() != 2) throw input_error("specializes_to entries must be pairs");
      rel.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  return SpectrumModel::finite_poset(names, rel, j.value("dualising", false));
}

inline json primeset_to_json(const SpectrumModel& m, const PrimeSet& s) {
  m.require_set(s);
  json j;
  if (m.kind() == ModelKind::finite_poset) {
    json arr = json::array();
    for (const Prime& p : m.primes_in(s)) arr.push_back(m.name(p.index()));
    j["finite"] = arr;
    return j;
  }
  j[s.cofinite() ? "cofinite_closed" : "finite"] = s.closed_list();
  j["generic"] = s.has_generic();
  return j;
}

inline PrimeSet primeset_from_json(const SpectrumModel& m, const json& j) {
  if (!j.is_object()) throw input_error("prime set must be an object");
  bool generic = j.value("generic", false);
  if (j.contains("cofinite_closed")) {
    if (m.kind() != ModelKind::dedekind)
      throw input_error("cofinite prime sets require a dedekind model");
    return m.cofinite_closed_set(j.at("cofinite_closed").get<std::vector<std::string>>(), generic);
  }
  if (!j.contains("finite")) throw input_error("prime set needs \"finite\" or \"cofinite_closed\"");
  auto labels = j.at("finite").get<std::vector<std::string>>();
  if (m.kind() == ModelKind::finite_poset) {
    PrimeSet s = m.empty_set();
    for (const auto& l : labels) s = m.unite(s, m.singleton(m.prime_by_label(l)));
    return s;
  }
  std::vector<std::string> closed;
  for (const auto& l : labels) {
    if (l == "generic")
      generic = true;
    else
      closed.push_back(l);
  }
  return m.finite_closed_set(closed, generic);
}

// ---- filtrations -------------------------------------------------------------

inline json filtration_to_json(const SpFiltration& phi_raw) {
  SpFiltration phi = phi_raw.is_valid() ? phi_raw.canonical() : phi_raw;
  const SpectrumModel& m = phi.model();
  json j;
  j["spectrum"] = model_to_json(m);
  int lo, hi;
  if (phi.is_valid()) {
    // display form: one full level below, one empty level above
    lo = phi.d_min() - 1;
    hi = phi.stored_levels().empty() ? phi.d_min() : phi.d_max() + 1;
  } else {
    lo = phi.d_min();
    hi = phi.d_max();
  }
  j["d_min"] = lo;
  j["d_max"] = hi;
  json levels = json::array();
  for (int d = lo; d <= hi; ++d) levels.push_back(primeset_to_json(m, phi.level(d)));
  j["levels"] = levels;
  return j;
}

inline SpFiltration filtration_from_json(const json& j) {
  if (!j.is_object()) throw input_error("sp-filtration must be an object");
  SpectrumModel m = model_from_json(j.at("spectrum"));
  const int d_min = j.at("d_min").get<int>();
  const int d_max = j.at("d_max").get<int>();
  if (d_min > d_max) throw input_error("d_min must not exceed d_max");
  const auto& levels = j.at("levels");
  if (!levels.is_array() || static_cast<int>(levels.size()) != d_max - d_min + 1)
    throw input_error("levels array must have d_max - d_min + 1 entries");
  std::vector<PrimeSet> ls;
  for (const auto& e : levels) ls.push_back(primeset_from_json(m, e));
  return SpFiltration(std::move(m), d_min, std::move(ls));
}

inline json tilt_step_to_json(const TiltStep& s) {
  json j;
  j["parent"] = filtration_to_json(s.parent);
  j["child"] = filtration_to_json(s.child);
  j["torsion_support"] = primeset_to_json(s.child.model(), s.torsion_support);
  return j;
}

inline json cousin_report_to_json(const SpectrumModel& m, const WeakCousinReport& r) {
  json j;
  j["ok"] = r.ok;
  json v = json::array();
  for (const auto& viol : r.violations) {
    json e;
    e["q"] = m.label_of(viol.q);
    e["j"] = viol.degree;
    e["p"] = m.label_of(viol.p);
    v.push_back(e);
  }
  j["violations"] = v;
  return j;
}

inline json verdict_to_json(const SpFiltration& phi, const EquivalenceVerdict& v) {
  json j;
  j["verdict"] = to_string(v.kind);
  j["restrictable"] = to_string(is_restrictable(phi));
  if (v.kind == EquivalenceVerdict::Kind::equivalent) {
    json chain = json::array();
    for (const auto& s : v.certificate) chain.push_back(tilt_step_to_json(s));
    j["certificate"] = chain;
  } else {
    j["reason"] = v.reason;
  }
  return j;
}

// ---- rings & modules -----------------------------------------------------------

inline json poly_to_json(const Poly& p) { return poly_to_string(p); }

inline Poly poly_from_json(const Fq& F, const json& j) {
  if (j.is_string()) return poly_from_string(F, j.get<std::string>());
  if (j.is_number_unsigned() || j.is_number_integer()) {
    u64 v = j.get<u64>();
    if (v >= F.q()) throw input_error("polynomial coefficient out of range");
    return poly_const(static_cast<std::uint32_t>(v));
  }
  if (j.is_array()) {
    Poly p;
    for (const auto& c : j) {
      u64 v = c.get<u64>();
      if (v >= F.q()) throw input_error("polynomial coefficient out of range");
      p.c.push_back(static_cast<std::uint32_t>(v));
    }
    poly_trim(p);
    return p;
  }
  throw input_error("polynomial must be a string or a coefficient array");
}

inline json ring_to_json(const RingDesc& r) {
  json j;
  if (r.get_if<ZZRing>()) {
    j["ring"] = "Z";
  } else if (const auto* p = r.get_if<PolyRing>()) {
    j["ring"] = "Fq[x]";
    j["q"] = p->q;
  } else if (const auto* qz = r.get_if<QuotZRing>()) {
    j["ring"] = "Z/n";
    j["n"] = qz->n;
  } else if (const auto* qp = r.get_if<QuotPolyRing>()) {
    j["ring"] = "Fq[x]/f";
    j["q"] = qp->q;
    json coeffs = json::array();
    for (auto c : qp->f.c) coeffs.push_back(c);
    j["f"] = coeffs;
  } else if (const auto* pr = r.get_if<ProductRing>()) {
    j["ring"] = "product";
    json fs = json::array();
    for (const auto& f : pr->factors) fs.push_back(ring_to_json(f));
    j["factors"] = fs;
  }
  return j;
}

inline RingDesc ring_from_json(const json& j) {
  if (!j.is_object() || !j.contains("ring"))
    throw input_error("ring descriptor must be an object with a \"ring\" field");
  const std::string kind = j.at("ring").get<std::string>();
  if (kind == "Z") return RingDesc(ZZRing{});
  if (kind == "Fq[x]") return RingDesc(PolyRing{j.at("q").get<std::uint32_t>()});
  if (kind == "Z/n") return RingDesc(QuotZRing{j.at("n").get<i64>()});
  if (kind == "Fq[x]/f") {
    const auto q = j.at("q").get<std::uint32_t>();
    Fq F(q);
    return RingDesc(QuotPolyRing{q, poly_from_json(F, j.at("f"))});
  }
  if (kind == "product") {
    ProductRing p;
    for (const auto& f : j.at("factors")) p.factors.push_back(ring_from_json(f));
    return RingDesc(std::move(p));
  }
  throw input_error("unknown ring kind: " + kind);
}

inline json ideal_to_json(const Ideal& ideal) {
  json gens = json::array();
  for (const auto& g : ideal.gens) {
    if (std::holds_alternative<i64>(g))
      gens.push_back(std::to_string(std::get<i64>(g)));
    else
      gens.push_back(poly_to_string(std::get<Poly>(g)));
  }
  json j;
  j["generators"] = gens;
  return j;
}

inline Ideal ideal_from_json(const RingDesc& ring, const json& j) {
  auto comps = flatten_ring(ring);
  json gens_j;
  if (j.is_object() && j.contains("generators"))
    gens_j = j.at("generators");
  else if (j.is_array())
    gens_j = j;
  else if (j.is_string() || j.is_number())
    gens_j = json::array({j});
  else
    throw input_error("ideal must have a \"generators\" array");
  if (gens_j.size() != comps.size())
    throw input_error("ideal has the wrong number of generators for this ring");
  Ideal out;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const auto& e = gens_j[ci];
    if (comps[ci].is_poly()) {
      out.gens.emplace_back(
          canon_ideal_gen_poly(comps[ci], poly_from_json(*comps[ci].field, e)));
    } else {
      i64 v = e.is_string() ? ZOps{}.from_string(e.get<std::string>()) : e.get<i64>();
      out.gens.emplace_back(canon_ideal_gen_z(comps[ci], v));
    }
  }
  return out;
}

inline json module_part_to_json(const ModulePart& p) {
  json j;
  if (std::holds_alternative<ZPart>(p)) {
    const auto& zp = std::get<ZPart>(p);
    j["free_rank"] = zp.free_rank;
    json fs = json::array();
    for (i64 f : zp.factors) fs.push_back(std::to_string(f));
    j["invariant_factors"] = fs;
  } else {
    const auto& pp = std::get<PolyPart>(p);
    j["free_rank"] = pp.free_rank;
    json fs = json::array();
    for (const auto& f : pp.factors) fs.push_back(poly_to_string(f));
    j["invariant_factors"] = fs;
  }
  return j;
}

inline json module_to_json(const FgModule& m) {
  if (m.parts.size() == 1) return module_part_to_json(m.parts[0]);
  json comps = json::array();
  for (const auto& p : m.parts) comps.push_back(module_part_to_json(p));
  json j;
  j["components"] = comps;
  return j;
}

inline ModulePart module_part_from_json(const Component& c, const json& j) {
  if (j.contains("presentation")) {
    const auto& rows = j.at("presentation");
    if (!rows.is_array()) throw input_error("presentation must be a matrix");
    if (c.is_poly()) {
      Mat<Poly> rel;
      for (const auto& row : rows) {
        std::vector<Poly> r;
        for (const auto& e : row) r.push_back(poly_from_json(*c.field, e));
        rel.push_back(std::move(r));
      }
      for (const auto& row : rel)
        if (row.size() != rel[0].size()) throw input_error("presentation rows differ in length");
      return part_from_presentation_poly(c, rel);
    }
    Mat<i64> rel;
    for (const auto& row : rows) {
      std::vector<i64> r;
      for (const auto& e : row)
        r.push_back(e.is_string() ? ZOps{}.from_string(e.get<std::string>()) : e.get<i64>());
      rel.push_back(std::move(r));
    }
    for (const auto& row : rel)
      if (row.size() != rel[0].size()) throw input_error("presentation rows differ in length");
    return part_from_presentation_z(c, rel);
  }
  const std::uint32_t free_rank = j.value("free_rank", 0u);
  json fs = j.value("invariant_factors", json::array());
  if (c.is_poly()) {
    PolyPart p;
    p.free_rank = free_rank;
    for (const auto& e : fs) p.factors.push_back(poly_from_json(*c.field, e));
    return p;
  }
  ZPart p;
  p.free_rank = free_rank;
  for (const auto& e : fs)
    p.factors.push_back(e.is_string() ? ZOps{}.from_string(e.get<std::string>()) : e.get<i64>());
  return p;
}

inline FgModule module_from_json(const RingDesc& ring, const json& j) {
  auto comps = flatten_ring(ring);
  FgModule m;
  if (j.is_object() && j.contains("components")) {
    const auto& arr = j.at("components");
    if (arr.size() != comps.size())
      throw input_error("module has the wrong number of components for this ring");
    for (std::size_t ci = 0; ci < comps.size(); ++ci)
      m.parts.push_back(module_part_from_json(comps[ci], arr[ci]));
  } else {
    if (comps.size() != 1)
      throw input_error("module over a product ring needs a \"components\" array");
    m.parts.push_back(module_part_from_json(comps[0], j));
  }
  return canonical_module(ring, m);
}

inline json embedding_to_json(const SubmoduleEmbedding& e) {
  json arr = json::array();
  for (const auto& g : e.gens) {
    json jg;
    jg["part"] = g.part;
    jg["target"] = g.target;
    jg["scalar"] = std::holds_alternative<i64>(g.scalar)
                       ? json(std::to_string(std::get<i64>(g.scalar)))
                       : json(poly_to_string(std::get<Poly>(g.scalar)));
    arr.push_back(jg);
  }
  json j;
  j["generators"] = arr;
  return j;
}

inline json matrix_to_json(const ComponentMatrix& m) {
  json rows = json::array();
  if (std::holds_alternative<Mat<i64>>(m)) {
    for (const auto& row : std::get<Mat<i64>>(m)) {
      json r = json::array();
      for (i64 e : row) r.push_back(std::to_string(e));
      rows.push_back(r);
    }
  } else {
    for (const auto& row : std::get<Mat<Poly>>(m)) {
      json r = json::array();
      for (const auto& e : row) r.push_back(poly_to_string(e));
      rows.push_back(r);
    }
  }
  return rows;
}

inline ComponentMatrix matrix_from_json(const Component& c, const json& j) {
  if (!j.is_array()) throw input_error("matrix must be an array of rows");
  if (c.is_poly()) {
    Mat<Poly> m;
    for (const auto& row : j) {
      std::vector<Poly> r;
      for (const auto& e : row) r.push_back(poly_from_json(*c.field, e));
      m.push_back(std::move(r));
    }
    return m;
  }
  Mat<i64> m;
  for (const auto& row : j) {
    std::vector<i64> r;
    for (const auto& e : row)
      r.push_back(e.is_string() ? ZOps{}.from_string(e.get<std::string>()) : e.get<i64>());
    m.push_back(std::move(r));
  }
  return m;
}

inline json witness_to_json(const SpectrumOf& spec, const ChzWitness& w) {
  json j;
  j["ring"] = ring_to_json(w.ring);
  j["module"] = module_to_json(w.m);
  j["v"] = primeset_to_json(spec.model, w.v);
  j["f"] = module_to_json(w.f);
  json maps = json::array();
  for (const auto& m : w.map_f) maps.push_back(matrix_to_json(m));
  j["map"] = maps;
  j["t"] = module_to_json(w.t);
  json tags;
  tags["f_torsionfree"] = w.tag_f_torsionfree;
  tags["t_torsion"] = w.tag_t_torsion;
  j["tags"] = tags;
  return j;
}

inline ChzWitness witness_from_json(const json& j, SpectrumOf& spec_out) {
  RingDesc ring = ring_from_json(j.at("ring"));
  spec_out = spectrum_of(ring);
  auto comps = flatten_ring(ring);
  ChzWitness w{ring,
               module_from_json(ring, j.at("module")),
               primeset_from_json(spec_out.model, j.at("v")),
               module_from_json(ring, j.at("f")),
               {},
               module_from_json(ring, j.at("t")),
               false,
               false};
  const auto& maps = j.at("map");
  if (!maps.is_array() || maps.size() != comps.size())
    throw input_error("witness map needs one matrix per ring component");
  for (std::size_t ci = 0; ci < comps.size(); ++ci)
    w.map_f.push_back(matrix_from_json(comps[ci], maps[ci]));
  if (j.contains("tags")) {
    w.tag_f_torsionfree = j.at("tags").value("f_torsionfree", false);
    w.tag_t_torsion = j.at("tags").value("t_torsion", false);
  }
  return w;
}

inline json her_criterion_to_json(const SpectrumOf& spec, const HerCriterionResult& r) {
  json j;
  j["pass"] = r.pass;
  j["t_R"] = module_to_json(r.t_R);
  j["ann"] = ideal_to_json(r.ann);
  j["quotient_support"] = primeset_to_json(spec.model, r.quotient_support);
  return j;
}

inline json witness_check_to_json(const WitnessCheck& c) {
  json j;
  j["ok"] = c.ok;
  j["reasons"] = c.reasons;
  return j;
}

inline json ht_support_to_json(const SpectrumModel& m, const HtSupportResult& r) {
  json j;
  j["is_support"] = r.is_support;
  j["conditional"] = r.conditional;
  if (r.witness) {
    json w;
    w["w"] = primeset_to_json(m, r.witness->first);
    w["w_prime"] = primeset_to_json(m, r.witness->second);
    j["witness"] = w;
  }
  return j;
}

inline json torsion_pair_to_json(const SupportTorsionPair& t) {
  json j;
  j["support"] = primeset_to_json(t.heart.model(), t.support);
  j["finite_type"] = t.finite_type;
  j["heart"] = filtration_to_json(t.heart);
  return j;
}

inline json oracle_report_to_json(const OracleReport& r) {
  json j;
  j["case_id"] = r.case_id;
  j["inputs"] = json::parse(r.inputs);
  j["closed_form"] = r.closed_form;
  j["brute_force"] = r.brute_force;
  j["agree"] = r.agree;
  // elapsed is intentionally not serialised: JSON output is byte-stable
  // across runs with the same seed
  return j;
}

inline json snf_to_json(const std::vector<std::string>& factors,
                        const std::vector<std::vector<std::string>>& d,
                        const std::vector<std::vector<std::string>>& u,
                        const std::vector<std::vector<std::string>>& v) {
  json j;
  j["invariant_factors"] = factors;
  j["d"] = d;
  j["u"] = u;
  j["v"] = v;
  j["verified"] = true;
  return j;
}

}  // namespace sptilt
