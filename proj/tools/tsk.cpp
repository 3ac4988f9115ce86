// tsk — t-structure kit: spectra as posets, sp-filtrations, HRS-tilt
// chains, torsion-pair classification and the CHZ derived-equivalence
// criterion over concrete commutative noetherian rings.
//
// Exit codes: 0 success / predicate true, 1 predicate false, 2 input
// error, 3 internal-consistency failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "sptilt/chz.hpp"
#include "sptilt/heartclass.hpp"
#include "sptilt/json_io.hpp"
#include "sptilt/module.hpp"
#include "sptilt/oracle.hpp"
#include "sptilt/random.hpp"
#include "sptilt/ring.hpp"
#include "sptilt/snf.hpp"
#include "sptilt/spectrum.hpp"
#include "sptilt/spfiltration.hpp"
#include "sptilt/suites.hpp"

namespace {

using sptilt::json;

struct Options {
  std::string format = "json";
  sptilt::u64 seed = sptilt::kDefaultSeed;
  unsigned jobs = 1;
};

json read_json_arg(const std::string& arg) {
  if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) return json::parse(arg);
  if (arg == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return json::parse(ss.str());
  }
  std::ifstream in(arg);
  if (!in) throw sptilt::input_error("cannot open file: " + arg);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw sptilt::input_error(std::string(e.what()) + " in " + arg);
  }
  return j;
}

void emit(const Options& opt, const json& j, const std::string& table) {
  if (opt.format == "table" && !table.empty())
    std::cout << table;
  else
    std::cout << j.dump(2) << "\n";
}

std::string primeset_brief(const sptilt::SpectrumModel& m, const sptilt::PrimeSet& s) {
  return sptilt::primeset_to_json(m, s).dump();
}

std::string chain_table(const std::vector<sptilt::TiltStep>& steps) {
  std::ostringstream os;
  os << "step  torsion_support\n";
  for (std::size_t i = 0; i < steps.size(); ++i)
    os << i << "     " << primeset_brief(steps[i].child.model(), steps[i].torsion_support) << "\n";
  if (steps.empty()) os << "(empty chain: already the standard filtration)\n";
  return os.str();
}

int cmd_spec_show(const Options& opt, const std::string& model_arg) {
  auto m = sptilt::model_from_json(read_json_arg(model_arg));
  json j;
  j["model"] = sptilt::model_to_json(m);
  j["krull_dim"] = m.krull_dim();
  if (m.is_dedekind())
    j["prime_count"] = "infinite";
  else
    j["prime_count"] = m.size();
  std::ostringstream os;
  os << "kind: " << (m.is_dedekind() ? "dedekind" : "finite_poset") << "\n"
     << "krull_dim: " << m.krull_dim() << "\n";
  emit(opt, j, os.str());
  return 0;
}

int cmd_spec_closure(const Options& opt, const std::string& model_arg, const std::string& set_arg) {
  auto m = sptilt::model_from_json(read_json_arg(model_arg));
  auto s = sptilt::primeset_from_json(m, read_json_arg(set_arg));
  emit(opt, sptilt::primeset_to_json(m, m.specialization_closure(s)), "");
  return 0;
}

int cmd_spec_enumerate(const Options& opt, const std::string& model_arg) {
  auto m = sptilt::model_from_json(read_json_arg(model_arg));
  auto sets = m.enumerate_spc_closed();
  json arr = json::array();
  for (const auto& s : sets) arr.push_back(sptilt::primeset_to_json(m, s));
  json j;
  j["count"] = sets.size();
  j["sets"] = arr;
  std::ostringstream os;
  for (const auto& s : sets) os << primeset_brief(m, s) << "\n";
  emit(opt, j, os.str());
  return 0;
}

int cmd_filt_validate(const Options& opt, const std::string& filt_arg) {
  auto phi = sptilt::filtration_from_json(read_json_arg(filt_arg));
  auto viols = phi.validate();
  json j;
  j["ok"] = viols.empty();
  json arr = json::array();
  for (const auto& v : viols) {
    json e;
    e["degree"] = v.degree;
    e["reason"] = v.reason;
    arr.push_back(e);
  }
  j["violations"] = arr;
  std::ostringstream os;
  os << (viols.empty() ? "valid\n" : "invalid:\n");
  for (const auto& v : viols) os << "  degree " << v.degree << ": " << v.reason << "\n";
  emit(opt, j, os.str());
  return viols.empty() ? 0 : 1;
}

int cmd_filt_cousin(const Options& opt, const std::string& filt_arg) {
  auto phi = sptilt::filtration_from_json(read_json_arg(filt_arg));
  auto rep = sptilt::weak_cousin(phi);
  emit(opt, sptilt::cousin_report_to_json(phi.model(), rep), [&] {
    std::ostringstream os;
    os << (rep.ok ? "weak Cousin: holds\n" : "weak Cousin: fails\n");
    for (const auto& v : rep.violations)
      os << "  q=" << phi.model().label_of(v.q) << " at degree " << v.degree << " needs p="
         << phi.model().label_of(v.p) << " one level down\n";
    return os.str();
  }());
  return rep.ok ? 0 : 1;
}

int cmd_filt_degree(const Options& opt, const std::string& filt_arg, const std::string& prime) {
  auto phi = sptilt::filtration_from_json(read_json_arg(filt_arg));
  auto p = phi.model().prime_by_label(prime);
  json j;
  j["prime"] = prime;
  j["n_p"] = sptilt::heart_degree(phi, p);
  emit(opt, j, "n_" + prime + " = " + std::to_string(sptilt::heart_degree(phi, p)) + "\n");
  return 0;
}

int cmd_filt_tilt(const Options& opt, const std::string& filt_arg, const std::string& support_arg) {
  auto phi = sptilt::filtration_from_json(read_json_arg(filt_arg));
  auto s = sptilt::primeset_from_json(phi.model(), read_json_arg(support_arg));
  emit(opt, sptilt::filtration_to_json(sptilt::retilt(phi, s)), "");
  return 0;
}

int cmd_filt_untilt(const Options& opt, const std::string& filt_arg) {
  auto phi = sptilt::filtration_from_json(read_json_arg(filt_arg));
  emit(opt, sptilt::tilt_step_to_json(sptilt::untilt_step(phi)), "");
  return 0;
}

int cmd_filt_decompose(const Options& opt, const std::string& filt_arg) {
  auto phi = sptilt::filtration_from_json(read_json_arg(filt_arg));
  auto steps = sptilt::decompose(phi);
  json arr = json::array();
  for (const auto& s : steps) arr.push_back(sptilt::tilt_step_to_json(s));
  json j;
  j["length"] = steps.size();
  j["steps"] = arr;
  emit(opt, j, chain_table(steps));
  return 0;
}

int cmd_filt_verdict(const Options& opt, const std::string& filt_arg) {
  auto phi = sptilt::filtration_from_json(read_json_arg(filt_arg));
  auto v = sptilt::derived_equivalence_verdict(phi);
  std::ostringstream os;
  os << sptilt::to_string(v.kind);
  if (!v.reason.empty()) os << ": " << v.reason;
  os << "\n";
  if (v.kind == sptilt::EquivalenceVerdict::Kind::equivalent) os << chain_table(v.certificate);
  emit(opt, sptilt::verdict_to_json(phi, v), os.str());
  return v.kind == sptilt::EquivalenceVerdict::Kind::equivalent ? 0 : 1;
}

int cmd_filt_support_between(const Options& opt, const std::string& child_arg,
                             const std::string& parent_arg) {
  auto child = sptilt::filtration_from_json(read_json_arg(child_arg));
  auto parent = sptilt::filtration_from_json(read_json_arg(parent_arg));
  auto s = sptilt::torsion_support_between(child, parent);
  emit(opt, sptilt::primeset_to_json(child.model(), s), "");
  return 0;
}

int cmd_heart_pairs(const Options& opt, const std::string& filt_arg) {
  auto phi = sptilt::filtration_from_json(read_json_arg(filt_arg));
  auto bij = sptilt::finite_type_pairs(phi);
  auto pairs = bij.enumerate();
  json arr = json::array();
  for (const auto& t : pairs) arr.push_back(sptilt::primeset_to_json(phi.model(), t.support));
  json j;
  j["count"] = pairs.size();
  j["supports"] = arr;
  std::ostringstream os;
  os << pairs.size() << " hereditary torsion pairs of finite type\n";
  emit(opt, j, os.str());
  return 0;
}

int cmd_heart_is_support(const Options& opt, const std::string& model_arg, const std::string& v_arg,
                         const std::string& u_arg, bool assume_perfect) {
  auto m = sptilt::model_from_json(read_json_arg(model_arg));
  auto v = sptilt::primeset_from_json(m, read_json_arg(v_arg));
  auto u = sptilt::primeset_from_json(m, read_json_arg(u_arg));
  auto res = sptilt::is_ht_support(m, v, u,
                                   assume_perfect ? sptilt::PerfectAssumption::assumed
                                                  : sptilt::PerfectAssumption::automatic);
  std::ostringstream os;
  os << (res.is_support ? "is an H_t-support" : "is not an H_t-support")
     << (res.conditional ? " (conditional on perfectness)" : "") << "\n";
  emit(opt, sptilt::ht_support_to_json(m, res), os.str());
  return res.is_support ? 0 : 1;
}

int cmd_heart_meet_join(const Options& opt, bool is_meet, const std::string& heart_arg,
                        const std::string& t1_arg, const std::string& t2_arg) {
  auto phi = sptilt::filtration_from_json(read_json_arg(heart_arg));
  auto bij = sptilt::finite_type_pairs(phi);
  auto t1 = bij.encode(sptilt::primeset_from_json(phi.model(), read_json_arg(t1_arg)));
  auto t2 = bij.encode(sptilt::primeset_from_json(phi.model(), read_json_arg(t2_arg)));
  auto t = is_meet ? sptilt::meet(t1, t2) : sptilt::join(t1, t2);
  emit(opt, sptilt::torsion_pair_to_json(t), "");
  return 0;
}

int cmd_ring_spec(const Options& opt, const std::string& ring_arg) {
  auto ring = sptilt::ring_from_json(read_json_arg(ring_arg));
  auto spec = sptilt::spectrum_of(ring, opt.seed);
  json j;
  j["model"] = sptilt::model_to_json(spec.model);
  if (!spec.model.is_dedekind()) {
    json arr = json::array();
    for (std::size_t i = 0; i < spec.primes.size(); ++i) {
      json e;
      e["name"] = spec.model.name(static_cast<std::uint32_t>(i));
      e["component"] = spec.primes[i].component;
      arr.push_back(e);
    }
    j["primes"] = arr;
  }
  emit(opt, j, "");
  return 0;
}

int cmd_ring_snf(const Options& opt, const std::string& ring_arg, const std::string& matrix_arg) {
  auto ring = sptilt::ring_from_json(read_json_arg(ring_arg));
  auto comps = sptilt::flatten_ring(ring);
  if (comps.size() != 1 || comps[0].is_quotient())
    throw sptilt::input_error("snf expects a matrix over Z or F_q[x]");
  json mj = read_json_arg(matrix_arg);
  if (mj.is_object() && mj.contains("matrix")) mj = mj.at("matrix");
  auto render = [&](auto ops, const auto& mat) {
    auto res = sptilt::smith_normal_form(ops, mat);
    auto str_mat = [&](const auto& m) {
      std::vector<std::vector<std::string>> out;
      for (const auto& row : m) {
        std::vector<std::string> r;
        for (const auto& e : row) r.push_back(ops.to_string(e));
        out.push_back(r);
      }
      return out;
    };
    std::vector<std::string> fs;
    for (const auto& f : res.invariant_factors) fs.push_back(ops.to_string(f));
    std::ostringstream os;
    os << "invariant factors:";
    for (const auto& f : fs) os << " " << f;
    os << "\nfree cokernel rank: " << (mat.size() - res.rank) << "\n";
    emit(opt, sptilt::snf_to_json(fs, str_mat(res.d), str_mat(res.u), str_mat(res.v)), os.str());
  };
  if (comps[0].is_poly()) {
    auto mat = std::get<sptilt::Mat<sptilt::Poly>>(sptilt::matrix_from_json(comps[0], mj));
    render(sptilt::PolyOps(*comps[0].field), mat);
  } else {
    auto mat = std::get<sptilt::Mat<sptilt::i64>>(sptilt::matrix_from_json(comps[0], mj));
    render(sptilt::ZOps{}, mat);
  }
  return 0;
}

int cmd_ring_support(const Options& opt, const std::string& ring_arg, const std::string& mod_arg) {
  auto ring = sptilt::ring_from_json(read_json_arg(ring_arg));
  auto spec = sptilt::spectrum_of(ring, opt.seed);
  auto m = sptilt::module_from_json(ring, read_json_arg(mod_arg));
  emit(opt, sptilt::primeset_to_json(spec.model, sptilt::module_support(spec, m, opt.seed)), "");
  return 0;
}

int cmd_ring_radical(const Options& opt, const std::string& ring_arg, const std::string& mod_arg,
                     const std::string& v_arg) {
  auto ring = sptilt::ring_from_json(read_json_arg(ring_arg));
  auto spec = sptilt::spectrum_of(ring, opt.seed);
  auto m = sptilt::module_from_json(ring, read_json_arg(mod_arg));
  auto v = sptilt::primeset_from_json(spec.model, read_json_arg(v_arg));
  auto res = sptilt::torsion_radical(spec, m, v);
  json j;
  j["submodule"] = sptilt::module_to_json(res.sub.submodule);
  j["embedding"] = sptilt::embedding_to_json(res.sub.embedding);
  j["quotient"] = sptilt::module_to_json(res.quotient);
  emit(opt, j, "");
  return 0;
}

int cmd_ring_ann(const Options& opt, const std::string& ring_arg, const std::string& mod_arg,
                 const std::string& ideal_arg) {
  auto ring = sptilt::ring_from_json(read_json_arg(ring_arg));
  auto m = sptilt::module_from_json(ring, read_json_arg(mod_arg));
  if (ideal_arg.empty()) {
    json j;
    j["annihilator"] = sptilt::ideal_to_json(sptilt::annihilator_ideal(ring, m));
    emit(opt, j, "");
    return 0;
  }
  auto ideal = sptilt::ideal_from_json(ring, read_json_arg(ideal_arg));
  auto res = sptilt::ann_by_ideal(ring, m, ideal);
  json j;
  j["submodule"] = sptilt::module_to_json(res.sub.submodule);
  j["embedding"] = sptilt::embedding_to_json(res.sub.embedding);
  j["quotient"] = sptilt::module_to_json(res.quotient);
  emit(opt, j, "");
  return 0;
}

int cmd_chz_check(const Options& opt, const std::string& ring_arg, const std::string& v_arg) {
  auto ring = sptilt::ring_from_json(read_json_arg(ring_arg));
  auto spec = sptilt::spectrum_of(ring, opt.seed);
  auto v = sptilt::primeset_from_json(spec.model, read_json_arg(v_arg));
  auto res = sptilt::her_criterion(spec, v);
  std::ostringstream os;
  os << (res.pass ? "PASS" : "FAIL (internal inconsistency)") << "\n"
     << "t(R):    " << sptilt::module_to_json(res.t_R).dump() << "\n"
     << "Ann:     " << sptilt::ideal_to_json(res.ann).dump() << "\n"
     << "Supp(R/Ann): " << primeset_brief(spec.model, res.quotient_support) << "\n";
  emit(opt, sptilt::her_criterion_to_json(spec, res), os.str());
  if (!res.pass) {
    std::cerr << "her_criterion FAILED: this cannot happen over a commutative noetherian ring "
                 "and indicates a bug\n";
    return 3;
  }
  return 0;
}

int cmd_chz_witness(const Options& opt, const std::string& ring_arg, const std::string& mod_arg,
                    const std::string& v_arg) {
  auto ring = sptilt::ring_from_json(read_json_arg(ring_arg));
  auto spec = sptilt::spectrum_of(ring, opt.seed);
  auto m = sptilt::module_from_json(ring, read_json_arg(mod_arg));
  auto v = sptilt::primeset_from_json(spec.model, read_json_arg(v_arg));
  auto w = sptilt::short_chz_witness(spec, m, v);
  emit(opt, sptilt::witness_to_json(spec, w), "");
  return 0;
}

int cmd_chz_verify(const Options& opt, const std::string& witness_arg) {
  json wj = read_json_arg(witness_arg);
  sptilt::SpectrumOf spec = sptilt::spectrum_of(sptilt::ring_from_json(wj.at("ring")));
  auto w = sptilt::witness_from_json(wj, spec);
  auto check = sptilt::verify_witness(spec, w);
  std::ostringstream os;
  os << (check.ok ? "witness verifies" : "witness rejected") << "\n";
  for (const auto& r : check.reasons) os << "  " << r << "\n";
  emit(opt, sptilt::witness_check_to_json(check), os.str());
  return check.ok ? 0 : 1;
}

int cmd_oracle_run(const Options& opt, const std::string& suite) {
  auto res = sptilt::run_suite(suite, opt.seed, opt.jobs);
  for (const auto& r : res.reports) std::cout << sptilt::oracle_report_to_json(r).dump() << "\n";
  std::cerr << "suite " << suite << ": " << res.reports.size() << " cases, "
            << res.disagreements << " disagreements\n";
  return res.disagreements == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tsk: spectra, sp-filtrations, HRS-tilts and derived-equivalence checks"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--format", opt.format, "output format: json or table")
      ->check(CLI::IsMember({"json", "table"}));
  app.add_option("--seed", opt.seed, "seed for randomised internals");
  app.add_option("--jobs", opt.jobs, "worker threads for oracle runs");

  int exit_code = 0;
  std::string a1, a2, a3;
  bool flag1 = false;

  auto* spec = app.add_subcommand("spec", "spectrum operations");
  auto* spec_show = spec->add_subcommand("show", "normalise and summarise a spectrum model");
  spec_show->add_option("model", a1, "model JSON or file")->required();
  spec_show->callback([&]() { exit_code = cmd_spec_show(opt, a1); });
  auto* spec_closure = spec->add_subcommand("closure", "specialisation closure of a prime set");
  spec_closure->add_option("model", a1)->required();
  spec_closure->add_option("--set", a2, "prime set JSON or file")->required();
  spec_closure->callback([&]() { exit_code = cmd_spec_closure(opt, a1, a2); });
  auto* spec_enum = spec->add_subcommand("enumerate", "all specialisation-closed subsets");
  spec_enum->add_option("model", a1)->required();
  spec_enum->callback([&]() { exit_code = cmd_spec_enumerate(opt, a1); });

  auto* filt = app.add_subcommand("filt", "sp-filtration operations");
  auto* f_validate = filt->add_subcommand("validate", "check levels are decreasing and closed");
  f_validate->add_option("filtration", a1)->required();
  f_validate->callback([&]() { exit_code = cmd_filt_validate(opt, a1); });
  auto* f_cousin = filt->add_subcommand("cousin", "weak Cousin condition with violations");
  f_cousin->add_option("filtration", a1)->required();
  f_cousin->callback([&]() { exit_code = cmd_filt_cousin(opt, a1); });
  auto* f_degree = filt->add_subcommand("degree", "heart degree n_p of a prime");
  f_degree->add_option("filtration", a1)->required();
  f_degree->add_option("--prime", a2)->required();
  f_degree->callback([&]() { exit_code = cmd_filt_degree(opt, a1, a2); });
  auto* f_tilt = filt->add_subcommand("tilt", "HRS-tilt at a torsion support");
  f_tilt->add_option("filtration", a1)->required();
  f_tilt->add_option("--support", a2)->required();
  f_tilt->callback([&]() { exit_code = cmd_filt_tilt(opt, a1, a2); });
  auto* f_untilt = filt->add_subcommand("untilt", "recover the tilting parent (psi^<1>)");
  f_untilt->add_option("filtration", a1)->required();
  f_untilt->callback([&]() { exit_code = cmd_filt_untilt(opt, a1); });
  auto* f_dec = filt->add_subcommand("decompose", "tilt chain from the standard filtration");
  f_dec->add_option("filtration", a1)->required();
  f_dec->callback([&]() { exit_code = cmd_filt_decompose(opt, a1); });
  auto* f_verdict = filt->add_subcommand("verdict", "derived-equivalence verdict");
  f_verdict->add_option("filtration", a1)->required();
  f_verdict->callback([&]() { exit_code = cmd_filt_verdict(opt, a1); });
  auto* f_sb = filt->add_subcommand("support-between", "torsion support of a tilt between filtrations");
  f_sb->add_option("--child", a1)->required();
  f_sb->add_option("--parent", a2)->required();
  f_sb->callback([&]() { exit_code = cmd_filt_support_between(opt, a1, a2); });

  auto* heart = app.add_subcommand("heart", "torsion pairs in hearts");
  auto* h_pairs = heart->add_subcommand("pairs", "finite-type pairs of a restrictable heart");
  h_pairs->add_option("filtration", a1)->required();
  h_pairs->callback([&]() { exit_code = cmd_heart_pairs(opt, a1); });
  auto* h_is = heart->add_subcommand("is-support", "H_t-support membership for a tilted heart");
  h_is->add_option("--model", a1)->required();
  h_is->add_option("--v", a2, "tilting support (specialisation-closed)")->required();
  h_is->add_option("--u", a3, "candidate support")->required();
  h_is->add_flag("--assume-perfect", flag1, "assert the tilting pair is perfect");
  h_is->callback([&]() { exit_code = cmd_heart_is_support(opt, a1, a2, a3, flag1); });
  auto* h_meet = heart->add_subcommand("meet", "meet of two finite-type pairs");
  h_meet->add_option("--heart", a1)->required();
  h_meet->add_option("--t1", a2)->required();
  h_meet->add_option("--t2", a3)->required();
  h_meet->callback([&]() { exit_code = cmd_heart_meet_join(opt, true, a1, a2, a3); });
  auto* h_join = heart->add_subcommand("join", "join of two finite-type pairs");
  h_join->add_option("--heart", a1)->required();
  h_join->add_option("--t1", a2)->required();
  h_join->add_option("--t2", a3)->required();
  h_join->callback([&]() { exit_code = cmd_heart_meet_join(opt, false, a1, a2, a3); });

  auto* ring = app.add_subcommand("ring", "concrete rings and modules");
  auto* r_spec = ring->add_subcommand("spec", "spectrum of a ring");
  r_spec->add_option("ring", a1)->required();
  r_spec->callback([&]() { exit_code = cmd_ring_spec(opt, a1); });
  auto* r_snf = ring->add_subcommand("snf", "Smith normal form over Z or F_q[x]");
  r_snf->add_option("--ring", a1)->required();
  r_snf->add_option("--matrix", a2)->required();
  r_snf->callback([&]() { exit_code = cmd_ring_snf(opt, a1, a2); });
  auto* r_supp = ring->add_subcommand("support", "support of a module");
  r_supp->add_option("--ring", a1)->required();
  r_supp->add_option("--module", a2)->required();
  r_supp->callback([&]() { exit_code = cmd_ring_support(opt, a1, a2); });
  auto* r_rad = ring->add_subcommand("radical", "torsion radical Gamma_V");
  r_rad->add_option("--ring", a1)->required();
  r_rad->add_option("--module", a2)->required();
  r_rad->add_option("--v", a3)->required();
  r_rad->callback([&]() { exit_code = cmd_ring_radical(opt, a1, a2, a3); });
  auto* r_ann = ring->add_subcommand("ann", "annihilator ideal, or ann_M(I) with --ideal");
  r_ann->add_option("--ring", a1)->required();
  r_ann->add_option("--module", a2)->required();
  std::string ideal_arg;
  r_ann->add_option("--ideal", ideal_arg, "ideal JSON; when given, computes ann_M(I)");
  r_ann->callback([&]() { exit_code = cmd_ring_ann(opt, a1, a2, ideal_arg); });

  auto* chz = app.add_subcommand("chz", "derived-equivalence criterion");
  auto* c_check = chz->add_subcommand("check", "her_criterion for (ring, V)");
  c_check->add_option("--ring", a1)->required();
  c_check->add_option("--v", a2)->required();
  c_check->callback([&]() { exit_code = cmd_chz_check(opt, a1, a2); });
  auto* c_wit = chz->add_subcommand("witness", "short CHZ-sequence for a module");
  c_wit->add_option("--ring", a1)->required();
  c_wit->add_option("--module", a2)->required();
  c_wit->add_option("--v", a3)->required();
  c_wit->callback([&]() { exit_code = cmd_chz_witness(opt, a1, a2, a3); });
  auto* c_ver = chz->add_subcommand("verify", "validate a witness file");
  c_ver->add_option("--witness", a1)->required();
  c_ver->callback([&]() { exit_code = cmd_chz_verify(opt, a1); });

  auto* oracle = app.add_subcommand("oracle", "brute-force recomputation suites");
  auto* o_run = oracle->add_subcommand("run", "run a suite, one JSONL report per case");
  std::string suite = "all";
  o_run->add_option("--suite", suite, "ht-support, gamma, roundtrip, support-formula, chz, all");
  o_run->callback([&]() { exit_code = cmd_oracle_run(opt, suite); });

  // let --format/--seed/--jobs appear after the subcommand as well
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
    a->fallthrough();
    for (CLI::App* sub : a->get_subcommands(std::function<bool(CLI::App*)>([](CLI::App*) { return true; })))
      enable_fallthrough(sub);
  };
  enable_fallthrough(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const sptilt::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const sptilt::internal_error& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "json error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
