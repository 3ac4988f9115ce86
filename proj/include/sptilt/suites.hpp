#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "sptilt/json_io.hpp"
#include "sptilt/oracle.hpp"
#include "sptilt/random.hpp"

namespace sptilt {

// All partial orders on n labelled points, deduplicated up to isomorphism
// by the minimal adjacency matrix over all permutations.
inline std::vector<SpectrumModel> all_posets_up_to_iso(std::size_t n) {
  if (n > 5) throw input_error("poset enumeration is limited to 5 points");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::set<u64> seen;
  std::vector<SpectrumModel> out;
  const std::size_t pairs = n * n;
  for (u64 rel = 0; rel < (1ull << pairs); ++rel) {
    bool ok = true;
    auto has = [&](std::size_t i, std::size_t j) { return (rel >> (i * n + j)) & 1u; };
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (has(i, i)) ok = false;  // strict part only
      for (std::size_t j = 0; j < n && ok; ++j) {
        if (!has(i, j)) continue;
        if (has(j, i)) ok = false;
        for (std::size_t k = 0; k < n && ok; ++k)
          if (has(j, k) && !has(i, k)) ok = false;
      }
    }
    if (!ok) continue;
    // canonical representative over relabellings
    std::vector<std::size_t> p = perm;
    u64 best = ~0ull;
    do {
      u64 enc = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (has(p[i], p[j])) enc |= 1ull << (i * n + j);
      best = std::min(best, enc);
    } while (std::next_permutation(p.begin(), p.end()));
    if (!seen.insert(best).second) continue;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (has(i, j)) edges.emplace_back(names[i], names[j]);
    out.push_back(SpectrumModel::finite_poset(names, edges));
  }
  return out;
}

using OracleCase = std::function<OracleReport()>;

struct SuiteResult {
  std::vector<OracleReport> reports;
  u64 disagreements = 0;
};

inline OracleReport timed_case(const std::string& id, const json& inputs,
                               const std::function<std::pair<std::string, std::string>()>& run) {
  OracleReport r;
  r.case_id = id;
  r.inputs = inputs.dump();
  auto t0 = std::chrono::steady_clock::now();
  auto [closed, brute] = run();
  r.elapsed =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0);
  r.closed_form = closed;
  r.brute_force = brute;
  r.agree = closed == brute;
  return r;
}

// Report-producing forms of the filtration oracles.
inline OracleReport filtration_roundtrip(const SpFiltration& psi) {
  json inputs;
  inputs["filtration"] = filtration_to_json(psi);
  return timed_case("filtration-roundtrip", inputs, [&]() {
    bool ok = filtration_roundtrip_ok(psi);
    return std::make_pair(std::string("roundtrip-identity"),
                          ok ? std::string("roundtrip-identity") : std::string("mismatch"));
  });
}

inline OracleReport support_formula_check(const SpFiltration& child, const SpFiltration& parent) {
  json inputs;
  inputs["child"] = filtration_to_json(child);
  inputs["parent"] = filtration_to_json(parent);
  return timed_case("support-formula", inputs, [&]() {
    bool ok = support_formula_pointwise_ok(child, parent);
    return std::make_pair(std::string("pointwise-agree"),
                          ok ? std::string("pointwise-agree") : std::string("mismatch"));
  });
}

namespace suites {

inline void ht_support_cases(u64 /*seed*/, std::vector<OracleCase>& out) {
  for (std::size_t n = 1; n <= 4; ++n) {
    auto models = all_posets_up_to_iso(n);
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      SpectrumModel m = models[mi];
      for (const PrimeSet& v : m.enumerate_spc_closed()) {
        const u64 subsets = 1ull << m.size();
        for (u64 bits = 0; bits < subsets; ++bits) {
          PrimeSet u = m.empty_set();
          for (std::size_t i = 0; i < m.size(); ++i)
            if ((bits >> i) & 1u) u = m.unite(u, m.singleton(Prime::finite(static_cast<std::uint32_t>(i))));
          std::string id = "ht-support/n" + std::to_string(n) + "/m" + std::to_string(mi) + "/v" +
                           std::to_string(v.bits()) + "/u" + std::to_string(bits);
          out.push_back([m, v, u, id]() {
            json inputs;
            inputs["model"] = model_to_json(m);
            inputs["v"] = primeset_to_json(m, v);
            inputs["u"] = primeset_to_json(m, u);
            return timed_case(id, inputs, [&]() {
              bool closed = is_ht_support(m, v, u).is_support;
              bool brute = ht_support_bruteforce(m, v, u);
              return std::make_pair(std::to_string(closed), std::to_string(brute));
            });
          });
        }
      }
    }
  }
}

inline void gamma_cases(u64 seed, std::vector<OracleCase>& out, std::size_t count = 200) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::string id = "gamma/" + std::to_string(i);
    const u64 case_seed = seed ^ (0x9a11a0ULL + i * 0x10001ULL);
    out.push_back([id, case_seed]() {
      Rng rng(case_seed);
      RingDesc ring = random_small_quotient_ring(rng);
      SpectrumOf spec = spectrum_of(ring);
      FgModule m = random_module(ring, rng, 2000);
      PrimeSet v = random_spc_closed(spec.model, rng);
      json inputs;
      inputs["ring"] = ring_to_json(ring);
      inputs["module"] = module_to_json(m);
      inputs["v"] = primeset_to_json(spec.model, v);
      return timed_case(id, inputs, [&]() {
        ElementwiseEnv env(spec, m, 100000);
        auto brute = env.gamma_membership(v);
        auto structural = env.embedded_membership(torsion_radical(spec, m, v).sub.embedding);
        u64 bcount = 0, scount = 0;
        bool same = true;
        for (std::size_t k = 0; k < brute.size(); ++k) {
          bcount += brute[k];
          scount += structural[k];
          if (brute[k] != structural[k]) same = false;
        }
        return std::make_pair("members=" + std::to_string(scount) + (same ? "" : " (mismatch)"),
                              "members=" + std::to_string(bcount));
      });
    });
  }
}

inline void roundtrip_cases(u64 seed, std::vector<OracleCase>& out, std::size_t count = 200) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::string id = "roundtrip/" + std::to_string(i);
    const u64 case_seed = seed ^ (0x20061ULL + i * 0x31337ULL);
    out.push_back([id, case_seed]() {
      Rng rng(case_seed);
      SpectrumModel m = rng.below(4) == 0 ? dedekind_model("Z") : random_poset(rng, 6);
      SpFiltration psi = random_filtration(m, rng, 5);
      json inputs;
      inputs["filtration"] = filtration_to_json(psi);
      return timed_case(id, inputs, [&]() {
        bool ok = filtration_roundtrip_ok(psi);
        return std::make_pair(std::string("roundtrip-identity"),
                              ok ? std::string("roundtrip-identity") : std::string("mismatch"));
      });
    });
  }
}

inline void support_formula_cases(u64 seed, std::vector<OracleCase>& out, std::size_t count = 200) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::string id = "support-formula/" + std::to_string(i);
    const u64 case_seed = seed ^ (0x5f0421ULL + i * 0xabcdULL);
    out.push_back([id, case_seed]() {
      Rng rng(case_seed);
      SpectrumModel m = rng.below(4) == 0 ? dedekind_model("Z") : random_poset(rng, 6);
      SpFiltration child = random_filtration(m, rng, 5);
      SpFiltration parent = angle(child, 1);  // the interleaving is a one-tilt relation
      json inputs;
      inputs["child"] = filtration_to_json(child);
      inputs["parent"] = filtration_to_json(parent);
      return timed_case(id, inputs, [&]() {
        bool ok = support_formula_pointwise_ok(child, parent);
        return std::make_pair(std::string("pointwise-agree"),
                              ok ? std::string("pointwise-agree") : std::string("mismatch"));
      });
    });
  }
}

inline void chz_cases(u64 seed, std::vector<OracleCase>& out, std::size_t count = 200) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::string id = "chz/" + std::to_string(i);
    const u64 case_seed = seed ^ (0xc42ULL + i * 0x7f7f7fULL);
    out.push_back([id, case_seed]() {
      Rng rng(case_seed);
      RingDesc ring = random_ring(rng);
      SpectrumOf spec = spectrum_of(ring);
      PrimeSet v = random_spc_closed(spec.model, rng);
      json inputs;
      inputs["ring"] = ring_to_json(ring);
      inputs["v"] = primeset_to_json(spec.model, v);
      return timed_case(id, inputs, [&]() {
        auto res = her_criterion(spec, v);
        FgModule m = random_module(ring, rng, 2000);
        ChzWitness w = short_chz_witness(spec, m, v);
        auto check = verify_witness(spec, w);
        std::string closed = std::string("pass=") + (res.pass ? "1" : "0") +
                             " witness_ok=" + (check.ok ? "1" : "0");
        return std::make_pair(closed, std::string("pass=1 witness_ok=1"));
      });
    });
  }
}

}  // namespace suites

inline std::vector<OracleCase> build_suite(const std::string& name, u64 seed) {
  std::vector<OracleCase> cases;
  bool known = false;
  if (name == "ht-support" || name == "all") {
    suites::ht_support_cases(seed, cases);
    known = true;
  }
  if (name == "gamma" || name == "all") {
    suites::gamma_cases(seed, cases, name == "all" ? 50 : 200);
    known = true;
  }
  if (name == "roundtrip" || name == "all") {
    suites::roundtrip_cases(seed, cases, name == "all" ? 50 : 200);
    known = true;
  }
  if (name == "support-formula" || name == "all") {
    suites::support_formula_cases(seed, cases, name == "all" ? 50 : 200);
    known = true;
  }
  if (name == "chz" || name == "all") {
    suites::chz_cases(seed, cases, name == "all" ? 50 : 200);
    known = true;
  }
  if (!known) throw input_error("unknown oracle suite: " + name);
  return cases;
}

inline SuiteResult run_suite(const std::string& name, u64 seed, unsigned jobs) {
  auto cases = build_suite(name, seed);
  SuiteResult res;
  res.reports.resize(cases.size());
  if (jobs == 0) jobs = 1;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= cases.size()) return;
      try {
        res.reports[i] = cases[i]();
      } catch (const std::exception& e) {
        OracleReport r;
        r.case_id = "case " + std::to_string(i);
        r.inputs = "{}";
        r.closed_form = std::string("exception: ") + e.what();
        r.brute_force = "";
        r.agree = false;
        res.reports[i] = std::move(r);
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  for (const auto& r : res.reports)
    if (!r.agree) ++res.disagreements;
  return res;
}

}  // namespace sptilt
