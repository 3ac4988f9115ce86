#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sptilt/core.hpp"
#include "sptilt/intmath.hpp"
#include "sptilt/poly.hpp"
#include "sptilt/snf.hpp"
#include "sptilt/spectrum.hpp"

namespace sptilt {

// Supported base rings: Z, F_q[x], Z/n, F_q[x]/(f) and finite products of
// these. All are commutative noetherian and admit a dualising complex.
class RingDesc;

struct ZZRing {};
struct PolyRing {
  std::uint32_t q;
};
struct QuotZRing {
  i64 n;
};
struct QuotPolyRing {
  std::uint32_t q;
  Poly f;
};
struct ProductRing {
  std::vector<RingDesc> factors;
};

class RingDesc {
 public:
  using Variant = std::variant<ZZRing, PolyRing, QuotZRing, QuotPolyRing, ProductRing>;

  RingDesc(ZZRing r) : v_(std::make_shared<Variant>(r)) {}
  RingDesc(PolyRing r) : v_(std::make_shared<Variant>(validated(r))) {}
  RingDesc(QuotZRing r) : v_(std::make_shared<Variant>(validated(r))) {}
  RingDesc(QuotPolyRing r) : v_(std::make_shared<Variant>(validated(std::move(r)))) {}
  RingDesc(ProductRing r) : v_(std::make_shared<Variant>(validated(std::move(r)))) {}

  const Variant& var() const { return *v_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(v_.get());
  }
  bool is_product() const { return get_if<ProductRing>() != nullptr; }

 private:
  static PolyRing validated(PolyRing r) {
    Fq probe(r.q);  // validates the prime power bound
    return r;
  }
  static QuotZRing validated(QuotZRing r) {
    if (r.n < 2) throw input_error("quotient modulus must be at least 2");
    return r;
  }
  static QuotPolyRing validated(QuotPolyRing r) {
    Fq F(r.q);
    if (r.f.deg() < 1) throw input_error("quotient polynomial must be nonconstant");
    if (r.f.lead() != 1) throw input_error("quotient polynomial must be monic");
    return r;
  }
  static ProductRing validated(ProductRing r) {
    if (r.factors.empty()) throw input_error("product ring needs at least one factor");
    return r;
  }

  std::shared_ptr<const Variant> v_;
};

// One non-product component of a (possibly product) ring.
struct Component {
  enum class Kind { integers, poly_ring, quot_integers, quot_poly };
  Kind kind;
  std::optional<Fq> field;  // poly kinds
  i64 n = 0;                // quot_integers modulus
  Poly f;                   // quot_poly modulus

  bool is_poly() const { return kind == Kind::poly_ring || kind == Kind::quot_poly; }
  bool is_quotient() const { return kind == Kind::quot_integers || kind == Kind::quot_poly; }
};

inline void flatten_ring_into(const RingDesc& r, std::vector<Component>& out) {
  if (const auto* p = r.get_if<ProductRing>()) {
    for (const auto& f : p->factors) flatten_ring_into(f, out);
    return;
  }
  Component c{Component::Kind::integers, std::nullopt, 0, {}};
  if (r.get_if<ZZRing>()) {
    c.kind = Component::Kind::integers;
  } else if (const auto* pr = r.get_if<PolyRing>()) {
    c.kind = Component::Kind::poly_ring;
    c.field = Fq(pr->q);
  } else if (const auto* qz = r.get_if<QuotZRing>()) {
    c.kind = Component::Kind::quot_integers;
    c.n = qz->n;
  } else if (const auto* qp = r.get_if<QuotPolyRing>()) {
    c.kind = Component::Kind::quot_poly;
    c.field = Fq(qp->q);
    c.f = qp->f;
  }
  out.push_back(std::move(c));
}

inline std::vector<Component> flatten_ring(const RingDesc& r) {
  std::vector<Component> out;
  flatten_ring_into(r, out);
  return out;
}

// One canonical generator per component: a nonnegative integer or a monic
// (or zero) polynomial; over quotients, a divisor of the modulus generating
// the preimage ideal (the modulus itself denotes the zero ideal).
struct Ideal {
  std::vector<std::variant<i64, Poly>> gens;
};

inline i64 canon_ideal_gen_z(const Component& c, i64 g) {
  g = g < 0 ? -g : g;
  if (c.kind == Component::Kind::quot_integers) {
    g = static_cast<i64>(gcd_u64(static_cast<u64>(g), static_cast<u64>(c.n)));
    if (g == 0) g = c.n;
  }
  return g;
}

inline Poly canon_ideal_gen_poly(const Component& c, const Poly& g) {
  const Fq& F = *c.field;
  Poly r = poly_monic(F, g);
  if (c.kind == Component::Kind::quot_poly) {
    r = poly_gcd(F, r, c.f);
    if (r.is_zero()) r = c.f;
  }
  return r;
}

// ---- spectra ----------------------------------------------------------------

struct SpectrumOf {
  RingDesc ring;
  SpectrumModel model;
  struct PrimeInfo {
    std::uint32_t component;
    std::variant<i64, Poly> elem;
  };
  // aligned with finite-model prime indices; empty for dedekind models
  std::vector<PrimeInfo> primes;

  // The component a prime belongs to (dedekind models are single-component).
  std::uint32_t component_of(const Prime& p) const {
    if (model.is_dedekind()) return 0;
    model.require(p);
    return primes[p.index()].component;
  }
};

inline std::string product_prime_label(std::size_t component, const std::string& base,
                                       bool multi_component) {
  if (!multi_component) return base;
  return std::to_string(component) + ":" + base;
}

// The symbolic dimension-1 models. "Z" validates labels as prime integers;
// "F<q>[x]" validates labels as canonically spelled monic irreducibles.
// Parsed models and ring-backed models agree, so their sets interchange.
inline SpectrumModel dedekind_model(const std::string& label, bool dualising = true) {
  SpectrumModel m = SpectrumModel::dedekind(label, dualising);
  if (label.size() > 4 && label.front() == 'F' && label.substr(label.size() - 3) == "[x]") {
    const std::string qs = label.substr(1, label.size() - 4);
    u64 q = 0;
    for (char c : qs) {
      if (c < '0' || c > '9') return m;  // opaque fallback
      q = q * 10 + static_cast<u64>(c - '0');
    }
    if (q < 2 || q > (1u << 16) || prime_power_split(q).second == 0) return m;
    const Fq F(static_cast<std::uint32_t>(q));
    auto valid = [F](const std::string& l) {
      try {
        Poly p = poly_from_string(F, l);
        if (p.deg() < 1 || p.lead() != 1) return false;
        if (poly_to_string(p) != l) return false;  // canonical spelling only
        return poly_irreducible(F, p);
      } catch (const input_error&) {
        return false;
      }
    };
    auto candidate = [F](u64 counter) -> std::optional<std::string> {
      // counter-th monic polynomial of degree >= 1 in code order
      u64 code = counter;
      u64 block = F.q();
      std::uint32_t deg = 1;
      while (code >= block) {
        code -= block;
        block = checked_mul_u64(block, F.q());
        ++deg;
      }
      Poly p;
      p.c.assign(deg + 1, 0);
      for (std::uint32_t i = 0; i < deg; ++i, code /= F.q())
        p.c[i] = static_cast<std::uint32_t>(code % F.q());
      p.c[deg] = 1;
      if (!poly_irreducible(F, p)) return std::nullopt;
      return poly_to_string(p);
    };
    m.set_label_validator(valid, candidate);
  }
  return m;
}

inline SpectrumOf spectrum_of(const RingDesc& ring, u64 seed = kDefaultSeed) {
  auto comps = flatten_ring(ring);
  if (comps.size() == 1) {
    const Component& c = comps[0];
    switch (c.kind) {
      case Component::Kind::integers:
        return SpectrumOf{ring, dedekind_model("Z", true), {}};
      case Component::Kind::poly_ring:
        return SpectrumOf{ring, dedekind_model("F" + std::to_string(c.field->q()) + "[x]", true), {}};
      default:
        break;
    }
  }

  // all remaining cases have finite spectra and every component must too
  std::vector<std::string> names;
  std::vector<SpectrumOf::PrimeInfo> infos;
  const bool multi = comps.size() > 1;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const Component& c = comps[ci];
    switch (c.kind) {
      case Component::Kind::quot_integers: {
        for (auto [p, e] : factor_u64(static_cast<u64>(c.n))) {
          names.push_back(product_prime_label(ci, std::to_string(p), multi));
          infos.push_back({static_cast<std::uint32_t>(ci), static_cast<i64>(p)});
        }
        break;
      }
      case Component::Kind::quot_poly: {
        for (auto& [p, e] : poly_factor(*c.field, c.f, seed)) {
          names.push_back(product_prime_label(ci, poly_to_string(p), multi));
          infos.push_back({static_cast<std::uint32_t>(ci), p});
        }
        break;
      }
      default:
        throw input_error(
            "product spectra are only supported for quotient components (finite spectra)");
    }
  }
  SpectrumModel m = SpectrumModel::finite_poset(names, {}, true);
  return SpectrumOf{ring, std::move(m), std::move(infos)};
}

// Prime of the spectrum corresponding to a component-level prime element.
inline Prime prime_of_elem(const SpectrumOf& spec, std::uint32_t component,
                           const std::variant<i64, Poly>& elem) {
  if (spec.model.is_dedekind()) {
    if (std::holds_alternative<i64>(elem))
      return Prime::closed(std::to_string(std::get<i64>(elem)));
    return Prime::closed(poly_to_string(std::get<Poly>(elem)));
  }
  for (std::size_t i = 0; i < spec.primes.size(); ++i) {
    if (spec.primes[i].component != component) continue;
    if (spec.primes[i].elem == elem) return Prime::finite(static_cast<std::uint32_t>(i));
  }
  throw input_error("element does not generate a prime of this spectrum");
}

}  // namespace sptilt
