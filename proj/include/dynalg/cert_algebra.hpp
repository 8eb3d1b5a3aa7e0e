#pragma once

#include <dynalg/certificate.hpp>

#include <algorithm>
#include <map>

namespace dynalg {

// Typed arithmetic on certificate parts. Each helper keeps the normal
// form of its part (positive weights, 0/1 masks, sorted factor lists) so
// constructions stay verifiable by pure expansion.

struct LiftError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- presentation extension ---------------------------------------------

// Appends a relation unless an identical one already exists; returns its
// reference either way.
inline RelationRef find_or_add(Presentation& p, Predicate pred, const Polynomial& poly) {
    const auto& list = p.relations(pred);
    for (std::size_t i = 0; i < list.size(); ++i)
        if (list[i] == poly) return RelationRef{pred, i};
    return p.add_relation(pred, poly);
}

inline Presentation extended(const Presentation& base,
                             std::initializer_list<std::pair<Predicate, Polynomial>> extra,
                             std::vector<RelationRef>* refs = nullptr) {
    Presentation p = base;
    for (auto& [pred, poly] : extra) {
        RelationRef r = find_or_add(p, pred, poly);
        if (refs) refs->push_back(r);
    }
    return p;
}

// Declares a fresh variable: either absent from the presentation, or
// declared but unused by every relation.
inline Presentation with_fresh_var(const Presentation& base, const std::string& z,
                                   const char* what) {
    for (Predicate pred : all_predicates())
        for (auto& rel : base.relations(pred))
            if (rel.variables().count(z))
                throw LiftError(std::string(what) + ": variable '" + z +
                                "' is not fresh for the base presentation");
    if (base.has_generator(z)) return base;
    Presentation p = base;
    p.add_generator(z);
    return p;
}

// --- monoid part ----------------------------------------------------------

inline void monoid_push(MonoidPart& m, const RelationRef& ref, long exp) {
    if (exp == 0) return;
    for (auto& [r, e] : m.factors)
        if (r == ref) {
            e += exp;
            return;
        }
    m.factors.push_back({ref, exp});
}

inline MonoidPart monoid_mul(const MonoidPart& a, const MonoidPart& b) {
    MonoidPart out = a;
    out.scalar = a.scalar * b.scalar;
    for (auto& [r, e] : b.factors) monoid_push(out, r, e);
    return out;
}

inline MonoidPart monoid_pow(const MonoidPart& a, long n) {
    MonoidPart out;
    out.scalar = rat_pow(a.scalar, static_cast<unsigned long>(n));
    for (auto& [r, e] : a.factors) out.factors.push_back({r, e * n});
    return out;
}

// Splits off ref^k: returns k and the monoid without that factor.
inline std::pair<long, MonoidPart> monoid_extract(const MonoidPart& m, const RelationRef& ref) {
    MonoidPart rest;
    rest.scalar = m.scalar;
    long k = 0;
    for (auto& [r, e] : m.factors) {
        if (r == ref)
            k += e;
        else
            rest.factors.push_back({r, e});
    }
    return {k, rest};
}

// --- ideal part -----------------------------------------------------------

inline IdealPart ideal_scale(const IdealPart& i, const Polynomial& s) {
    IdealPart out;
    for (auto& [c, ref] : i.combination) {
        Polynomial sc = c * s;
        if (!sc.is_zero()) out.combination.push_back({sc, ref});
    }
    return out;
}

inline IdealPart ideal_add(const IdealPart& a, const IdealPart& b) {
    IdealPart out = a;
    for (auto& e : b.combination) out.combination.push_back(e);
    return out;
}

inline void ideal_push(IdealPart& i, const Polynomial& c, const RelationRef& ref) {
    if (!c.is_zero()) i.combination.push_back({c, ref});
}

// Splits off the combined coefficient of one reference.
inline std::pair<Polynomial, IdealPart> ideal_extract(const IdealPart& i, const RelationRef& ref) {
    Polynomial coeff;
    IdealPart rest;
    for (auto& [c, r] : i.combination) {
        if (r == ref)
            coeff = coeff + c;
        else
            rest.combination.push_back({c, r});
    }
    return {coeff, rest};
}

// Re-point references after relations moved (e.g. an extension relation
// dropped); apply maps every reference through fn.
template <typename Fn>
inline IdealPart ideal_map_refs(const IdealPart& i, Fn fn) {
    IdealPart out;
    for (auto& [c, r] : i.combination) out.combination.push_back({c, fn(r)});
    return out;
}

// --- cone part --------------------------------------------------------------

// Multiplies one summand by a relation, folding repeated mask entries
// into the square base.
inline ConeSummand summand_mul_ref(const ConeSummand& s, const RelationRef& ref,
                                   const Polynomial& rel_poly) {
    ConeSummand out = s;
    auto it = std::find(out.mask.begin(), out.mask.end(), ref);
    if (it != out.mask.end()) {
        out.mask.erase(it);
        out.base = out.base * rel_poly;
    } else {
        out.mask.push_back(ref);
    }
    return out;
}

inline ConePart cone_add(const ConePart& a, const ConePart& b) {
    ConePart out = a;
    for (auto& s : b.summands) out.summands.push_back(s);
    return out;
}

// Summands with a vanishing square expand to zero and can be dropped.
inline ConePart cone_prune(const ConePart& q) {
    ConePart out;
    for (auto& s : q.summands)
        if (!s.base.is_zero()) out.summands.push_back(s);
    return out;
}

inline ConePart cone_scale(const ConePart& q, const Rational& w) {
    ConePart out = q;
    for (auto& s : out.summands) s.weight *= w;
    return out;
}

inline ConePart cone_mul_square(const ConePart& q, const Polynomial& s) {
    ConePart out = q;
    for (auto& x : out.summands) x.base = x.base * s;
    return out;
}

// Monoid element as a cone element: even exponents into the square,
// odd remainders into the mask.
inline ConeSummand monoid_as_summand(const MonoidPart& m, const Presentation& p) {
    ConeSummand s;
    s.weight = m.scalar;
    s.base = Polynomial(1);
    for (auto& [r, e] : m.factors) {
        if (e / 2 > 0) s.base = s.base * p.relation(r).pow(static_cast<unsigned long>(e / 2));
        if (e % 2) s.mask.push_back(r);
    }
    return s;
}

inline ConePart cone_mul_monoid(const ConePart& q, const MonoidPart& m, const Presentation& p) {
    ConePart out;
    for (auto& s : q.summands) {
        ConeSummand t = s;
        t.weight *= m.scalar;
        for (auto& [r, e] : m.factors) {
            if (e / 2 > 0) t.base = t.base * p.relation(r).pow(static_cast<unsigned long>(e / 2));
            if (e % 2) t = summand_mul_ref(t, r, p.relation(r));
        }
        out.summands.push_back(std::move(t));
    }
    return out;
}

inline ConePart cone_mul(const ConePart& a, const ConePart& b, const Presentation& p) {
    ConePart out;
    for (auto& x : a.summands)
        for (auto& y : b.summands) {
            ConeSummand t;
            t.weight = x.weight * y.weight;
            t.base = x.base * y.base;
            t.mask = x.mask;
            for (auto& r : y.mask) t = summand_mul_ref(t, r, p.relation(r));
            out.summands.push_back(std::move(t));
        }
    return out;
}

// Splits summands on one mask reference: (plain, with-ref-removed).
inline std::pair<ConePart, ConePart> cone_split_mask(const ConePart& q, const RelationRef& ref) {
    ConePart plain, stripped;
    for (auto& s : q.summands) {
        auto it = std::find(s.mask.begin(), s.mask.end(), ref);
        if (it == s.mask.end()) {
            plain.summands.push_back(s);
        } else {
            ConeSummand t = s;
            t.mask.erase(std::find(t.mask.begin(), t.mask.end(), ref));
            stripped.summands.push_back(std::move(t));
        }
    }
    return {plain, stripped};
}

// Replaces mask uses of `ref` (whose relation equals factor^2 * target's
// relation... ) -- specialized below where needed.
template <typename Fn>
inline ConePart cone_map_refs(const ConePart& q, Fn fn) {
    ConePart out = q;
    for (auto& s : out.summands)
        for (auto& r : s.mask) r = fn(r);
    return out;
}

// --- ordered body: m + q + i ------------------------------------------------

struct OrderedBody {
    MonoidPart monoid;   // may be the unit (scalar 1, no factors)
    bool has_monoid = true;
    ConePart cone;
    IdealPart ideal;

    Polynomial expand(const Presentation& p) const {
        Polynomial e = cone.expand(p) + ideal.expand(p);
        if (has_monoid) e = e + monoid.expand(p);
        return e;
    }
};

// Product routing: monoid*monoid stays monoid, monoid*cone and
// cone*cone stay in the cone, anything against the ideal stays ideal.
inline OrderedBody body_mul(const OrderedBody& a, const OrderedBody& b, const Presentation& p) {
    OrderedBody out;
    out.has_monoid = a.has_monoid && b.has_monoid;
    if (out.has_monoid) out.monoid = monoid_mul(a.monoid, b.monoid);
    ConePart q;
    if (a.has_monoid) q = cone_add(q, cone_mul_monoid(b.cone, a.monoid, p));
    if (b.has_monoid) q = cone_add(q, cone_mul_monoid(a.cone, b.monoid, p));
    q = cone_add(q, cone_mul(a.cone, b.cone, p));
    out.cone = cone_prune(q);
    // Ideal: i_a * (expansion of b) + i_b * (m_a + q_a).
    Polynomial bexp = b.expand(p);
    Polynomial anonideal = a.cone.expand(p);
    if (a.has_monoid) anonideal = anonideal + a.monoid.expand(p);
    out.ideal = ideal_add(ideal_scale(a.ideal, bexp), ideal_scale(b.ideal, anonideal));
    // Consolidate ideal entries that cite the same relation.
    std::map<RelationRef, Polynomial> merged;
    for (auto& [c, ref] : out.ideal.combination) {
        auto it = merged.find(ref);
        if (it == merged.end())
            merged[ref] = c;
        else
            it->second = it->second + c;
    }
    out.ideal.combination.clear();
    for (auto& [ref, c] : merged) ideal_push(out.ideal, c, ref);
    return out;
}

inline OrderedBody body_pow(const OrderedBody& a, long n, const Presentation& p) {
    OrderedBody out;
    out.has_monoid = true;
    out.monoid = MonoidPart{};
    for (long k = 0; k < n; ++k) out = k == 0 ? a : body_mul(out, a, p);
    if (n == 0) return OrderedBody{};
    return out;
}

// --- subring terms (valued family) -----------------------------------------

inline SubringTerm subring_add(const SubringTerm& a, const SubringTerm& b) {
    SubringTerm out = a;
    for (auto& e : b.entries) out.entries.push_back(e);
    return out;
}

inline SubringTerm::Entry entry_mul(const SubringTerm::Entry& a, const SubringTerm::Entry& b) {
    SubringTerm::Entry out;
    out.coeff = a.coeff * b.coeff;
    out.monomial = a.monomial;
    for (auto& [r, e] : b.monomial) {
        bool merged = false;
        for (auto& [r2, e2] : out.monomial)
            if (r2 == r) {
                e2 += e;
                merged = true;
                break;
            }
        if (!merged) out.monomial.push_back({r, e});
    }
    return out;
}

inline SubringTerm subring_mul(const SubringTerm& a, const SubringTerm& b) {
    SubringTerm out;
    for (auto& x : a.entries)
        for (auto& y : b.entries) out.entries.push_back(entry_mul(x, y));
    return out;
}

inline SubringTerm subring_pow(const SubringTerm& a, long n) {
    SubringTerm out = SubringTerm::constant(Rational(1));
    for (long k = 0; k < n; ++k) out = subring_mul(out, a);
    return out;
}

inline SubringTerm monoid_as_subring(const MonoidPart& m) {
    SubringTerm::Entry e;
    e.coeff = m.scalar;
    e.monomial = m.factors;
    SubringTerm t;
    t.entries.push_back(std::move(e));
    return t;
}

// Rn ideal as a formal subring element (rn references are subring
// generators too).
inline SubringTerm rn_as_subring(const RnIdealPart& j) {
    SubringTerm out;
    for (auto& [c, ref] : j.combination) {
        SubringTerm::Entry mul;
        mul.coeff = 1;
        mul.monomial = {{ref, 1}};
        SubringTerm t;
        t.entries.push_back(mul);
        out = subring_add(out, subring_mul(c, t));
    }
    return out;
}

// Re-expresses a formal subring element all of whose entries contain at
// least one Rn factor as an element of the Rn ideal.
inline RnIdealPart rn_extract(const SubringTerm& t) {
    RnIdealPart out;
    for (auto& e : t.entries) {
        SubringTerm::Entry rest = e;
        std::optional<RelationRef> rn;
        for (auto& [r, exp] : rest.monomial)
            if (r.pred == Predicate::Rn && exp > 0) {
                rn = r;
                exp -= 1;
                break;
            }
        if (!rn) throw LiftError("subring term has no Rn factor");
        SubringTerm::Entry clean;
        clean.coeff = rest.coeff;
        for (auto& [r, exp] : rest.monomial)
            if (exp > 0) clean.monomial.push_back({r, exp});
        SubringTerm coeff;
        coeff.entries.push_back(clean);
        out.combination.push_back({coeff, *rn});
    }
    return out;
}

inline RnIdealPart rn_add(const RnIdealPart& a, const RnIdealPart& b) {
    RnIdealPart out = a;
    for (auto& e : b.combination) out.combination.push_back(e);
    return out;
}

// --- group parts --------------------------------------------------------------

inline GroupMonoidSum gmsum_add(const GroupMonoidSum& a, const GroupMonoidSum& b) {
    GroupMonoidSum out = a;
    out.constant = a.constant + b.constant;
    for (auto& [n, r] : b.entries) out.entries.push_back({n, r});
    return out;
}

inline GroupMonoidSum gmsum_scale(const GroupMonoidSum& a, long k) {
    GroupMonoidSum out;
    out.constant = a.constant * Rational(k);
    for (auto& [n, r] : a.entries)
        if (n * k != 0) out.entries.push_back({n * k, r});
    return out;
}

inline GroupCombination gcomb_add(const GroupCombination& a, const GroupCombination& b) {
    GroupCombination out = a;
    for (auto& e : b.entries) out.entries.push_back(e);
    return out;
}

inline GroupCombination gcomb_scale(const GroupCombination& a, long k) {
    GroupCombination out;
    for (auto& [n, r] : a.entries)
        if (n * k != 0) out.entries.push_back({n * k, r});
    return out;
}

// Normalizes a sum of strict contributions into exactly one strict
// participant plus monoid-sum spill.
struct StrictSum {
    std::vector<std::pair<long, RelationRef>> refs;  // positive multiplicities
    Rational scalar{0};                              // nonnegative
};

inline std::pair<GroupStrict, GroupMonoidSum> normalize_strict(const StrictSum& s) {
    GroupStrict strict;
    GroupMonoidSum spill;
    bool picked = false;
    for (auto& [n, r] : s.refs) {
        if (n <= 0) continue;
        if (!picked) {
            strict.ref = r;
            picked = true;
            if (n > 1) spill.entries.push_back({n - 1, r});
        } else {
            spill.entries.push_back({n, r});
        }
    }
    if (!picked) {
        if (!is_positive(s.scalar)) throw LiftError("no strict participant available");
        strict.ref.reset();
        strict.scalar = s.scalar;
    } else {
        spill.constant = s.scalar;
    }
    return {strict, spill};
}

// --- reporting -----------------------------------------------------------------

// Size data recorded for regression tracking, never asserted.
struct CertStats {
    long max_monoid_exponent = 0;
    long max_coeff_degree = 0;
};

inline CertStats stats_of(const CollapseCertificate& c) {
    CertStats s;
    auto monoid = [&](const MonoidPart& m) {
        for (auto& [r, e] : m.factors) s.max_monoid_exponent = std::max(s.max_monoid_exponent, e);
    };
    auto ideal = [&](const IdealPart& i) {
        for (auto& [poly, r] : i.combination)
            s.max_coeff_degree = std::max(s.max_coeff_degree, poly.total_degree());
    };
    if (auto* f = std::get_if<FieldCollapse>(&c.shape)) {
        monoid(f->monoid);
        ideal(f->ideal);
    } else if (auto* o = std::get_if<OrderedCollapse>(&c.shape)) {
        monoid(o->monoid);
        ideal(o->ideal);
        for (auto& x : o->cone.summands)
            s.max_coeff_degree = std::max(s.max_coeff_degree, x.base.total_degree());
    } else if (auto* v = std::get_if<ValuedCollapse>(&c.shape)) {
        monoid(v->monoid);
        monoid(v->unit);
        ideal(v->ideal);
    } else if (auto* r = std::get_if<RingCollapse>(&c.shape)) {
        ideal(r->ideal);
    }
    return s;
}

}  // namespace dynalg
