#pragma once

#include <dynalg/presentation.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dynalg {

using Json = nlohmann::ordered_json;

struct CertificateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- certificate parts -------------------------------------------------

// scalar * prod relation^exp. The scalar absorbs diagram constants of Q
// (positive rationals in ordered contexts, nonzero ones normalized to
// positive elsewhere); the unit element is scalar 1 with no factors.
struct MonoidPart {
    Rational scalar{1};
    std::vector<std::pair<RelationRef, long>> factors;

    Polynomial expand(const Presentation& p) const {
        Polynomial acc(scalar);
        for (auto& [ref, e] : factors) acc = acc * p.relation(ref).pow(static_cast<unsigned long>(e));
        return acc;
    }

    long exponent_of(const RelationRef& ref) const {
        for (auto& [r, e] : factors)
            if (r == ref) return e;
        return 0;
    }
};

// sum coeff_i * relation_i over the =0 relations.
struct IdealPart {
    std::vector<std::pair<Polynomial, RelationRef>> combination;

    Polynomial expand(const Presentation& p) const {
        Polynomial acc;
        for (auto& [c, ref] : combination) acc = acc + c * p.relation(ref);
        return acc;
    }
};

// weight * base^2 * prod of masked generators; weight a positive
// rational (the K^{>0} members of the cone fold into weights).
struct ConeSummand {
    Rational weight{1};
    Polynomial base{Rational(1)};
    std::vector<RelationRef> mask;
};

struct ConePart {
    std::vector<ConeSummand> summands;

    Polynomial expand(const Presentation& p) const {
        Polynomial acc;
        for (auto& s : summands) {
            Polynomial t = Polynomial(s.weight) * s.base * s.base;
            for (auto& ref : s.mask) t = t * p.relation(ref);
            acc = acc + t;
        }
        return acc;
    }
};

// Formal element of the subring generated by the Vr/Rn/U relations:
// sum of rational coefficients times monomials in relation references.
struct SubringTerm {
    struct Entry {
        Rational coeff{1};
        std::vector<std::pair<RelationRef, long>> monomial;
    };
    std::vector<Entry> entries;

    static SubringTerm constant(const Rational& c) {
        SubringTerm t;
        t.entries.push_back({c, {}});
        return t;
    }

    bool is_empty() const { return entries.empty(); }

    Polynomial expand(const Presentation& p) const {
        Polynomial acc;
        for (auto& e : entries) {
            Polynomial t(e.coeff);
            for (auto& [ref, exp] : e.monomial)
                t = t * p.relation(ref).pow(static_cast<unsigned long>(exp));
            acc = acc + t;
        }
        return acc;
    }
};

// sum subring_coeff_i * rn_relation_i : element of the ideal of the
// subring generated by the Rn relations.
struct RnIdealPart {
    std::vector<std::pair<SubringTerm, RelationRef>> combination;

    Polynomial expand(const Presentation& p) const {
        Polynomial acc;
        for (auto& [c, ref] : combination) acc = acc + c.expand(p) * p.relation(ref);
        return acc;
    }
};

// Exactly one strict participant: a >0 relation or a positive rational.
struct GroupStrict {
    std::optional<RelationRef> ref;
    Rational scalar{1};  // used when ref is absent; must be positive

    Polynomial expand(const Presentation& p) const {
        if (ref) return p.relation(*ref);
        return Polynomial(scalar);
    }
};

// Nonnegative-integer combination of >=0 / >0 relations plus a
// nonnegative rational constant (the H^{>=0} sums from the diagram).
struct GroupMonoidSum {
    std::vector<std::pair<long, RelationRef>> entries;
    Rational constant{0};

    Polynomial expand(const Presentation& p) const {
        Polynomial acc(constant);
        for (auto& [n, ref] : entries) acc = acc + p.relation(ref) * Rational(n);
        return acc;
    }
};

// Integer combination of =0 relations (subgroup part).
struct GroupCombination {
    std::vector<std::pair<long, RelationRef>> entries;

    Polynomial expand(const Presentation& p) const {
        Polynomial acc;
        for (auto& [n, ref] : entries) acc = acc + p.relation(ref) * Rational(n);
        return acc;
    }
};

// --- collapse certificates ----------------------------------------------

struct RingCollapse {
    IdealPart ideal;  // 1 - ideal == 0
};
struct FieldCollapse {
    MonoidPart monoid;  // over R_neq
    IdealPart ideal;    // monoid + ideal == 0
};
struct OrderedCollapse {
    MonoidPart monoid;  // over R_gt
    ConePart cone;      // over R_geq + R_gt
    IdealPart ideal;    // monoid + cone + ideal == 0
};
struct ValuedCollapse {
    MonoidPart monoid;  // over R_neq
    MonoidPart unit;    // over R_u
    RnIdealPart rn;
    IdealPart ideal;  // monoid*(unit + rn) + ideal == 0
};
struct GroupCollapse {
    GroupStrict strict;
    GroupMonoidSum monoid;
    GroupCombination group;  // strict + monoid + group == 0
};

struct CollapseCertificate {
    TheoryId theory = TheoryId::Field;
    std::variant<RingCollapse, FieldCollapse, OrderedCollapse, ValuedCollapse, GroupCollapse> shape;
};

struct VerifyResult {
    bool valid = false;
    Polynomial residual;
    std::string message;

    static VerifyResult failure(const std::string& msg) { return {false, Polynomial(), msg}; }
    static VerifyResult of_residual(const Polynomial& r) {
        return {r.is_zero(), r, r.is_zero() ? "" : "nonzero residual"};
    }
};

// --- structural checks ---------------------------------------------------

namespace detail {

inline bool ref_valid(const Presentation& p, const RelationRef& r) {
    return r.index < p.relations(r.pred).size();
}

inline std::optional<std::string> check_monoid(const Presentation& p, const MonoidPart& m,
                                               std::initializer_list<Predicate> preds) {
    if (!is_positive(m.scalar)) return "monoid scalar must be positive";
    for (auto& [ref, e] : m.factors) {
        if (e < 0) return "negative monoid exponent";
        bool ok = false;
        for (Predicate q : preds) ok = ok || ref.pred == q;
        if (!ok) return "monoid factor references predicate '" + to_string(ref.pred) + "'";
        if (!ref_valid(p, ref)) return "dangling monoid reference";
    }
    return std::nullopt;
}

inline std::optional<std::string> check_ideal(const Presentation& p, const IdealPart& i) {
    for (auto& [c, ref] : i.combination) {
        if (ref.pred != Predicate::Eq0) return "ideal part must reference =0 relations";
        if (!ref_valid(p, ref)) return "dangling ideal reference";
    }
    return std::nullopt;
}

inline std::optional<std::string> check_cone(const Presentation& p, const ConePart& q) {
    for (auto& s : q.summands) {
        if (!is_positive(s.weight)) return "cone weight must be positive";
        for (auto& ref : s.mask) {
            if (ref.pred != Predicate::Geq0 && ref.pred != Predicate::Gt0)
                return "cone mask must reference >=0 or >0 relations";
            if (!ref_valid(p, ref)) return "dangling cone reference";
        }
    }
    return std::nullopt;
}

inline std::optional<std::string> check_subring(const Presentation& p, const SubringTerm& t) {
    for (auto& e : t.entries) {
        for (auto& [ref, exp] : e.monomial) {
            if (exp <= 0) return "subring monomial exponent must be positive";
            if (ref.pred != Predicate::Vr && ref.pred != Predicate::Rn && ref.pred != Predicate::U)
                return "subring monomial must reference vr/rn/u relations";
            if (!ref_valid(p, ref)) return "dangling subring reference";
        }
    }
    return std::nullopt;
}

inline std::optional<std::string> check_rn(const Presentation& p, const RnIdealPart& j) {
    for (auto& [c, ref] : j.combination) {
        if (ref.pred != Predicate::Rn) return "rn ideal must reference rn relations";
        if (!ref_valid(p, ref)) return "dangling rn reference";
        if (auto err = check_subring(p, c)) return err;
    }
    return std::nullopt;
}

inline std::optional<std::string> check_group_parts(const Presentation& p, const GroupStrict& s,
                                                    const GroupMonoidSum& q,
                                                    const GroupCombination& i) {
    if (s.ref) {
        if (s.ref->pred != Predicate::Gt0) return "strict element must reference a >0 relation";
        if (!ref_valid(p, *s.ref)) return "dangling strict reference";
    } else if (!is_positive(s.scalar)) {
        return "strict rational must be positive";
    }
    if (is_negative(q.constant)) return "monoid constant must be nonnegative";
    for (auto& [n, ref] : q.entries) {
        if (n < 0) return "monoid multiplier must be nonnegative";
        if (ref.pred != Predicate::Geq0 && ref.pred != Predicate::Gt0)
            return "monoid sum must reference >=0 or >0 relations";
        if (!ref_valid(p, ref)) return "dangling monoid-sum reference";
    }
    for (auto& [n, ref] : i.entries) {
        if (ref.pred != Predicate::Eq0) return "group part must reference =0 relations";
        if (!ref_valid(p, ref)) return "dangling group reference";
    }
    return std::nullopt;
}

}  // namespace detail

// Re-expands the certificate into a single polynomial and compares with
// zero; never trusts any sub-claim.
inline VerifyResult verify_collapse(const Presentation& p, const CollapseCertificate& c) {
    if (c.theory != p.theory())
        return VerifyResult::failure("certificate theory does not match presentation");
    TheoryFamily fam = family_of(p.theory());

    if (auto* ring = std::get_if<RingCollapse>(&c.shape)) {
        if (fam != TheoryFamily::Ring) return VerifyResult::failure("ring shape/theory mismatch");
        if (auto err = detail::check_ideal(p, ring->ideal)) return VerifyResult::failure(*err);
        return VerifyResult::of_residual(Polynomial(1) - ring->ideal.expand(p));
    }
    if (auto* f = std::get_if<FieldCollapse>(&c.shape)) {
        if (fam != TheoryFamily::Field) return VerifyResult::failure("field shape/theory mismatch");
        if (auto err = detail::check_monoid(p, f->monoid, {Predicate::Neq0}))
            return VerifyResult::failure(*err);
        if (auto err = detail::check_ideal(p, f->ideal)) return VerifyResult::failure(*err);
        return VerifyResult::of_residual(f->monoid.expand(p) + f->ideal.expand(p));
    }
    if (auto* o = std::get_if<OrderedCollapse>(&c.shape)) {
        if (fam != TheoryFamily::Ordered)
            return VerifyResult::failure("ordered shape/theory mismatch");
        if (auto err = detail::check_monoid(p, o->monoid, {Predicate::Gt0}))
            return VerifyResult::failure(*err);
        if (auto err = detail::check_cone(p, o->cone)) return VerifyResult::failure(*err);
        if (auto err = detail::check_ideal(p, o->ideal)) return VerifyResult::failure(*err);
        return VerifyResult::of_residual(o->monoid.expand(p) + o->cone.expand(p) +
                                         o->ideal.expand(p));
    }
    if (auto* v = std::get_if<ValuedCollapse>(&c.shape)) {
        if (fam != TheoryFamily::Valued) return VerifyResult::failure("valued shape/theory mismatch");
        if (auto err = detail::check_monoid(p, v->monoid, {Predicate::Neq0}))
            return VerifyResult::failure(*err);
        if (auto err = detail::check_monoid(p, v->unit, {Predicate::U}))
            return VerifyResult::failure(*err);
        if (auto err = detail::check_rn(p, v->rn)) return VerifyResult::failure(*err);
        if (auto err = detail::check_ideal(p, v->ideal)) return VerifyResult::failure(*err);
        return VerifyResult::of_residual(
            v->monoid.expand(p) * (v->unit.expand(p) + v->rn.expand(p)) + v->ideal.expand(p));
    }
    auto& g = std::get<GroupCollapse>(c.shape);
    if (fam != TheoryFamily::Group) return VerifyResult::failure("group shape/theory mismatch");
    if (auto err = detail::check_group_parts(p, g.strict, g.monoid, g.group))
        return VerifyResult::failure(*err);
    return VerifyResult::of_residual(g.strict.expand(p) + g.monoid.expand(p) + g.group.expand(p));
}

// --- fact certificates ----------------------------------------------------

struct FactClaim {
    Predicate predicate = Predicate::Eq0;
    Polynomial subject;
};

// Field family: p = 0 via monoid * p^n + ideal == 0.
struct FieldEqFact {
    long n = 1;
    MonoidPart monoid;
    IdealPart ideal;
};
// Field family: p != 0 via monoid + ideal + cofactor*p == 0.
struct FieldNeqFact {
    MonoidPart monoid;
    IdealPart ideal;
    Polynomial cofactor;
};
// Ordered: p != 0 via p*b == m + q + i.
struct OrderedNeqFact {
    Polynomial cofactor;
    MonoidPart monoid;
    ConePart cone;
    IdealPart ideal;
};
// Ordered: p > 0 via p*q' == m + q + i with q' in the cone.
struct OrderedGtFact {
    ConePart cofactor;
    MonoidPart monoid;
    ConePart cone;
    IdealPart ideal;
};
// Ordered: p = 0 via p^{2n} m + q + i == 0.
struct OrderedEqFact {
    long n = 1;
    MonoidPart monoid;
    ConePart cone;
    IdealPart ideal;
};
// Ordered: p >= 0 via p*q == p^{2n} m + q' + i.
struct OrderedGeqFact {
    ConePart cofactor;
    long n = 1;
    MonoidPart monoid;
    ConePart cone;
    IdealPart ideal;
};
// Valued: p = 0 via p^n m (u + j) + i == 0.
struct ValuedEqFact {
    long n = 1;
    MonoidPart monoid, unit;
    RnIdealPart rn;
    IdealPart ideal;
};
// Valued: p != 0 via m (u + j) + i + cofactor*p == 0.
struct ValuedNeqFact {
    MonoidPart monoid, unit;
    RnIdealPart rn;
    IdealPart ideal;
    Polynomial cofactor;
};
// Valued: Vr(p) via m((u+j)p^{n+1} + a_n p^n + ... + a_0) + i == 0.
struct ValuedVrFact {
    MonoidPart monoid, unit;
    RnIdealPart rn;
    std::vector<SubringTerm> coeffs;  // a_0 .. a_n
    IdealPart ideal;
};
// Valued: Rn(p), same with Rn-ideal coefficients.
struct ValuedRnFact {
    MonoidPart monoid, unit;
    RnIdealPart rn;
    std::vector<RnIdealPart> coeffs;  // j_0 .. j_n
    IdealPart ideal;
};
// Valued: U(p): Vr shape with constant coefficient u' + j'.
struct ValuedUFact {
    MonoidPart monoid, unit;
    RnIdealPart rn;
    MonoidPart unit2;
    RnIdealPart rn2;
    std::vector<SubringTerm> coeffs;  // a_1 .. a_n
    IdealPart ideal;
};
// Group shapes of the ordered-group fact theorem.
struct GroupGtFact {  // s + q + i == m*p, m >= 0
    GroupStrict strict;
    GroupMonoidSum monoid;
    GroupCombination group;
    long multiplier = 1;
};
struct GroupGeqFact {  // q + i == m*p, m > 0
    GroupMonoidSum monoid;
    GroupCombination group;
    long multiplier = 1;
};
struct GroupEqFact {  // q + i == m*p and -q' + i' == m*p, m > 0
    GroupMonoidSum monoid, monoid2;
    GroupCombination group, group2;
    long multiplier = 1;
};
struct GroupNeqFact {  // s + q + i == m*p, m any integer (0 = vacuous regime)
    GroupStrict strict;
    GroupMonoidSum monoid;
    GroupCombination group;
    long multiplier = 1;
};

struct FactCertificate {
    TheoryId theory = TheoryId::Field;
    FactClaim claim;
    std::variant<FieldEqFact, FieldNeqFact, OrderedNeqFact, OrderedGtFact, OrderedEqFact,
                 OrderedGeqFact, ValuedEqFact, ValuedNeqFact, ValuedVrFact, ValuedRnFact,
                 ValuedUFact, GroupGtFact, GroupGeqFact, GroupEqFact, GroupNeqFact>
        shape;
};

inline bool claim_allowed(TheoryId t, Predicate p) {
    // Nonzero claims are expressible in the ordered and group
    // characterizations even though presentations there have no !=0.
    if (p == Predicate::Neq0 &&
        (family_of(t) == TheoryFamily::Ordered || family_of(t) == TheoryFamily::Group))
        return true;
    return predicate_allowed(t, p);
}

inline VerifyResult verify_fact(const Presentation& p, const FactCertificate& c) {
    if (c.theory != p.theory())
        return VerifyResult::failure("certificate theory does not match presentation");
    if (!claim_allowed(p.theory(), c.claim.predicate))
        return VerifyResult::failure("claim predicate illegal for theory");
    for (auto& v : c.claim.subject.variables())
        if (!p.has_generator(v)) return VerifyResult::failure("claim uses undeclared variable");
    const Polynomial& subj = c.claim.subject;
    TheoryFamily fam = family_of(p.theory());

    auto need = [&](bool cond, const char* msg) -> std::optional<VerifyResult> {
        if (!cond) return VerifyResult::failure(msg);
        return std::nullopt;
    };

    if (auto* f = std::get_if<FieldEqFact>(&c.shape)) {
        if (auto e = need(fam == TheoryFamily::Field && c.claim.predicate == Predicate::Eq0,
                          "shape/claim mismatch"))
            return *e;
        if (f->n < 1) return VerifyResult::failure("exponent must be positive");
        if (auto err = detail::check_monoid(p, f->monoid, {Predicate::Neq0}))
            return VerifyResult::failure(*err);
        if (auto err = detail::check_ideal(p, f->ideal)) return VerifyResult::failure(*err);
        return VerifyResult::of_residual(
            f->monoid.expand(p) * subj.pow(static_cast<unsigned long>(f->n)) + f->ideal.expand(p));
    }
    if (auto* f = std::get_if<FieldNeqFact>(&c.shape)) {
        if (auto e = need(fam == TheoryFamily::Field && c.claim.predicate == Predicate::Neq0,
                          "shape/claim mismatch"))
            return *e;
        if (auto err = detail::check_monoid(p, f->monoid, {Predicate::Neq0}))
            return VerifyResult::failure(*err);
        if (auto err = detail::check_ideal(p, f->ideal)) return VerifyResult::failure(*err);
        return VerifyResult::of_residual(f->monoid.expand(p) + f->ideal.expand(p) +
                                         f->cofactor * subj);
    }
    if (auto* f = std::get_if<OrderedNeqFact>(&c.shape)) {
        if (auto e = need(fam == TheoryFamily::Ordered && c.claim.predicate == Predicate::Neq0,
                          "shape/claim mismatch"))
            return *e;
        if (auto err = detail::check_monoid(p, f->monoid, {Predicate::Gt0}))
            return VerifyResult::failure(*err);
        if (auto err = detail::check_cone(p, f->cone)) return VerifyResult::failure(*err);
        if (auto err = detail::check_ideal(p, f->ideal)) return VerifyResult::failure(*err);
        return VerifyResult::of_residual(f->monoid.expand(p) + f->cone.expand(p) +
                                         f->ideal.expand(p) - subj * f->cofactor);
    }
    if (auto* f = std::get_if<OrderedGtFact>(&c.shape)) {
        if (auto e = need(fam == TheoryFamily::Ordered && c.claim.predicate == Predicate::Gt0,
                          "shape/claim mismatch"))
            return *e;
        if (auto err = detail::check_monoid(p, f->monoid, {Predicate::Gt0}))
            return VerifyResult::failure(*err);
        if (auto err = detail::check_cone(p, f->cofactor)) return VerifyResult::failure(*err);
        if (auto err = detail::check_cone(p, f->cone)) return VerifyResult::failure(*err);
        if (auto err = detail::check_ideal(p, f->ideal)) return VerifyResult::failure(*err);
        return VerifyResult::of_residual(f->monoid.expand(p) + f->cone.expand(p) +
                                         f->ideal.expand(p) - subj * f->cofactor.expand(p));
    }
    if (auto* f = std::get_if<OrderedEqFact>(&c.shape)) {
        if (auto e = need(fam == TheoryFamily::Ordered && c.claim.predicate == Predicate::Eq0,
                          "shape/claim mismatch"))
            return *e;
        if (f->n < 1) return VerifyResult::failure("exponent must be positive");
        if (auto err = detail::check_monoid(p, f->monoid, {Predicate::Gt0}))
            return VerifyResult::failure(*err);
        if (auto err = detail::check_cone(p, f->cone)) return VerifyResult::failure(*err);
        if (auto err = detail::check_ideal(p, f->ideal)) return VerifyResult::failure(*err);
        return VerifyResult::of_residual(
            subj.pow(static_cast<unsigned long>(2 * f->n)) * f->monoid.expand(p) +
            f->cone.expand(p) + f->ideal.expand(p));
    }
    if (auto* f = std::get_if<OrderedGeqFact>(&c.shape)) {
        if (auto e = need(fam == TheoryFamily::Ordered && c.claim.predicate == Predicate::Geq0,
                          "shape/claim mismatch"))
            return *e;
        if (f->n < 0) return VerifyResult::failure("exponent must be nonnegative");
        if (auto err = detail::check_monoid(p, f->monoid, {Predicate::Gt0}))
            return VerifyResult::failure(*err);
        if (auto err = detail::check_cone(p, f->cofactor)) return VerifyResult::failure(*err);
        if (auto err = detail::check_cone(p, f->cone)) return VerifyResult::failure(*err);
        if (auto err = detail::check_ideal(p, f->ideal)) return VerifyResult::failure(*err);
        return VerifyResult::of_residual(
            subj * f->cofactor.expand(p) -
            subj.pow(static_cast<unsigned long>(2 * f->n)) * f->monoid.expand(p) -
            f->cone.expand(p) - f->ideal.expand(p));
    }

    auto check_valued_core = [&](const MonoidPart& m, const MonoidPart& u, const RnIdealPart& j,
                                 const IdealPart& i) -> std::optional<std::string> {
        if (auto err = detail::check_monoid(p, m, {Predicate::Neq0})) return err;
        if (auto err = detail::check_monoid(p, u, {Predicate::U})) return err;
        if (auto err = detail::check_rn(p, j)) return err;
        if (auto err = detail::check_ideal(p, i)) return err;
        return std::nullopt;
    };

    if (auto* f = std::get_if<ValuedEqFact>(&c.shape)) {
        if (auto e = need(fam == TheoryFamily::Valued && c.claim.predicate == Predicate::Eq0,
                          "shape/claim mismatch"))
            return *e;
        if (f->n < 1) return VerifyResult::failure("exponent must be positive");
        if (auto err = check_valued_core(f->monoid, f->unit, f->rn, f->ideal))
            return VerifyResult::failure(*err);
        return VerifyResult::of_residual(subj.pow(static_cast<unsigned long>(f->n)) *
                                             f->monoid.expand(p) *
                                             (f->unit.expand(p) + f->rn.expand(p)) +
                                         f->ideal.expand(p));
    }
    if (auto* f = std::get_if<ValuedNeqFact>(&c.shape)) {
        if (auto e = need(fam == TheoryFamily::Valued && c.claim.predicate == Predicate::Neq0,
                          "shape/claim mismatch"))
            return *e;
        if (auto err = check_valued_core(f->monoid, f->unit, f->rn, f->ideal))
            return VerifyResult::failure(*err);
        return VerifyResult::of_residual(
            f->monoid.expand(p) * (f->unit.expand(p) + f->rn.expand(p)) + f->ideal.expand(p) +
            f->cofactor * subj);
    }
    if (auto* f = std::get_if<ValuedVrFact>(&c.shape)) {
        if (auto e = need(fam == TheoryFamily::Valued && c.claim.predicate == Predicate::Vr,
                          "shape/claim mismatch"))
            return *e;
        if (auto err = check_valued_core(f->monoid, f->unit, f->rn, f->ideal))
            return VerifyResult::failure(*err);
        long n = static_cast<long>(f->coeffs.size()) - 1;
        if (n < 0) return VerifyResult::failure("vr fact needs at least the constant coefficient");
        Polynomial inner = (f->unit.expand(p) + f->rn.expand(p)) *
                           subj.pow(static_cast<unsigned long>(n + 1));
        for (long k = 0; k <= n; ++k) {
            if (auto err = detail::check_subring(p, f->coeffs[k])) return VerifyResult::failure(*err);
            inner = inner + f->coeffs[k].expand(p) * subj.pow(static_cast<unsigned long>(k));
        }
        return VerifyResult::of_residual(f->monoid.expand(p) * inner + f->ideal.expand(p));
    }
    if (auto* f = std::get_if<ValuedRnFact>(&c.shape)) {
        if (auto e = need(fam == TheoryFamily::Valued && c.claim.predicate == Predicate::Rn,
                          "shape/claim mismatch"))
            return *e;
        if (auto err = check_valued_core(f->monoid, f->unit, f->rn, f->ideal))
            return VerifyResult::failure(*err);
        long n = static_cast<long>(f->coeffs.size()) - 1;
        if (n < 0) return VerifyResult::failure("rn fact needs at least the constant coefficient");
        Polynomial inner = (f->unit.expand(p) + f->rn.expand(p)) *
                           subj.pow(static_cast<unsigned long>(n + 1));
        for (long k = 0; k <= n; ++k) {
            if (auto err = detail::check_rn(p, f->coeffs[k])) return VerifyResult::failure(*err);
            inner = inner + f->coeffs[k].expand(p) * subj.pow(static_cast<unsigned long>(k));
        }
        return VerifyResult::of_residual(f->monoid.expand(p) * inner + f->ideal.expand(p));
    }
    if (auto* f = std::get_if<ValuedUFact>(&c.shape)) {
        if (auto e = need(fam == TheoryFamily::Valued && c.claim.predicate == Predicate::U,
                          "shape/claim mismatch"))
            return *e;
        if (auto err = check_valued_core(f->monoid, f->unit, f->rn, f->ideal))
            return VerifyResult::failure(*err);
        if (auto err = detail::check_monoid(p, f->unit2, {Predicate::U}))
            return VerifyResult::failure(*err);
        if (auto err = detail::check_rn(p, f->rn2)) return VerifyResult::failure(*err);
        long n = static_cast<long>(f->coeffs.size());  // a_1 .. a_n
        Polynomial inner = (f->unit.expand(p) + f->rn.expand(p)) *
                               subj.pow(static_cast<unsigned long>(n + 1)) +
                           f->unit2.expand(p) + f->rn2.expand(p);
        for (long k = 1; k <= n; ++k) {
            if (auto err = detail::check_subring(p, f->coeffs[k - 1]))
                return VerifyResult::failure(*err);
            inner = inner + f->coeffs[k - 1].expand(p) * subj.pow(static_cast<unsigned long>(k));
        }
        return VerifyResult::of_residual(f->monoid.expand(p) * inner + f->ideal.expand(p));
    }

    auto group_rhs = [&](long mult) { return subj * Rational(mult); };
    if (auto* f = std::get_if<GroupGtFact>(&c.shape)) {
        if (auto e = need(fam == TheoryFamily::Group && c.claim.predicate == Predicate::Gt0,
                          "shape/claim mismatch"))
            return *e;
        if (f->multiplier < 0) return VerifyResult::failure("multiplier must be nonnegative");
        if (auto err = detail::check_group_parts(p, f->strict, f->monoid, f->group))
            return VerifyResult::failure(*err);
        return VerifyResult::of_residual(f->strict.expand(p) + f->monoid.expand(p) +
                                         f->group.expand(p) - group_rhs(f->multiplier));
    }
    if (auto* f = std::get_if<GroupGeqFact>(&c.shape)) {
        if (auto e = need(fam == TheoryFamily::Group && c.claim.predicate == Predicate::Geq0,
                          "shape/claim mismatch"))
            return *e;
        if (f->multiplier <= 0) return VerifyResult::failure("multiplier must be positive");
        GroupStrict none;
        none.scalar = 1;
        if (auto err = detail::check_group_parts(p, none, f->monoid, f->group))
            return VerifyResult::failure(*err);
        return VerifyResult::of_residual(f->monoid.expand(p) + f->group.expand(p) -
                                         group_rhs(f->multiplier));
    }
    if (auto* f = std::get_if<GroupEqFact>(&c.shape)) {
        if (auto e = need(fam == TheoryFamily::Group && c.claim.predicate == Predicate::Eq0,
                          "shape/claim mismatch"))
            return *e;
        if (f->multiplier <= 0) return VerifyResult::failure("multiplier must be positive");
        GroupStrict none;
        if (auto err = detail::check_group_parts(p, none, f->monoid, f->group))
            return VerifyResult::failure(*err);
        if (auto err = detail::check_group_parts(p, none, f->monoid2, f->group2))
            return VerifyResult::failure(*err);
        Polynomial r1 = f->monoid.expand(p) + f->group.expand(p) - group_rhs(f->multiplier);
        Polynomial r2 = -f->monoid2.expand(p) + f->group2.expand(p) - group_rhs(f->multiplier);
        if (!r1.is_zero()) return VerifyResult::of_residual(r1);
        return VerifyResult::of_residual(r2);
    }
    auto& f = std::get<GroupNeqFact>(c.shape);
    if (auto e = need(fam == TheoryFamily::Group && c.claim.predicate == Predicate::Neq0,
                      "shape/claim mismatch"))
        return *e;
    if (auto err = detail::check_group_parts(p, f.strict, f.monoid, f.group))
        return VerifyResult::failure(*err);
    return VerifyResult::of_residual(f.strict.expand(p) + f.monoid.expand(p) + f.group.expand(p) -
                                     group_rhs(f.multiplier));
}

}  // namespace dynalg
