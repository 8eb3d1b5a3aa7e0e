#pragma once

#include <dynalg/polyparse.hpp>
#include <dynalg/presentation.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dynalg {

// Atomic formula in canonical form.
struct Atom {
    Predicate pred = Predicate::Eq0;
    Polynomial subject;

    bool operator==(const Atom& o) const { return pred == o.pred && subject == o.subject; }
    bool operator<(const Atom& o) const {
        if (pred != o.pred) return pred < o.pred;
        return subject < o.subject;
    }
};

// Pattern over metavariables; instantiated by simultaneous substitution.
struct AtomPattern {
    Predicate pred;
    Polynomial tmpl;
};

struct AxiomDisjunct {
    std::vector<std::string> exist_vars;
    std::vector<AtomPattern> atoms;
};

// H(x) |- E y1 A1 v ... v E yk Ak ; empty disjunct list is bottom.
struct Axiom {
    std::string id;
    std::vector<std::string> metavars;
    std::vector<AtomPattern> hyps;
    std::vector<AxiomDisjunct> disjuncts;

    bool is_collapse() const { return disjuncts.empty(); }
    bool is_algebraic() const {
        return disjuncts.size() == 1 && disjuncts[0].exist_vars.empty() &&
               disjuncts[0].atoms.size() == 1;
    }
};

// Diagram of Q: atomic facts about rational constants that hold in every
// model over the base field and are available at every node. The valued
// predicates follow the trivial-valuation reading used throughout the
// certificate formats (all rationals integral, nonzero ones units).
inline bool diagram_atom(const Atom& a) {
    if (!a.subject.is_constant()) return false;
    Rational c = a.subject.constant_value();
    switch (a.pred) {
        case Predicate::Eq0: return is_zero(c);
        case Predicate::Neq0: return !is_zero(c);
        case Predicate::Geq0: return !is_negative(c);
        case Predicate::Gt0: return is_positive(c);
        case Predicate::Vr: return true;
        case Predicate::U: return !is_zero(c);
        case Predicate::Rn: return is_zero(c);
    }
    return false;
}

namespace detail {

inline Axiom ax(const std::string& id, std::vector<std::string> metavars,
                std::vector<std::pair<Predicate, const char*>> hyps,
                std::vector<std::pair<Predicate, const char*>> concl,
                std::vector<std::string> exist_vars = {}) {
    Axiom a;
    a.id = id;
    a.metavars = std::move(metavars);
    for (auto& [p, t] : hyps) a.hyps.push_back({p, parse_polynomial(t)});
    if (!(concl.empty() && exist_vars.empty())) {
        AxiomDisjunct d;
        d.exist_vars = std::move(exist_vars);
        for (auto& [p, t] : concl) d.atoms.push_back({p, parse_polynomial(t)});
        a.disjuncts.push_back(std::move(d));
    }
    return a;
}

inline Axiom collapse(const std::string& id, Predicate pred, const char* subj) {
    Axiom a;
    a.id = id;
    a.hyps.push_back({pred, parse_polynomial(subj)});
    return a;
}

// |- A1 v A2 with single-atom variable-free-existential disjuncts.
inline Axiom split(const std::string& id, std::vector<std::string> metavars,
                   std::vector<std::pair<Predicate, const char*>> hyps,
                   std::vector<std::pair<Predicate, const char*>> alts) {
    Axiom a;
    a.id = id;
    a.metavars = std::move(metavars);
    for (auto& [p, t] : hyps) a.hyps.push_back({p, parse_polynomial(t)});
    for (auto& [p, t] : alts) {
        AxiomDisjunct d;
        d.atoms.push_back({p, parse_polynomial(t)});
        a.disjuncts.push_back(std::move(d));
    }
    return a;
}

using P = Predicate;

inline void add_ring_axioms(std::vector<Axiom>& out) {
    out.push_back(ax("D(1)_r", {}, {}, {{P::Eq0, "0"}}));
    out.push_back(ax("D(2)_r", {"x", "y"}, {{P::Eq0, "x"}, {P::Eq0, "y"}}, {{P::Eq0, "x+y"}}));
    out.push_back(ax("D(3)_r", {"x", "y"}, {{P::Eq0, "x"}}, {{P::Eq0, "x*y"}}));
}

inline void add_field_direct(std::vector<Axiom>& out) {
    out.push_back(
        ax("D(1)_f", {"x", "y"}, {{P::Eq0, "x"}, {P::Neq0, "y"}}, {{P::Neq0, "x+y"}}));
    out.push_back(
        ax("D(2)_f", {"x", "y"}, {{P::Neq0, "x"}, {P::Neq0, "y"}}, {{P::Neq0, "x*y"}}));
    out.push_back(ax("D(3)_f", {}, {}, {{P::Neq0, "1"}}));
    out.push_back(collapse("C_f", P::Neq0, "0"));
}

inline void add_quasi_domain_simpl(std::vector<Axiom>& out) {
    out.push_back(ax("S(2)_f", {"x"}, {{P::Eq0, "x^2"}}, {{P::Eq0, "x"}}));
    out.push_back(ax("S(3)_f", {"x", "y"}, {{P::Eq0, "x*y"}, {P::Neq0, "x"}}, {{P::Eq0, "y"}}));
    out.push_back(ax("S(4)_f", {"x", "y"}, {{P::Neq0, "x*y"}}, {{P::Neq0, "x"}}));
}

inline void add_field_dyn(std::vector<Axiom>& out) {
    out.push_back(ax("S(1)_f", {"x", "y"}, {{P::Eq0, "x*y-1"}}, {{P::Neq0, "x"}}));
    out.push_back(ax("Dy(1)_f", {"x"}, {{P::Neq0, "x"}}, {{P::Eq0, "x*y-1"}}, {"y"}));
    out.push_back(split("Dy(2)_f", {"x"}, {}, {{P::Eq0, "x"}, {P::Neq0, "x"}}));
}

inline void add_proto_ordered(std::vector<Axiom>& out) {
    out.push_back(ax("D(1)_of", {"x"}, {}, {{P::Geq0, "x^2"}}));
    out.push_back(ax("D(2)_of", {"x", "y"}, {{P::Eq0, "x"}, {P::Geq0, "y"}}, {{P::Geq0, "x+y"}}));
    out.push_back(ax("D(3)_of", {"x", "y"}, {{P::Geq0, "x"}, {P::Geq0, "y"}}, {{P::Geq0, "x+y"}}));
    out.push_back(ax("D(4)_of", {"x", "y"}, {{P::Geq0, "x"}, {P::Geq0, "y"}}, {{P::Geq0, "x*y"}}));
    out.push_back(ax("D(5)_of", {}, {}, {{P::Gt0, "1"}}));
    out.push_back(ax("D(6)_of", {"x", "y"}, {{P::Eq0, "x"}, {P::Gt0, "y"}}, {{P::Gt0, "x+y"}}));
    out.push_back(ax("D(7)_of", {"x", "y"}, {{P::Gt0, "x"}, {P::Geq0, "y"}}, {{P::Gt0, "x+y"}}));
    out.push_back(ax("D(8)_of", {"x", "y"}, {{P::Gt0, "x"}, {P::Gt0, "y"}}, {{P::Gt0, "x*y"}}));
    out.push_back(ax("D(9)_of", {"x"}, {{P::Gt0, "x"}}, {{P::Geq0, "x"}}));
    out.push_back(collapse("C_of", P::Gt0, "0"));
}

inline void add_quasi_ordered_simpl(std::vector<Axiom>& out) {
    out.push_back(ax("S(3)_of", {"x"}, {{P::Geq0, "-x^2"}}, {{P::Eq0, "x"}}));
    out.push_back(
        ax("S(4)_of", {"x", "y"}, {{P::Gt0, "x"}, {P::Geq0, "x*y"}}, {{P::Geq0, "y"}}));
    out.push_back(ax("S(5)_of", {"x", "y"}, {{P::Geq0, "x"}, {P::Gt0, "x*y"}}, {{P::Gt0, "y"}}));
    out.push_back(ax("S(6)_of", {"x", "c"}, {{P::Geq0, "c"}, {P::Geq0, "x*(x^2+c)"}},
                     {{P::Geq0, "x"}}));
}

inline void add_ordered_field_dyn(std::vector<Axiom>& out) {
    out.push_back(
        ax("S(1)_of", {"x"}, {{P::Geq0, "x"}, {P::Geq0, "-x"}}, {{P::Eq0, "x"}}));
    out.push_back(ax("S(2)_of", {"x", "y"}, {{P::Eq0, "x*y-1"}}, {{P::Gt0, "x^2"}}));
    out.push_back(ax("Dy(1)_of", {"x"}, {{P::Gt0, "x^2"}}, {{P::Eq0, "x*y-1"}}, {"y"}));
    out.push_back(split("Dy(2)_of", {"x"}, {}, {{P::Geq0, "x"}, {P::Geq0, "-x"}}));
    out.push_back(split("Dy(3)_of", {"x"}, {}, {{P::Eq0, "x"}, {P::Gt0, "x^2"}}));
}

inline void add_ordered_domain(std::vector<Axiom>& out) {
    add_ring_axioms(out);
    out.push_back(ax("Alg(1)", {"x", "y"}, {{P::Eq0, "x"}}, {{P::Eq0, "x*y"}}));
    out.push_back(ax("Alg(2)", {"x"}, {{P::Eq0, "x"}}, {{P::Geq0, "x"}}));
    out.push_back(ax("Alg(3)", {"x"}, {{P::Geq0, "x"}, {P::Geq0, "-x"}}, {{P::Eq0, "x"}}));
    out.push_back(ax("Alg(4)", {"x", "y"}, {{P::Geq0, "x"}, {P::Geq0, "y"}}, {{P::Geq0, "x+y"}}));
    out.push_back(ax("Alg(5)", {"x", "y"}, {{P::Geq0, "x"}, {P::Geq0, "y"}}, {{P::Geq0, "x*y"}}));
    out.push_back(split("Dyn(1)", {"x"}, {}, {{P::Geq0, "x"}, {P::Geq0, "-x"}}));
    out.push_back(split("Dyn(2)", {"x", "y"}, {{P::Eq0, "x*y"}}, {{P::Eq0, "x"}, {P::Eq0, "y"}}));
}

inline void add_proto_valued(std::vector<Axiom>& out) {
    out.push_back(ax("D(1)_v", {}, {}, {{P::Vr, "-1"}}));
    out.push_back(ax("D(2)_v", {"x", "y"}, {{P::Eq0, "x"}, {P::Vr, "y"}}, {{P::Vr, "x+y"}}));
    out.push_back(ax("D(3)_v", {"x", "y"}, {{P::Vr, "x"}, {P::Vr, "y"}}, {{P::Vr, "x*y"}}));
    out.push_back(ax("D(4)_v", {"x", "y"}, {{P::Vr, "x"}, {P::Vr, "y"}}, {{P::Vr, "x+y"}}));
    out.push_back(ax("D(5)_v", {}, {}, {{P::Rn, "0"}}));
    out.push_back(ax("D(6)_v", {"x", "y"}, {{P::Eq0, "x"}, {P::Rn, "y"}}, {{P::Rn, "x+y"}}));
    out.push_back(ax("D(7)_v", {"x", "y"}, {{P::Rn, "x"}, {P::Vr, "y"}}, {{P::Rn, "x*y"}}));
    out.push_back(ax("D(8)_v", {"x", "y"}, {{P::Rn, "x"}, {P::Rn, "y"}}, {{P::Rn, "x+y"}}));
    out.push_back(ax("D(9)_v", {}, {}, {{P::U, "1"}}));
    out.push_back(ax("D(10)_v", {"x", "y"}, {{P::Eq0, "x"}, {P::U, "y"}}, {{P::U, "x+y"}}));
    out.push_back(ax("D(11)_v", {"x", "y"}, {{P::U, "x"}, {P::U, "y"}}, {{P::U, "x*y"}}));
    out.push_back(ax("D(12)_v", {"x", "y"}, {{P::Rn, "x"}, {P::U, "y"}}, {{P::U, "x+y"}}));
    out.push_back(ax("D(13)_v", {"x"}, {{P::U, "x"}}, {{P::Neq0, "x"}}));
    out.push_back(ax("D(14)_v", {"x", "y"}, {{P::Eq0, "x"}, {P::Neq0, "y"}}, {{P::Neq0, "x+y"}}));
    out.push_back(
        ax("D(15)_v", {"x", "y"}, {{P::Neq0, "x"}, {P::Neq0, "y"}}, {{P::Neq0, "x*y"}}));
    out.push_back(ax("D(16)_v", {"x"}, {{P::U, "x"}}, {{P::Vr, "x"}}));
    out.push_back(ax("D(17)_v", {"x"}, {{P::Rn, "x"}}, {{P::Vr, "x"}}));
    out.push_back(collapse("C_v", P::Neq0, "0"));
}

inline void add_valued_field_dyn(std::vector<Axiom>& out) {
    out.push_back(ax("S(1)_v", {"x", "u"}, {{P::Eq0, "x*u-1"}}, {{P::Neq0, "x"}}));
    out.push_back(ax("S(2)_v", {"x", "y"}, {{P::Vr, "x*y"}, {P::U, "x"}}, {{P::Vr, "y"}}));
    out.push_back(ax("Dy(1)_v", {"x"}, {{P::Neq0, "x"}}, {{P::Eq0, "x*u-1"}}, {"u"}));
    out.push_back(split("Dy(2)_v", {"x"}, {}, {{P::Eq0, "x"}, {P::Neq0, "x"}}));
    out.push_back(split("Dy(3)_v", {"x", "y"}, {{P::Eq0, "x*y-1"}}, {{P::Vr, "x"}, {P::Vr, "y"}}));
    out.push_back(split("Dy(4)_v", {"x"}, {{P::Vr, "x"}}, {{P::U, "x"}, {P::Rn, "x"}}));
}

inline void add_quasi_valued_simpl(std::vector<Axiom>& out) {
    out.push_back(
        ax("S(3)_v", {"x", "y"}, {{P::U, "x*y"}, {P::Vr, "x"}, {P::Vr, "y"}}, {{P::U, "y"}}));
    out.push_back(ax("S(4)_v", {"x", "y"}, {{P::Rn, "x*y"}, {P::U, "x"}}, {{P::Rn, "y"}}));
    out.push_back(ax("S(5)_v", {"x"}, {{P::Rn, "x^2"}}, {{P::Rn, "x"}}));
    out.push_back(ax("S(6)_v", {"x", "y"}, {{P::Neq0, "x*y"}}, {{P::Neq0, "x"}}));
    out.push_back(ax("S(7)_v", {"x", "y"}, {{P::Eq0, "x*y"}, {P::Neq0, "x"}}, {{P::Eq0, "y"}}));
    out.push_back(ax("S(8)_v", {"x"}, {{P::Eq0, "x^2"}}, {{P::Eq0, "x"}}));
}

inline void add_group_axioms(std::vector<Axiom>& out) {
    out.push_back(ax("D(1)_g", {}, {}, {{P::Eq0, "0"}}));
    out.push_back(ax("D(2)_g", {"x", "y"}, {{P::Eq0, "x"}, {P::Eq0, "y"}}, {{P::Eq0, "x+y"}}));
    out.push_back(ax("D(3)_g", {"x"}, {{P::Eq0, "x"}}, {{P::Eq0, "-x"}}));
    out.push_back(ax("D(1)_og", {"x", "y"}, {{P::Eq0, "x"}, {P::Geq0, "y"}}, {{P::Geq0, "x+y"}}));
    out.push_back(ax("D(2)_og", {"x", "y"}, {{P::Geq0, "x"}, {P::Geq0, "y"}}, {{P::Geq0, "x+y"}}));
    out.push_back(ax("D(3)_og", {}, {}, {{P::Geq0, "0"}}));
    out.push_back(ax("D(4)_og", {"x", "y"}, {{P::Eq0, "x"}, {P::Gt0, "y"}}, {{P::Gt0, "x+y"}}));
    out.push_back(ax("D(5)_og", {"x", "y"}, {{P::Gt0, "x"}, {P::Geq0, "y"}}, {{P::Gt0, "x+y"}}));
    out.push_back(ax("D(6)_og", {"x"}, {{P::Gt0, "x"}}, {{P::Geq0, "x"}}));
    out.push_back(collapse("C_og", P::Gt0, "0"));
}

inline void add_ordered_group_dyn(std::vector<Axiom>& out) {
    out.push_back(ax("S(1)_og", {"x"}, {{P::Geq0, "x"}, {P::Geq0, "-x"}}, {{P::Eq0, "x"}}));
    out.push_back(split("Dy(1)_og", {"x"}, {}, {{P::Geq0, "x"}, {P::Geq0, "-x"}}));
    out.push_back(split("Dy(2)_og", {"x"}, {{P::Geq0, "x"}}, {{P::Eq0, "x"}, {P::Gt0, "x"}}));
}

}  // namespace detail

// Base (non-schematic) axioms of a theory. Simplification axioms of the
// quasi-level are included in the dynamic theories above them: they are
// valid dynamical rules there, so provable facts and collapses are
// unchanged, and worked proof trees can cite them directly.
inline std::vector<Axiom> theory_axioms(TheoryId t) {
    using namespace detail;
    std::vector<Axiom> out;
    switch (t) {
        case TheoryId::NontrivialRing:
            add_ring_axioms(out);
            out.push_back(collapse("C_r", P::Eq0, "1"));
            break;
        case TheoryId::RingProperMonoid:
            add_ring_axioms(out);
            add_field_direct(out);
            break;
        case TheoryId::QuasiDomain:
            add_ring_axioms(out);
            add_field_direct(out);
            add_quasi_domain_simpl(out);
            break;
        case TheoryId::Field:
        case TheoryId::Acf:
            add_ring_axioms(out);
            add_field_direct(out);
            add_quasi_domain_simpl(out);
            add_field_dyn(out);
            break;
        case TheoryId::ProtoOrderedRing:
            add_ring_axioms(out);
            add_proto_ordered(out);
            break;
        case TheoryId::QuasiOrderedRing:
            add_ring_axioms(out);
            add_proto_ordered(out);
            add_quasi_ordered_simpl(out);
            break;
        case TheoryId::OrderedDomain:
            add_ordered_domain(out);
            break;
        case TheoryId::OrderedField:
        case TheoryId::Rcf:
            add_ring_axioms(out);
            add_proto_ordered(out);
            add_quasi_ordered_simpl(out);
            add_ordered_field_dyn(out);
            break;
        case TheoryId::ProtoValuedRing:
            add_ring_axioms(out);
            add_proto_valued(out);
            break;
        case TheoryId::QuasiValuedRing:
            add_ring_axioms(out);
            add_proto_valued(out);
            add_valued_field_dyn(out);  // S(2)_v is shared; keep one table
            add_quasi_valued_simpl(out);
            break;
        case TheoryId::ValuedField:
        case TheoryId::Acvf:
            add_ring_axioms(out);
            add_proto_valued(out);
            add_valued_field_dyn(out);
            add_quasi_valued_simpl(out);
            break;
        case TheoryId::ProtoOrderedGroup:
            add_group_axioms(out);
            break;
        case TheoryId::QuasiOrderedGroup:
        case TheoryId::OrderedGroup:
        case TheoryId::DivisibleOrderedGroup:
            add_group_axioms(out);
            add_ordered_group_dyn(out);
            break;
    }
    return out;
}

// Degree-indexed schemas: the instance's substitution fixes the degree.
// Returns nullopt when the id is not a schema of the theory.
inline std::optional<Axiom> schema_axiom(TheoryId t, const std::string& id,
                                         const std::map<std::string, Polynomial>& subst) {
    using detail::P;
    auto count_keys = [&](const std::string& prefix) {
        long n = 0;
        while (subst.count(prefix + std::to_string(n))) ++n;
        return n;
    };

    if (id == "Dy_n(3)_f" && (t == TheoryId::Acf)) {
        long n = count_keys("x");
        if (n < 1) return std::nullopt;
        Axiom a;
        a.id = id;
        Polynomial body = Polynomial::term(rat(1), Monomial::var("y", n));
        for (long k = 0; k < n; ++k)
            a.metavars.push_back("x" + std::to_string(k));
        for (long k = 0; k < n; ++k)
            body = body + Polynomial::variable("x" + std::to_string(k)) *
                              Polynomial::term(rat(1), Monomial::var("y", k));
        AxiomDisjunct d;
        d.exist_vars = {"y"};
        d.atoms.push_back({P::Eq0, body});
        a.disjuncts.push_back(std::move(d));
        return a;
    }
    if (id == "Dy_n(5)_v" && t == TheoryId::Acvf) {
        auto base = schema_axiom(TheoryId::Acf, "Dy_n(3)_f", subst);
        if (!base) return std::nullopt;
        base->id = id;
        return base;
    }
    if (id == "Dy_n(4)_of" && t == TheoryId::Rcf) {
        long n = count_keys("c");
        if (n < 1) return std::nullopt;
        Axiom a;
        a.id = id;
        a.metavars = {"a", "b"};
        auto poly_at = [&](const std::string& at) {
            Polynomial body = Polynomial::term(rat(1), Monomial::var(at, n));
            for (long k = 0; k < n; ++k)
                body = body + Polynomial::variable("c" + std::to_string(k)) *
                                  Polynomial::term(rat(1), Monomial::var(at, k));
            return body;
        };
        for (long k = 0; k < n; ++k) a.metavars.push_back("c" + std::to_string(k));
        a.hyps.push_back({P::Geq0, -(poly_at("a") * poly_at("b"))});
        AxiomDisjunct d;
        d.exist_vars = {"y"};
        d.atoms.push_back({P::Eq0, poly_at("y")});
        a.disjuncts.push_back(std::move(d));
        return a;
    }
    if (id == "Dy_n(3)_og" && t == TheoryId::DivisibleOrderedGroup) {
        auto it = subst.find("n");
        if (it == subst.end() || !it->second.is_constant()) return std::nullopt;
        Rational n = it->second.constant_value();
        if (!is_integer(n) || n < 2) return std::nullopt;
        Axiom a;
        a.id = id;
        a.metavars = {"x", "n"};
        AxiomDisjunct d;
        d.exist_vars = {"y"};
        d.atoms.push_back({P::Eq0, Polynomial::variable("y") * n - Polynomial::variable("x")});
        a.disjuncts.push_back(std::move(d));
        return a;
    }
    if ((id == "S_n(2)_og" || id == "S_n(3)_og") &&
        (t == TheoryId::QuasiOrderedGroup || t == TheoryId::OrderedGroup ||
         t == TheoryId::DivisibleOrderedGroup)) {
        auto it = subst.find("n");
        if (it == subst.end() || !it->second.is_constant()) return std::nullopt;
        Rational n = it->second.constant_value();
        if (!is_integer(n) || n < 1) return std::nullopt;
        Axiom a;
        a.id = id;
        a.metavars = {"x", "n"};
        Predicate pred = id == "S_n(2)_og" ? P::Geq0 : P::Gt0;
        a.hyps.push_back({pred, Polynomial::variable("x") * n});
        AxiomDisjunct d;
        d.atoms.push_back({pred, parse_polynomial("x")});
        a.disjuncts.push_back(std::move(d));
        return a;
    }
    return std::nullopt;
}

}  // namespace dynalg
