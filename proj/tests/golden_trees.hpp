#pragma once

// Worked proof trees used by both the unit suite and the acceptance
// suite: the four-node ordered-field proof of x-y=0 from x^3-y^3=0, its
// collapse variant, and the ordered-domain negation-elimination example.

#include <dynalg/prooftree.hpp>

namespace golden {

using namespace dynalg;

inline Polynomial P(const std::string& s) { return parse_polynomial(s); }

inline AddedAtom disj(Predicate pred, const std::string& poly) {
    return AddedAtom{Atom{pred, P(poly)}, true, std::nullopt};
}

inline AddedAtom alg(Predicate pred, const std::string& poly, const std::string& axiom,
                     std::map<std::string, std::string> subst) {
    AxiomInstance inst;
    inst.axiom_id = axiom;
    for (auto& [k, v] : subst) inst.substitution[k] = P(v);
    inst.disjunct_count = 1;
    return AddedAtom{Atom{pred, P(poly)}, false, inst};
}

inline AxiomInstance branch(const std::string& axiom, std::map<std::string, std::string> subst,
                            std::size_t disjuncts) {
    AxiomInstance inst;
    inst.axiom_id = axiom;
    for (auto& [k, v] : subst) inst.substitution[k] = P(v);
    inst.disjunct_count = disjuncts;
    return inst;
}

// Shared x=0 branch: derives x-y=0 from x^3-y^3=0 and x=0 by descending
// through y^4, y^2, y.
inline std::vector<AddedAtom> x_zero_chain() {
    return {
        disj(Predicate::Eq0, "x"),
        alg(Predicate::Eq0, "x^3", "D(3)_r", {{"x", "x"}, {"y", "x^2"}}),
        alg(Predicate::Eq0, "-x^3", "D(3)_r", {{"x", "x^3"}, {"y", "-1"}}),
        alg(Predicate::Eq0, "-y^3", "D(2)_r", {{"x", "x^3-y^3"}, {"y", "-x^3"}}),
        alg(Predicate::Eq0, "y^4", "D(3)_r", {{"x", "-y^3"}, {"y", "-y"}}),
        alg(Predicate::Eq0, "-y^4", "D(3)_r", {{"x", "y^4"}, {"y", "-1"}}),
        alg(Predicate::Geq0, "-y^4", "D(2)_of", {{"x", "-y^4"}, {"y", "0"}}),
        alg(Predicate::Eq0, "y^2", "S(3)_of", {{"x", "y^2"}}),
        alg(Predicate::Eq0, "-y^2", "D(3)_r", {{"x", "y^2"}, {"y", "-1"}}),
        alg(Predicate::Geq0, "-y^2", "D(2)_of", {{"x", "-y^2"}, {"y", "0"}}),
        alg(Predicate::Eq0, "y", "S(3)_of", {{"x", "y"}}),
        alg(Predicate::Eq0, "-y", "D(3)_r", {{"x", "y"}, {"y", "-1"}}),
        alg(Predicate::Eq0, "x-y", "D(2)_r", {{"x", "x"}, {"y", "-y"}}),
    };
}

// Shared x^2>0 branch prefix: derives T = x^2+xy+y^2 > 0 and T^2 > 0.
inline std::vector<AddedAtom> t_positive_chain() {
    return {
        disj(Predicate::Gt0, "x^2"),
        alg(Predicate::Geq0, "(y + 1/2*x)^2", "D(1)_of", {{"x", "y + 1/2*x"}}),
        alg(Predicate::Gt0, "3/4*x^2", "D(8)_of", {{"x", "3/4"}, {"y", "x^2"}}),
        alg(Predicate::Gt0, "x^2+x*y+y^2", "D(7)_of",
            {{"x", "3/4*x^2"}, {"y", "(y + 1/2*x)^2"}}),
        alg(Predicate::Gt0, "(x^2+x*y+y^2)^2", "D(8)_of",
            {{"x", "x^2+x*y+y^2"}, {"y", "x^2+x*y+y^2"}}),
    };
}

// Inverse node: from uT-1 = 0 derives x-y = 0.
inline std::vector<AddedAtom> inverse_chain() {
    return {
        disj(Predicate::Eq0, "(x^2+x*y+y^2)*u - 1"),
        alg(Predicate::Eq0, "(x^3-y^3)*u", "D(3)_r", {{"x", "x^3-y^3"}, {"y", "u"}}),
        alg(Predicate::Eq0, "-(x-y)*((x^2+x*y+y^2)*u - 1)", "D(3)_r",
            {{"x", "(x^2+x*y+y^2)*u - 1"}, {"y", "-(x-y)"}}),
        alg(Predicate::Eq0, "x-y", "D(2)_r",
            {{"x", "(x^3-y^3)*u"}, {"y", "-(x-y)*((x^2+x*y+y^2)*u - 1)"}}),
    };
}

// The four-node tree proving x^3-y^3=0 |- x-y=0 in ordered fields.
inline ProofTree proof_tree_xy() {
    ProofTree t;
    t.base = parse_presentation("theory ordered_field\nvars x y\neq x^3 - y^3\n");

    ProofNode l;
    l.added_atoms = x_zero_chain();

    ProofNode rd;
    rd.added_generators = {"u"};
    rd.added_atoms = inverse_chain();

    ProofNode r;
    r.added_atoms = t_positive_chain();
    r.branching = branch("Dy(1)_of", {{"x", "x^2+x*y+y^2"}}, 1);
    r.children = {rd};

    t.root.branching = branch("Dy(3)_of", {{"x", "x"}}, 2);
    t.root.children = {l, r};
    return t;
}

// The collapse tree for (x^3-y^3 = 0, (x-y)^2 > 0) in ordered fields.
inline ProofTree collapse_tree_xy() {
    ProofTree t;
    t.base = parse_presentation("theory ordered_field\nvars x y\neq x^3 - y^3\ngt (x-y)^2\n");

    auto kill = [](std::vector<AddedAtom> atoms) {
        atoms.push_back(alg(Predicate::Eq0, "-(x-y)^2", "D(3)_r", {{"x", "x-y"}, {"y", "-(x-y)"}}));
        atoms.push_back(
            alg(Predicate::Gt0, "0", "D(6)_of", {{"x", "-(x-y)^2"}, {"y", "(x-y)^2"}}));
        return atoms;
    };

    ProofNode l;
    l.added_atoms = kill(x_zero_chain());
    l.branching = branch("C_of", {}, 0);
    l.dead = true;

    ProofNode rd;
    rd.added_generators = {"u"};
    rd.added_atoms = kill(inverse_chain());
    rd.branching = branch("C_of", {}, 0);
    rd.dead = true;

    ProofNode r;
    r.added_atoms = t_positive_chain();
    r.branching = branch("Dy(1)_of", {{"x", "x^2+x*y+y^2"}}, 1);
    r.children = {rd};

    t.root.branching = branch("Dy(3)_of", {{"x", "x"}}, 2);
    t.root.children = {l, r};
    return t;
}

// Ordered-domain example: x+y >= 0, xy >= 0 |- x >= 0 proved with the
// complement pair (geq, gt) for ">0", before negation elimination.
inline ProofTree negation_example_tree() {
    ProofTree t;
    t.base = parse_presentation("theory ordered_domain\nvars x y\ngeq x + y\ngeq x*y\n");
    t.negations.push_back(NegationExt{Predicate::Geq0, Predicate::Gt0});

    ProofNode L;
    L.added_atoms = {disj(Predicate::Geq0, "x")};

    ProofNode RL;
    RL.added_atoms = {disj(Predicate::Geq0, "-y"),
                      alg(Predicate::Geq0, "x", "Alg(4)", {{"x", "x+y"}, {"y", "-y"}})};

    ProofNode RRL;
    RRL.added_atoms = {disj(Predicate::Geq0, "-y")};
    RRL.branching = branch("Neg_El(geq,gt)", {{"x", "y"}}, 0);
    RRL.dead = true;

    ProofNode RRRL;
    RRRL.added_atoms = {disj(Predicate::Eq0, "x"),
                        alg(Predicate::Geq0, "x", "Alg(2)", {{"x", "x"}})};

    ProofNode RRRR;
    RRRR.added_atoms = {disj(Predicate::Eq0, "y"),
                        alg(Predicate::Eq0, "-y", "Alg(1)", {{"x", "y"}, {"y", "-1"}}),
                        alg(Predicate::Geq0, "-y", "Alg(2)", {{"x", "-y"}})};
    RRRR.branching = branch("Neg_El(geq,gt)", {{"x", "y"}}, 0);
    RRRR.dead = true;

    ProofNode RRR;
    RRR.added_atoms = {disj(Predicate::Geq0, "y"),
                       alg(Predicate::Geq0, "-x*y", "Alg(5)", {{"x", "-x"}, {"y", "y"}}),
                       alg(Predicate::Eq0, "x*y", "Alg(3)", {{"x", "x*y"}})};
    RRR.branching = branch("Dyn(2)", {{"x", "x"}, {"y", "y"}}, 2);
    RRR.children = {RRRL, RRRR};

    ProofNode RR;
    RR.added_atoms = {disj(Predicate::Gt0, "y")};
    RR.branching = branch("Dyn(1)", {{"x", "-y"}}, 2);
    RR.children = {RRL, RRR};

    ProofNode R;
    R.added_atoms = {disj(Predicate::Geq0, "-x")};
    R.branching = branch("Neg_In(geq,gt)", {{"x", "y"}}, 2);
    R.children = {RL, RR};

    t.root.branching = branch("Dyn(1)", {{"x", "x"}}, 2);
    t.root.children = {L, R};
    return t;
}

}  // namespace golden
