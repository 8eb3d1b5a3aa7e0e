#pragma once

#include <dynalg/axioms.hpp>
#include <dynalg/certificate.hpp>

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dynalg {

struct ProofError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AxiomInstance {
    std::string axiom_id;
    std::map<std::string, Polynomial> substitution;
    std::size_t disjunct_count = 0;

    bool operator==(const AxiomInstance& o) const {
        return axiom_id == o.axiom_id && substitution == o.substitution &&
               disjunct_count == o.disjunct_count;
    }
};

// Justification of an added atom: either the enclosing branching's
// disjunct, or one algebraic-axiom instance whose hypotheses are already
// present.
struct AddedAtom {
    Atom atom;
    bool from_disjunct = false;
    std::optional<AxiomInstance> axiom;
};

struct ProofNode {
    std::vector<std::string> added_generators;
    std::vector<AddedAtom> added_atoms;
    std::optional<AxiomInstance> branching;
    std::vector<ProofNode> children;
    bool dead = false;
};

// Predicate pairings that extend a base theory for the elimination
// lemmas. Negation: F(x) is the complement of T(-x).
struct NegationExt {
    Predicate pos = Predicate::Geq0;
    Predicate neg = Predicate::Gt0;
};
// Q(x) expresses the disjunction of parts.
struct DisjunctionExt {
    Predicate q = Predicate::Gt0;
    std::vector<Predicate> parts;
};
// S(x) expresses exists y. R(template(x, y)).
struct ExistentialExt {
    Predicate s = Predicate::Gt0;
    Predicate r = Predicate::Eq0;
    std::string var = "y";
    Polynomial subject_template;  // over metavariables {"x", var}
};

struct ProofTree {
    Presentation base;
    std::vector<NegationExt> negations;
    std::vector<DisjunctionExt> disjunctions;
    std::vector<ExistentialExt> existentials;
    ProofNode root;
};

struct CheckReport {
    bool ok = true;
    std::string path;  // node path like "0.1.0" (root is "0")
    std::string message;

    static CheckReport fail(const std::string& path, const std::string& msg) {
        return {false, path, msg};
    }
};

// --- effective axiom table -------------------------------------------

namespace detail {

inline std::string pred_pair(Predicate a, Predicate b) {
    return to_string(a) + "," + to_string(b);
}

}  // namespace detail

// Resolves an axiom id against the base theory, its schemas, and the
// tree's predicate extensions.
inline std::optional<Axiom> resolve_axiom(const ProofTree& t, const std::string& id,
                                          const std::map<std::string, Polynomial>& subst) {
    for (const Axiom& a : theory_axioms(t.base.theory()))
        if (a.id == id) return a;
    if (auto a = schema_axiom(t.base.theory(), id, subst)) return a;

    for (const NegationExt& n : t.negations) {
        std::string suffix = "(" + detail::pred_pair(n.pos, n.neg) + ")";
        if (id == "Neg_In" + suffix) {
            Axiom a;
            a.id = id;
            a.metavars = {"x"};
            AxiomDisjunct left, right;
            left.atoms.push_back({n.pos, parse_polynomial("-x")});
            right.atoms.push_back({n.neg, parse_polynomial("x")});
            a.disjuncts = {left, right};
            return a;
        }
        if (id == "Neg_El" + suffix) {
            Axiom a;
            a.id = id;
            a.metavars = {"x"};
            a.hyps.push_back({n.pos, parse_polynomial("-x")});
            a.hyps.push_back({n.neg, parse_polynomial("x")});
            return a;
        }
    }
    for (const DisjunctionExt& d : t.disjunctions) {
        for (std::size_t j = 0; j < d.parts.size(); ++j) {
            if (id == "Disj_In(" + to_string(d.q) + "," + std::to_string(j + 1) + ")") {
                Axiom a;
                a.id = id;
                a.metavars = {"x"};
                a.hyps.push_back({d.parts[j], parse_polynomial("x")});
                AxiomDisjunct c;
                c.atoms.push_back({d.q, parse_polynomial("x")});
                a.disjuncts.push_back(std::move(c));
                return a;
            }
        }
        if (id == "Disj_El(" + to_string(d.q) + ")") {
            Axiom a;
            a.id = id;
            a.metavars = {"x"};
            a.hyps.push_back({d.q, parse_polynomial("x")});
            for (Predicate part : d.parts) {
                AxiomDisjunct c;
                c.atoms.push_back({part, parse_polynomial("x")});
                a.disjuncts.push_back(std::move(c));
            }
            return a;
        }
    }
    for (const ExistentialExt& e : t.existentials) {
        if (id == "Exis_In(" + to_string(e.s) + ")") {
            Axiom a;
            a.id = id;
            a.metavars = {"x", "t"};
            a.hyps.push_back({e.r, instantiate(e.subject_template,
                                               {{e.var, Polynomial::variable("t")}})});
            AxiomDisjunct c;
            c.atoms.push_back({e.s, parse_polynomial("x")});
            a.disjuncts.push_back(std::move(c));
            return a;
        }
        if (id == "Exis_El(" + to_string(e.s) + ")") {
            Axiom a;
            a.id = id;
            a.metavars = {"x"};
            a.hyps.push_back({e.s, parse_polynomial("x")});
            AxiomDisjunct c;
            c.exist_vars = {e.var};
            c.atoms.push_back({e.r, e.subject_template});
            a.disjuncts.push_back(std::move(c));
            return a;
        }
    }
    return std::nullopt;
}

// --- covering checker ---------------------------------------------------

namespace detail {

struct CheckState {
    const ProofTree* tree;
    std::set<std::string> scope;
    std::set<Atom> atoms;
    bool predicate_ok(Predicate p) const {
        if (predicate_allowed(tree->base.theory(), p)) return true;
        for (auto& n : tree->negations)
            if (n.pos == p || n.neg == p) return true;
        for (auto& d : tree->disjunctions) {
            if (d.q == p) return true;
            for (auto part : d.parts)
                if (part == p) return true;
        }
        for (auto& e : tree->existentials)
            if (e.s == p || e.r == p) return true;
        return false;
    }
};

inline bool atom_present(const CheckState& st, const Atom& a) {
    return st.atoms.count(a) > 0 || diagram_atom(a);
}

inline bool vars_in_scope(const CheckState& st, const Polynomial& p) {
    for (auto& v : p.variables())
        if (!st.scope.count(v)) return false;
    return true;
}

inline CheckReport check_node(CheckState st, const ProofNode& node, const std::string& path,
                              const AxiomDisjunct* binding,
                              const std::map<std::string, Polynomial>* parent_subst) {
    // Fresh generators: new in the branch, bound by the parent disjunct.
    std::size_t expected = binding ? binding->exist_vars.size() : 0;
    if (node.added_generators.size() != expected)
        return CheckReport::fail(path, "added generator count does not match disjunct");
    for (auto& g : node.added_generators) {
        if (st.scope.count(g)) return CheckReport::fail(path, "generator '" + g + "' not fresh");
        st.scope.insert(g);
    }

    // Disjunct atoms: exactly the parent disjunct's instantiation.
    std::vector<Atom> expected_atoms;
    if (binding) {
        std::map<std::string, Polynomial> subst = *parent_subst;
        for (std::size_t i = 0; i < binding->exist_vars.size(); ++i)
            subst[binding->exist_vars[i]] = Polynomial::variable(node.added_generators[i]);
        for (auto& pat : binding->atoms)
            expected_atoms.push_back({pat.pred, instantiate(pat.tmpl, subst)});
    }
    std::vector<Atom> declared;
    for (auto& aa : node.added_atoms)
        if (aa.from_disjunct) declared.push_back(aa.atom);
    auto sorted = [](std::vector<Atom> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    if (sorted(declared) != sorted(expected_atoms))
        return CheckReport::fail(path, "disjunct atoms do not match the branching axiom");

    // Each added atom in order.
    for (std::size_t i = 0; i < node.added_atoms.size(); ++i) {
        const AddedAtom& aa = node.added_atoms[i];
        std::string apath = path + ":atom" + std::to_string(i);
        if (!st.predicate_ok(aa.atom.pred))
            return CheckReport::fail(apath, "predicate not in the effective language");
        if (!vars_in_scope(st, aa.atom.subject))
            return CheckReport::fail(apath, "atom uses out-of-scope variables");
        if (aa.from_disjunct) {
            st.atoms.insert(aa.atom);
            continue;
        }
        if (!aa.axiom) return CheckReport::fail(apath, "missing justification");
        auto ax = resolve_axiom(*st.tree, aa.axiom->axiom_id, aa.axiom->substitution);
        if (!ax) return CheckReport::fail(apath, "unknown axiom '" + aa.axiom->axiom_id + "'");
        if (!ax->is_algebraic())
            return CheckReport::fail(apath, "axiom '" + ax->id + "' is not algebraic");
        for (auto& mv : ax->metavars)
            if (!aa.axiom->substitution.count(mv))
                return CheckReport::fail(apath, "substitution misses metavariable '" + mv + "'");
        if (aa.axiom->substitution.size() != ax->metavars.size())
            return CheckReport::fail(apath, "substitution has extraneous metavariables");
        for (auto& [mv, poly] : aa.axiom->substitution)
            if (!vars_in_scope(st, poly))
                return CheckReport::fail(apath, "substitution uses out-of-scope variables");
        for (auto& hyp : ax->hyps) {
            Atom h{hyp.pred, instantiate(hyp.tmpl, aa.axiom->substitution)};
            if (!atom_present(st, h))
                return CheckReport::fail(apath, "hypothesis " + to_string(h.pred) + "(" +
                                                    to_string(h.subject) + ") not present");
        }
        Atom concl{ax->disjuncts[0].atoms[0].pred,
                   instantiate(ax->disjuncts[0].atoms[0].tmpl, aa.axiom->substitution)};
        if (!(concl == aa.atom))
            return CheckReport::fail(apath, "added atom does not match axiom conclusion");
        st.atoms.insert(aa.atom);
    }

    // Branching.
    if (!node.branching) {
        if (node.dead) return CheckReport::fail(path, "dead node without collapse branching");
        if (!node.children.empty()) return CheckReport::fail(path, "children without branching");
        return {};
    }
    const AxiomInstance& br = *node.branching;
    auto ax = resolve_axiom(*st.tree, br.axiom_id, br.substitution);
    if (!ax) return CheckReport::fail(path, "unknown axiom '" + br.axiom_id + "'");
    for (auto& mv : ax->metavars)
        if (!br.substitution.count(mv))
            return CheckReport::fail(path, "substitution misses metavariable '" + mv + "'");
    for (auto& [mv, poly] : br.substitution)
        if (!vars_in_scope(st, poly))
            return CheckReport::fail(path, "substitution uses out-of-scope variables");
    if (br.disjunct_count != ax->disjuncts.size())
        return CheckReport::fail(path, "disjunct_count does not match the axiom");
    for (auto& hyp : ax->hyps) {
        Atom h{hyp.pred, instantiate(hyp.tmpl, br.substitution)};
        if (!atom_present(st, h))
            return CheckReport::fail(path, "branching hypothesis " + to_string(h.pred) + "(" +
                                               to_string(h.subject) + ") not present");
    }
    if (ax->is_collapse()) {
        if (!node.dead) return CheckReport::fail(path, "collapse axiom on a live node");
        if (!node.children.empty())
            return CheckReport::fail(path, "collapse node cannot have children");
        return {};
    }
    if (node.dead) return CheckReport::fail(path, "dead node with non-collapse branching");
    if (node.children.size() != ax->disjuncts.size())
        return CheckReport::fail(path, "child count does not match axiom disjuncts");
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        CheckReport r = check_node(st, node.children[i], path + "." + std::to_string(i),
                                   &ax->disjuncts[i], &br.substitution);
        if (!r.ok) return r;
    }
    return {};
}

}  // namespace detail

inline CheckReport check_covering(const ProofTree& t) {
    detail::CheckState st;
    st.tree = &t;
    for (auto& g : t.base.generators()) st.scope.insert(g);
    for (Predicate p : all_predicates())
        for (auto& poly : t.base.relations(p)) st.atoms.insert(Atom{p, poly});
    return detail::check_node(st, t.root, "0", nullptr, nullptr);
}

namespace detail {

inline void live_leaf_atom_sets(const ProofNode& node, std::set<Atom> atoms,
                                std::vector<std::set<Atom>>& out) {
    for (auto& aa : node.added_atoms) atoms.insert(aa.atom);
    if (node.dead) return;
    if (node.children.empty()) {
        out.push_back(std::move(atoms));
        return;
    }
    for (auto& c : node.children) live_leaf_atom_sets(c, atoms, out);
}

}  // namespace detail

// True iff the covering is correct and the fact is present at every
// live leaf (vacuously true on a fully dead tree).
inline bool check_dynamical_proof(const ProofTree& t, const Atom& fact,
                                  CheckReport* report = nullptr) {
    CheckReport r = check_covering(t);
    if (report) *report = r;
    if (!r.ok) return false;
    std::set<Atom> base_atoms;
    for (Predicate p : all_predicates())
        for (auto& poly : t.base.relations(p)) base_atoms.insert(Atom{p, poly});
    std::vector<std::set<Atom>> leaves;
    detail::live_leaf_atom_sets(t.root, base_atoms, leaves);
    for (auto& leaf : leaves)
        if (!leaf.count(fact) && !diagram_atom(fact)) {
            if (report) *report = CheckReport::fail("", "fact missing at a live leaf");
            return false;
        }
    return true;
}

// True iff the covering is correct and every branch ends dead.
inline bool check_collapse(const ProofTree& t, CheckReport* report = nullptr) {
    CheckReport r = check_covering(t);
    if (report) *report = r;
    if (!r.ok) return false;
    std::vector<std::set<Atom>> leaves;
    detail::live_leaf_atom_sets(t.root, {}, leaves);
    if (!leaves.empty()) {
        if (report) *report = CheckReport::fail("", "live leaf remains");
        return false;
    }
    return true;
}

}  // namespace dynalg
