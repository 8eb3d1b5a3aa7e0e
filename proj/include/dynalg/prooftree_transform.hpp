#pragma once

#include <dynalg/prooftree.hpp>

namespace dynalg {

namespace detail {

using NodePath = std::vector<std::size_t>;

inline ProofNode* node_at(ProofNode& root, const NodePath& path) {
    ProofNode* n = &root;
    for (std::size_t i : path) n = &n->children[i];
    return n;
}

inline bool find_branching(const ProofNode& node, const std::string& id, NodePath& path) {
    if (node.branching && node.branching->axiom_id == id) return true;
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        path.push_back(i);
        if (find_branching(node.children[i], id, path)) return true;
        path.pop_back();
    }
    return false;
}

inline bool subtree_uses_branching(const ProofNode& node, const std::string& id,
                                   const Polynomial& arg) {
    if (node.branching && node.branching->axiom_id == id) {
        auto it = node.branching->substitution.find("x");
        if (it != node.branching->substitution.end() && it->second == arg) return true;
    }
    for (auto& c : node.children)
        if (subtree_uses_branching(c, id, arg)) return true;
    return false;
}

inline void collect_names(const ProofNode& node, std::set<std::string>& names) {
    for (auto& g : node.added_generators) names.insert(g);
    for (auto& aa : node.added_atoms)
        for (auto& v : aa.atom.subject.variables()) names.insert(v);
    for (auto& c : node.children) collect_names(c, names);
}

inline void rename_in_subtree(ProofNode& node, const std::string& from, const std::string& to) {
    Polynomial repl = Polynomial::variable(to);
    for (auto& g : node.added_generators)
        if (g == from) g = to;
    for (auto& aa : node.added_atoms) {
        aa.atom.subject = substitute(aa.atom.subject, from, repl);
        if (aa.axiom)
            for (auto& [k, v] : aa.axiom->substitution) v = substitute(v, from, repl);
    }
    if (node.branching)
        for (auto& [k, v] : node.branching->substitution) v = substitute(v, from, repl);
    for (auto& c : node.children) rename_in_subtree(c, from, to);
}

inline void substitute_in_subtree(ProofNode& node, const std::string& var, const Polynomial& val) {
    for (auto& aa : node.added_atoms) {
        aa.atom.subject = substitute(aa.atom.subject, var, val);
        if (aa.axiom)
            for (auto& [k, v] : aa.axiom->substitution) v = substitute(v, var, val);
    }
    if (node.branching)
        for (auto& [k, v] : node.branching->substitution) v = substitute(v, var, val);
    for (auto& c : node.children) substitute_in_subtree(c, var, val);
}

// Copy of a grafted subtree with its internal fresh generators renamed
// away from every name used anywhere in the tree.
inline ProofNode freshened_copy(const ProofNode& src, std::set<std::string>& used, int& counter) {
    ProofNode copy = src;
    std::set<std::string> internal;
    collect_names(copy, internal);
    std::function<void(const ProofNode&, std::vector<std::string>&)> gens =
        [&](const ProofNode& n, std::vector<std::string>& out) {
            for (auto& g : n.added_generators) out.push_back(g);
            for (auto& c : n.children) gens(c, out);
        };
    std::vector<std::string> to_rename;
    gens(copy, to_rename);
    for (auto& g : to_rename) {
        std::string fresh;
        do {
            fresh = g + "_" + std::to_string(counter++);
        } while (used.count(fresh) || internal.count(fresh));
        rename_in_subtree(copy, g, fresh);
        used.insert(fresh);
    }
    return copy;
}

// Merges children[idx] into node, dropping one from-disjunct atom (the
// branching's own disjunct contribution, already present upstream).
inline void pull_up(ProofNode& node, std::size_t idx) {
    ProofNode child = std::move(node.children[idx]);
    for (auto& aa : child.added_atoms)
        if (!aa.from_disjunct) node.added_atoms.push_back(aa);
    node.branching = child.branching;
    node.children = std::move(child.children);
    node.dead = child.dead;
}

// Appends a grafted proof fragment (a former sibling branch) below a
// node whose branching has been removed; the fragment's from-disjunct
// atoms are already valid facts at the node.
inline void graft(ProofNode& node, const ProofNode& fragment) {
    node.branching.reset();
    node.children.clear();
    node.dead = false;
    for (auto& aa : fragment.added_atoms)
        if (!aa.from_disjunct) node.added_atoms.push_back(aa);
    node.branching = fragment.branching;
    node.children = fragment.children;
    node.dead = fragment.dead;
}

inline void strip_atoms_by_axiom_prefix(ProofNode& node, const std::string& prefix) {
    std::vector<AddedAtom> kept;
    for (auto& aa : node.added_atoms)
        if (!(aa.axiom && aa.axiom->axiom_id.rfind(prefix, 0) == 0)) kept.push_back(aa);
    node.added_atoms = std::move(kept);
    for (auto& c : node.children) strip_atoms_by_axiom_prefix(c, prefix);
}

}  // namespace detail

// Lemma-driven elimination of a negation pair: rewrites a valid
// dynamical proof so that it uses neither Neg_In nor Neg_El, by the
// leftmost-suppression and subtree-grafting procedure.
inline ProofTree eliminate_negation(const ProofTree& input, Predicate pos, Predicate neg) {
    CheckReport pre = check_covering(input);
    if (!pre.ok)
        throw ProofError("eliminate_negation: input is not a valid covering at " + pre.path +
                         ": " + pre.message);
    std::string in_id = "Neg_In(" + detail::pred_pair(pos, neg) + ")";
    std::string el_id = "Neg_El(" + detail::pred_pair(pos, neg) + ")";

    ProofTree t = input;
    std::set<std::string> used;
    for (auto& g : t.base.generators()) used.insert(g);
    detail::collect_names(t.root, used);
    int counter = 0;

    while (true) {
        detail::NodePath el_path;
        if (!detail::find_branching(t.root, el_id, el_path)) break;
        ProofNode* n = detail::node_at(t.root, el_path);
        Polynomial arg = n->branching->substitution.at("x");

        // Introduction node: nearest strict ancestor whose Neg_In on the
        // same argument opened the right branch containing n.
        std::ptrdiff_t m_len = -1;
        for (std::ptrdiff_t len = static_cast<std::ptrdiff_t>(el_path.size()) - 1; len >= 0;
             --len) {
            detail::NodePath prefix(el_path.begin(), el_path.begin() + len);
            ProofNode* cand = detail::node_at(t.root, prefix);
            if (cand->branching && cand->branching->axiom_id == in_id &&
                cand->branching->substitution.at("x") == arg &&
                el_path[static_cast<std::size_t>(len)] == 1) {
                m_len = len;
                break;
            }
        }
        if (m_len < 0)
            throw ProofError("eliminate_negation: elimination without matching introduction");

        detail::NodePath m_path(el_path.begin(), el_path.begin() + m_len);
        ProofNode* m = detail::node_at(t.root, m_path);
        ProofNode branch_t = m->children[0];  // proves the fact from pos(-arg)

        // Suppress the introduction, keeping the右 branch's content.
        detail::pull_up(*m, 1);
        detail::NodePath new_el_path = m_path;
        new_el_path.insert(new_el_path.end(), el_path.begin() + m_len + 1, el_path.end());

        // Re-introduce the pair at branches opened to the right of the
        // path, where the negated atom is still consumed.
        for (std::size_t len = m_path.size(); len < new_el_path.size(); ++len) {
            detail::NodePath prefix(new_el_path.begin(),
                                    new_el_path.begin() + static_cast<std::ptrdiff_t>(len));
            ProofNode* on_path = detail::node_at(t.root, prefix);
            for (std::size_t ci = new_el_path[len] + 1; ci < on_path->children.size(); ++ci) {
                ProofNode& c = on_path->children[ci];
                if (!detail::subtree_uses_branching(c, el_id, arg)) continue;
                ProofNode rest;
                rest.added_atoms.push_back(AddedAtom{Atom{neg, arg}, true, std::nullopt});
                for (auto& aa : c.added_atoms)
                    if (!aa.from_disjunct) rest.added_atoms.push_back(aa);
                rest.branching = c.branching;
                rest.children = std::move(c.children);
                rest.dead = c.dead;
                ProofNode wrapped;
                wrapped.added_generators = c.added_generators;
                for (auto& aa : c.added_atoms)
                    if (aa.from_disjunct) wrapped.added_atoms.push_back(aa);
                AxiomInstance intro;
                intro.axiom_id = in_id;
                intro.substitution = {{"x", arg}};
                intro.disjunct_count = 2;
                wrapped.branching = intro;
                wrapped.children = {detail::freshened_copy(branch_t, used, counter),
                                    std::move(rest)};
                c = std::move(wrapped);
            }
        }

        // Remove the elimination and glue the positive-branch proof.
        ProofNode* n2 = detail::node_at(t.root, new_el_path);
        detail::graft(*n2, detail::freshened_copy(branch_t, used, counter));
    }

    // Unconsumed introductions: keep the right branch, drop the atom.
    while (true) {
        detail::NodePath in_path;
        if (!detail::find_branching(t.root, in_id, in_path)) break;
        ProofNode* m = detail::node_at(t.root, in_path);
        detail::pull_up(*m, 1);
    }
    return t;
}

// First Disj_El use replaced by the single branch matching the leftmost
// introducing Disj_In on its path; introductions are then erased.
inline ProofTree eliminate_disjunction(const ProofTree& input, Predicate q) {
    CheckReport pre = check_covering(input);
    if (!pre.ok)
        throw ProofError("eliminate_disjunction: input is not a valid covering at " + pre.path +
                         ": " + pre.message);
    std::string el_id = "Disj_El(" + to_string(q) + ")";
    std::string in_prefix = "Disj_In(" + to_string(q) + ",";

    ProofTree t = input;
    while (true) {
        detail::NodePath el_path;
        if (!detail::find_branching(t.root, el_id, el_path)) break;
        ProofNode* e = detail::node_at(t.root, el_path);
        Polynomial arg = e->branching->substitution.at("x");

        // Leftmost introduction of q(arg) on the path governs.
        std::optional<std::size_t> branch;
        for (std::size_t len = 0; len <= el_path.size() && !branch; ++len) {
            detail::NodePath prefix(el_path.begin(),
                                    el_path.begin() + static_cast<std::ptrdiff_t>(len));
            ProofNode* on_path = detail::node_at(t.root, prefix);
            for (auto& aa : on_path->added_atoms) {
                if (aa.axiom && aa.axiom->axiom_id.rfind(in_prefix, 0) == 0 &&
                    aa.atom == Atom{q, arg}) {
                    std::string idx = aa.axiom->axiom_id.substr(in_prefix.size());
                    branch = static_cast<std::size_t>(std::stoul(idx)) - 1;
                    break;
                }
            }
        }
        if (!branch)
            throw ProofError("eliminate_disjunction: elimination without introduction");
        detail::pull_up(*e, *branch);
    }
    detail::strip_atoms_by_axiom_prefix(t.root, in_prefix);
    return t;
}

// First Exis_El use replaced by its branch with the bound variable
// substituted by the term of the leftmost introducing Exis_In.
inline ProofTree eliminate_existential(const ProofTree& input, Predicate s) {
    CheckReport pre = check_covering(input);
    if (!pre.ok)
        throw ProofError("eliminate_existential: input is not a valid covering at " + pre.path +
                         ": " + pre.message);
    std::string el_id = "Exis_El(" + to_string(s) + ")";
    std::string in_id = "Exis_In(" + to_string(s) + ")";

    ProofTree t = input;
    while (true) {
        detail::NodePath el_path;
        if (!detail::find_branching(t.root, el_id, el_path)) break;
        ProofNode* e = detail::node_at(t.root, el_path);
        Polynomial arg = e->branching->substitution.at("x");

        std::optional<Polynomial> witness;
        for (std::size_t len = 0; len <= el_path.size() && !witness; ++len) {
            detail::NodePath prefix(el_path.begin(),
                                    el_path.begin() + static_cast<std::ptrdiff_t>(len));
            ProofNode* on_path = detail::node_at(t.root, prefix);
            for (auto& aa : on_path->added_atoms) {
                if (aa.axiom && aa.axiom->axiom_id == in_id && aa.atom == Atom{s, arg}) {
                    witness = aa.axiom->substitution.at("t");
                    break;
                }
            }
        }
        if (!witness) throw ProofError("eliminate_existential: elimination without introduction");

        ProofNode child = std::move(e->children[0]);
        if (child.added_generators.size() == 1)
            detail::substitute_in_subtree(child, child.added_generators[0], *witness);
        child.added_generators.clear();
        e->children[0] = std::move(child);
        detail::pull_up(*e, 0);
    }
    detail::strip_atoms_by_axiom_prefix(t.root, in_id);
    return t;
}

}  // namespace dynalg
