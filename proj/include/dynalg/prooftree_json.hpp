#pragma once

#include <dynalg/cert_json.hpp>
#include <dynalg/prooftree.hpp>

namespace dynalg {

inline Json atom_to_json(const Atom& a) {
    return Json{{"pred", to_string(a.pred)}, {"poly", to_string(a.subject)}};
}

inline Atom atom_from_json(const Json& j) {
    auto p = predicate_from_string(j.at("pred").get<std::string>());
    if (!p) throw ProofError("bad predicate in atom");
    return Atom{*p, parse_polynomial(j.at("poly").get<std::string>())};
}

inline Json instance_to_json(const AxiomInstance& i) {
    Json subst = Json::object();
    for (auto& [k, v] : i.substitution) subst[k] = to_string(v);
    return Json{{"axiom", i.axiom_id}, {"subst", subst}, {"disjuncts", i.disjunct_count}};
}

inline AxiomInstance instance_from_json(const Json& j) {
    AxiomInstance i;
    i.axiom_id = j.at("axiom").get<std::string>();
    for (auto& [k, v] : j.at("subst").items())
        i.substitution[k] = parse_polynomial(v.get<std::string>());
    i.disjunct_count = j.value("disjuncts", std::size_t{0});
    return i;
}

inline Json node_to_json(const ProofNode& n) {
    Json atoms = Json::array();
    for (auto& aa : n.added_atoms) {
        Json a{{"atom", atom_to_json(aa.atom)}};
        if (aa.from_disjunct)
            a["just"] = "disjunct";
        else if (aa.axiom)
            a["just"] = instance_to_json(*aa.axiom);
        atoms.push_back(a);
    }
    Json children = Json::array();
    for (auto& c : n.children) children.push_back(node_to_json(c));
    Json out{{"added_generators", n.added_generators}, {"added_atoms", atoms}};
    out["branching"] = n.branching ? instance_to_json(*n.branching) : Json(nullptr);
    out["children"] = children;
    out["dead"] = n.dead;
    return out;
}

inline ProofNode node_from_json(const Json& j) {
    ProofNode n;
    for (auto& g : j.at("added_generators")) n.added_generators.push_back(g.get<std::string>());
    for (auto& a : j.at("added_atoms")) {
        AddedAtom aa;
        aa.atom = atom_from_json(a.at("atom"));
        if (a.contains("just")) {
            if (a.at("just").is_string() && a.at("just").get<std::string>() == "disjunct")
                aa.from_disjunct = true;
            else
                aa.axiom = instance_from_json(a.at("just"));
        }
        n.added_atoms.push_back(std::move(aa));
    }
    if (!j.at("branching").is_null()) n.branching = instance_from_json(j.at("branching"));
    for (auto& c : j.at("children")) n.children.push_back(node_from_json(c));
    n.dead = j.value("dead", false);
    return n;
}

inline Json to_json(const ProofTree& t) {
    Json base{{"theory", to_string(t.base.theory())},
              {"vars", t.base.generators()}};
    Json rels = Json::array();
    for (Predicate p : all_predicates())
        for (auto& poly : t.base.relations(p))
            rels.push_back(Json{{"pred", to_string(p)}, {"poly", to_string(poly)}});
    base["relations"] = rels;

    Json ext = Json::object();
    if (!t.negations.empty()) {
        Json arr = Json::array();
        for (auto& n : t.negations)
            arr.push_back(Json{{"pos", to_string(n.pos)}, {"neg", to_string(n.neg)}});
        ext["negation"] = arr;
    }
    if (!t.disjunctions.empty()) {
        Json arr = Json::array();
        for (auto& d : t.disjunctions) {
            Json parts = Json::array();
            for (auto p : d.parts) parts.push_back(to_string(p));
            arr.push_back(Json{{"q", to_string(d.q)}, {"parts", parts}});
        }
        ext["disjunction"] = arr;
    }
    if (!t.existentials.empty()) {
        Json arr = Json::array();
        for (auto& e : t.existentials)
            arr.push_back(Json{{"s", to_string(e.s)},
                               {"r", to_string(e.r)},
                               {"var", e.var},
                               {"template", to_string(e.subject_template)}});
        ext["existential"] = arr;
    }
    return Json{{"base", base}, {"extensions", ext}, {"root", node_to_json(t.root)}};
}

inline ProofTree tree_from_json(const Json& j) {
    ProofTree t;
    const Json& base = j.at("base");
    auto theory = theory_from_string(base.at("theory").get<std::string>());
    if (!theory) throw ProofError("unknown theory in proof tree");
    std::vector<std::string> vars;
    for (auto& v : base.at("vars")) vars.push_back(v.get<std::string>());
    t.base = Presentation(*theory, vars);
    for (auto& r : base.at("relations")) {
        auto p = predicate_from_string(r.at("pred").get<std::string>());
        if (!p) throw ProofError("bad predicate in base relations");
        t.base.add_relation(*p, parse_polynomial(r.at("poly").get<std::string>()));
    }
    if (j.contains("extensions")) {
        const Json& ext = j.at("extensions");
        if (ext.contains("negation"))
            for (auto& n : ext.at("negation"))
                t.negations.push_back(
                    NegationExt{*predicate_from_string(n.at("pos").get<std::string>()),
                                *predicate_from_string(n.at("neg").get<std::string>())});
        if (ext.contains("disjunction"))
            for (auto& d : ext.at("disjunction")) {
                DisjunctionExt de;
                de.q = *predicate_from_string(d.at("q").get<std::string>());
                for (auto& p : d.at("parts"))
                    de.parts.push_back(*predicate_from_string(p.get<std::string>()));
                t.disjunctions.push_back(std::move(de));
            }
        if (ext.contains("existential"))
            for (auto& e : ext.at("existential")) {
                ExistentialExt ee;
                ee.s = *predicate_from_string(e.at("s").get<std::string>());
                ee.r = *predicate_from_string(e.at("r").get<std::string>());
                ee.var = e.at("var").get<std::string>();
                ee.subject_template = parse_polynomial(e.at("template").get<std::string>());
                t.existentials.push_back(std::move(ee));
            }
    }
    t.root = node_from_json(j.at("root"));
    return t;
}

}  // namespace dynalg
