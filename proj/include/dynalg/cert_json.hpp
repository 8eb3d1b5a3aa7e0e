#pragma once

#include <dynalg/certificate.hpp>

namespace dynalg {

// JSON encoding with a fixed key order throughout, so serialized
// certificates are bit-exact reproducible for golden tests.

inline Json ref_to_json(const RelationRef& r) {
    return Json{{"pred", to_string(r.pred)}, {"index", r.index}};
}

inline RelationRef ref_from_json(const Json& j) {
    auto p = predicate_from_string(j.at("pred").get<std::string>());
    if (!p) throw CertificateError("bad predicate in reference");
    return RelationRef{*p, j.at("index").get<std::size_t>()};
}

inline Json monoid_to_json(const MonoidPart& m) {
    Json factors = Json::array();
    for (auto& [ref, e] : m.factors)
        factors.push_back(Json{{"ref", ref_to_json(ref)}, {"exp", e}});
    return Json{{"scalar", to_string(m.scalar)}, {"factors", factors}};
}

inline MonoidPart monoid_from_json(const Json& j) {
    MonoidPart m;
    auto s = parse_rational(j.at("scalar").get<std::string>());
    if (!s) throw CertificateError("bad monoid scalar");
    m.scalar = *s;
    for (auto& f : j.at("factors"))
        m.factors.push_back({ref_from_json(f.at("ref")), f.at("exp").get<long>()});
    return m;
}

inline Json ideal_to_json(const IdealPart& i) {
    Json arr = Json::array();
    for (auto& [c, ref] : i.combination)
        arr.push_back(Json{{"coeff", to_string(c)}, {"ref", ref_to_json(ref)}});
    return arr;
}

inline IdealPart ideal_from_json(const Json& j) {
    IdealPart i;
    for (auto& e : j)
        i.combination.push_back(
            {parse_polynomial(e.at("coeff").get<std::string>()), ref_from_json(e.at("ref"))});
    return i;
}

inline Json cone_to_json(const ConePart& q) {
    Json arr = Json::array();
    for (auto& s : q.summands) {
        Json mask = Json::array();
        for (auto& r : s.mask) mask.push_back(ref_to_json(r));
        arr.push_back(Json{{"weight", to_string(s.weight)},
                           {"base", to_string(s.base)},
                           {"mask", mask}});
    }
    return arr;
}

inline ConePart cone_from_json(const Json& j) {
    ConePart q;
    for (auto& e : j) {
        ConeSummand s;
        auto w = parse_rational(e.at("weight").get<std::string>());
        if (!w) throw CertificateError("bad cone weight");
        s.weight = *w;
        s.base = parse_polynomial(e.at("base").get<std::string>());
        for (auto& r : e.at("mask")) s.mask.push_back(ref_from_json(r));
        q.summands.push_back(std::move(s));
    }
    return q;
}

inline Json subring_to_json(const SubringTerm& t) {
    Json arr = Json::array();
    for (auto& e : t.entries) {
        Json mono = Json::array();
        for (auto& [ref, exp] : e.monomial)
            mono.push_back(Json{{"ref", ref_to_json(ref)}, {"exp", exp}});
        arr.push_back(Json{{"coeff", to_string(e.coeff)}, {"monomial", mono}});
    }
    return arr;
}

inline SubringTerm subring_from_json(const Json& j) {
    SubringTerm t;
    for (auto& e : j) {
        SubringTerm::Entry en;
        auto c = parse_rational(e.at("coeff").get<std::string>());
        if (!c) throw CertificateError("bad subring coefficient");
        en.coeff = *c;
        for (auto& m : e.at("monomial"))
            en.monomial.push_back({ref_from_json(m.at("ref")), m.at("exp").get<long>()});
        t.entries.push_back(std::move(en));
    }
    return t;
}

inline Json rn_to_json(const RnIdealPart& r) {
    Json arr = Json::array();
    for (auto& [c, ref] : r.combination)
        arr.push_back(Json{{"coeff", subring_to_json(c)}, {"ref", ref_to_json(ref)}});
    return arr;
}

inline RnIdealPart rn_from_json(const Json& j) {
    RnIdealPart r;
    for (auto& e : j)
        r.combination.push_back({subring_from_json(e.at("coeff")), ref_from_json(e.at("ref"))});
    return r;
}

inline Json strict_to_json(const GroupStrict& s) {
    if (s.ref) return Json{{"ref", ref_to_json(*s.ref)}};
    return Json{{"scalar", to_string(s.scalar)}};
}

inline GroupStrict strict_from_json(const Json& j) {
    GroupStrict s;
    if (j.contains("ref")) {
        s.ref = ref_from_json(j.at("ref"));
    } else {
        auto c = parse_rational(j.at("scalar").get<std::string>());
        if (!c) throw CertificateError("bad strict scalar");
        s.scalar = *c;
    }
    return s;
}

inline Json gmsum_to_json(const GroupMonoidSum& q) {
    Json arr = Json::array();
    for (auto& [n, ref] : q.entries) arr.push_back(Json{{"mult", n}, {"ref", ref_to_json(ref)}});
    return Json{{"entries", arr}, {"constant", to_string(q.constant)}};
}

inline GroupMonoidSum gmsum_from_json(const Json& j) {
    GroupMonoidSum q;
    for (auto& e : j.at("entries"))
        q.entries.push_back({e.at("mult").get<long>(), ref_from_json(e.at("ref"))});
    auto c = parse_rational(j.at("constant").get<std::string>());
    if (!c) throw CertificateError("bad monoid constant");
    q.constant = *c;
    return q;
}

inline Json gcomb_to_json(const GroupCombination& g) {
    Json arr = Json::array();
    for (auto& [n, ref] : g.entries) arr.push_back(Json{{"mult", n}, {"ref", ref_to_json(ref)}});
    return arr;
}

inline GroupCombination gcomb_from_json(const Json& j) {
    GroupCombination g;
    for (auto& e : j)
        g.entries.push_back({e.at("mult").get<long>(), ref_from_json(e.at("ref"))});
    return g;
}

inline Json to_json(const CollapseCertificate& c) {
    Json parts;
    std::string shape;
    if (auto* r = std::get_if<RingCollapse>(&c.shape)) {
        shape = "ring";
        parts = Json{{"ideal", ideal_to_json(r->ideal)}};
    } else if (auto* f = std::get_if<FieldCollapse>(&c.shape)) {
        shape = "field";
        parts = Json{{"monoid", monoid_to_json(f->monoid)}, {"ideal", ideal_to_json(f->ideal)}};
    } else if (auto* o = std::get_if<OrderedCollapse>(&c.shape)) {
        shape = "ordered";
        parts = Json{{"monoid", monoid_to_json(o->monoid)},
                     {"cone", cone_to_json(o->cone)},
                     {"ideal", ideal_to_json(o->ideal)}};
    } else if (auto* v = std::get_if<ValuedCollapse>(&c.shape)) {
        shape = "valued";
        parts = Json{{"monoid", monoid_to_json(v->monoid)},
                     {"unit", monoid_to_json(v->unit)},
                     {"rn", rn_to_json(v->rn)},
                     {"ideal", ideal_to_json(v->ideal)}};
    } else {
        auto& g = std::get<GroupCollapse>(c.shape);
        shape = "group";
        parts = Json{{"strict", strict_to_json(g.strict)},
                     {"monoid", gmsum_to_json(g.monoid)},
                     {"group", gcomb_to_json(g.group)}};
    }
    return Json{{"theory", to_string(c.theory)}, {"shape", shape}, {"parts", parts}};
}

inline CollapseCertificate collapse_from_json(const Json& j) {
    CollapseCertificate c;
    auto t = theory_from_string(j.at("theory").get<std::string>());
    if (!t) throw CertificateError("unknown theory in certificate");
    c.theory = *t;
    std::string shape = j.at("shape").get<std::string>();
    const Json& parts = j.at("parts");
    if (shape == "ring") {
        c.shape = RingCollapse{ideal_from_json(parts.at("ideal"))};
    } else if (shape == "field") {
        c.shape = FieldCollapse{monoid_from_json(parts.at("monoid")),
                                ideal_from_json(parts.at("ideal"))};
    } else if (shape == "ordered") {
        c.shape = OrderedCollapse{monoid_from_json(parts.at("monoid")),
                                  cone_from_json(parts.at("cone")),
                                  ideal_from_json(parts.at("ideal"))};
    } else if (shape == "valued") {
        c.shape = ValuedCollapse{monoid_from_json(parts.at("monoid")),
                                 monoid_from_json(parts.at("unit")), rn_from_json(parts.at("rn")),
                                 ideal_from_json(parts.at("ideal"))};
    } else if (shape == "group") {
        c.shape = GroupCollapse{strict_from_json(parts.at("strict")),
                                gmsum_from_json(parts.at("monoid")),
                                gcomb_from_json(parts.at("group"))};
    } else {
        throw CertificateError("unknown certificate shape '" + shape + "'");
    }
    return c;
}

inline Json to_json(const FactCertificate& c) {
    Json parts;
    if (auto* f = std::get_if<FieldEqFact>(&c.shape)) {
        parts = Json{{"n", f->n},
                     {"monoid", monoid_to_json(f->monoid)},
                     {"ideal", ideal_to_json(f->ideal)}};
    } else if (auto* f = std::get_if<FieldNeqFact>(&c.shape)) {
        parts = Json{{"monoid", monoid_to_json(f->monoid)},
                     {"ideal", ideal_to_json(f->ideal)},
                     {"cofactor", to_string(f->cofactor)}};
    } else if (auto* f = std::get_if<OrderedNeqFact>(&c.shape)) {
        parts = Json{{"cofactor", to_string(f->cofactor)},
                     {"monoid", monoid_to_json(f->monoid)},
                     {"cone", cone_to_json(f->cone)},
                     {"ideal", ideal_to_json(f->ideal)}};
    } else if (auto* f = std::get_if<OrderedGtFact>(&c.shape)) {
        parts = Json{{"cofactor", cone_to_json(f->cofactor)},
                     {"monoid", monoid_to_json(f->monoid)},
                     {"cone", cone_to_json(f->cone)},
                     {"ideal", ideal_to_json(f->ideal)}};
    } else if (auto* f = std::get_if<OrderedEqFact>(&c.shape)) {
        parts = Json{{"n", f->n},
                     {"monoid", monoid_to_json(f->monoid)},
                     {"cone", cone_to_json(f->cone)},
                     {"ideal", ideal_to_json(f->ideal)}};
    } else if (auto* f = std::get_if<OrderedGeqFact>(&c.shape)) {
        parts = Json{{"cofactor", cone_to_json(f->cofactor)},
                     {"n", f->n},
                     {"monoid", monoid_to_json(f->monoid)},
                     {"cone", cone_to_json(f->cone)},
                     {"ideal", ideal_to_json(f->ideal)}};
    } else if (auto* f = std::get_if<ValuedEqFact>(&c.shape)) {
        parts = Json{{"n", f->n},
                     {"monoid", monoid_to_json(f->monoid)},
                     {"unit", monoid_to_json(f->unit)},
                     {"rn", rn_to_json(f->rn)},
                     {"ideal", ideal_to_json(f->ideal)}};
    } else if (auto* f = std::get_if<ValuedNeqFact>(&c.shape)) {
        parts = Json{{"monoid", monoid_to_json(f->monoid)},
                     {"unit", monoid_to_json(f->unit)},
                     {"rn", rn_to_json(f->rn)},
                     {"ideal", ideal_to_json(f->ideal)},
                     {"cofactor", to_string(f->cofactor)}};
    } else if (auto* f = std::get_if<ValuedVrFact>(&c.shape)) {
        Json coeffs = Json::array();
        for (auto& a : f->coeffs) coeffs.push_back(subring_to_json(a));
        parts = Json{{"monoid", monoid_to_json(f->monoid)},
                     {"unit", monoid_to_json(f->unit)},
                     {"rn", rn_to_json(f->rn)},
                     {"coeffs", coeffs},
                     {"ideal", ideal_to_json(f->ideal)}};
    } else if (auto* f = std::get_if<ValuedRnFact>(&c.shape)) {
        Json coeffs = Json::array();
        for (auto& a : f->coeffs) coeffs.push_back(rn_to_json(a));
        parts = Json{{"monoid", monoid_to_json(f->monoid)},
                     {"unit", monoid_to_json(f->unit)},
                     {"rn", rn_to_json(f->rn)},
                     {"coeffs", coeffs},
                     {"ideal", ideal_to_json(f->ideal)}};
    } else if (auto* f = std::get_if<ValuedUFact>(&c.shape)) {
        Json coeffs = Json::array();
        for (auto& a : f->coeffs) coeffs.push_back(subring_to_json(a));
        parts = Json{{"monoid", monoid_to_json(f->monoid)},
                     {"unit", monoid_to_json(f->unit)},
                     {"rn", rn_to_json(f->rn)},
                     {"unit2", monoid_to_json(f->unit2)},
                     {"rn2", rn_to_json(f->rn2)},
                     {"coeffs", coeffs},
                     {"ideal", ideal_to_json(f->ideal)}};
    } else if (auto* f = std::get_if<GroupGtFact>(&c.shape)) {
        parts = Json{{"strict", strict_to_json(f->strict)},
                     {"monoid", gmsum_to_json(f->monoid)},
                     {"group", gcomb_to_json(f->group)},
                     {"mult", f->multiplier}};
    } else if (auto* f = std::get_if<GroupGeqFact>(&c.shape)) {
        parts = Json{{"monoid", gmsum_to_json(f->monoid)},
                     {"group", gcomb_to_json(f->group)},
                     {"mult", f->multiplier}};
    } else if (auto* f = std::get_if<GroupEqFact>(&c.shape)) {
        parts = Json{{"monoid", gmsum_to_json(f->monoid)},
                     {"group", gcomb_to_json(f->group)},
                     {"monoid2", gmsum_to_json(f->monoid2)},
                     {"group2", gcomb_to_json(f->group2)},
                     {"mult", f->multiplier}};
    } else {
        auto& gn = std::get<GroupNeqFact>(c.shape);
        parts = Json{{"strict", strict_to_json(gn.strict)},
                     {"monoid", gmsum_to_json(gn.monoid)},
                     {"group", gcomb_to_json(gn.group)},
                     {"mult", gn.multiplier}};
    }
    return Json{{"theory", to_string(c.theory)},
                {"shape", "fact"},
                {"claim", Json{{"pred", to_string(c.claim.predicate)},
                               {"poly", to_string(c.claim.subject)}}},
                {"parts", parts}};
}

inline FactCertificate fact_from_json(const Json& j) {
    FactCertificate c;
    auto t = theory_from_string(j.at("theory").get<std::string>());
    if (!t) throw CertificateError("unknown theory in certificate");
    c.theory = *t;
    auto pred = predicate_from_string(j.at("claim").at("pred").get<std::string>());
    if (!pred) throw CertificateError("bad claim predicate");
    c.claim.predicate = *pred;
    c.claim.subject = parse_polynomial(j.at("claim").at("poly").get<std::string>());
    const Json& parts = j.at("parts");
    TheoryFamily fam = family_of(c.theory);
    switch (fam) {
        case TheoryFamily::Ring:
            throw CertificateError("no fact shapes for the ring family");
        case TheoryFamily::Field:
            if (c.claim.predicate == Predicate::Eq0)
                c.shape = FieldEqFact{parts.at("n").get<long>(),
                                      monoid_from_json(parts.at("monoid")),
                                      ideal_from_json(parts.at("ideal"))};
            else
                c.shape = FieldNeqFact{monoid_from_json(parts.at("monoid")),
                                       ideal_from_json(parts.at("ideal")),
                                       parse_polynomial(parts.at("cofactor").get<std::string>())};
            break;
        case TheoryFamily::Ordered:
            if (c.claim.predicate == Predicate::Neq0)
                c.shape = OrderedNeqFact{parse_polynomial(parts.at("cofactor").get<std::string>()),
                                         monoid_from_json(parts.at("monoid")),
                                         cone_from_json(parts.at("cone")),
                                         ideal_from_json(parts.at("ideal"))};
            else if (c.claim.predicate == Predicate::Gt0)
                c.shape = OrderedGtFact{cone_from_json(parts.at("cofactor")),
                                        monoid_from_json(parts.at("monoid")),
                                        cone_from_json(parts.at("cone")),
                                        ideal_from_json(parts.at("ideal"))};
            else if (c.claim.predicate == Predicate::Eq0)
                c.shape = OrderedEqFact{parts.at("n").get<long>(),
                                        monoid_from_json(parts.at("monoid")),
                                        cone_from_json(parts.at("cone")),
                                        ideal_from_json(parts.at("ideal"))};
            else
                c.shape = OrderedGeqFact{cone_from_json(parts.at("cofactor")),
                                         parts.at("n").get<long>(),
                                         monoid_from_json(parts.at("monoid")),
                                         cone_from_json(parts.at("cone")),
                                         ideal_from_json(parts.at("ideal"))};
            break;
        case TheoryFamily::Valued: {
            MonoidPart m = monoid_from_json(parts.at("monoid"));
            MonoidPart u = monoid_from_json(parts.at("unit"));
            RnIdealPart rn = rn_from_json(parts.at("rn"));
            IdealPart i = ideal_from_json(parts.at("ideal"));
            if (c.claim.predicate == Predicate::Eq0)
                c.shape = ValuedEqFact{parts.at("n").get<long>(), m, u, rn, i};
            else if (c.claim.predicate == Predicate::Neq0)
                c.shape = ValuedNeqFact{m, u, rn, i,
                                        parse_polynomial(parts.at("cofactor").get<std::string>())};
            else if (c.claim.predicate == Predicate::Vr) {
                ValuedVrFact f{m, u, rn, {}, i};
                for (auto& a : parts.at("coeffs")) f.coeffs.push_back(subring_from_json(a));
                c.shape = std::move(f);
            } else if (c.claim.predicate == Predicate::Rn) {
                ValuedRnFact f{m, u, rn, {}, i};
                for (auto& a : parts.at("coeffs")) f.coeffs.push_back(rn_from_json(a));
                c.shape = std::move(f);
            } else {
                ValuedUFact f{m,
                              u,
                              rn,
                              monoid_from_json(parts.at("unit2")),
                              rn_from_json(parts.at("rn2")),
                              {},
                              i};
                for (auto& a : parts.at("coeffs")) f.coeffs.push_back(subring_from_json(a));
                c.shape = std::move(f);
            }
            break;
        }
        case TheoryFamily::Group:
            if (c.claim.predicate == Predicate::Gt0)
                c.shape = GroupGtFact{strict_from_json(parts.at("strict")),
                                      gmsum_from_json(parts.at("monoid")),
                                      gcomb_from_json(parts.at("group")),
                                      parts.at("mult").get<long>()};
            else if (c.claim.predicate == Predicate::Geq0)
                c.shape = GroupGeqFact{gmsum_from_json(parts.at("monoid")),
                                       gcomb_from_json(parts.at("group")),
                                       parts.at("mult").get<long>()};
            else if (c.claim.predicate == Predicate::Eq0)
                c.shape = GroupEqFact{gmsum_from_json(parts.at("monoid")),
                                      gmsum_from_json(parts.at("monoid2")),
                                      gcomb_from_json(parts.at("group")),
                                      gcomb_from_json(parts.at("group2")),
                                      parts.at("mult").get<long>()};
            else
                c.shape = GroupNeqFact{strict_from_json(parts.at("strict")),
                                       gmsum_from_json(parts.at("monoid")),
                                       gcomb_from_json(parts.at("group")),
                                       parts.at("mult").get<long>()};
            break;
    }
    return c;
}

}  // namespace dynalg
