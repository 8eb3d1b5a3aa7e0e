#pragma once

#include <dynalg/lifting.hpp>

namespace dynalg {

// Ordered-group transformers: plain integer-multiplier bookkeeping on
// affine relations.

namespace detail {

inline const GroupCollapse& as_group(const CollapseCertificate& c, const char* what) {
    if (auto* g = std::get_if<GroupCollapse>(&c.shape)) return *g;
    throw LiftError(std::string(what) + ": certificate is not group-shaped");
}

// Net integer multiplier of one reference in the group part.
inline std::pair<long, GroupCombination> gcomb_extract(const GroupCombination& g,
                                                       const RelationRef& ref) {
    long total = 0;
    GroupCombination rest;
    for (auto& [n, r] : g.entries) {
        if (r == ref)
            total += n;
        else
            rest.entries.push_back({n, r});
    }
    return {total, rest};
}

// Occurrences of one reference in strict + monoid positions.
inline std::tuple<long, StrictSum, GroupMonoidSum> strict_monoid_extract(
    const GroupCollapse& g, const RelationRef& ref) {
    long uses = 0;
    StrictSum strict_rest;
    GroupMonoidSum monoid_rest;
    if (g.strict.ref && *g.strict.ref == ref)
        uses += 1;
    else if (g.strict.ref)
        strict_rest.refs.push_back({1, *g.strict.ref});
    else
        strict_rest.scalar = g.strict.scalar;
    for (auto& [n, r] : g.monoid.entries) {
        if (r == ref)
            uses += n;
        else
            monoid_rest.entries.push_back({n, r});
    }
    monoid_rest.constant = g.monoid.constant;
    return {uses, strict_rest, monoid_rest};
}

}  // namespace detail

// (a) From a collapse of H u (p = 0), one of H u (p >= 0, -p >= 0):
// route the integer coefficient through the two inequality relations.
inline CollapseCertificate group_eq_to_ineqs(const Presentation& H, const Polynomial& p,
                                             const CollapseCertificate& cert) {
    std::vector<RelationRef> refs;
    Presentation Hin = extended(H, {{Predicate::Eq0, p}}, &refs);
    detail::require_valid(Hin, cert, "group_eq_to_ineqs");
    const GroupCollapse& g = detail::as_group(cert, "group_eq_to_ineqs");

    std::vector<RelationRef> out_refs;
    Presentation Hout = extended(H, {{Predicate::Geq0, p}, {Predicate::Geq0, -p}}, &out_refs);

    auto [c, rest] = detail::gcomb_extract(g.group, refs[0]);
    CollapseCertificate out;
    out.theory = H.theory();
    GroupCollapse o;
    o.strict = g.strict;
    o.monoid = g.monoid;
    o.group = rest;
    if (c > 0)
        o.monoid.entries.push_back({c, out_refs[0]});
    else if (c < 0)
        o.monoid.entries.push_back({-c, out_refs[1]});
    out.shape = std::move(o);
    return detail::checked(Hout, out, "group_eq_to_ineqs");
}

// (b) Merge: collapses of H u (p >= 0) and H u (-p >= 0) give one of H.
inline CollapseCertificate group_merge_signs(const Presentation& H, const Polynomial& p,
                                             const CollapseCertificate& cert_pos,
                                             const CollapseCertificate& cert_neg) {
    std::vector<RelationRef> pos_refs, neg_refs;
    Presentation Hpos = extended(H, {{Predicate::Geq0, p}}, &pos_refs);
    Presentation Hneg = extended(H, {{Predicate::Geq0, -p}}, &neg_refs);
    detail::require_valid(Hpos, cert_pos, "group_merge_signs(pos)");
    detail::require_valid(Hneg, cert_neg, "group_merge_signs(neg)");
    const GroupCollapse& g1 = detail::as_group(cert_pos, "group_merge_signs");
    const GroupCollapse& g2 = detail::as_group(cert_neg, "group_merge_signs");

    auto [l1, strict1, monoid1] = detail::strict_monoid_extract(g1, pos_refs[0]);
    auto [l2, strict2, monoid2] = detail::strict_monoid_extract(g2, neg_refs[0]);
    CollapseCertificate out;
    out.theory = H.theory();
    if (l1 == 0) {
        out.shape = g1;
        return detail::checked(H, out, "group_merge_signs");
    }
    if (l2 == 0) {
        out.shape = g2;
        return detail::checked(H, out, "group_merge_signs");
    }
    // l2 * cert_pos + l1 * cert_neg cancels the p terms. Note the added
    // relation is never strict here (it is a >=0 relation), so both
    // strict parts survive scaled.
    StrictSum strict;
    for (auto& [n, r] : strict1.refs) strict.refs.push_back({n * l2, r});
    for (auto& [n, r] : strict2.refs) strict.refs.push_back({n * l1, r});
    strict.scalar = strict1.scalar * Rational(l2) + strict2.scalar * Rational(l1);
    auto [s, spill] = normalize_strict(strict);

    GroupCollapse o;
    o.strict = s;
    o.monoid = gmsum_add(spill, gmsum_add(gmsum_scale(monoid1, l2), gmsum_scale(monoid2, l1)));
    o.group = gcomb_add(gcomb_scale(g1.group, l2), gcomb_scale(g2.group, l1));
    out.shape = std::move(o);
    return detail::checked(H, out, "group_merge_signs");
}

// (c) Merge: collapses of H u (p > 0) and H u (p = 0) give one of
// H u (p >= 0).
inline CollapseCertificate group_merge_strict_eq(const Presentation& H, const Polynomial& p,
                                                 const CollapseCertificate& cert_gt,
                                                 const CollapseCertificate& cert_eq) {
    std::vector<RelationRef> gt_refs, eq_refs;
    Presentation Hgt = extended(H, {{Predicate::Gt0, p}}, &gt_refs);
    Presentation Heq = extended(H, {{Predicate::Eq0, p}}, &eq_refs);
    detail::require_valid(Hgt, cert_gt, "group_merge_strict_eq(gt)");
    detail::require_valid(Heq, cert_eq, "group_merge_strict_eq(eq)");
    const GroupCollapse& g1 = detail::as_group(cert_gt, "group_merge_strict_eq");
    const GroupCollapse& g2 = detail::as_group(cert_eq, "group_merge_strict_eq");

    std::vector<RelationRef> out_refs;
    Presentation Hout = extended(H, {{Predicate::Geq0, p}}, &out_refs);

    auto [t, strict1, monoid1] = detail::strict_monoid_extract(g1, gt_refs[0]);
    auto [c, group2] = detail::gcomb_extract(g2.group, eq_refs[0]);
    CollapseCertificate out;
    out.theory = H.theory();
    if (t == 0) {  // the strict branch never used p
        out.shape = g1;
        return detail::checked(Hout, out, "group_merge_strict_eq");
    }
    if (c >= 0) {  // the equality branch uses p nonnegatively: re-type it
        GroupCollapse o;
        o.strict = g2.strict;
        o.monoid = g2.monoid;
        if (c > 0) o.monoid.entries.push_back({c, out_refs[0]});
        o.group = group2;
        out.shape = std::move(o);
        return detail::checked(Hout, out, "group_merge_strict_eq");
    }
    // t p = -(rest1); |c| p = rest2. Scale: |c| * cert_gt + t-fold use of
    // the equality: t*(S2+Q2+I2) + |c|*rest1 = 0.
    long ac = -c;
    StrictSum strict;
    if (g2.strict.ref)
        strict.refs.push_back({t, *g2.strict.ref});
    else
        strict.scalar = g2.strict.scalar * Rational(t);
    for (auto& [n, r] : strict1.refs) strict.refs.push_back({n * ac, r});
    strict.scalar = strict.scalar + strict1.scalar * Rational(ac);
    auto [s, spill] = normalize_strict(strict);

    GroupCollapse o;
    o.strict = s;
    o.monoid = gmsum_add(spill, gmsum_add(gmsum_scale(g2.monoid, t), gmsum_scale(monoid1, ac)));
    o.group = gcomb_add(gcomb_scale(group2, t), gcomb_scale(g1.group, ac));
    out.shape = std::move(o);
    return detail::checked(Hout, out, "group_merge_strict_eq");
}

// (d) Divisibility: a collapse of H u (n y - p = 0) with fresh y
// collapses H; the fresh relation can only occur with net multiplier 0.
inline CollapseCertificate group_divisibility(const Presentation& H, long n, const Polynomial& p,
                                              const std::string& y,
                                              const CollapseCertificate& cert) {
    if (n < 2) throw LiftError("group_divisibility: n must be at least 2");
    Presentation Hin = with_fresh_var(H, y, "group_divisibility");
    RelationRef ref =
        Hin.add_relation(Predicate::Eq0, Polynomial::variable(y) * Rational(n) - p);
    detail::require_valid(Hin, cert, "group_divisibility");
    const GroupCollapse& g = detail::as_group(cert, "group_divisibility");

    auto [c, rest] = detail::gcomb_extract(g.group, ref);
    if (c != 0) throw LiftError("group_divisibility: fresh variable cannot cancel");
    CollapseCertificate out;
    out.theory = H.theory();
    out.shape = GroupCollapse{g.strict, g.monoid, rest};
    return detail::checked(H, out, "group_divisibility");
}

}  // namespace dynalg
