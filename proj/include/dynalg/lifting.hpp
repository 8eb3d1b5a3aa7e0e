#pragma once

#include <dynalg/cert_algebra.hpp>

namespace dynalg {

// Certificate-to-certificate transformers. Every operation verifies its
// inputs against the stated extended presentations, constructs the
// output following the corresponding lemma proof, and verifies the
// result before returning. Exponents follow the proofs as written; no
// post-hoc minimization.

namespace detail {

inline void require_valid(const Presentation& p, const CollapseCertificate& c,
                          const char* what) {
    VerifyResult r = verify_collapse(p, c);
    if (!r.valid)
        throw LiftError(std::string(what) + ": input certificate invalid (" + r.message + ")");
}

inline CollapseCertificate checked(const Presentation& p, CollapseCertificate c,
                                   const char* what) {
    VerifyResult r = verify_collapse(p, c);
    if (!r.valid)
        throw LiftError(std::string(what) + ": constructed certificate invalid (" + r.message +
                        "), residual " + to_string(r.residual));
    return c;
}

inline const FieldCollapse& as_field(const CollapseCertificate& c, const char* what) {
    if (auto* f = std::get_if<FieldCollapse>(&c.shape)) return *f;
    throw LiftError(std::string(what) + ": certificate is not field-shaped");
}

inline const OrderedCollapse& as_ordered(const CollapseCertificate& c, const char* what) {
    if (auto* o = std::get_if<OrderedCollapse>(&c.shape)) return *o;
    throw LiftError(std::string(what) + ": certificate is not ordered-shaped");
}

// Geometric cofactor: (x^n - 1) == (x - 1) * geom(x, n).
inline Polynomial geometric(const Polynomial& x, long n) {
    Polynomial acc;
    for (long k = 0; k < n; ++k) acc = acc + x.pow(static_cast<unsigned long>(k));
    return acc;
}

// sum_{k<n} a^k b^{n-1-k}: the cofactor with a^n - b^n == (a-b)*it.
inline Polynomial power_diff_cofactor(const Polynomial& a, const Polynomial& b, long n) {
    Polynomial acc;
    for (long k = 0; k < n; ++k)
        acc = acc + a.pow(static_cast<unsigned long>(k)) *
                        b.pow(static_cast<unsigned long>(n - 1 - k));
    return acc;
}

// Multiplies f by p^n and rewrites every p^k z^k to 1: the z-free
// polynomial sum_k coeff_z(f, k) p^{n-k}. Needs n >= deg_z(f).
inline Polynomial reduce_inverse_powers(const Polynomial& f, const Polynomial& p,
                                        const std::string& z, long n) {
    long d = std::max<long>(f.degree_in(z), 0);
    if (d > n) throw LiftError("inverse-power reduction exponent too small");
    Polynomial out;
    for (long k = 0; k <= d; ++k)
        out = out + coeff_of(f, z, k) * p.pow(static_cast<unsigned long>(n - k));
    if (f.is_zero()) out = Polynomial();
    return out;
}

}  // namespace detail

// --- field family (Lemma: adding an explicit inverse) -----------------------

// From a collapse of K u (p != 0), a collapse of K u (p*r - 1 = 0).
inline CollapseCertificate field_inverse_intro(const Presentation& K, const Polynomial& p,
                                               const Polynomial& r,
                                               const CollapseCertificate& cert) {
    std::vector<RelationRef> refs;
    Presentation Kin = extended(K, {{Predicate::Neq0, p}}, &refs);
    detail::require_valid(Kin, cert, "field_inverse_intro");
    const FieldCollapse& f = detail::as_field(cert, "field_inverse_intro");

    auto [n, m0] = monoid_extract(f.monoid, refs[0]);
    std::vector<RelationRef> out_refs;
    Presentation Kout = extended(K, {{Predicate::Eq0, p * r - Polynomial(1)}}, &out_refs);

    CollapseCertificate out;
    out.theory = K.theory();
    if (n == 0) {
        out.shape = FieldCollapse{m0, f.ideal};
        return detail::checked(Kout, out, "field_inverse_intro");
    }
    // m = r^n * (m p^n) - m (pr)^n + m = ... => m + r^n*i + (pr-1)*(m*G) = 0
    FieldCollapse g;
    g.monoid = m0;
    g.ideal = ideal_scale(f.ideal, r.pow(static_cast<unsigned long>(n)));
    Polynomial G = detail::geometric(p * r, n);
    ideal_push(g.ideal, m0.expand(K) * G, out_refs[0]);
    out.shape = std::move(g);
    return detail::checked(Kout, out, "field_inverse_intro");
}

// Rabinowitsch: from a collapse of K u (p z - 1 = 0), a collapse of
// K u (p != 0) with monoid exponent the z-degree of the ideal part.
inline CollapseCertificate field_rabinowitsch(const Presentation& K, const Polynomial& p,
                                              const std::string& z,
                                              const CollapseCertificate& cert) {
    std::vector<RelationRef> out_refs;
    Presentation Kout = extended(K, {{Predicate::Neq0, p}}, &out_refs);
    if (p.is_zero()) {
        // K u (0 != 0) collapses outright.
        CollapseCertificate out;
        out.theory = K.theory();
        FieldCollapse f;
        f.monoid.factors = {{out_refs[0], 1}};
        out.shape = std::move(f);
        return detail::checked(Kout, out, "field_rabinowitsch");
    }
    std::vector<RelationRef> refs;
    Presentation Kin = extended(with_fresh_var(K, z, "field_rabinowitsch"),
                                {{Predicate::Eq0, p * Polynomial::variable(z) - Polynomial(1)}},
                                &refs);
    detail::require_valid(Kin, cert, "field_rabinowitsch");
    const FieldCollapse& f = detail::as_field(cert, "field_rabinowitsch");

    auto [bcoeff, rest] = ideal_extract(f.ideal, refs[0]);
    long n = 0;
    for (auto& [c, ref] : rest.combination) n = std::max(n, c.degree_in(z));

    CollapseCertificate out;
    out.theory = K.theory();
    FieldCollapse g;
    g.monoid = f.monoid;
    monoid_push(g.monoid, out_refs[0], n);
    for (auto& [c, ref] : rest.combination)
        ideal_push(g.ideal, detail::reduce_inverse_powers(c, p, z, n), ref);
    out.shape = std::move(g);
    return detail::checked(Kout, out, "field_rabinowitsch");
}

// Branch merge: collapses of K u (p = 0) and K u (p != 0) give one of K.
inline CollapseCertificate field_merge_branches(const Presentation& K, const Polynomial& p,
                                                const CollapseCertificate& cert_eq,
                                                const CollapseCertificate& cert_neq) {
    std::vector<RelationRef> eq_refs, neq_refs;
    Presentation Keq = extended(K, {{Predicate::Eq0, p}}, &eq_refs);
    Presentation Kneq = extended(K, {{Predicate::Neq0, p}}, &neq_refs);
    detail::require_valid(Keq, cert_eq, "field_merge_branches(eq)");
    detail::require_valid(Kneq, cert_neq, "field_merge_branches(neq)");
    const FieldCollapse& f1 = detail::as_field(cert_eq, "field_merge_branches");
    const FieldCollapse& f2 = detail::as_field(cert_neq, "field_merge_branches");

    auto [n, m2] = monoid_extract(f2.monoid, neq_refs[0]);
    CollapseCertificate out;
    out.theory = K.theory();
    if (n == 0) {  // the neq branch never used p
        out.shape = FieldCollapse{m2, f2.ideal};
        return detail::checked(K, out, "field_merge_branches");
    }
    auto [a, i1] = ideal_extract(f1.ideal, eq_refs[0]);
    if (a.is_zero()) {  // the eq branch never used p (net coefficient zero)
        out.shape = FieldCollapse{f1.monoid, i1};
        return detail::checked(K, out, "field_merge_branches");
    }

    // m1 + i1 = -a p ; m2 p^n + i2 = 0. Multiply the second by a^n and
    // substitute (a p)^n = (-1)^n (m1 + i1)^n:
    //   m2 m1^n + [ m2 * ((m1+i1)^n - m1^n) + (-1)^n a^n i2 ] = 0.
    Polynomial m1exp = f1.monoid.expand(K);
    Polynomial i1exp = i1.expand(K);
    Polynomial telescope = detail::power_diff_cofactor(m1exp + i1exp, m1exp, n);

    FieldCollapse g;
    g.monoid = monoid_mul(m2, monoid_pow(f1.monoid, n));
    IdealPart mid = ideal_scale(i1, m2.expand(K) * telescope);
    Rational sign = (n % 2 == 0) ? Rational(1) : Rational(-1);
    IdealPart tail = ideal_scale(f2.ideal, a.pow(static_cast<unsigned long>(n)) * sign);
    g.ideal = ideal_add(mid, tail);
    out.shape = std::move(g);
    return detail::checked(K, out, "field_merge_branches");
}

// Monic-root elimination: a collapse of K u (q(z) = 0) with q monic in a
// fresh z collapses K itself.
inline CollapseCertificate field_monic_root_elim(const Presentation& K, const Polynomial& q,
                                                 const std::string& z,
                                                 const CollapseCertificate& cert) {
    if (q.degree_in(z) < 1 || !(leading_coeff(q, z) == Polynomial(1)))
        throw LiftError("field_monic_root_elim: divisor must be monic of positive degree");
    std::vector<RelationRef> refs;
    Presentation Kin = with_fresh_var(K, z, "field_monic_root_elim");
    refs.push_back(Kin.add_relation(Predicate::Eq0, q));
    detail::require_valid(Kin, cert, "field_monic_root_elim");
    const FieldCollapse& f = detail::as_field(cert, "field_monic_root_elim");

    CollapseCertificate out;
    out.theory = K.theory();
    FieldCollapse g;
    g.monoid = f.monoid;  // z-free: K relations only
    for (auto& [c, ref] : f.ideal.combination) {
        if (ref == refs.back()) continue;  // the q-part vanishes after reduction
        Polynomial b = pseudo_divide(c, q, z).remainder;
        ideal_push(g.ideal, coeff_of(b, z, 0), ref);
    }
    out.shape = std::move(g);
    return detail::checked(K, out, "field_monic_root_elim");
}

// Leading-coefficient lemmas. (i): q monic, K u (q(z) != 0) collapsing
// collapses K: read off the top z-coefficient.
inline CollapseCertificate field_leadcoeff_i(const Presentation& K, const Polynomial& q,
                                             const std::string& z,
                                             const CollapseCertificate& cert) {
    if (q.degree_in(z) < 1 || !(leading_coeff(q, z) == Polynomial(1)))
        throw LiftError("field_leadcoeff_i: polynomial must be monic of positive degree");
    Presentation Kin = with_fresh_var(K, z, "field_leadcoeff_i");
    RelationRef qref = Kin.add_relation(Predicate::Neq0, q);
    detail::require_valid(Kin, cert, "field_leadcoeff_i");
    const FieldCollapse& f = detail::as_field(cert, "field_leadcoeff_i");

    auto [n, m0] = monoid_extract(f.monoid, qref);
    CollapseCertificate out;
    out.theory = K.theory();
    FieldCollapse g;
    g.monoid = m0;
    long top = n * q.degree_in(z);
    for (auto& [c, ref] : f.ideal.combination) ideal_push(g.ideal, coeff_of(c, z, top), ref);
    out.shape = std::move(g);
    return detail::checked(K, out, "field_leadcoeff_i");
}

// (ii): collapse of K u (q1(z) = 0, p != 0), with p the leading
// z-coefficient of q1, collapses K u (p != 0).
inline CollapseCertificate field_leadcoeff_ii(const Presentation& K, const Polynomial& q1,
                                              const std::string& z,
                                              const CollapseCertificate& cert) {
    long d = q1.degree_in(z);
    if (d < 1) throw LiftError("field_leadcoeff_ii: polynomial must have positive z-degree");
    Polynomial p = leading_coeff(q1, z);
    std::vector<RelationRef> out_refs;
    Presentation Kout = extended(K, {{Predicate::Neq0, p}}, &out_refs);
    Presentation Kin = with_fresh_var(Kout, z, "field_leadcoeff_ii");
    RelationRef q1ref = Kin.add_relation(Predicate::Eq0, q1);
    detail::require_valid(Kin, cert, "field_leadcoeff_ii");
    const FieldCollapse& f = detail::as_field(cert, "field_leadcoeff_ii");

    auto [acoeff, rest] = ideal_extract(f.ideal, q1ref);
    // Pseudo-reduce the remaining coefficients by q1 and keep the z^0
    // coefficient after multiplying through by p^Gamma.
    long gamma_max = 0;
    std::vector<std::pair<Polynomial, RelationRef>> reduced;
    std::vector<long> gammas;
    for (auto& [c, ref] : rest.combination) {
        if (c.degree_in(z) < d) {
            reduced.push_back({c, ref});
            gammas.push_back(0);
            continue;
        }
        PseudoDivision div = pseudo_divide(c, q1, z);
        reduced.push_back({div.remainder, ref});
        gammas.push_back(div.power);
        gamma_max = std::max(gamma_max, div.power);
    }
    CollapseCertificate out;
    out.theory = K.theory();
    FieldCollapse g;
    g.monoid = f.monoid;
    monoid_push(g.monoid, out_refs[0], gamma_max);
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        Polynomial scaled =
            reduced[i].first * p.pow(static_cast<unsigned long>(gamma_max - gammas[i]));
        ideal_push(g.ideal, coeff_of(scaled, z, 0), reduced[i].second);
    }
    out.shape = std::move(g);
    return detail::checked(Kout, out, "field_leadcoeff_ii");
}

// (iii): collapse of K u (q1(z) != 0, p != 0) collapses K u (p != 0):
// the top coefficient of q1^n is p^n.
inline CollapseCertificate field_leadcoeff_iii(const Presentation& K, const Polynomial& q1,
                                               const std::string& z,
                                               const CollapseCertificate& cert) {
    long d = q1.degree_in(z);
    if (d < 1) throw LiftError("field_leadcoeff_iii: polynomial must have positive z-degree");
    Polynomial p = leading_coeff(q1, z);
    std::vector<RelationRef> out_refs;
    Presentation Kout = extended(K, {{Predicate::Neq0, p}}, &out_refs);
    Presentation Kin = with_fresh_var(Kout, z, "field_leadcoeff_iii");
    RelationRef q1ref = Kin.add_relation(Predicate::Neq0, q1);
    detail::require_valid(Kin, cert, "field_leadcoeff_iii");
    const FieldCollapse& f = detail::as_field(cert, "field_leadcoeff_iii");

    auto [n, m0] = monoid_extract(f.monoid, q1ref);
    CollapseCertificate out;
    out.theory = K.theory();
    FieldCollapse g;
    g.monoid = m0;
    monoid_push(g.monoid, out_refs[0], n);
    for (auto& [c, ref] : f.ideal.combination) ideal_push(g.ideal, coeff_of(c, z, n * d), ref);
    out.shape = std::move(g);
    return detail::checked(Kout, out, "field_leadcoeff_iii");
}

// --- ordered family ---------------------------------------------------------

// From a collapse of K u (p = 0), one of K u (p >= 0, -p >= 0): square
// the identity and route -p^2 through the two new cone generators.
inline CollapseCertificate ordered_eq_to_ineqs(const Presentation& K, const Polynomial& p,
                                               const CollapseCertificate& cert) {
    std::vector<RelationRef> refs;
    Presentation Kin = extended(K, {{Predicate::Eq0, p}}, &refs);
    detail::require_valid(Kin, cert, "ordered_eq_to_ineqs");
    const OrderedCollapse& o = detail::as_ordered(cert, "ordered_eq_to_ineqs");

    std::vector<RelationRef> out_refs;
    Presentation Kout = extended(K, {{Predicate::Geq0, p}, {Predicate::Geq0, -p}}, &out_refs);

    auto [a, i0] = ideal_extract(o.ideal, refs[0]);
    CollapseCertificate out;
    out.theory = K.theory();
    if (a.is_zero()) {
        out.shape = OrderedCollapse{o.monoid, o.cone, i0};
        return detail::checked(Kout, out, "ordered_eq_to_ineqs");
    }
    OrderedBody b{o.monoid, true, o.cone, i0};
    OrderedBody sq = body_mul(b, b, Kout);
    ConeSummand cross;
    cross.weight = 1;
    cross.base = a;
    cross.mask = {out_refs[0], out_refs[1]};
    sq.cone.summands.push_back(cross);
    out.shape = OrderedCollapse{sq.monoid, sq.cone, sq.ideal};
    return detail::checked(Kout, out, "ordered_eq_to_ineqs");
}

namespace detail {

// Rewrites every use of the p^2 > 0 relation into plain squares: monoid
// exponent n is returned, cone masks fold p into the base.
inline std::tuple<long, MonoidPart, ConePart> strip_square_relation(const OrderedCollapse& o,
                                                                    const RelationRef& sqref,
                                                                    const Polynomial& p) {
    auto [n, m0] = monoid_extract(o.monoid, sqref);
    ConePart cone;
    for (auto& s : o.cone.summands) {
        ConeSummand t = s;
        std::vector<RelationRef> mask;
        for (auto& r : t.mask) {
            if (r == sqref)
                t.base = t.base * p;
            else
                mask.push_back(r);
        }
        t.mask = std::move(mask);
        cone.summands.push_back(std::move(t));
    }
    return {n, m0, cone};
}

}  // namespace detail

// From a collapse of K u (p^2 > 0), one of K u (p r - 1 = 0).
inline CollapseCertificate ordered_inverse_intro(const Presentation& K, const Polynomial& p,
                                                 const Polynomial& r,
                                                 const CollapseCertificate& cert) {
    std::vector<RelationRef> refs;
    Presentation Kin = extended(K, {{Predicate::Gt0, p * p}}, &refs);
    detail::require_valid(Kin, cert, "ordered_inverse_intro");
    const OrderedCollapse& o = detail::as_ordered(cert, "ordered_inverse_intro");

    auto [n, m0, cone] = detail::strip_square_relation(o, refs[0], p);
    std::vector<RelationRef> out_refs;
    Presentation Kout = extended(K, {{Predicate::Eq0, p * r - Polynomial(1)}}, &out_refs);

    CollapseCertificate out;
    out.theory = K.theory();
    OrderedCollapse g;
    g.monoid = m0;
    Polynomial rn = r.pow(static_cast<unsigned long>(n));
    g.cone = cone_mul_square(cone, rn);
    g.ideal = ideal_scale(o.ideal, rn * rn);
    Polynomial G = detail::geometric(p * r, 2 * n);
    ideal_push(g.ideal, m0.expand(K) * G, out_refs[0]);
    out.shape = std::move(g);
    return detail::checked(Kout, out, "ordered_inverse_intro");
}

// Rabinowitsch in the ordered setting: from a collapse of
// K u (p z - 1 = 0), one of K u (p^2 > 0).
inline CollapseCertificate ordered_rabinowitsch(const Presentation& K, const Polynomial& p,
                                                const std::string& z,
                                                const CollapseCertificate& cert) {
    std::vector<RelationRef> out_refs;
    Presentation Kout = extended(K, {{Predicate::Gt0, p * p}}, &out_refs);
    if (p.is_zero()) {
        CollapseCertificate out;
        out.theory = K.theory();
        OrderedCollapse g;
        g.monoid.factors = {{out_refs[0], 1}};
        out.shape = std::move(g);
        return detail::checked(Kout, out, "ordered_rabinowitsch");
    }
    std::vector<RelationRef> refs;
    Presentation Kin = extended(with_fresh_var(K, z, "ordered_rabinowitsch"),
                                {{Predicate::Eq0, p * Polynomial::variable(z) - Polynomial(1)}},
                                &refs);
    detail::require_valid(Kin, cert, "ordered_rabinowitsch");
    const OrderedCollapse& o = detail::as_ordered(cert, "ordered_rabinowitsch");

    auto [bcoeff, rest] = ideal_extract(o.ideal, refs[0]);
    long n = 0;
    for (auto& s : o.cone.summands) n = std::max(n, s.base.degree_in(z));
    for (auto& [c, ref] : rest.combination) n = std::max(n, (c.degree_in(z) + 1) / 2);

    CollapseCertificate out;
    out.theory = K.theory();
    OrderedCollapse g;
    g.monoid = o.monoid;
    monoid_push(g.monoid, out_refs[0], n);
    for (auto& s : o.cone.summands) {
        ConeSummand t = s;
        t.base = detail::reduce_inverse_powers(s.base, p, z, n);
        g.cone.summands.push_back(std::move(t));
    }
    for (auto& [c, ref] : rest.combination)
        ideal_push(g.ideal, detail::reduce_inverse_powers(c, p, z, 2 * n), ref);
    out.shape = std::move(g);
    return detail::checked(Kout, out, "ordered_rabinowitsch");
}

// Sign merge: collapses of K u (p >= 0) and K u (-p >= 0) give one of K.
inline CollapseCertificate ordered_merge_signs(const Presentation& K, const Polynomial& p,
                                               const CollapseCertificate& cert_pos,
                                               const CollapseCertificate& cert_neg) {
    std::vector<RelationRef> refs_pos, refs_neg;
    Presentation Kpos = extended(K, {{Predicate::Geq0, p}}, &refs_pos);
    Presentation Kneg = extended(K, {{Predicate::Geq0, -p}}, &refs_neg);
    detail::require_valid(Kpos, cert_pos, "ordered_merge_signs(pos)");
    detail::require_valid(Kneg, cert_neg, "ordered_merge_signs(neg)");
    const OrderedCollapse& o1 = detail::as_ordered(cert_pos, "ordered_merge_signs");
    const OrderedCollapse& o2 = detail::as_ordered(cert_neg, "ordered_merge_signs");

    auto [q1a, q1b] = cone_split_mask(o1.cone, refs_pos[0]);
    auto [q2a, q2b] = cone_split_mask(o2.cone, refs_neg[0]);

    CollapseCertificate out;
    out.theory = K.theory();
    if (q1b.summands.empty()) {
        out.shape = OrderedCollapse{o1.monoid, q1a, o1.ideal};
        return detail::checked(K, out, "ordered_merge_signs");
    }
    if (q2b.summands.empty()) {
        out.shape = OrderedCollapse{o2.monoid, q2a, o2.ideal};
        return detail::checked(K, out, "ordered_merge_signs");
    }
    // (m1+q1a+i1)(m2+q2a+i2) = (-p q1b)(p q2b) = -p^2 q1b q2b.
    OrderedBody b1{o1.monoid, true, q1a, o1.ideal};
    OrderedBody b2{o2.monoid, true, q2a, o2.ideal};
    OrderedBody prod = body_mul(b1, b2, K);
    ConePart cross = cone_mul_square(cone_mul(q1b, q2b, K), p);
    prod.cone = cone_add(prod.cone, cross);
    out.shape = OrderedCollapse{prod.monoid, prod.cone, prod.ideal};
    return detail::checked(K, out, "ordered_merge_signs");
}

// Strict/equality merge: collapses of K u (p = 0) and K u (p^2 > 0)
// give one of K. The monoid part of the output is m2 * m1^{2n}.
inline CollapseCertificate ordered_merge_eq_strict(const Presentation& K, const Polynomial& p,
                                                   const CollapseCertificate& cert_eq,
                                                   const CollapseCertificate& cert_strict) {
    std::vector<RelationRef> refs_eq, refs_st;
    Presentation Keq = extended(K, {{Predicate::Eq0, p}}, &refs_eq);
    Presentation Kst = extended(K, {{Predicate::Gt0, p * p}}, &refs_st);
    detail::require_valid(Keq, cert_eq, "ordered_merge_eq_strict(eq)");
    detail::require_valid(Kst, cert_strict, "ordered_merge_eq_strict(strict)");
    const OrderedCollapse& o1 = detail::as_ordered(cert_eq, "ordered_merge_eq_strict");
    const OrderedCollapse& o2 = detail::as_ordered(cert_strict, "ordered_merge_eq_strict");

    auto [n, m2, q2] = detail::strip_square_relation(o2, refs_st[0], p);
    CollapseCertificate out;
    out.theory = K.theory();
    if (n == 0) {
        out.shape = OrderedCollapse{m2, q2, o2.ideal};
        return detail::checked(K, out, "ordered_merge_eq_strict");
    }
    auto [a, i1] = ideal_extract(o1.ideal, refs_eq[0]);
    if (a.is_zero()) {
        out.shape = OrderedCollapse{o1.monoid, o1.cone, i1};
        return detail::checked(K, out, "ordered_merge_eq_strict");
    }

    // a p = -(m1+q1+i1) =: -W. Then p^{2n} a^{2n} = W^{2n} and
    //   m2 p^{2n} + q2 + i2 = 0
    // scaled by a^{2n} turns into m2 W^{2n} + q2 a^{2n} + i2 a^{2n} = 0.
    OrderedBody w{o1.monoid, true, o1.cone, i1};
    OrderedBody w2n = body_pow(w, 2 * n, K);
    Polynomial a2n = a.pow(static_cast<unsigned long>(2 * n));
    Polynomial an = a.pow(static_cast<unsigned long>(n));

    OrderedCollapse g;
    g.monoid = monoid_mul(m2, w2n.monoid);
    g.cone = cone_add(cone_mul_monoid(w2n.cone, m2, K), cone_mul_square(q2, an));
    g.ideal = ideal_add(ideal_scale(w2n.ideal, m2.expand(K)), ideal_scale(o2.ideal, a2n));
    out.shape = std::move(g);
    return detail::checked(K, out, "ordered_merge_eq_strict");
}

// --- root lifting (ordered family, induction on the degree) -----------------

namespace detail {

CollapseCertificate root_lift_impl(const Presentation& K, const Polynomial& p,
                                   const std::string& z, const Polynomial& a, const Polynomial& b,
                                   const CollapseCertificate& cert, int depth);

// Monic case of the induction: divide the certificate data by p, obtain
// the degree-(d-2) cofactor equation, recurse, and assemble.
inline CollapseCertificate root_lift_monic(const Presentation& K, const Polynomial& p,
                                           const std::string& z, const Polynomial& a,
                                           const Polynomial& b, const CollapseCertificate& cert,
                                           int depth) {
    long d = p.degree_in(z);
    std::vector<RelationRef> refs;
    Presentation Kin = with_fresh_var(K, z, "ordered_root_lift");
    refs.push_back(Kin.add_relation(Predicate::Eq0, p));
    require_valid(Kin, cert, "ordered_root_lift");
    const OrderedCollapse& o = as_ordered(cert, "ordered_root_lift");

    Polynomial ga = -(substitute(p, z, a) * substitute(p, z, b));
    std::vector<RelationRef> out_refs;
    Presentation Kout = extended(K, {{Predicate::Geq0, ga}}, &out_refs);

    if (d == 1) {
        // p = z + c: substitute the root z = -c; the p-part vanishes.
        Polynomial root = -coeff_of(p, z, 0);
        OrderedCollapse g;
        g.monoid = o.monoid;
        for (auto& s : o.cone.summands) {
            ConeSummand t = s;
            t.base = substitute(s.base, z, root);
            g.cone.summands.push_back(std::move(t));
        }
        for (auto& [c, ref] : o.ideal.combination) {
            if (ref == refs.back()) continue;
            ideal_push(g.ideal, substitute(c, z, root), ref);
        }
        CollapseCertificate out;
        out.theory = K.theory();
        out.shape = std::move(g);
        return checked(Kout, out, "ordered_root_lift");
    }

    // Reduce squares and ideal coefficients modulo the monic p, tracking
    // the cofactor q with  m + sum w r^2 mask + sum b_i e_i + p*q == 0.
    auto [cpart, ideal0] = ideal_extract(o.ideal, refs.back());
    Polynomial q = cpart;
    ConePart cone_red;
    for (auto& s : o.cone.summands) {
        PseudoDivision div = pseudo_divide(s.base, p, z);  // monic: base = p*u + r
        ConeSummand t = s;
        t.base = div.remainder;
        cone_red.summands.push_back(t);
        // w (p u + r)^2 mask = w r^2 mask + p * w u (p u + 2 r) mask
        Polynomial mask_poly(s.weight);
        for (auto& r : s.mask) mask_poly = mask_poly * Kin.relation(r);
        q = q + mask_poly * div.quotient * (p * div.quotient + Polynomial(2) * div.remainder);
    }
    IdealPart ideal_red;
    for (auto& [c, ref] : ideal0.combination) {
        PseudoDivision div = pseudo_divide(c, p, z);
        ideal_push(ideal_red, div.remainder, ref);
        q = q + div.quotient * Kin.relation(ref);
    }
    if (q.degree_in(z) > d - 2)
        throw LiftError("ordered_root_lift: cofactor degree bound violated");

    // Identity (2): m + cone_red + ideal_red + p*q == 0, a collapse
    // certificate for K u (q = 0); recurse on the cofactor.
    Polynomial qneg = q;  // relation polynomial for the recursion
    std::vector<RelationRef> qrefs;
    Presentation Kq = with_fresh_var(K, z, "ordered_root_lift");
    qrefs.push_back(Kq.add_relation(Predicate::Eq0, qneg));
    CollapseCertificate cert_q;
    cert_q.theory = K.theory();
    {
        OrderedCollapse gq;
        gq.monoid = o.monoid;
        gq.cone = cone_red;
        gq.ideal = ideal_red;
        ideal_push(gq.ideal, p, qrefs.back());
        cert_q.shape = std::move(gq);
    }
    CollapseCertificate lifted = root_lift_impl(K, qneg, z, a, b, cert_q, depth + 1);

    // T_a and T_b: bodies with expansion p(a)q(a) resp. p(b)q(b), read
    // off identity (2) at z = a and z = b. (2) says M + .. = -p q, so
    // the product T_a T_b expands to p(a)q(a)p(b)q(b) after signs.
    auto body_at = [&](const Polynomial& at) {
        OrderedBody t;
        t.monoid = o.monoid;
        t.has_monoid = true;
        ConePart cone_at;
        for (auto& s : cone_red.summands) {
            ConeSummand x = s;
            x.base = substitute(s.base, z, at);
            cone_at.summands.push_back(std::move(x));
        }
        t.cone = cone_at;
        IdealPart ideal_at;
        for (auto& [c, ref] : ideal_red.combination)
            ideal_push(ideal_at, substitute(c, z, at), ref);
        t.ideal = ideal_at;
        return t;
    };
    OrderedBody Ta = body_at(a), Tb = body_at(b);
    // T_a = -p(a) q(a); product W := T_a T_b = p(a)q(a)p(b)q(b) and
    // g_q * g_p == W as polynomials.
    OrderedBody W = body_mul(Ta, Tb, K);

    // lifted: M4 + Q4 + I4 = 0 over K u (g_q >= 0) with
    // g_q = -q(a)q(b). Split the cone on the g_q mask, then multiply by
    // g_q*g_p and substitute g_q*g_p = W on the linear occurrences.
    Polynomial gq_poly = -(substitute(q, z, a) * substitute(q, z, b));
    std::vector<RelationRef> gq_refs;
    Presentation Kgq = extended(K, {{Predicate::Geq0, gq_poly}}, &gq_refs);
    const OrderedCollapse& l = as_ordered(lifted, "ordered_root_lift");
    auto [q4a, q4b] = cone_split_mask(l.cone, gq_refs[0]);

    OrderedBody bodyA{l.monoid, true, q4a, l.ideal};
    OrderedBody result = body_mul(bodyA, W, K);
    // + g_q^2 * g_p * Q4b
    ConePart tail = cone_mul_square(q4b, gq_poly);
    for (auto& s : tail.summands) s.mask.push_back(out_refs[0]);
    result.cone = cone_add(result.cone, tail);

    CollapseCertificate out;
    out.theory = K.theory();
    out.shape = OrderedCollapse{result.monoid, result.cone, result.ideal};
    return checked(Kout, out, "ordered_root_lift");
}

inline CollapseCertificate root_lift_impl(const Presentation& K, const Polynomial& p,
                                          const std::string& z, const Polynomial& a,
                                          const Polynomial& b, const CollapseCertificate& cert,
                                          int depth) {
    if (depth > 64) throw LiftError("ordered_root_lift: recursion bound exceeded");
    long d = p.degree_in(z);
    Polynomial ga = -(substitute(p, z, a) * substitute(p, z, b));
    std::vector<RelationRef> out_refs;
    Presentation Kout = extended(K, {{Predicate::Geq0, ga}}, &out_refs);

    if (d <= 0) {
        // z-free p: square the identity; -p(a)p(b) = -p^2.
        std::vector<RelationRef> refs;
        Presentation Kin = with_fresh_var(K, z, "ordered_root_lift");
        refs.push_back(Kin.add_relation(Predicate::Eq0, p));
        require_valid(Kin, cert, "ordered_root_lift");
        const OrderedCollapse& o = as_ordered(cert, "ordered_root_lift");
        auto [c, i0] = ideal_extract(o.ideal, refs.back());
        // Certificates over K u (p=0) may mention z inside coefficients;
        // those contributions multiply p = const, so set z to zero.
        auto scrub = [&](const Polynomial& poly) { return substitute(poly, z, Polynomial()); };
        OrderedBody base{o.monoid, true, {}, {}};
        for (auto& s : o.cone.summands) {
            ConeSummand t = s;
            t.base = scrub(s.base);
            base.cone.summands.push_back(std::move(t));
        }
        for (auto& [ci, ref] : i0.combination) ideal_push(base.ideal, scrub(ci), ref);
        OrderedBody sq = body_mul(base, base, K);
        ConeSummand cross;
        cross.weight = 1;
        cross.base = scrub(c);
        cross.mask = {out_refs[0]};
        sq.cone.summands.push_back(cross);
        CollapseCertificate out;
        out.theory = K.theory();
        out.shape = OrderedCollapse{sq.monoid, sq.cone, sq.ideal};
        return checked(Kout, out, "ordered_root_lift");
    }

    Polynomial lc = leading_coeff(p, z);
    if (lc == Polynomial(1)) return root_lift_monic(K, p, z, a, b, cert, depth);

    // Non-monic: branch on the leading coefficient.
    // Branch 1: lc = 0, drop the head of p.
    Polynomial tail = p - Polynomial::term(Rational(1), Monomial::var(z, d)) * lc;
    std::vector<RelationRef> lc_refs;
    Presentation K1 = extended(K, {{Predicate::Eq0, lc}}, &lc_refs);
    CollapseCertificate cert1_in;
    {
        std::vector<RelationRef> refs;
        Presentation Kin = with_fresh_var(K, z, "ordered_root_lift");
        refs.push_back(Kin.add_relation(Predicate::Eq0, p));
        require_valid(Kin, cert, "ordered_root_lift");
        const OrderedCollapse& o = as_ordered(cert, "ordered_root_lift");
        auto [c, i0] = ideal_extract(o.ideal, refs.back());
        // a(z) * p = a(z) * tail + (a(z) z^d) * lc
        Presentation K1z = with_fresh_var(K1, z, "ordered_root_lift");
        RelationRef tail_ref = K1z.add_relation(Predicate::Eq0, tail);
        OrderedCollapse g;
        g.monoid = o.monoid;
        g.cone = o.cone;
        g.ideal = i0;
        ideal_push(g.ideal, c, tail_ref);
        ideal_push(g.ideal, c * Polynomial::term(Rational(1), Monomial::var(z, d)),
                   RelationRef{Predicate::Eq0, lc_refs[0].index});
        cert1_in.theory = K.theory();
        cert1_in.shape = std::move(g);
    }
    CollapseCertificate cert1 = root_lift_impl(K1, tail, z, a, b, cert1_in, depth + 1);
    // Rewrite -tail(a)tail(b) into -p(a)p(b) + lc * correction.
    Polynomial g_tail = -(substitute(tail, z, a) * substitute(tail, z, b));
    Polynomial ad = a.pow(static_cast<unsigned long>(d)), bd = b.pow(static_cast<unsigned long>(d));
    // g_tail = ga + lc * corr with corr = ad*tail(b) + bd*tail(a) + lc*ad*bd.
    Polynomial corr = ad * substitute(tail, z, b) + bd * substitute(tail, z, a) + lc * ad * bd;
    std::vector<RelationRef> gt_refs;
    Presentation K1g = extended(K1, {{Predicate::Geq0, g_tail}}, &gt_refs);
    const OrderedCollapse& c1 = as_ordered(cert1, "ordered_root_lift");
    auto [c1a, c1b] = cone_split_mask(c1.cone, gt_refs[0]);
    Presentation K1out = extended(K1, {{Predicate::Geq0, ga}});
    RelationRef ga_in_K1 = find_or_add(K1out, Predicate::Geq0, ga);
    OrderedCollapse branch1;
    branch1.monoid = c1.monoid;
    branch1.cone = c1a;
    branch1.ideal = c1.ideal;
    for (auto& s : c1b.summands) {
        ConeSummand t = s;
        t.mask.push_back(ga_in_K1);
        branch1.cone.summands.push_back(t);
        Polynomial mask_poly(s.weight);
        for (auto& r : s.mask) mask_poly = mask_poly * K1out.relation(r);
        ideal_push(branch1.ideal, mask_poly * s.base * s.base * corr, lc_refs[0]);
    }
    CollapseCertificate cert1_final;
    cert1_final.theory = K.theory();
    cert1_final.shape = std::move(branch1);
    cert1_final = checked(K1out, cert1_final, "ordered_root_lift(branch lc=0)");

    // Branch 2: lc^2 > 0; make p monic via y = lc*z with an inverse w.
    std::set<std::string> used;
    for (auto& g : K.generators()) used.insert(g);
    used.insert(z);
    auto fresh = [&](std::string base) {
        std::string name = base;
        int k = 0;
        while (used.count(name)) name = base + std::to_string(k++);
        used.insert(name);
        return name;
    };
    std::string w = fresh("w"), y = fresh("y");

    std::vector<RelationRef> sq_refs;
    Presentation K2 = extended(K, {{Predicate::Gt0, lc * lc}}, &sq_refs);
    std::vector<RelationRef> inv_refs;
    Presentation K2w = with_fresh_var(K2, w, "ordered_root_lift");
    inv_refs.push_back(
        K2w.add_relation(Predicate::Eq0, lc * Polynomial::variable(w) - Polynomial(1)));

    // P(y) = y^d + sum_{k<d} c_k lc^{d-1-k} y^k, monic with the same
    // roots scaled by lc.
    Polynomial Phat = Polynomial::term(Rational(1), Monomial::var(y, d));
    for (long k = 0; k < d; ++k)
        Phat = Phat + coeff_of(p, z, k) * lc.pow(static_cast<unsigned long>(d - 1 - k)) *
                          Polynomial::term(Rational(1), Monomial::var(y, k));

    // From the input certificate, substitute z = w*y and clear lc powers.
    CollapseCertificate cert2_in;
    {
        std::vector<RelationRef> refs;
        Presentation Kin = with_fresh_var(K, z, "ordered_root_lift");
        refs.push_back(Kin.add_relation(Predicate::Eq0, p));
        const OrderedCollapse& o = as_ordered(cert, "ordered_root_lift");
        auto [c, i0] = ideal_extract(o.ideal, refs.back());
        long e = d + (d % 2);  // even power of lc clearing all w's
        Polynomial wy = Polynomial::variable(w) * Polynomial::variable(y);

        // lc^e p(w y) = lc^{e-d+1} Phat(y) + (lc w - 1) * J
        Polynomial J;
        for (long k = 0; k <= d; ++k) {
            Polynomial ck = coeff_of(p, z, k);
            // lc^e w^k y^k = lc^{e-k} y^k (lc w)^k; (lc w)^k = 1 + (lcw-1)G_k
            J = J + ck * Polynomial::term(Rational(1), Monomial::var(y, k)) *
                        lc.pow(static_cast<unsigned long>(e - k)) *
                        geometric(lc * Polynomial::variable(w), k);
        }
        Presentation K2in = with_fresh_var(K2w, y, "ordered_root_lift");
        RelationRef phat_ref = K2in.add_relation(Predicate::Eq0, Phat);

        OrderedCollapse g;
        g.monoid = o.monoid;
        monoid_push(g.monoid, sq_refs[0], e / 2);
        Polynomial lc_half = lc.pow(static_cast<unsigned long>(e / 2));
        for (auto& s : o.cone.summands) {
            ConeSummand t = s;
            t.base = substitute(s.base, z, wy) * lc_half;
            g.cone.summands.push_back(std::move(t));
        }
        for (auto& [ci, ref] : i0.combination)
            ideal_push(g.ideal, substitute(ci, z, wy) * lc.pow(static_cast<unsigned long>(e)),
                       ref);
        Polynomial cz = substitute(c, z, wy);
        ideal_push(g.ideal, cz * lc.pow(static_cast<unsigned long>(e - d + 1)), phat_ref);
        ideal_push(g.ideal, cz * J, inv_refs[0]);
        cert2_in.theory = K.theory();
        cert2_in.shape = std::move(g);
        cert2_in = checked(K2in, cert2_in, "ordered_root_lift(monicization)");
    }

    // Monic case over K2w with endpoints lc*a and lc*b.
    CollapseCertificate cert2_mid =
        root_lift_monic(K2w, Phat, y, lc * a, lc * b, cert2_in, depth + 1);
    // -Phat(lc a) Phat(lc b) = lc^{2(d-1)} * ga: rewrite the mask.
    Polynomial g_hat = -(substitute(Phat, y, lc * a) * substitute(Phat, y, lc * b));
    std::vector<RelationRef> gh_refs;
    Presentation K2wg = extended(K2w, {{Predicate::Geq0, g_hat}}, &gh_refs);
    const OrderedCollapse& c2 = as_ordered(cert2_mid, "ordered_root_lift");
    auto [c2a, c2b] = cone_split_mask(c2.cone, gh_refs[0]);
    std::vector<RelationRef> ga2_refs;
    Presentation K2wout = extended(K2w, {{Predicate::Geq0, ga}}, &ga2_refs);
    OrderedCollapse mid;
    mid.monoid = c2.monoid;
    mid.cone = c2a;
    mid.ideal = c2.ideal;
    Polynomial lcd1 = lc.pow(static_cast<unsigned long>(d - 1));
    for (auto& s : c2b.summands) {
        ConeSummand t = s;
        t.base = t.base * lcd1;
        t.mask.push_back(ga2_refs[0]);
        mid.cone.summands.push_back(std::move(t));
    }
    CollapseCertificate cert2_k2w;
    cert2_k2w.theory = K.theory();
    cert2_k2w.shape = std::move(mid);
    cert2_k2w = checked(K2wout, cert2_k2w, "ordered_root_lift(branch lc!=0)");

    // Eliminate the inverse w over the strict branch's base (which
    // already carries lc^2 > 0), then merge the two branches on lc.
    Presentation Kg = extended(K, {{Predicate::Geq0, ga}});
    Presentation Kg_strict = extended(Kg, {{Predicate::Gt0, lc * lc}});
    CollapseCertificate cert2 = ordered_rabinowitsch(Kg_strict, lc, w, cert2_k2w);
    return ordered_merge_eq_strict(Kg, lc, cert1_final, cert2);
}

}  // namespace detail

// Root lifting: from a collapse of K u (p(z) = 0), a collapse of
// K u (-p(a)p(b) >= 0), by induction on the z-degree of p.
inline CollapseCertificate ordered_root_lift(const Presentation& K, const Polynomial& p,
                                             const std::string& z, const Polynomial& a,
                                             const Polynomial& b,
                                             const CollapseCertificate& cert) {
    return detail::root_lift_impl(K, p, z, a, b, cert, 0);
}

}  // namespace dynalg
