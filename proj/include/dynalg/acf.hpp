#pragma once

#include <dynalg/cert_json.hpp>
#include <dynalg/lifting.hpp>

#include <future>

namespace dynalg {

// Decision procedure for collapse in algebraically closed fields over Q
// with certificate extraction. Variables are eliminated last-declared
// first. Case splits track the nullity of polynomials in the remaining
// variables, exactly mirroring the pseudo-remainder computation, and
// collapse certificates are pulled back up through the branch tree.

struct AcfError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResourceExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TriangularConstraint {
    std::string var;
    enum Kind { Equation, Disequation, Free } kind = Free;
    Polynomial poly;
    // Index into side_conditions justifying a nonzero leading
    // coefficient; -1 when the coefficient is a rational constant.
    long lc_condition = -1;
};

struct AcfWitness {
    std::vector<TriangularConstraint> constraints;  // x1 .. xn in order
    std::vector<Polynomial> side_conditions;        // asserted nonzero
};

struct AcfOutcome {
    bool collapses = false;
    CollapseCertificate certificate;
    AcfWitness witness;
};

struct AcfOptions {
    long node_budget = 1000000;
    bool parallel = false;
};

namespace acf_detail {

struct Sys {
    std::vector<Polynomial> eqs;
    std::vector<Polynomial> neqs;
    std::vector<bool> neq_resolved;  // disequation subsumed on this branch
};

// m * prod neq_i^{e_i} + sum c_i eq_i == 0, indices into Sys lists.
struct Cert {
    Rational scalar{1};
    std::map<std::size_t, long> neq_exponents;
    std::map<std::size_t, Polynomial> eq_coeffs;

    Polynomial monoid_expansion(const Sys& s) const {
        Polynomial acc(scalar);
        for (auto& [i, e] : neq_exponents)
            acc = acc * s.neqs[i].pow(static_cast<unsigned long>(e));
        return acc;
    }
    Polynomial ideal_expansion(const Sys& s) const {
        Polynomial acc;
        for (auto& [i, c] : eq_coeffs) acc = acc + c * s.eqs[i];
        return acc;
    }
};

struct Outcome {
    bool collapses = false;
    Cert cert;
    AcfWitness witness;
};

inline void cert_add_eq(Cert& c, std::size_t idx, const Polynomial& coeff) {
    if (coeff.is_zero()) return;
    auto it = c.eq_coeffs.find(idx);
    if (it == c.eq_coeffs.end()) {
        c.eq_coeffs.emplace(idx, coeff);
    } else {
        it->second = it->second + coeff;
        if (it->second.is_zero()) c.eq_coeffs.erase(it);
    }
}

inline void cert_normalize_sign(Cert& c) {
    if (is_negative(c.scalar)) {
        c.scalar = -c.scalar;
        for (auto& [i, p] : c.eq_coeffs) p = -p;
    }
}

// Zero/nonzero status of a polynomial relative to the branch context:
// rational constants decide directly; otherwise a normalized syntactic
// match against the relation lists. `factor` satisfies
// poly == factor * relation[index] for zero matches.
struct SignQuery {
    bool known = false;
    bool zero = false;
    std::size_t index = 0;
    Rational factor{1};
};

struct NeedSplit {
    Polynomial poly;  // normalized, nonconstant
};

inline Rational signed_content(const Polynomial& p) {
    Rational c = integer_content(p);
    if (!p.is_zero() && is_negative(p.terms().begin()->second)) c = -c;
    return c;
}

inline SignQuery context_sign(const Sys& s, const Polynomial& c) {
    SignQuery q;
    if (c.is_constant()) {
        q.known = true;
        q.zero = c.is_zero();
        return q;
    }
    Polynomial norm = normalize_primitive(c);
    for (std::size_t i = 0; i < s.eqs.size(); ++i) {
        if (!s.eqs[i].is_zero() && normalize_primitive(s.eqs[i]) == norm) {
            q.known = true;
            q.zero = true;
            q.index = i;
            q.factor = signed_content(c) / signed_content(s.eqs[i]);
            return q;
        }
    }
    for (std::size_t i = 0; i < s.neqs.size(); ++i) {
        if (!s.neqs[i].is_zero() && normalize_primitive(s.neqs[i]) == norm) {
            q.known = true;
            q.zero = false;
            q.index = i;
            q.factor = signed_content(c) / signed_content(s.neqs[i]);
            return q;
        }
    }
    return q;
}

inline SignQuery decided_sign(const Sys& s, const Polynomial& c) {
    SignQuery q = context_sign(s, c);
    if (!q.known) throw NeedSplit{normalize_primitive(c)};
    return q;
}

// Case-split merge (the branch lemma): cert_eq over s + (c = 0) at
// eq_idx, cert_neq over s + (c != 0) at neq_idx give one over s.
inline Cert merge_split(const Sys& s, Cert cert_eq, Cert cert_neq, std::size_t eq_idx,
                        std::size_t neq_idx) {
    long n = 0;
    auto it = cert_neq.neq_exponents.find(neq_idx);
    if (it != cert_neq.neq_exponents.end()) {
        n = it->second;
        cert_neq.neq_exponents.erase(it);
    }
    if (n == 0) return cert_neq;

    Polynomial a;
    auto ite = cert_eq.eq_coeffs.find(eq_idx);
    if (ite != cert_eq.eq_coeffs.end()) {
        a = ite->second;
        cert_eq.eq_coeffs.erase(ite);
    }
    if (a.is_zero()) return cert_eq;

    // m1 + i1 + a c = 0 and m2 c^n + i2 = 0 combine into
    //   m2 m1^n + m2 T i1 + (-1)^n a^n i2 = 0 with T telescoping.
    Polynomial m1 = cert_eq.monoid_expansion(s);
    Polynomial i1 = cert_eq.ideal_expansion(s);
    Polynomial m2 = cert_neq.monoid_expansion(s);
    Polynomial telescope = detail::power_diff_cofactor(m1 + i1, m1, n);
    Rational sign = (n % 2 == 0) ? Rational(1) : Rational(-1);
    Polynomial an = a.pow(static_cast<unsigned long>(n));

    Cert out;
    out.scalar = cert_neq.scalar * rat_pow(cert_eq.scalar, static_cast<unsigned long>(n));
    out.neq_exponents = cert_neq.neq_exponents;
    for (auto& [i, e] : cert_eq.neq_exponents) out.neq_exponents[i] += e * n;
    for (auto& [i, coeff] : cert_eq.eq_coeffs) cert_add_eq(out, i, coeff * m2 * telescope);
    for (auto& [i, coeff] : cert_neq.eq_coeffs) cert_add_eq(out, i, coeff * an * sign);
    cert_normalize_sign(out);
    return out;
}

class Solver {
public:
    Solver(std::vector<std::string> vars, AcfOptions opts)
        : vars_(std::move(vars)), opts_(opts), budget_(opts.node_budget) {}

    Outcome solve(const Sys& s, std::size_t level) {
        if (--budget_ < 0) throw ResourceExceeded("acf: node budget exceeded");

        for (std::size_t i = 0; i < s.eqs.size(); ++i) {
            const Polynomial& e = s.eqs[i];
            if (e.is_constant() && !e.is_zero()) {
                Outcome out;
                out.collapses = true;
                cert_add_eq(out.cert, i, Polynomial(Rational(-1) / e.constant_value()));
                return out;
            }
        }
        for (std::size_t i = 0; i < s.neqs.size(); ++i) {
            if (s.neqs[i].is_zero()) {
                Outcome out;
                out.collapses = true;
                out.cert.neq_exponents[i] = 1;
                return out;
            }
        }
        for (std::size_t i = 0; i < s.eqs.size(); ++i) {
            if (s.eqs[i].is_zero()) continue;
            for (std::size_t j = 0; j < s.neqs.size(); ++j) {
                if (s.eqs[i] == s.neqs[j]) {
                    Outcome out;
                    out.collapses = true;
                    out.cert.neq_exponents[j] = 1;
                    cert_add_eq(out.cert, i, Polynomial(-1));
                    return out;
                }
            }
        }

        if (level == 0) return {};

        try {
            return eliminate(s, level);
        } catch (NeedSplit& ns) {
            return split(s, level, ns.poly);
        }
    }

private:
    std::vector<std::string> vars_;
    AcfOptions opts_;
    long budget_;

    bool involves_at_or_above(const Polynomial& p, std::size_t level) const {
        for (std::size_t j = level; j < vars_.size(); ++j)
            if (p.degree_in(vars_[j]) > 0) return true;
        return false;
    }
    bool live_at(const Polynomial& p, std::size_t level) const {
        return p.degree_in(vars_[level - 1]) > 0 && !involves_at_or_above(p, level);
    }

    Outcome split(const Sys& s, std::size_t level, const Polynomial& c) {
        Sys s_eq = s;
        s_eq.eqs.push_back(c);
        Sys s_neq = s;
        s_neq.neqs.push_back(c);
        s_neq.neq_resolved.resize(s_neq.neqs.size(), false);
        std::size_t eq_idx = s_eq.eqs.size() - 1;
        std::size_t neq_idx = s_neq.neqs.size() - 1;

        Outcome oe, on;
        if (opts_.parallel) {
            auto fe = std::async(std::launch::async, [&] {
                Solver child(vars_, opts_);
                child.budget_ = budget_;
                return child.solve(s_eq, level);
            });
            on = solve(s_neq, level);
            oe = fe.get();
        } else {
            oe = solve(s_eq, level);
            on = solve(s_neq, level);
        }
        if (!oe.collapses) return oe;
        if (!on.collapses) return on;
        Outcome out;
        out.collapses = true;
        out.cert = merge_split(s, std::move(oe.cert), std::move(on.cert), eq_idx, neq_idx);
        return out;
    }

    // Lift through "relation at idx replaced by relation - lc x^d" where
    // lc == factor * eqs[lc_idx] in context.
    Outcome tail_eq_move(const Sys& s, std::size_t level, std::size_t idx) {
        const std::string& x = vars_[level - 1];
        Polynomial lc = leading_coeff(s.eqs[idx], x);
        SignQuery sq = decided_sign(s, lc);
        long d = s.eqs[idx].degree_in(x);
        Sys s2 = s;
        s2.eqs[idx] = s.eqs[idx] - lc * Polynomial::term(rat(1), Monomial::var(x, d));
        Outcome out = solve(s2, level);
        if (!out.collapses) return out;
        auto it = out.cert.eq_coeffs.find(idx);
        if (it == out.cert.eq_coeffs.end()) return out;
        Polynomial a = it->second;
        // a*(idx - lc x^d) = a*idx - (a x^d factor) * eqs[lc_idx]
        cert_add_eq(out.cert, sq.index,
                    a * Polynomial::term(-sq.factor, Monomial::var(x, d)));
        return out;
    }

    Outcome tail_neq_move(const Sys& s, std::size_t level, std::size_t idx) {
        const std::string& x = vars_[level - 1];
        Polynomial lc = leading_coeff(s.neqs[idx], x);
        SignQuery sq = decided_sign(s, lc);
        long d = s.neqs[idx].degree_in(x);
        Sys s2 = s;
        Polynomial tail = s.neqs[idx] - lc * Polynomial::term(rat(1), Monomial::var(x, d));
        s2.neqs[idx] = tail;
        Outcome out = solve(s2, level);
        if (!out.collapses) return out;
        auto it = out.cert.neq_exponents.find(idx);
        if (it == out.cert.neq_exponents.end()) return out;
        long e = it->second;
        out.cert.neq_exponents.erase(it);
        // tail^e = idx^e - lc x^d T: rest * tail^e + i = 0 becomes
        // rest*idx^e + i - rest * x^d T * lc = 0.
        Polynomial mrest = out.cert.monoid_expansion(s);
        Polynomial T = detail::power_diff_cofactor(tail, s.neqs[idx], e);
        out.cert.neq_exponents[idx] = e;
        cert_add_eq(out.cert, sq.index,
                    mrest * Polynomial::term(-sq.factor, Monomial::var(x, d)) * T);
        return out;
    }

    Outcome eliminate(const Sys& s, std::size_t level) {
        const std::string& x = vars_[level - 1];

        std::vector<std::size_t> live_eqs, live_neqs;
        for (std::size_t i = 0; i < s.eqs.size(); ++i)
            if (live_at(s.eqs[i], level)) live_eqs.push_back(i);
        for (std::size_t i = 0; i < s.neqs.size(); ++i)
            if (live_at(s.neqs[i], level) &&
                !(i < s.neq_resolved.size() && s.neq_resolved[i]))
                live_neqs.push_back(i);

        if (live_eqs.empty() && live_neqs.empty()) {
            Outcome out = solve(s, level - 1);
            if (!out.collapses)
                out.witness.constraints.push_back({x, TriangularConstraint::Free, {}, -1});
            return out;
        }

        if (live_eqs.size() >= 2) {
            std::size_t lo = live_eqs[0];
            for (std::size_t i : live_eqs)
                if (s.eqs[i].degree_in(x) < s.eqs[lo].degree_in(x)) lo = i;
            std::size_t hi = live_eqs[0] == lo ? live_eqs[1] : live_eqs[0];
            for (std::size_t i : live_eqs)
                if (i != lo && s.eqs[i].degree_in(x) >= s.eqs[hi].degree_in(x)) hi = i;

            Polynomial lc = leading_coeff(s.eqs[lo], x);
            SignQuery sq = decided_sign(s, lc);
            if (sq.zero) return tail_eq_move(s, level, lo);

            PseudoDivision div = pseudo_divide(s.eqs[hi], s.eqs[lo], x);
            Sys s2 = s;
            s2.eqs[hi] = div.remainder;
            Outcome out = solve(s2, level);
            if (!out.collapses) return out;
            auto it = out.cert.eq_coeffs.find(hi);
            if (it != out.cert.eq_coeffs.end()) {
                Polynomial a = it->second;
                out.cert.eq_coeffs.erase(it);
                // a*rem = a lc^pow * hi - a quot * lo
                cert_add_eq(out.cert, hi,
                            a * lc.pow(static_cast<unsigned long>(div.power)));
                cert_add_eq(out.cert, lo, a * div.quotient * Rational(-1));
            }
            return out;
        }

        long pe = -1;
        long lc_side = -1;
        if (live_eqs.size() == 1) {
            pe = static_cast<long>(live_eqs[0]);
            Polynomial lc = leading_coeff(s.eqs[live_eqs[0]], x);
            SignQuery sq = decided_sign(s, lc);
            if (sq.zero) return tail_eq_move(s, level, live_eqs[0]);
            if (!lc.is_constant()) lc_side = static_cast<long>(sq.index);
        }

        for (std::size_t ri : live_neqs) {
            Polynomial lc = leading_coeff(s.neqs[ri], x);
            SignQuery sq = decided_sign(s, lc);
            if (sq.zero) return tail_neq_move(s, level, ri);
        }

        if (pe >= 0 && !live_neqs.empty())
            return resolve_neq(s, level, static_cast<std::size_t>(pe), live_neqs[0]);

        Outcome out = solve(s, level - 1);
        if (out.collapses) return out;
        if (pe >= 0) {
            TriangularConstraint tc{x, TriangularConstraint::Equation,
                                    s.eqs[static_cast<std::size_t>(pe)], -1};
            if (lc_side >= 0) {
                tc.lc_condition = static_cast<long>(out.witness.side_conditions.size());
                out.witness.side_conditions.push_back(s.neqs[static_cast<std::size_t>(lc_side)]);
            }
            out.witness.constraints.push_back(tc);
        } else {
            Polynomial prod(1);
            for (std::size_t ri : live_neqs) prod = prod * s.neqs[ri];
            out.witness.constraints.push_back({x, TriangularConstraint::Disequation, prod, -1});
        }
        return out;
    }

    // Pseudo-remainder chain of the one equation p against a live
    // disequation r. Both leading coefficients are context-nonzero on
    // entry. Outcomes: subsumption, a derived equation (the quotient of
    // the first division), a direct collapse, or a case split on a
    // deeper chain element.
    Outcome resolve_neq(const Sys& s, std::size_t level, std::size_t pe, std::size_t ri) {
        const std::string& x = vars_[level - 1];
        const Polynomial& p = s.eqs[pe];
        const Polynomial& r = s.neqs[ri];

        bool eq_first = p.degree_in(x) >= r.degree_in(x);
        std::vector<Polynomial> chain = eq_first ? std::vector<Polynomial>{p, r}
                                                 : std::vector<Polynomial>{r, p};
        PseudoDivision first_div = pseudo_divide(chain[0], chain[1], x);
        chain.push_back(first_div.remainder);

        auto resolved = [&]() {
            Sys s2 = s;
            s2.neq_resolved.resize(s2.neqs.size(), false);
            s2.neq_resolved[ri] = true;
            return solve(s2, level);
        };

        while (true) {
            Polynomial g = chain.back();
            SignQuery sq = g.is_zero() ? SignQuery{true, true, 0, Rational(1)}
                                       : context_sign(s, g);
            bool xfree = g.degree_in(x) <= 0;
            if (xfree && !sq.known) {
                // x-free but undecided: split on it.
                throw NeedSplit{normalize_primitive(g)};
            }
            if (sq.known && !sq.zero) return resolved();
            if (sq.known && sq.zero) {
                if (chain.size() == 3) {
                    // gamma := first remainder vanishes in context.
                    Polynomial gamma = g;
                    Polynomial lc_div = leading_coeff(chain[1], x);
                    Polynomial lcp = lc_div.pow(static_cast<unsigned long>(first_div.power));
                    if (eq_first) {
                        // lc(r)^a p = quot r + gamma: roots of p with
                        // r != 0 satisfy quot = 0.
                        Sys s2 = s;
                        s2.eqs.push_back(first_div.quotient);
                        std::size_t qi = s2.eqs.size() - 1;
                        Outcome out = solve(s2, level);
                        if (!out.collapses) return out;
                        auto it = out.cert.eq_coeffs.find(qi);
                        if (it == out.cert.eq_coeffs.end()) {
                            out.cert.eq_coeffs.erase(qi);
                            return out;
                        }
                        Polynomial a = it->second;
                        out.cert.eq_coeffs.erase(it);
                        // Multiply the identity by r; quot*r = lc^a p - gamma.
                        for (auto& [i, coeff] : out.cert.eq_coeffs) coeff = coeff * r;
                        out.cert.neq_exponents[ri] += 1;
                        cert_add_eq(out.cert, pe, a * lcp);
                        if (!gamma.is_zero())
                            cert_add_eq(out.cert, sq.index, a * Polynomial(-sq.factor));
                        return out;
                    }
                    // lc(p)^a r = quot p + gamma == quot p in context:
                    // r would vanish wherever p does -- collapse.
                    Outcome out;
                    out.collapses = true;
                    out.cert.neq_exponents[ri] = 1;
                    if (lc_div.is_constant()) {
                        out.cert.scalar =
                            rat_pow(lc_div.constant_value(),
                                    static_cast<unsigned long>(first_div.power));
                    } else {
                        SignQuery lq = decided_sign(s, lc_div);
                        out.cert.neq_exponents[lq.index] += first_div.power;
                        out.cert.scalar =
                            rat_pow(lq.factor, static_cast<unsigned long>(first_div.power));
                    }
                    cert_add_eq(out.cert, pe, -first_div.quotient);
                    if (!gamma.is_zero())
                        cert_add_eq(out.cert, sq.index, Polynomial(-sq.factor));
                    cert_normalize_sign(out.cert);
                    return out;
                }
                // Deeper vanishing element: find the deepest undecided
                // x-ful element to split on; decided-nonzero resolves.
                for (std::size_t k = chain.size() - 2; k >= 2; --k) {
                    SignQuery q2 = context_sign(s, chain[k]);
                    if (!q2.known) throw NeedSplit{normalize_primitive(chain[k])};
                    if (!q2.zero) return resolved();
                }
                // All derived elements vanish: the first remainder did
                // too, so rerun with the shorter chain.
                chain.resize(3);
                continue;
            }
            // Undecided x-ful element: extend the chain. Normalize the
            // divisor head first.
            Polynomial& lo = chain.back();
            while (lo.degree_in(x) > 0) {
                Polynomial lc = leading_coeff(lo, x);
                SignQuery lq = decided_sign(s, lc);
                if (!lq.zero) break;
                lo = lo - lc * Polynomial::term(rat(1), Monomial::var(x, lo.degree_in(x)));
            }
            if (lo.degree_in(x) <= 0) continue;  // re-evaluate as x-free
            PseudoDivision div = pseudo_divide(chain[chain.size() - 2], lo, x);
            chain.push_back(div.remainder);
            if (chain.size() > 64) throw ResourceExceeded("acf: chain bound exceeded");
        }
    }
};

}  // namespace acf_detail

// --- public driver ---------------------------------------------------------

inline AcfOutcome decide_acf(const Presentation& p, AcfOptions opts = {}) {
    TheoryFamily fam = family_of(p.theory());
    if (fam != TheoryFamily::Field && fam != TheoryFamily::Ring)
        throw AcfError("decide_acf: presentation is not in the field family");

    acf_detail::Sys sys;
    for (auto& e : p.relations(Predicate::Eq0)) sys.eqs.push_back(e);
    for (auto& n : p.relations(Predicate::Neq0)) sys.neqs.push_back(n);
    sys.neq_resolved.assign(sys.neqs.size(), false);

    acf_detail::Solver solver(p.generators(), opts);
    acf_detail::Outcome out = solver.solve(sys, p.generators().size());

    AcfOutcome result;
    result.collapses = out.collapses;
    if (out.collapses) {
        CollapseCertificate cert;
        cert.theory = p.theory();
        FieldCollapse f;
        f.monoid.scalar = out.cert.scalar;
        for (auto& [i, e] : out.cert.neq_exponents)
            if (e > 0) f.monoid.factors.push_back({RelationRef{Predicate::Neq0, i}, e});
        for (auto& [i, c] : out.cert.eq_coeffs)
            f.ideal.combination.push_back({c, RelationRef{Predicate::Eq0, i}});
        if (fam == TheoryFamily::Ring) {
            // Nontrivial rings have no disequations: 1 - ideal form.
            RingCollapse rc;
            Rational inv = Rational(1) / f.monoid.scalar;
            for (auto& [c, ref] : f.ideal.combination)
                rc.ideal.combination.push_back({c * -inv, ref});
            cert.shape = std::move(rc);
        } else {
            cert.shape = std::move(f);
        }
        VerifyResult check = verify_collapse(p, cert);
        if (!check.valid)
            throw AcfError("decide_acf: internal certificate failed verification: " +
                           check.message + " residual " + to_string(check.residual));
        result.certificate = std::move(cert);
    } else {
        std::reverse(out.witness.constraints.begin(), out.witness.constraints.end());
        result.witness = std::move(out.witness);
    }
    return result;
}

struct NullstellensatzResult {
    bool member = false;  // q vanishes on the common zeros of eqs
    long exponent = 0;
    IdealPart coefficients;  // q^n == sum coeff_i * eq_i
    AcfWitness witness;      // common zero avoiding q otherwise
};

inline NullstellensatzResult nullstellensatz(const Polynomial& q,
                                             const std::vector<Polynomial>& eqs,
                                             AcfOptions opts = {}) {
    std::set<std::string> vars;
    for (auto& v : q.variables()) vars.insert(v);
    for (auto& e : eqs)
        for (auto& v : e.variables()) vars.insert(v);
    Presentation p(TheoryId::Acf, std::vector<std::string>(vars.begin(), vars.end()));
    for (auto& e : eqs) p.add_relation(Predicate::Eq0, e);
    p.add_relation(Predicate::Neq0, q);

    AcfOutcome out = decide_acf(p, opts);
    NullstellensatzResult res;
    if (!out.collapses) {
        res.witness = std::move(out.witness);
        return res;
    }
    auto& f = std::get<FieldCollapse>(out.certificate.shape);
    long n = f.monoid.exponent_of(RelationRef{Predicate::Neq0, 0});
    res.member = true;
    Polynomial mul(1);
    if (n == 0) {  // the equations collapse alone: use q^1 = q * (...)
        n = 1;
        mul = q;
    }
    res.exponent = n;
    // scalar q^n + sum c_i e_i == 0  =>  q^n = sum (-c_i/scalar) e_i.
    for (auto& [c, ref] : f.ideal.combination)
        res.coefficients.combination.push_back({c * mul * (Rational(-1) / f.monoid.scalar), ref});
    return res;
}

}  // namespace dynalg
