#pragma once

#include <dynalg/monomial.hpp>
#include <dynalg/rational.hpp>

#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynalg {

// Degree of the zero polynomial. A sentinel well below any real degree,
// so comparisons in division loops need no special casing.
inline constexpr long kNegInfinity = std::numeric_limits<long>::min() / 2;

struct PolynomialError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sparse multivariate polynomial over Q in canonical form: no zero
// coefficients stored, terms ordered graded-lex descending. Immutable
// value semantics; two polynomials are equal iff their term maps are.
class Polynomial {
public:
    using Terms = std::map<Monomial, Rational, GradedLexGreater>;

    Polynomial() = default;

    Polynomial(const Rational& c) {
        if (!dynalg::is_zero(c)) terms_[Monomial()] = c;
    }
    Polynomial(long c) : Polynomial(Rational(c)) {}

    static Polynomial variable(const std::string& name) {
        Polynomial p;
        p.terms_[Monomial::var(name)] = 1;
        return p;
    }

    static Polynomial term(const Rational& c, const Monomial& m) {
        Polynomial p;
        if (!dynalg::is_zero(c)) p.terms_[m] = c;
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit());
    }

    // Constant term; the whole value when is_constant().
    Rational constant_value() const {
        auto it = terms_.find(Monomial());
        return it == terms_.end() ? Rational(0) : it->second;
    }

    long total_degree() const {
        if (terms_.empty()) return kNegInfinity;
        return terms_.begin()->first.degree();
    }

    long degree_in(const std::string& v) const {
        if (terms_.empty()) return kNegInfinity;
        long d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.degree_in(v));
        return d;
    }

    std::set<std::string> variables() const {
        std::set<std::string> vs;
        for (auto& [m, c] : terms_)
            for (auto& [v, e] : m.exponents()) vs.insert(v);
        return vs;
    }

    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    Polynomial operator+(const Polynomial& o) const {
        Polynomial r = *this;
        for (auto& [m, c] : o.terms_) {
            auto it = r.terms_.find(m);
            if (it == r.terms_.end()) {
                r.terms_[m] = c;
            } else {
                it->second += c;
                if (dynalg::is_zero(it->second)) r.terms_.erase(it);
            }
        }
        return r;
    }

    Polynomial operator-(const Polynomial& o) const { return *this + (-o); }

    Polynomial operator*(const Polynomial& o) const {
        Polynomial r;
        for (auto& [ma, ca] : terms_)
            for (auto& [mb, cb] : o.terms_) {
                Monomial m = ma * mb;
                auto it = r.terms_.find(m);
                if (it == r.terms_.end()) {
                    Rational c = ca * cb;
                    if (!dynalg::is_zero(c)) r.terms_[m] = c;
                } else {
                    it->second += ca * cb;
                    if (dynalg::is_zero(it->second)) r.terms_.erase(it);
                }
            }
        return r;
    }

    Polynomial operator*(const Rational& c) const {
        Polynomial r;
        if (dynalg::is_zero(c)) return r;
        r = *this;
        for (auto& [m, v] : r.terms_) v *= c;
        return r;
    }

    Polynomial pow(unsigned long e) const {
        Polynomial acc(1), b = *this;
        while (e) {
            if (e & 1) acc = acc * b;
            b = b * b;
            e >>= 1;
        }
        return acc;
    }

    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    // Deterministic order for use as a map key (golden outputs rely on it).
    bool operator<(const Polynomial& o) const {
        auto ia = terms_.begin(), ea = terms_.end();
        auto ib = o.terms_.begin(), eb = o.terms_.end();
        GradedLexGreater gt;
        for (; ia != ea && ib != eb; ++ia, ++ib) {
            if (gt(ia->first, ib->first)) return false;
            if (gt(ib->first, ia->first)) return true;
            if (ia->second != ib->second) return ia->second < ib->second;
        }
        return ib != eb;
    }

private:
    Terms terms_;
};

inline Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

// --- spec operations -------------------------------------------------

inline Polynomial add(const Polynomial& p, const Polynomial& q) { return p + q; }
inline Polynomial mul(const Polynomial& p, const Polynomial& q) { return p * q; }

inline Polynomial derivative(const Polynomial& p, const std::string& var) {
    Polynomial r;
    for (auto& [m, c] : p.terms()) {
        long e = m.degree_in(var);
        if (e == 0) continue;
        r = r + Polynomial::term(c * Rational(e), m.without(var, 1));
    }
    return r;
}

inline Rational eval(const Polynomial& p, const std::map<std::string, Rational>& point) {
    Rational acc(0);
    for (auto& [m, c] : p.terms()) {
        Rational t = c;
        for (auto& [v, e] : m.exponents()) {
            auto it = point.find(v);
            if (it == point.end()) throw PolynomialError("eval: unassigned variable " + v);
            t *= rat_pow(it->second, static_cast<unsigned long>(e));
        }
        acc += t;
    }
    return acc;
}

// Simultaneous substitution of every variable through the map; names
// missing from the map stay themselves.
inline Polynomial instantiate(const Polynomial& tmpl,
                              const std::map<std::string, Polynomial>& subst) {
    Polynomial acc;
    for (auto& [m, c] : tmpl.terms()) {
        Polynomial t(c);
        for (auto& [v, e] : m.exponents()) {
            auto it = subst.find(v);
            Polynomial base = it != subst.end() ? it->second : Polynomial::variable(v);
            t = t * base.pow(static_cast<unsigned long>(e));
        }
        acc = acc + t;
    }
    return acc;
}

inline Polynomial substitute(const Polynomial& p, const std::string& var, const Polynomial& s) {
    // Cache powers of s; degrees are small throughout.
    std::vector<Polynomial> powers{Polynomial(1)};
    Polynomial r;
    for (auto& [m, c] : p.terms()) {
        long e = m.degree_in(var);
        while (static_cast<long>(powers.size()) <= e) powers.push_back(powers.back() * s);
        r = r + Polynomial::term(c, m.without(var, e)) * powers[e];
    }
    return r;
}

// Coefficient of var^k, a polynomial in the remaining variables.
inline Polynomial coeff_of(const Polynomial& p, const std::string& var, long k) {
    Polynomial r;
    for (auto& [m, c] : p.terms())
        if (m.degree_in(var) == k) r = r + Polynomial::term(c, m.without(var, k));
    return r;
}

inline Polynomial leading_coeff(const Polynomial& p, const std::string& var) {
    long d = p.degree_in(var);
    if (d == kNegInfinity) return Polynomial();
    return coeff_of(p, var, d);
}

struct PseudoDivision {
    long power = 0;  // lc(q)^power * p == q * quotient + remainder
    Polynomial quotient;
    Polynomial remainder;
};

// Pseudo-division of p by q with respect to var. Multiplies by the
// divisor's leading coefficient only when a division step needs it, so
// monic divisors give plain division with power == 0.
inline PseudoDivision pseudo_divide(const Polynomial& p, const Polynomial& q,
                                    const std::string& var) {
    long dq = q.degree_in(var);
    if (dq <= 0) throw PolynomialError("pseudo_divide: divisor has no positive degree in " + var);
    Polynomial lc = leading_coeff(q, var);
    bool monic = lc == Polynomial(1);

    PseudoDivision out;
    out.remainder = p;
    while (!out.remainder.is_zero() && out.remainder.degree_in(var) >= dq) {
        long dr = out.remainder.degree_in(var);
        Polynomial top = coeff_of(out.remainder, var, dr);
        Polynomial factor;
        if (monic) {
            factor = top;
        } else {
            out.power += 1;
            out.remainder = out.remainder * lc;
            out.quotient = out.quotient * lc;
            factor = top;  // top of lc*remainder is lc*top; dividing by lc leaves top
        }
        Polynomial shift = Polynomial::term(Rational(1), Monomial::var(var, dr - dq));
        out.quotient = out.quotient + factor * shift;
        out.remainder = out.remainder - factor * shift * q;
    }
    return out;
}

// Exact division p / q when q | p; nullopt otherwise. Works in any
// number of variables by leading-term reduction.
inline std::optional<Polynomial> try_divide_exact(const Polynomial& p, const Polynomial& q) {
    if (q.is_zero()) return std::nullopt;
    Polynomial r = p, quot;
    const auto& [qm, qc] = *q.terms().begin();
    while (!r.is_zero()) {
        const auto& [rm, rc] = *r.terms().begin();
        // Need qm | rm.
        Monomial factor;
        bool ok = true;
        for (auto& [v, e] : qm.exponents()) {
            if (rm.degree_in(v) < e) {
                ok = false;
                break;
            }
        }
        if (ok) {
            factor = rm;
            for (auto& [v, e] : qm.exponents()) factor = factor.without(v, e);
        }
        if (!ok) return std::nullopt;
        Polynomial t = Polynomial::term(rc / qc, factor);
        quot = quot + t;
        r = r - t * q;
    }
    return quot;
}

// Content over Z: positive rational c with p/c integer-coefficient and
// primitive. Zero polynomial has content 0.
inline Rational integer_content(const Polynomial& p) {
    if (p.is_zero()) return Rational(0);
    mpz_class num_gcd(0), den_lcm(1);
    for (auto& [m, c] : p.terms()) {
        mpz_class n = abs(c.get_num());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    Rational content(num_gcd, den_lcm);
    content.canonicalize();
    return content;
}

// p scaled primitive over Z with positive leading coefficient (in the
// canonical term order).
inline Polynomial normalize_primitive(const Polynomial& p) {
    if (p.is_zero()) return p;
    Rational c = integer_content(p);
    if (is_negative(p.terms().begin()->second)) c = -c;
    return p * (Rational(1) / c);
}

struct BezoutGcd {
    Polynomial g;         // primitive over Z, positive leading coefficient
    Polynomial u, v;      // u*p + v*q == gamma * g
    Rational gamma;       // nonzero
};

namespace detail {
inline bool univariate_in(const Polynomial& p, const std::string& var) {
    for (auto& [m, c] : p.terms()) {
        for (auto& [v, e] : m.exponents())
            if (v != var) return false;
    }
    return true;
}
}  // namespace detail

// Extended Euclid in Q[var] with Bezout tracking. Inputs must be
// univariate in var; errors when both are zero.
inline BezoutGcd gcd_univariate(const Polynomial& p, const Polynomial& q,
                                const std::string& var) {
    if (p.is_zero() && q.is_zero()) throw PolynomialError("gcd undefined for two zero polynomials");
    if (!detail::univariate_in(p, var) || !detail::univariate_in(q, var))
        throw PolynomialError("gcd_univariate: input not univariate in " + var);

    // (r0, u0, v0) and (r1, u1, v1) with ri = ui*p + vi*q.
    Polynomial r0 = p, r1 = q;
    Polynomial u0(1), v0(0), u1(0), v1(1);
    while (!r1.is_zero()) {
        long d1 = r1.degree_in(var);
        if (d1 <= 0) {
            // Constant remainder: gcd is 1 (scaled).
            r0 = r1;
            u0 = u1;
            v0 = v1;
            r1 = Polynomial();
            break;
        }
        PseudoDivision div = pseudo_divide(r0, r1, var);
        Rational lcpow(1);
        Polynomial lc = leading_coeff(r1, var);
        // Univariate over Q: lc is a rational constant.
        lcpow = rat_pow(lc.constant_value(), static_cast<unsigned long>(div.power));
        // lcpow * r0 = q * r1 + rem  =>  rem = lcpow*r0 - quot*r1
        Polynomial nu = u0 * lcpow - div.quotient * u1;
        Polynomial nv = v0 * lcpow - div.quotient * v1;
        r0 = r1;
        u0 = u1;
        v0 = v1;
        r1 = div.remainder;
        u1 = nu;
        v1 = nv;
    }

    BezoutGcd out;
    out.g = normalize_primitive(r0);
    out.u = u0;
    out.v = v0;
    // u0*p + v0*q == r0 == gamma * g, normalized to gamma > 0
    Rational c = integer_content(r0);
    if (is_negative(r0.terms().begin()->second)) c = -c;
    if (is_negative(c)) {
        out.u = -out.u;
        out.v = -out.v;
        c = -c;
    }
    out.gamma = c;
    return out;
}

}  // namespace dynalg
