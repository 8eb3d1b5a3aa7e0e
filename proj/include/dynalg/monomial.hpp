#pragma once

#include <map>
#include <string>

namespace dynalg {

// Power product of named variables. No zero exponents are stored; the
// empty map is the monomial 1.
class Monomial {
public:
    using Map = std::map<std::string, long>;

    Monomial() = default;

    static Monomial var(const std::string& name, long exp = 1) {
        Monomial m;
        if (exp != 0) m.exps_[name] = exp;
        return m;
    }

    const Map& exponents() const { return exps_; }
    bool is_unit() const { return exps_.empty(); }

    long degree() const {
        long d = 0;
        for (auto& [v, e] : exps_) d += e;
        return d;
    }

    long degree_in(const std::string& v) const {
        auto it = exps_.find(v);
        return it == exps_.end() ? 0 : it->second;
    }

    Monomial operator*(const Monomial& o) const {
        Monomial r = *this;
        for (auto& [v, e] : o.exps_) {
            long ne = r.degree_in(v) + e;
            if (ne == 0)
                r.exps_.erase(v);
            else
                r.exps_[v] = ne;
        }
        return r;
    }

    // Removes var^k from the monomial; caller guarantees k <= deg.
    Monomial without(const std::string& v, long k) const {
        Monomial r = *this;
        long ne = r.degree_in(v) - k;
        if (ne == 0)
            r.exps_.erase(v);
        else
            r.exps_[v] = ne;
        return r;
    }

    bool operator==(const Monomial& o) const { return exps_ == o.exps_; }
    bool operator!=(const Monomial& o) const { return !(*this == o); }

private:
    Map exps_;
};

// Graded lexicographic order: total degree first, then lexicographic
// with alphabetically earlier variables ranking higher. Gives the
// deterministic term order used for canonical printing.
struct GradedLexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const {
        long da = a.degree(), db = b.degree();
        if (da != db) return da > db;
        auto ia = a.exponents().begin(), ea = a.exponents().end();
        auto ib = b.exponents().begin(), eb = b.exponents().end();
        while (ia != ea && ib != eb) {
            if (ia->first != ib->first) return ia->first < ib->first;
            if (ia->second != ib->second) return ia->second > ib->second;
            ++ia;
            ++ib;
        }
        return ib == eb && ia != ea;
    }
};

}  // namespace dynalg
