#pragma once

#include <dynalg/polyparse.hpp>
#include <dynalg/polynomial.hpp>
#include <dynalg/theory.hpp>

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace dynalg {

struct PresentationError : std::runtime_error {
    int line;
    PresentationError(const std::string& msg, int line_no = 0)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
};

// Reference to one relation of a presentation: (predicate, index into
// that predicate's list). The stable currency of certificates.
struct RelationRef {
    Predicate pred;
    std::size_t index;
    bool operator==(const RelationRef& o) const { return pred == o.pred && index == o.index; }
    bool operator<(const RelationRef& o) const {
        if (pred != o.pred) return pred < o.pred;
        return index < o.index;
    }
};

// Generators plus relation lists keyed by predicate, under a named
// theory. Relation lists are ordered; certificates cite (pred, index).
class Presentation {
public:
    Presentation() = default;
    Presentation(TheoryId theory, std::vector<std::string> generators)
        : theory_(theory), generators_(std::move(generators)) {}

    TheoryId theory() const { return theory_; }
    const std::vector<std::string>& generators() const { return generators_; }

    const std::vector<Polynomial>& relations(Predicate p) const {
        static const std::vector<Polynomial> empty;
        auto it = relations_.find(p);
        return it == relations_.end() ? empty : it->second;
    }

    const Polynomial& relation(const RelationRef& ref) const {
        const auto& list = relations(ref.pred);
        if (ref.index >= list.size())
            throw PresentationError("dangling relation reference " + to_string(ref.pred) + "[" +
                                    std::to_string(ref.index) + "]");
        return list[ref.index];
    }

    bool has_generator(const std::string& v) const {
        for (auto& g : generators_)
            if (g == v) return true;
        return false;
    }

    // Validates predicate legality and variable scope, then appends.
    RelationRef add_relation(Predicate p, const Polynomial& poly) {
        if (!predicate_allowed(theory_, p))
            throw PresentationError("predicate '" + to_string(p) + "' illegal for theory '" +
                                    to_string(theory_) + "'");
        for (const auto& v : poly.variables())
            if (!has_generator(v)) throw PresentationError("undeclared variable '" + v + "'");
        relations_[p].push_back(poly);
        return RelationRef{p, relations_[p].size() - 1};
    }

    void add_generator(const std::string& v) {
        if (has_generator(v)) throw PresentationError("duplicate generator '" + v + "'");
        generators_.push_back(v);
    }

    std::size_t relation_count() const {
        std::size_t n = 0;
        for (auto& [p, list] : relations_) n += list.size();
        return n;
    }

    bool operator==(const Presentation& o) const {
        return theory_ == o.theory_ && generators_ == o.generators_ && relations_ == o.relations_;
    }

private:
    TheoryId theory_ = TheoryId::Field;
    std::vector<std::string> generators_;
    std::map<Predicate, std::vector<Polynomial>> relations_;
};

// Affine form over Q: constant + sparse linear coefficients. The carrier
// of ordered-group relations.
struct AffineForm {
    Rational constant{0};
    std::map<std::string, Rational> coefficients;

    bool is_zero() const { return dynalg::is_zero(constant) && coefficients.empty(); }

    bool operator==(const AffineForm& o) const {
        return constant == o.constant && coefficients == o.coefficients;
    }

    AffineForm operator+(const AffineForm& o) const {
        AffineForm r = *this;
        r.constant += o.constant;
        for (auto& [v, c] : o.coefficients) {
            auto it = r.coefficients.find(v);
            if (it == r.coefficients.end()) {
                if (!dynalg::is_zero(c)) r.coefficients[v] = c;
            } else {
                it->second += c;
                if (dynalg::is_zero(it->second)) r.coefficients.erase(it);
            }
        }
        return r;
    }

    AffineForm operator*(const Rational& s) const {
        AffineForm r;
        if (dynalg::is_zero(s)) return r;
        r.constant = constant * s;
        for (auto& [v, c] : coefficients) r.coefficients[v] = c * s;
        return r;
    }

    AffineForm operator-(const AffineForm& o) const { return *this + o * Rational(-1); }

    Rational coefficient(const std::string& v) const {
        auto it = coefficients.find(v);
        return it == coefficients.end() ? Rational(0) : it->second;
    }

    Rational eval(const std::map<std::string, Rational>& point) const {
        Rational acc = constant;
        for (auto& [v, c] : coefficients) {
            auto it = point.find(v);
            if (it == point.end()) throw PolynomialError("eval: unassigned variable " + v);
            acc += c * it->second;
        }
        return acc;
    }

    Polynomial to_polynomial() const {
        Polynomial p(constant);
        for (auto& [v, c] : coefficients) p = p + Polynomial::variable(v) * c;
        return p;
    }
};

inline AffineForm to_affine(const Polynomial& p) {
    if (p.total_degree() > 1) throw PolynomialError("not affine: total degree exceeds 1");
    AffineForm a;
    for (auto& [m, c] : p.terms()) {
        if (m.is_unit())
            a.constant = c;
        else
            a.coefficients[m.exponents().begin()->first] = c;
    }
    return a;
}

// --- file format ------------------------------------------------------
//
//   theory <theory-id>
//   vars <ident> ...
//   <pred> <polynomial>       (one relation per line, '#' comments)

inline Presentation parse_presentation(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool saw_theory = false, saw_vars = false;
    TheoryId theory = TheoryId::Field;
    std::vector<std::string> vars;
    std::vector<std::pair<std::pair<Predicate, Polynomial>, int>> rels;

    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "theory") {
            if (saw_theory) throw PresentationError("duplicate 'theory' header", line_no);
            std::string id;
            if (!(ls >> id)) throw PresentationError("missing theory id", line_no);
            auto t = theory_from_string(id);
            if (!t) throw PresentationError("unknown theory '" + id + "'", line_no);
            theory = *t;
            saw_theory = true;
            continue;
        }
        if (head == "vars") {
            if (!saw_theory) throw PresentationError("'vars' before 'theory'", line_no);
            if (saw_vars) throw PresentationError("duplicate 'vars' header", line_no);
            std::string v;
            while (ls >> v) {
                if (!std::isalpha(static_cast<unsigned char>(v[0])))
                    throw PresentationError("bad variable name '" + v + "'", line_no);
                vars.push_back(v);
            }
            saw_vars = true;
            continue;
        }
        auto pred = predicate_from_string(head);
        if (!pred) throw PresentationError("unknown keyword '" + head + "'", line_no);
        if (!saw_theory || !saw_vars)
            throw PresentationError("relation before 'theory'/'vars' headers", line_no);
        std::string rest;
        std::getline(ls, rest);
        try {
            rels.push_back({{*pred, parse_polynomial(rest)}, line_no});
        } catch (const ParseError& e) {
            throw PresentationError(std::string("polynomial syntax: ") + e.what() + " at column " +
                                        std::to_string(e.position),
                                    line_no);
        }
    }
    if (!saw_theory) throw PresentationError("missing 'theory' header");
    if (!saw_vars) throw PresentationError("missing 'vars' header");

    Presentation p(theory, {});
    for (auto& v : vars) p.add_generator(v);
    for (auto& [rel, ln] : rels) {
        try {
            p.add_relation(rel.first, rel.second);
        } catch (const PresentationError& e) {
            throw PresentationError(e.what(), ln);
        }
    }
    return p;
}

inline std::string print_presentation(const Presentation& p) {
    std::string out = "theory " + to_string(p.theory()) + "\n";
    out += "vars";
    for (auto& v : p.generators()) out += " " + v;
    out += "\n";
    for (Predicate pred : all_predicates()) {
        for (auto& poly : p.relations(pred))
            out += to_string(pred) + " " + to_string(poly) + "\n";
    }
    return out;
}

}  // namespace dynalg
