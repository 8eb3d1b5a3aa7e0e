#pragma once

#include <dynalg/polynomial.hpp>

#include <cctype>
#include <string>

namespace dynalg {

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg), position(pos) {}
};

// Recursive-descent parser for the polynomial grammar: integers,
// rationals a/b, identifiers, + - * ^ and parentheses. '*' is required
// between factors; '^' takes a nonnegative integer literal.
class PolyParser {
public:
    explicit PolyParser(const std::string& text) : text_(text) {}

    Polynomial parse() {
        Polynomial p = expression();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return p;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Polynomial expression() {
        bool neg = false;
        skip_ws();
        if (eat('+')) {
        } else if (eat('-')) {
            neg = true;
        }
        Polynomial acc = termprod();
        if (neg) acc = -acc;
        while (true) {
            if (eat('+'))
                acc = acc + termprod();
            else if (eat('-'))
                acc = acc - termprod();
            else
                break;
        }
        return acc;
    }

    Polynomial termprod() {
        Polynomial acc = factor();
        while (eat('*')) acc = acc * factor();
        return acc;
    }

    Polynomial factor() {
        Polynomial base = atom();
        if (eat('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == start) fail("exponent must be a nonnegative integer literal");
            unsigned long e = std::stoul(text_.substr(start, pos_ - start));
            return base.pow(e);
        }
        return base;
    }

    Polynomial atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial p = expression();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    Polynomial number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string num = text_.substr(start, pos_ - start);
        // Rational literal a/b: only when the '/' is directly followed by digits.
        std::size_t save = pos_;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '/') {
            std::size_t slash = pos_++;
            skip_ws();
            std::size_t dstart = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == dstart) {
                pos_ = slash;
                fail("expected denominator digits after '/'");
            }
            std::string den = text_.substr(dstart, pos_ - dstart);
            auto r = parse_rational(num + "/" + den);
            if (!r) fail("zero denominator");
            return Polynomial(*r);
        }
        pos_ = save;
        return Polynomial(*parse_rational(num));
    }

    Polynomial identifier() {
        std::size_t start = pos_;
        ++pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return Polynomial::variable(text_.substr(start, pos_ - start));
    }
};

inline Polynomial parse_polynomial(const std::string& text) { return PolyParser(text).parse(); }

// Canonical text: graded-lex descending terms, minus signs folded into
// coefficients, explicit '*', '^' only for exponents >= 2.
inline std::string to_string(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto& [m, c] : p.terms()) {
        Rational a = c;
        if (first) {
            if (is_negative(a)) {
                out += "-";
                a = -a;
            }
        } else {
            out += is_negative(a) ? " - " : " + ";
            if (is_negative(a)) a = -a;
        }
        first = false;
        bool coeff_one = (a == 1);
        if (!coeff_one || m.is_unit()) out += a.get_str();
        bool need_star = !coeff_one && !m.is_unit();
        bool first_var = true;
        for (auto& [v, e] : m.exponents()) {
            if (need_star || !first_var) out += "*";
            need_star = true;
            first_var = false;
            out += v;
            if (e >= 2) out += "^" + std::to_string(e);
        }
    }
    return out;
}

}  // namespace dynalg
