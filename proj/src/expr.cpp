#include "susydec/expr.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace susydec {

namespace {

class Parser {
  public:
    explicit Parser(const ExpressionSource& src) : src_(src) {}

    Polynomial run() {
        skip_ws();
        if (at_end()) fail(0, "empty expression");
        Polynomial p = expression();
        skip_ws();
        if (!at_end()) fail(pos_, "unexpected trailing input");
        return p;
    }

  private:
    const ExpressionSource& src_;
    std::size_t pos_ = 0;

    bool at_end() const { return pos_ >= src_.text.size(); }
    char peek() const { return at_end() ? '\0' : src_.text[pos_]; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    [[noreturn]] void fail(std::size_t at, const std::string& msg) const {
        throw ParseError(at, src_.origin + ":" + std::to_string(at) + ": " + msg);
    }
    [[noreturn]] void fail_nonpoly(std::size_t at, const std::string& msg) const {
        throw NonPolynomialError(at, src_.origin + ":" + std::to_string(at) + ": " + msg);
    }

    Polynomial expression() {
        Polynomial acc = term();
        for (;;) {
            skip_ws();
            const char c = peek();
            if (c == '+') {
                ++pos_;
                acc += term();
            } else if (c == '-') {
                ++pos_;
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    Polynomial term() {
        Polynomial acc = factor();
        for (;;) {
            skip_ws();
            const char c = peek();
            if (c == '*') {
                ++pos_;
                acc = acc * factor();
            } else if (c == '/') {
                const std::size_t slash = pos_;
                ++pos_;
                Polynomial d = factor();
                if (d.degree() > 0)
                    fail_nonpoly(slash, "division by an x-dependent factor");
                if (d.is_zero()) fail(slash, "division by zero");
                acc = (1.0 / d.coefficient(0)) * acc;
            } else {
                return acc;
            }
        }
    }

    Polynomial factor() {
        skip_ws();
        const std::size_t start = pos_;
        const char c = peek();
        if (c == '-') {
            ++pos_;
            return -factor();
        }
        if (c == '(') {
            ++pos_;
            Polynomial p = expression();
            skip_ws();
            if (peek() != ')') fail(pos_, "expected ')'");
            ++pos_;
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.text.size() &&
             std::isdigit(static_cast<unsigned char>(src_.text[pos_ + 1])))) {
            return Polynomial{number()};
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos_;
            while (end < src_.text.size() &&
                   std::isalpha(static_cast<unsigned char>(src_.text[end])))
                ++end;
            const std::string ident = src_.text.substr(pos_, end - pos_);
            if (ident != "x")
                fail_nonpoly(start, "unsupported function or symbol '" + ident + "'");
            pos_ = end;
            skip_ws();
            unsigned exp = 1;
            if (peek() == '^') {
                ++pos_;
                exp = unsigned_integer();
            }
            return Polynomial::monomial(1.0, exp);
        }
        fail(start, "expected number, 'x', '(' or '-'");
    }

    double number() {
        const std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (peek() == '.') {
            ++pos_;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        }
        if (peek() == 'e' || peek() == 'E') {
            std::size_t mark = pos_;
            ++pos_;
            if (peek() == '+' || peek() == '-') ++pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                pos_ = mark;  // exponent-less 'e' belongs to something else
            } else {
                while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
            }
        }
        const std::string tok = src_.text.substr(start, pos_ - start);
        char* endp = nullptr;
        const double v = std::strtod(tok.c_str(), &endp);
        if (endp != tok.c_str() + tok.size()) fail(start, "malformed number");
        return v;
    }

    unsigned unsigned_integer() {
        skip_ws();
        const std::size_t start = pos_;
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            fail(start, "expected unsigned integer exponent");
        unsigned long v = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + static_cast<unsigned long>(peek() - '0');
            if (v > 64) fail(start, "exponent too large");
            ++pos_;
        }
        return static_cast<unsigned>(v);
    }
};

std::string format_coeff(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Polynomial parse_superpotential(const ExpressionSource& src) {
    return Parser(src).run();
}

std::string format_polynomial(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (int k = p.degree(); k >= 0; --k) {
        const double c = p.coefficient(static_cast<unsigned>(k));
        if (c == 0.0) continue;
        if (out.empty()) {
            if (c < 0.0) out += "-";
        } else {
            out += c < 0.0 ? " - " : " + ";
        }
        out += format_coeff(std::abs(c));
        if (k == 1)
            out += "*x";
        else if (k > 1)
            out += "*x^" + std::to_string(k);
    }
    return out;
}

}  // namespace susydec
