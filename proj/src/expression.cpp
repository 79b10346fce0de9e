#include "pseudolin/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace pseudolin {

namespace {

// Terms of the vocabulary: coeff, coeff*t^a, coeff*exp(a*t), coeff*cos(a*t),
// coeff*sin(a*t). An expression is a signed sum of terms.
struct Term {
    enum class Kind { Const, PowT, Exp, Cos, Sin } kind = Kind::Const;
    double coeff = 0.0;
    double arg = 0.0;

    double eval(double t) const {
        switch (kind) {
            case Kind::Const: return coeff;
            case Kind::PowT: return coeff * std::pow(t, arg);
            case Kind::Exp: return coeff * std::exp(arg * t);
            case Kind::Cos: return coeff * std::cos(arg * t);
            case Kind::Sin: return coeff * std::sin(arg * t);
        }
        return 0.0;
    }
};

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("expression \"" + text + "\": " + what + " at position " +
                          std::to_string(pos));
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    bool match(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    bool peek_number() {
        skip_ws();
        if (pos >= text.size()) return false;
        const char c = text[pos];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
    }

    double number() {
        skip_ws();
        const char* begin = text.c_str() + pos;
        char* end = nullptr;
        const double x = std::strtod(begin, &end);
        if (end == begin) fail("expected a number");
        pos += static_cast<std::size_t>(end - begin);
        return x;
    }

    double signed_number() {
        skip_ws();
        double sign = 1.0;
        if (match('-')) sign = -1.0;
        else match('+');
        return sign * number();
    }

    bool match_word(const char* w) {
        skip_ws();
        std::size_t len = 0;
        while (w[len]) ++len;
        if (text.compare(pos, len, w) != 0) return false;
        // must not be a prefix of a longer identifier
        const std::size_t after = pos + len;
        if (after < text.size() && std::isalpha(static_cast<unsigned char>(text[after])))
            return false;
        pos += len;
        return true;
    }

    Term factor() {
        skip_ws();
        if (match_word("t")) {
            Term out{Term::Kind::PowT, 1.0, 1.0};
            if (match('^')) out.arg = signed_number();
            return out;
        }
        Term::Kind kind;
        if (match_word("exp")) kind = Term::Kind::Exp;
        else if (match_word("cos")) kind = Term::Kind::Cos;
        else if (match_word("sin")) kind = Term::Kind::Sin;
        else fail("expected t, t^a, exp(a*t), cos(a*t), sin(a*t) or a number");
        if (!match('(')) fail("expected '('");
        double a = 1.0;
        if (!match_word("t")) {
            a = signed_number();
            if (match('*')) {
                if (!match_word("t")) fail("expected t");
            } else if (!match_word("t")) {
                fail("expected '*t' or 't'");
            }
        }
        if (!match(')')) fail("expected ')'");
        return Term{kind, 1.0, a};
    }

    Term term() {
        if (peek_number()) {
            const double c = number();
            if (match('*')) {
                Term f = factor();
                f.coeff *= c;
                return f;
            }
            return Term{Term::Kind::Const, c, 0.0};
        }
        return factor();
    }

    std::vector<Term> expression() {
        std::vector<Term> terms;
        double sign = 1.0;
        skip_ws();
        if (match('-')) sign = -1.0;
        else match('+');
        for (;;) {
            Term t = term();
            t.coeff *= sign;
            terms.push_back(t);
            skip_ws();
            if (match('+')) sign = 1.0;
            else if (match('-')) sign = -1.0;
            else break;
        }
        skip_ws();
        if (pos != text.size()) fail("unexpected trailing input");
        return terms;
    }
};

} // namespace

TimeFn parse_time_expression(const std::string& text) {
    Parser parser{text};
    const std::vector<Term> terms = parser.expression();
    return [terms](double t) {
        double sum = 0.0;
        for (const Term& term : terms) sum += term.eval(t);
        return sum;
    };
}

} // namespace pseudolin
