#include "reasoner/syntax.hpp"

#include "reasoner/errors.hpp"

#include <cctype>
#include <optional>

namespace reasoner {

namespace {

constexpr unsigned max_exponent = 64;

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Equals, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string text;
};

std::vector<Token> tokenize(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
                ++j;
            out.push_back({Tok::Number, i, std::string(s.substr(i, j - i))});
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            out.push_back({Tok::Ident, i, std::string(s.substr(i, j - i))});
            i = j;
            continue;
        }
        Tok k;
        switch (c) {
        case '+': k = Tok::Plus; break;
        case '-': k = Tok::Minus; break;
        case '*': k = Tok::Star; break;
        case '/': k = Tok::Slash; break;
        case '^': k = Tok::Caret; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '=': k = Tok::Equals; break;
        default:
            throw SyntaxError(i, "a number, x, sqrt, an operator or a parenthesis");
        }
        out.push_back({k, i, std::string(1, c)});
        ++i;
    }
    out.push_back({Tok::End, s.size(), ""});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

    EqSet eqset()
    {
        std::vector<Equation> eqs;
        eqs.push_back(equation());
        while (peek_ident("or")) {
            ++pos_;
            eqs.push_back(equation());
        }
        expect_end();
        return EqSet(std::move(eqs));
    }

    Equation single_equation()
    {
        Equation e = equation();
        expect_end();
        return e;
    }

    Expr single_expr()
    {
        Expr e = expr();
        expect_end();
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    bool at(Tok k) const { return peek().kind == k; }
    bool peek_ident(std::string_view name) const { return at(Tok::Ident) && peek().text == name; }

    void expect(Tok k, const char* what)
    {
        if (!at(k))
            throw SyntaxError(peek().offset, what);
        ++pos_;
    }

    void expect_end()
    {
        if (!at(Tok::End))
            throw SyntaxError(peek().offset, at(Tok::Equals) ? "\"or\" or end of input" : "an operator, \"=\", \"or\" or end of input");
    }

    Equation equation()
    {
        Expr lhs = expr();
        expect(Tok::Equals, "\"=\"");
        Expr rhs = expr();
        return {std::move(lhs), std::move(rhs)};
    }

    Expr expr()
    {
        std::vector<Expr> terms;
        terms.push_back(term());
        while (at(Tok::Plus) || at(Tok::Minus)) {
            const bool minus = at(Tok::Minus);
            ++pos_;
            Expr t = term();
            terms.push_back(minus ? Expr::neg(std::move(t)) : std::move(t));
        }
        return Expr::sum(std::move(terms));
    }

    bool starts_implicit_factor() const
    {
        return at(Tok::LParen) || peek_ident("x") || peek_ident("sqrt");
    }

    Expr term()
    {
        std::vector<Expr> factors;
        factors.push_back(factor());
        for (;;) {
            if (at(Tok::Star)) {
                ++pos_;
                factors.push_back(factor());
            } else if (starts_implicit_factor()) {
                factors.push_back(factor());
            } else {
                break;
            }
        }
        return Expr::product(std::move(factors));
    }

    Expr factor()
    {
        bool negated = false;
        if (at(Tok::Minus)) {
            negated = true;
            ++pos_;
        }
        Expr a = atom();
        if (at(Tok::Caret)) {
            ++pos_;
            a = Expr::power(std::move(a), exponent());
        }
        return negated ? Expr::neg(std::move(a)) : a;
    }

    unsigned exponent()
    {
        if (!at(Tok::Number))
            throw SyntaxError(peek().offset, "a positive integer exponent");
        const Token& t = peek();
        Integer n(t.text);
        if (n < 1 || n > max_exponent)
            throw SyntaxError(t.offset, "a positive integer exponent of at most 64");
        ++pos_;
        return n.convert_to<unsigned>();
    }

    Expr atom()
    {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Number: {
            ++pos_;
            Integer num(t.text);
            if (at(Tok::Slash)) {
                ++pos_;
                if (!at(Tok::Number))
                    throw SyntaxError(peek().offset, "a positive integer denominator");
                Integer den(peek().text);
                if (den == 0)
                    throw SyntaxError(peek().offset, "a positive integer denominator");
                ++pos_;
                return Expr::constant(Rational(num, den));
            }
            return Expr::constant(Rational(num));
        }
        case Tok::Ident:
            if (t.text == "x") {
                ++pos_;
                return Expr::var();
            }
            if (t.text == "sqrt") {
                ++pos_;
                expect(Tok::LParen, "\"(\" after sqrt");
                Expr inner = expr();
                expect(Tok::RParen, "\")\"");
                return Expr::sqrt(std::move(inner));
            }
            if (t.text == "or")
                throw SyntaxError(t.offset, "a number, x, sqrt or \"(\"");
            throw VariableError(t.offset, t.text);
        case Tok::LParen: {
            ++pos_;
            Expr inner = expr();
            expect(Tok::RParen, "\")\"");
            return inner;
        }
        default:
            throw SyntaxError(t.offset, "a number, x, sqrt or \"(\"");
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// Binding strength, used to decide where parentheses are needed.
enum Prec { PrecSum = 1, PrecProd = 2, PrecNeg = 3, PrecPow = 4, PrecAtom = 5 };

int precedence(const Expr& e)
{
    switch (e.kind()) {
    case ExprKind::Sum: return PrecSum;
    case ExprKind::Prod: return PrecProd;
    case ExprKind::Neg: return PrecNeg;
    case ExprKind::Pow: return PrecPow;
    case ExprKind::Const:
        if (e.value().sign() < 0)
            return PrecNeg;
        return e.value().den() == 1 ? PrecAtom : PrecPow;
    default: return PrecAtom;
    }
}

void emit(const Expr& e, bool top, std::string& out);

void emit_wrapped(const Expr& e, int min_prec, std::string& out)
{
    if (precedence(e) < min_prec) {
        out += '(';
        emit(e, false, out);
        out += ')';
    } else {
        emit(e, false, out);
    }
}

void emit(const Expr& e, bool top, std::string& out)
{
    switch (e.kind()) {
    case ExprKind::Const:
        out += e.value().to_string();
        return;
    case ExprKind::Var:
        out += 'x';
        return;
    case ExprKind::Sum: {
        const char* plus = top ? " + " : "+";
        const char* minus = top ? " - " : "-";
        bool first = true;
        for (const auto& c : e.children()) {
            if (first) {
                emit_wrapped(c, PrecProd, out);
                first = false;
            } else if (c.is(ExprKind::Neg)) {
                out += minus;
                emit_wrapped(c.operand(), PrecProd, out);
            } else {
                out += plus;
                emit_wrapped(c, PrecProd, out);
            }
        }
        return;
    }
    case ExprKind::Prod: {
        bool first = true;
        for (const auto& c : e.children()) {
            if (!first)
                out += '*';
            first = false;
            emit_wrapped(c, PrecNeg, out);
        }
        return;
    }
    case ExprKind::Pow:
        emit_wrapped(e.operand(), PrecAtom, out);
        out += '^';
        out += std::to_string(e.exponent());
        return;
    case ExprKind::Neg:
        out += '-';
        emit_wrapped(e.operand(), PrecPow, out);
        return;
    case ExprKind::Sqrt:
        out += "sqrt(";
        emit(e.operand(), false, out);
        out += ')';
        return;
    }
}

} // namespace

EqSet parse_eqset(std::string_view text) { return Parser(text).eqset(); }
Equation parse_equation(std::string_view text) { return Parser(text).single_equation(); }
Expr parse_expr(std::string_view text) { return Parser(text).single_expr(); }

std::string render(const Expr& e)
{
    std::string out;
    emit(e, true, out);
    return out;
}

std::string render(const Equation& e)
{
    return render(e.lhs) + " = " + render(e.rhs);
}

std::string render(const EqSet& s)
{
    std::string out;
    for (const auto& e : s.equations()) {
        if (!out.empty())
            out += " or ";
        out += render(e);
    }
    return out;
}

} // namespace reasoner
