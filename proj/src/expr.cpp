#include "reasoner/expr.hpp"

#include "reasoner/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace reasoner {

struct Expr::Node {
    ExprKind kind;
    Rational value;
    std::vector<Expr> children;
    unsigned exponent = 0;
    bool var_free = true;
    unsigned degree = 0;
};

namespace {

const Expr& zero_expr()
{
    static const Expr z = Expr::constant(Rational(0));
    return z;
}

} // namespace

Expr Expr::constant(const Rational& value)
{
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Const;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::var()
{
    static const Expr x = [] {
        auto n = std::make_shared<Node>();
        n->kind = ExprKind::Var;
        n->var_free = false;
        n->degree = 1;
        return Expr(std::move(n));
    }();
    return x;
}

Expr Expr::sum(std::vector<Expr> children)
{
    std::vector<Expr> flat;
    flat.reserve(children.size());
    for (auto& c : children) {
        if (c.is(ExprKind::Sum))
            flat.insert(flat.end(), c.children().begin(), c.children().end());
        else
            flat.push_back(std::move(c));
    }
    if (flat.empty())
        return zero_expr();
    if (flat.size() == 1)
        return flat.front();
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Sum;
    for (const auto& c : flat) {
        n->var_free = n->var_free && c.is_var_free();
        n->degree = std::max(n->degree, c.degree_bound());
    }
    n->children = std::move(flat);
    return Expr(std::move(n));
}

Expr Expr::product(std::vector<Expr> children)
{
    std::vector<Expr> flat;
    flat.reserve(children.size());
    for (auto& c : children) {
        if (c.is(ExprKind::Prod))
            flat.insert(flat.end(), c.children().begin(), c.children().end());
        else
            flat.push_back(std::move(c));
    }
    if (flat.empty())
        return constant(Rational(1));
    if (flat.size() == 1)
        return flat.front();
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Prod;
    for (const auto& c : flat) {
        n->var_free = n->var_free && c.is_var_free();
        n->degree += c.degree_bound();
    }
    n->children = std::move(flat);
    return Expr(std::move(n));
}

Expr Expr::power(Expr base, unsigned exponent)
{
    if (exponent == 0)
        throw std::invalid_argument("power with exponent 0");
    if (exponent == 1)
        return base;
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Pow;
    n->exponent = exponent;
    n->var_free = base.is_var_free();
    n->degree = base.degree_bound() * exponent;
    n->children.push_back(std::move(base));
    return Expr(std::move(n));
}

Expr Expr::neg(Expr operand)
{
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Neg;
    n->var_free = operand.is_var_free();
    n->degree = operand.degree_bound();
    n->children.push_back(std::move(operand));
    return Expr(std::move(n));
}

Expr Expr::sqrt(Expr radicand)
{
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Sqrt;
    n->var_free = radicand.is_var_free();
    // sqrt of a non-constant is outside the polynomial fragment; count it
    // as degree 1 so structural bounds stay conservative.
    n->degree = radicand.is_var_free() ? 0 : 1;
    n->children.push_back(std::move(radicand));
    return Expr(std::move(n));
}

ExprKind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
std::span<const Expr> Expr::children() const { return node_->children; }
const Expr& Expr::operand() const { return node_->children.front(); }
unsigned Expr::exponent() const { return node_->exponent; }
bool Expr::is_var_free() const { return node_->var_free; }
unsigned Expr::degree_bound() const { return node_->degree; }

bool operator==(const Expr& a, const Expr& b)
{
    if (a.node_ == b.node_)
        return true;
    if (a.kind() != b.kind())
        return false;
    switch (a.kind()) {
    case ExprKind::Const:
        return a.value().identical(b.value());
    case ExprKind::Var:
        return true;
    case ExprKind::Pow:
        if (a.exponent() != b.exponent())
            return false;
        break;
    default:
        break;
    }
    auto ca = a.children();
    auto cb = b.children();
    return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

EqSet::EqSet(std::vector<Equation> equations) : equations_(std::move(equations))
{
    if (equations_.empty())
        throw std::invalid_argument("an equation set needs at least one equation");
}

std::vector<Expr> summands(const Expr& e)
{
    if (e.is(ExprKind::Sum))
        return {e.children().begin(), e.children().end()};
    return {e};
}

ExactNumber constant_value(const Expr& e)
{
    switch (e.kind()) {
    case ExprKind::Const:
        return ExactNumber(e.value());
    case ExprKind::Var:
        throw std::invalid_argument("constant_value of an expression containing x");
    case ExprKind::Sum: {
        ExactNumber acc;
        for (const auto& c : e.children())
            acc += constant_value(c);
        return acc;
    }
    case ExprKind::Prod: {
        ExactNumber acc(1);
        for (const auto& c : e.children())
            acc *= constant_value(c);
        return acc;
    }
    case ExprKind::Pow: {
        ExactNumber base = constant_value(e.operand());
        ExactNumber acc(1);
        for (unsigned i = 0; i < e.exponent(); ++i)
            acc *= base;
        return acc;
    }
    case ExprKind::Neg:
        return -constant_value(e.operand());
    case ExprKind::Sqrt: {
        ExactNumber r = constant_value(e.operand());
        if (!r.is_rational())
            throw NotPolynomial("square root of an irrational number");
        return ExactNumber::sqrt_of(r.rational_part());
    }
    }
    throw std::logic_error("unreachable");
}

bool is_zero_constant(const Expr& e)
{
    if (!e.is_var_free())
        return false;
    if (e.is(ExprKind::Const))
        return e.value().is_zero();
    try {
        return constant_value(e).is_zero();
    } catch (const Error&) {
        return false;
    }
}

std::size_t term_count(const Equation& e)
{
    std::size_t n = 0;
    for (const Expr* side : {&e.lhs, &e.rhs}) {
        for (const auto& t : summands(*side)) {
            if (!is_zero_constant(t))
                ++n;
        }
    }
    return n;
}

std::size_t term_count(const EqSet& s)
{
    std::size_t n = 0;
    for (const auto& e : s.equations())
        n += term_count(e);
    return n;
}

bool is_zero_derived(const Equation& e)
{
    return is_zero_constant(e.lhs) || is_zero_constant(e.rhs);
}

Rational eval_at(const Expr& e, const Rational& v)
{
    switch (e.kind()) {
    case ExprKind::Const:
        return e.value().reduced();
    case ExprKind::Var:
        return v.reduced();
    case ExprKind::Sum: {
        Rational acc(0);
        for (const auto& c : e.children())
            acc += eval_at(c, v);
        return acc;
    }
    case ExprKind::Prod: {
        Rational acc(1);
        for (const auto& c : e.children())
            acc *= eval_at(c, v);
        return acc;
    }
    case ExprKind::Pow:
        return eval_at(e.operand(), v).pow(e.exponent());
    case ExprKind::Neg:
        return -eval_at(e.operand(), v);
    case ExprKind::Sqrt: {
        ExactNumber r = ExactNumber::sqrt_of(eval_at(e.operand(), v));
        if (!r.is_rational())
            throw NotPolynomial("eval_at of an irrational square root");
        return r.rational_part();
    }
    }
    throw std::logic_error("unreachable");
}

SignedTerm split_sign(const Expr& summand)
{
    if (summand.is(ExprKind::Neg))
        return {true, summand.operand()};
    if (summand.is(ExprKind::Prod) && summand.children().front().is(ExprKind::Neg)) {
        std::vector<Expr> factors(summand.children().begin(), summand.children().end());
        factors.front() = factors.front().operand();
        return {true, Expr::product(std::move(factors))};
    }
    if (summand.is(ExprKind::Const) && summand.value().sign() < 0)
        return {true, Expr::constant(-summand.value())};
    return {false, summand};
}

Expr build_sum(const std::vector<SignedTerm>& terms)
{
    std::vector<Expr> children;
    children.reserve(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        if (!t.negative) {
            children.push_back(t.magnitude);
        } else if (i == 0 && t.magnitude.is(ExprKind::Prod)) {
            std::vector<Expr> factors(t.magnitude.children().begin(), t.magnitude.children().end());
            factors.front() = Expr::neg(factors.front());
            children.push_back(Expr::product(std::move(factors)));
        } else {
            children.push_back(Expr::neg(t.magnitude));
        }
    }
    return Expr::sum(std::move(children));
}

Expr number_expr(const Rational& v)
{
    Rational r = v.reduced();
    if (r.sign() < 0)
        return Expr::neg(Expr::constant(-r));
    return Expr::constant(r);
}

Expr number_expr(const ExactNumber& v)
{
    if (v.is_zero())
        return Expr::constant(Rational(0));
    std::vector<SignedTerm> terms;
    for (const auto& [d, q] : v.components()) {
        Rational mag = q.abs();
        Expr m = Expr::constant(mag);
        if (d != 1) {
            Expr root = Expr::sqrt(Expr::constant(Rational(d)));
            m = mag == Rational(1) ? root : Expr::product({Expr::constant(mag), root});
        }
        terms.push_back({q.sign() < 0, m});
    }
    return build_sum(terms);
}

bool is_solved_form(const EqSet& s)
{
    return std::all_of(s.equations().begin(), s.equations().end(), [](const Equation& e) {
        return e.lhs.is(ExprKind::Var) && e.rhs.is_var_free();
    });
}

} // namespace reasoner
