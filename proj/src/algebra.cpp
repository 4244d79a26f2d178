#include "reasoner/algebra.hpp"

#include "reasoner/errors.hpp"
#include "reasoner/syntax.hpp"

#include <algorithm>
#include <map>

namespace reasoner {

namespace mp = boost::multiprecision;

Rational simplify_fraction(const Rational& r) { return r.reduced(); }

// ---------------------------------------------------------------------------
// Polynomial expansion

namespace {

constexpr std::size_t expansion_degree_cap = 64;

void trim(Poly& p)
{
    while (!p.empty() && p.back().is_zero())
        p.pop_back();
}

Poly poly_add(const Poly& a, const Poly& b)
{
    Poly out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        out[i] += b[i];
    trim(out);
    return out;
}

Poly poly_mul(const Poly& a, const Poly& b)
{
    if (a.empty() || b.empty())
        return {};
    if (a.size() + b.size() - 2 > expansion_degree_cap)
        throw DegreeTooHigh(a.size() + b.size() - 2);
    Poly out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero())
            continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    }
    trim(out);
    return out;
}

Poly poly_neg(Poly p)
{
    for (auto& c : p)
        c = -c;
    return p;
}

} // namespace

Poly expand(const Expr& e)
{
    switch (e.kind()) {
    case ExprKind::Const: {
        Poly p{ExactNumber(e.value())};
        trim(p);
        return p;
    }
    case ExprKind::Var:
        return {ExactNumber(0), ExactNumber(1)};
    case ExprKind::Sum: {
        Poly acc;
        for (const auto& c : e.children())
            acc = poly_add(acc, expand(c));
        return acc;
    }
    case ExprKind::Prod: {
        Poly acc{ExactNumber(1)};
        for (const auto& c : e.children())
            acc = poly_mul(acc, expand(c));
        return acc;
    }
    case ExprKind::Pow: {
        Poly base = expand(e.operand());
        Poly acc{ExactNumber(1)};
        for (unsigned i = 0; i < e.exponent(); ++i)
            acc = poly_mul(acc, base);
        return acc;
    }
    case ExprKind::Neg:
        return poly_neg(expand(e.operand()));
    case ExprKind::Sqrt: {
        if (!e.operand().is_var_free())
            throw NotPolynomial("square root of an expression containing x");
        Poly p{constant_value(e)};
        trim(p);
        return p;
    }
    }
    throw std::logic_error("unreachable");
}

Poly expand(const Equation& e)
{
    return poly_add(expand(e.lhs), poly_neg(expand(e.rhs)));
}

std::size_t degree(const Poly& p) { return p.empty() ? 0 : p.size() - 1; }

namespace {

// Signed surface terms of c * x^k.
void push_monomial(std::vector<SignedTerm>& terms, const ExactNumber& c, std::size_t k)
{
    if (c.is_zero())
        return;
    if (k == 0) {
        for (const auto& [d, q] : c.components()) {
            ExactNumber part = d == 1 ? ExactNumber(q) : ExactNumber::surd(q, d);
            Expr e = number_expr(part);
            terms.push_back(split_sign(e));
        }
        return;
    }
    Expr xk = Expr::power(Expr::var(), static_cast<unsigned>(k));
    if (c.is_rational()) {
        Rational r = c.rational_part();
        Rational mag = r.abs();
        Expr m = mag == Rational(1) ? xk : Expr::product({Expr::constant(mag), xk});
        terms.push_back({r.sign() < 0, m});
        return;
    }
    const bool negative = c.canonical_sign() < 0;
    ExactNumber mag = negative ? -c : c;
    terms.push_back({negative, Expr::product({number_expr(mag), xk})});
}

} // namespace

Expr poly_expr(const Poly& p)
{
    std::vector<SignedTerm> terms;
    for (std::size_t k = p.size(); k-- > 0;)
        push_monomial(terms, p[k], k);
    return build_sum(terms);
}

// ---------------------------------------------------------------------------
// Normal forms

namespace {

EqSet canonical_set(std::vector<Equation> eqs)
{
    std::vector<std::pair<std::string, Equation>> keyed;
    keyed.reserve(eqs.size());
    for (auto& e : eqs)
        keyed.emplace_back(render(e), std::move(e));
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    keyed.erase(std::unique(keyed.begin(), keyed.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; }),
                keyed.end());
    std::vector<Equation> out;
    out.reserve(keyed.size());
    for (auto& [k, e] : keyed)
        out.push_back(std::move(e));
    return EqSet(std::move(out));
}

Equation nf_full_equation(const Equation& eq)
{
    Poly p = expand(eq);
    if (p.empty())
        return {Expr::constant(Rational(0)), Expr::constant(Rational(0))};
    Integer lcm = 1;
    Integer gcd = 0;
    for (const auto& c : p)
        for (const auto& [d, q] : c.components())
            lcm = mp::lcm(lcm, q.den());
    for (const auto& c : p)
        for (const auto& [d, q] : c.components()) {
            Integer n = q.num() * (lcm / q.den());
            gcd = mp::gcd(gcd, n < 0 ? Integer(-n) : n);
        }
    ExactNumber scale(Rational(lcm, gcd));
    if (p.back().canonical_sign() < 0)
        scale = -scale;
    for (auto& c : p)
        c = c * scale;
    return {poly_expr(p), Expr::constant(Rational(0))};
}

// Structural normal form machinery. A normalized sum is a list of terms,
// each a coefficient times a product of non-constant factors.

struct Factor {
    Expr base;
    unsigned exponent;
    unsigned base_degree;
    std::string key; // rendering of base
};

struct Term {
    ExactNumber coeff;
    std::vector<Factor> factors; // sorted by key, distinct keys

    unsigned degree() const
    {
        unsigned d = 0;
        for (const auto& f : factors)
            d += f.base_degree * f.exponent;
        return d;
    }

    std::string key() const
    {
        std::string k;
        for (const auto& f : factors) {
            k += f.key;
            k += '^';
            k += std::to_string(f.exponent);
            k += ';';
        }
        return k;
    }
};

using TermList = std::vector<Term>;

Expr terms_expr(const TermList& terms);

Term constant_term(const ExactNumber& c) { return Term{c, {}}; }

Term multiply(const Term& a, const Term& b)
{
    Term out{a.coeff * b.coeff, a.factors};
    for (const auto& f : b.factors) {
        auto it = std::find_if(out.factors.begin(), out.factors.end(),
                               [&](const Factor& g) { return g.key == f.key; });
        if (it != out.factors.end())
            it->exponent += f.exponent;
        else
            out.factors.push_back(f);
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const Factor& x, const Factor& y) { return x.key < y.key; });
    return out;
}

void collect(TermList& terms)
{
    std::map<std::string, std::size_t> index;
    TermList merged;
    for (auto& t : terms) {
        std::string k = t.key();
        auto it = index.find(k);
        if (it == index.end()) {
            index.emplace(std::move(k), merged.size());
            merged.push_back(std::move(t));
        } else {
            merged[it->second].coeff += t.coeff;
        }
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff.is_zero(); });
    std::sort(merged.begin(), merged.end(), [](const Term& a, const Term& b) {
        const unsigned da = a.degree();
        const unsigned db = b.degree();
        if (da != db)
            return da > db;
        const std::string ka = a.key();
        const std::string kb = b.key();
        if (ka != kb)
            return ka < kb;
        return canonical_less(a.coeff, b.coeff);
    });
    terms = std::move(merged);
}

// A bracketed sum of two or more terms, raised to `exponent`, as a single
// term. The bracket is oriented so its first term is positive.
Term bracket(TermList inner, unsigned exponent)
{
    ExactNumber coeff(1);
    if (inner.front().coeff.canonical_sign() < 0) {
        for (auto& t : inner)
            t.coeff = -t.coeff;
        if (exponent % 2 == 1)
            coeff = -coeff;
    }
    unsigned d = 0;
    for (const auto& t : inner)
        d = std::max(d, t.degree());
    Expr base = terms_expr(inner);
    std::string key = "(" + render(base) + ")";
    return Term{coeff, {Factor{base, exponent, d, std::move(key)}}};
}

Term power(const Term& t, unsigned n)
{
    Term out = constant_term(ExactNumber(1));
    for (unsigned i = 0; i < n; ++i)
        out = multiply(out, t);
    return out;
}

TermList normalize(const Expr& e);

// The single term a variable-containing factor contributes to a product.
Term as_single_term(const Expr& e)
{
    TermList s = normalize(e);
    if (s.empty())
        return constant_term(ExactNumber(0));
    if (s.size() == 1)
        return s.front();
    return bracket(std::move(s), 1);
}

TermList normalize(const Expr& e)
{
    if (e.is_var_free()) {
        ExactNumber v = constant_value(e);
        if (v.is_zero())
            return {};
        return {constant_term(v)};
    }
    switch (e.kind()) {
    case ExprKind::Var: {
        Expr x = Expr::var();
        return {Term{ExactNumber(1), {Factor{x, 1, 1, "x"}}}};
    }
    case ExprKind::Neg: {
        TermList s = normalize(e.operand());
        for (auto& t : s)
            t.coeff = -t.coeff;
        return s;
    }
    case ExprKind::Sum: {
        TermList out;
        for (const auto& c : e.children()) {
            TermList s = normalize(c);
            out.insert(out.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
        }
        collect(out);
        return out;
    }
    case ExprKind::Prod: {
        Term acc = constant_term(ExactNumber(1));
        for (const auto& c : e.children()) {
            if (c.is_var_free())
                acc.coeff *= constant_value(c);
            else
                acc = multiply(acc, as_single_term(c));
        }
        if (acc.coeff.is_zero())
            return {};
        return {acc};
    }
    case ExprKind::Pow: {
        TermList s = normalize(e.operand());
        if (s.empty())
            return {};
        if (s.size() == 1)
            return {power(s.front(), e.exponent())};
        return {bracket(std::move(s), e.exponent())};
    }
    case ExprKind::Sqrt: {
        Expr base = Expr::sqrt(terms_expr(normalize(e.operand())));
        std::string key = render(base);
        return {Term{ExactNumber(1), {Factor{base, 1, 1, std::move(key)}}}};
    }
    case ExprKind::Const:
        break;
    }
    throw std::logic_error("unreachable");
}

Expr factor_expr(const Factor& f) { return Expr::power(f.base, f.exponent); }

Expr terms_expr(const TermList& terms)
{
    std::vector<SignedTerm> out;
    for (const auto& t : terms) {
        if (t.factors.empty()) {
            for (const auto& [d, q] : t.coeff.components()) {
                ExactNumber part = d == 1 ? ExactNumber(q) : ExactNumber::surd(q, d);
                out.push_back(split_sign(number_expr(part)));
            }
            continue;
        }
        std::vector<Expr> factors;
        bool negative = false;
        if (t.coeff.is_rational()) {
            Rational r = t.coeff.rational_part();
            negative = r.sign() < 0;
            if (r.abs() != Rational(1))
                factors.push_back(Expr::constant(r.abs()));
        } else {
            negative = t.coeff.canonical_sign() < 0;
            factors.push_back(number_expr(negative ? -t.coeff : t.coeff));
        }
        for (const auto& f : t.factors)
            factors.push_back(factor_expr(f));
        out.push_back({negative, Expr::product(std::move(factors))});
    }
    return build_sum(out);
}

} // namespace

Equation nf_struct(const Equation& e)
{
    TermList terms = normalize(Expr::sum({e.lhs, Expr::neg(e.rhs)}));
    return {terms_expr(terms), Expr::constant(Rational(0))};
}

EqSet nf_struct(const EqSet& s)
{
    std::vector<Equation> eqs;
    eqs.reserve(s.size());
    for (const auto& e : s.equations())
        eqs.push_back(nf_struct(e));
    return canonical_set(std::move(eqs));
}

EqSet nf_full(const EqSet& s)
{
    std::vector<Equation> eqs;
    eqs.reserve(s.size());
    for (const auto& e : s.equations())
        eqs.push_back(nf_full_equation(e));
    return canonical_set(std::move(eqs));
}

std::string relation_key(const EqSet& s)
{
    std::vector<std::string> parts;
    parts.reserve(s.size());
    for (const auto& e : s.equations())
        parts.push_back(render(nf_struct(e)) + (is_zero_derived(e) ? "|z" : "|n"));
    std::sort(parts.begin(), parts.end());
    std::string key = std::to_string(term_count(s));
    for (const auto& p : parts)
        key += ";" + p;
    return key;
}

// ---------------------------------------------------------------------------
// Roots

bool operator==(const RootSet& a, const RootSet& b)
{
    if (a.all_reals != b.all_reals || a.roots.size() != b.roots.size())
        return false;
    return std::all_of(a.roots.begin(), a.roots.end(), [&](const ExactNumber& r) {
        return std::find(b.roots.begin(), b.roots.end(), r) != b.roots.end();
    });
}

std::string RootSet::to_string() const
{
    if (all_reals)
        return "R";
    std::string out = "{";
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (i)
            out += ", ";
        out += roots[i].to_string();
    }
    return out + "}";
}

namespace {

void equation_roots(const Equation& eq, RootSet& out)
{
    Poly p = expand(eq);
    const std::size_t deg = degree(p);
    if (deg > 2)
        throw DegreeTooHigh(deg);
    if (p.empty()) {
        out.all_reals = true;
        return;
    }
    if (deg == 0)
        return;
    if (deg == 1) {
        out.roots.push_back(-p[0] * p[1].inverse());
        return;
    }
    if (!(p[0].is_rational() && p[1].is_rational() && p[2].is_rational()))
        throw NotPolynomial("quadratic with irrational coefficients is not supported");
    const Rational a = p[2].rational_part();
    const Rational b = p[1].rational_part();
    const Rational c = p[0].rational_part();
    const Rational disc = b * b - Rational(4) * a * c;
    if (disc.sign() < 0)
        return;
    const ExactNumber vertex(-b / (Rational(2) * a));
    if (disc.is_zero()) {
        out.roots.push_back(vertex);
        return;
    }
    const ExactNumber half_width = ExactNumber::sqrt_of(disc) * ExactNumber(Rational(1) / (Rational(2) * a));
    out.roots.push_back(vertex + half_width);
    out.roots.push_back(vertex - half_width);
}

} // namespace

RootSet root_set(const EqSet& s)
{
    RootSet out;
    for (const auto& e : s.equations())
        equation_roots(e, out);
    if (out.all_reals) {
        out.roots.clear();
        return out;
    }
    std::sort(out.roots.begin(), out.roots.end(), canonical_less);
    out.roots.erase(std::unique(out.roots.begin(), out.roots.end()), out.roots.end());
    return out;
}

bool equivalent(const EqSet& a, const EqSet& b)
{
    return root_set(a) == root_set(b);
}

} // namespace reasoner
