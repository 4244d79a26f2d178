#include "reasoner/rules.hpp"

#include "reasoner/algebra.hpp"
#include "reasoner/errors.hpp"
#include "reasoner/syntax.hpp"

#include <algorithm>
#include <map>

namespace reasoner {

const std::vector<Rule>& rule_catalog()
{
    static const std::vector<Rule> catalog = {
        {RuleId::SqrtBothSides, "SQRT_BOTH_SIDES",
         "A^2 = c with constant c >= 0 becomes A = sqrt(c) or A = -sqrt(c)", false},
        {RuleId::MoveTerm, "MOVE_TERM",
         "move one summand to the other side, flipping its sign", false},
        {RuleId::CollectTerms, "COLLECT_TERMS", "combine like terms on one side", false},
        {RuleId::NegateBothSides, "NEGATE_BOTH_SIDES", "-A = c becomes A = -c", false},
        {RuleId::DivByConst, "DIV_BY_CONST", "k*A = c with constant k becomes A = c/k", false},
        {RuleId::Expand, "EXPAND", "distribute a product or expand a power", false},
        {RuleId::FactorCommon, "FACTOR_COMMON", "a*x^2 + b*x = 0 becomes x*(a*x + b) = 0", false},
        {RuleId::SplitZeroProduct, "SPLIT_ZERO_PRODUCT", "A*B = 0 becomes A = 0 or B = 0", false},
        {RuleId::QuadraticFormula, "QUADRATIC_FORMULA",
         "a*x^2 + b*x + c = 0 becomes x = (-b + sqrt(b^2-4ac))/(2a) or x = (-b - sqrt(b^2-4ac))/(2a)", false},
        {RuleId::Tidy, "TIDY", "simplify fractions, fold constants, evaluate perfect-square roots", true},
    };
    return catalog;
}

const Rule& rule_info(RuleId id)
{
    return rule_catalog()[static_cast<std::size_t>(id)];
}

std::string_view rule_name(RuleId id) { return rule_info(id).name; }

std::optional<RuleId> rule_from_name(std::string_view name)
{
    for (const auto& r : rule_catalog())
        if (r.name == name)
            return r.id;
    return std::nullopt;
}

std::string Site::to_string() const
{
    std::string out = equation ? "eq" + std::to_string(*equation) : "all";
    out += side == Side::Lhs ? ":lhs:" : ":rhs:";
    out += std::to_string(index);
    return out;
}

namespace {

struct LocalSite {
    Side side;
    std::size_t index;

    friend auto operator<=>(const LocalSite&, const LocalSite&) = default;
};

const Expr& side_of(const Equation& e, Side s) { return s == Side::Lhs ? e.lhs : e.rhs; }
const Expr& other_of(const Equation& e, Side s) { return s == Side::Lhs ? e.rhs : e.lhs; }

Equation oriented(Side s, Expr on_side, Expr on_other)
{
    if (s == Side::Lhs)
        return {std::move(on_side), std::move(on_other)};
    return {std::move(on_other), std::move(on_side)};
}

std::optional<ExactNumber> try_value(const Expr& e)
{
    if (!e.is_var_free())
        return std::nullopt;
    try {
        return constant_value(e);
    } catch (const Error&) {
        return std::nullopt;
    }
}

std::vector<SignedTerm> signed_summands(const Expr& e)
{
    std::vector<SignedTerm> out;
    for (const auto& s : summands(e))
        out.push_back(split_sign(s));
    return out;
}

/// Surface term for c * m (m a non-constant magnitude).
SignedTerm scaled_term(const ExactNumber& c, const Expr& m)
{
    if (c.is_rational()) {
        Rational r = c.rational_part();
        Rational mag = r.abs();
        return {r.sign() < 0, mag == Rational(1) ? m : Expr::product({Expr::constant(mag), m})};
    }
    const bool negative = c.canonical_sign() < 0;
    return {negative, Expr::product({number_expr(negative ? -c : c), m})};
}

/// c * x^k read off a monomial summand, if it is one with rational c.
struct Monomial {
    Rational coeff;
    unsigned degree;
};

std::optional<Monomial> as_monomial(const Expr& e)
{
    if (e.is_var_free()) {
        auto v = try_value(e);
        if (!v || !v->is_rational())
            return std::nullopt;
        return Monomial{v->rational_part(), 0};
    }
    switch (e.kind()) {
    case ExprKind::Var:
        return Monomial{Rational(1), 1};
    case ExprKind::Pow:
        if (e.operand().is(ExprKind::Var))
            return Monomial{Rational(1), e.exponent()};
        return std::nullopt;
    case ExprKind::Neg: {
        auto m = as_monomial(e.operand());
        if (m)
            m->coeff = -m->coeff;
        return m;
    }
    case ExprKind::Prod: {
        Rational coeff(1);
        std::optional<unsigned> deg;
        for (const auto& c : e.children()) {
            auto m = as_monomial(c);
            if (!m)
                return std::nullopt;
            coeff = coeff * m->coeff;
            if (m->degree > 0) {
                if (deg)
                    return std::nullopt;
                deg = m->degree;
            }
        }
        return Monomial{coeff, deg.value_or(0)};
    }
    default:
        return std::nullopt;
    }
}

// --- SQRT_BOTH_SIDES --------------------------------------------------------

std::vector<LocalSite> sqrt_sites(const Equation& eq)
{
    std::vector<LocalSite> out;
    for (Side s : {Side::Lhs, Side::Rhs}) {
        const Expr& a = side_of(eq, s);
        if (!a.is(ExprKind::Pow) || a.exponent() != 2 || a.operand().is_var_free())
            continue;
        auto c = try_value(other_of(eq, s));
        if (c && c->is_rational() && c->rational_part().sign() >= 0)
            out.push_back({s, 0});
    }
    return out;
}

std::vector<Equation> sqrt_apply(const Equation& eq, LocalSite site)
{
    const Expr& base = side_of(eq, site.side).operand();
    const Rational c = constant_value(other_of(eq, site.side)).rational_part();
    if (c.sign() < 0)
        throw NegativeRadicand();
    if (c.is_zero())
        return {oriented(site.side, base, Expr::constant(Rational(0)))};
    ExactNumber root = ExactNumber::sqrt_of(c);
    if (root.is_rational()) {
        return {oriented(site.side, base, number_expr(root)),
                oriented(site.side, base, number_expr(-root))};
    }
    Expr r = Expr::sqrt(number_expr(c));
    return {oriented(site.side, base, r), oriented(site.side, base, Expr::neg(r))};
}

// --- MOVE_TERM --------------------------------------------------------------

std::vector<LocalSite> move_sites(const Equation& eq)
{
    std::vector<LocalSite> out;
    for (Side s : {Side::Lhs, Side::Rhs}) {
        auto parts = summands(side_of(eq, s));
        for (std::size_t i = 0; i < parts.size(); ++i)
            if (!is_zero_constant(parts[i]))
                out.push_back({s, i});
    }
    return out;
}

/// Moves a solving strategy makes: constants leave a linear side whose
/// partner is constant, or the right-hand side moves over when x appears on
/// it or the left-hand side is nonlinear.
bool directed_move(const Equation& eq, LocalSite site)
{
    const Expr& a = side_of(eq, site.side);
    const Expr& other = other_of(eq, site.side);
    const auto parts = summands(a);
    if (!a.is_var_free() && other.is_var_free() && a.degree_bound() <= 1 && parts.size() >= 2 &&
        parts[site.index].is_var_free())
        return true;
    return site.side == Side::Rhs && !is_zero_constant(eq.rhs) &&
           (!eq.rhs.is_var_free() || eq.lhs.degree_bound() >= 2);
}

std::vector<Equation> move_apply(const Equation& eq, LocalSite site)
{
    auto from = signed_summands(side_of(eq, site.side));
    SignedTerm moved = from.at(site.index);
    from.erase(from.begin() + static_cast<std::ptrdiff_t>(site.index));
    moved.negative = !moved.negative;
    const Expr& other = other_of(eq, site.side);
    std::vector<SignedTerm> to;
    if (!is_zero_constant(other))
        to = signed_summands(other);
    to.push_back(moved);
    return {oriented(site.side, build_sum(from), build_sum(to))};
}

// --- COLLECT_TERMS ----------------------------------------------------------

struct LikeTerm {
    ExactNumber coeff;
    Expr var_part;
    std::string key;
};

std::optional<LikeTerm> like_term(const Expr& e)
{
    if (e.is_var_free())
        return std::nullopt;
    if (e.is(ExprKind::Neg)) {
        auto t = like_term(e.operand());
        if (t)
            t->coeff = -t->coeff;
        return t;
    }
    if (e.is(ExprKind::Prod)) {
        ExactNumber coeff(1);
        std::vector<Expr> vars;
        std::vector<std::string> keys;
        for (const auto& c : e.children()) {
            if (c.is_var_free()) {
                auto v = try_value(c);
                if (!v)
                    return std::nullopt;
                coeff *= *v;
            } else {
                vars.push_back(c);
                keys.push_back(render(c));
            }
        }
        std::sort(keys.begin(), keys.end());
        std::string key;
        for (const auto& k : keys)
            key += k + "*";
        return LikeTerm{coeff, Expr::product(std::move(vars)), key};
    }
    return LikeTerm{ExactNumber(1), e, render(e) + "*"};
}

bool has_like_terms(const Expr& side)
{
    if (!side.is(ExprKind::Sum))
        return false;
    std::map<std::string, int> seen;
    for (const auto& s : side.children()) {
        auto t = like_term(s);
        if (t && ++seen[t->key] > 1)
            return true;
    }
    return false;
}

std::vector<LocalSite> collect_sites(const Equation& eq)
{
    std::vector<LocalSite> out;
    for (Side s : {Side::Lhs, Side::Rhs})
        if (has_like_terms(side_of(eq, s)))
            out.push_back({s, 0});
    return out;
}

std::vector<Equation> collect_apply(const Equation& eq, LocalSite site)
{
    const Expr& side = side_of(eq, site.side);
    std::vector<std::optional<LikeTerm>> parts;
    std::map<std::string, ExactNumber> totals;
    std::map<std::string, int> counts;
    for (const auto& s : side.children()) {
        parts.push_back(like_term(s));
        if (parts.back()) {
            totals[parts.back()->key] += parts.back()->coeff;
            ++counts[parts.back()->key];
        }
    }
    std::vector<SignedTerm> out;
    std::map<std::string, bool> emitted;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& p = parts[i];
        if (!p || counts[p->key] < 2) {
            out.push_back(split_sign(side.children()[i]));
            continue;
        }
        if (emitted[p->key])
            continue;
        emitted[p->key] = true;
        const ExactNumber& total = totals[p->key];
        if (!total.is_zero())
            out.push_back(scaled_term(total, p->var_part));
    }
    return {oriented(site.side, build_sum(out), other_of(eq, site.side))};
}

// --- NEGATE_BOTH_SIDES ------------------------------------------------------

std::vector<LocalSite> negate_sites(const Equation& eq)
{
    std::vector<LocalSite> out;
    for (Side s : {Side::Lhs, Side::Rhs}) {
        const Expr& a = side_of(eq, s);
        if (a.is(ExprKind::Neg) && !a.operand().is_var_free() && try_value(other_of(eq, s)))
            out.push_back({s, 0});
    }
    return out;
}

std::vector<Equation> negate_apply(const Equation& eq, LocalSite site)
{
    const Expr& a = side_of(eq, site.side);
    ExactNumber c = constant_value(other_of(eq, site.side));
    return {oriented(site.side, a.operand(), number_expr(-c))};
}

// --- DIV_BY_CONST -----------------------------------------------------------

std::optional<Rational> constant_factor(const Expr& side, std::vector<Expr>* var_factors = nullptr)
{
    if (!side.is(ExprKind::Prod))
        return std::nullopt;
    ExactNumber k(1);
    std::size_t constants = 0;
    std::vector<Expr> vars;
    for (const auto& c : side.children()) {
        if (c.is_var_free()) {
            auto v = try_value(c);
            if (!v)
                return std::nullopt;
            k *= *v;
            ++constants;
        } else {
            vars.push_back(c);
        }
    }
    if (constants == 0 || vars.empty() || !k.is_rational())
        return std::nullopt;
    Rational r = k.rational_part();
    if (r.is_zero() || r == Rational(1))
        return std::nullopt;
    if (var_factors)
        *var_factors = std::move(vars);
    return r;
}

std::vector<LocalSite> div_sites(const Equation& eq)
{
    std::vector<LocalSite> out;
    for (Side s : {Side::Lhs, Side::Rhs})
        if (constant_factor(side_of(eq, s)) && try_value(other_of(eq, s)))
            out.push_back({s, 0});
    return out;
}

std::vector<Equation> div_apply(const Equation& eq, LocalSite site)
{
    std::vector<Expr> vars;
    Rational k = *constant_factor(side_of(eq, site.side), &vars);
    ExactNumber c = constant_value(other_of(eq, site.side));
    return {oriented(site.side, Expr::product(std::move(vars)), number_expr(c * ExactNumber(Rational(1) / k)))};
}

// --- EXPAND -----------------------------------------------------------------

bool expandable(const Expr& e)
{
    if (e.is_var_free())
        return false;
    bool shape = false;
    switch (e.kind()) {
    case ExprKind::Pow:
        shape = !e.operand().is(ExprKind::Var);
        break;
    case ExprKind::Prod:
        shape = std::any_of(e.children().begin(), e.children().end(), [](const Expr& c) {
            return c.is(ExprKind::Sum) || (c.is(ExprKind::Pow) && !c.operand().is(ExprKind::Var) && !c.is_var_free());
        });
        break;
    case ExprKind::Neg:
        shape = e.operand().is(ExprKind::Sum);
        break;
    default:
        break;
    }
    if (!shape)
        return false;
    try {
        (void)expand(e);
        return true;
    } catch (const Error&) {
        return false;
    }
}

void count_expandable(const Expr& e, std::size_t& n)
{
    if (expandable(e))
        ++n;
    for (const auto& c : e.children())
        count_expandable(c, n);
}

// Replaces the pre-order `target`-th expandable node by its expansion.
Expr replace_expandable(const Expr& e, std::size_t target, std::size_t& seen)
{
    if (expandable(e)) {
        if (seen++ == target)
            return poly_expr(expand(e));
    }
    if (e.children().empty())
        return e;
    std::vector<Expr> kids;
    bool changed = false;
    for (const auto& c : e.children()) {
        kids.push_back(replace_expandable(c, target, seen));
        changed = changed || !(kids.back() == c);
    }
    if (!changed)
        return e;
    switch (e.kind()) {
    case ExprKind::Sum: {
        std::vector<SignedTerm> terms;
        for (const auto& k : kids)
            for (const auto& s : summands(k))
                terms.push_back(split_sign(s));
        return build_sum(terms);
    }
    case ExprKind::Prod: return Expr::product(std::move(kids));
    case ExprKind::Pow: return Expr::power(kids.front(), e.exponent());
    case ExprKind::Neg: return Expr::neg(kids.front());
    case ExprKind::Sqrt: return Expr::sqrt(kids.front());
    default: return e;
    }
}

std::vector<LocalSite> expand_sites(const Equation& eq)
{
    std::vector<LocalSite> out;
    for (Side s : {Side::Lhs, Side::Rhs}) {
        std::size_t n = 0;
        count_expandable(side_of(eq, s), n);
        for (std::size_t i = 0; i < n; ++i)
            out.push_back({s, i});
    }
    return out;
}

std::vector<Equation> expand_apply(const Equation& eq, LocalSite site)
{
    std::size_t seen = 0;
    Expr replaced = replace_expandable(side_of(eq, site.side), site.index, seen);
    if (replaced.is(ExprKind::Sum))
        replaced = build_sum(signed_summands(replaced));
    return {oriented(site.side, replaced, other_of(eq, site.side))};
}

// --- FACTOR_COMMON ----------------------------------------------------------

std::optional<std::pair<Rational, Rational>> factor_shape(const Expr& side)
{
    if (!side.is(ExprKind::Sum) || side.children().size() != 2)
        return std::nullopt;
    auto m0 = as_monomial(side.children()[0]);
    auto m1 = as_monomial(side.children()[1]);
    if (!m0 || !m1 || m0->coeff.is_zero() || m1->coeff.is_zero())
        return std::nullopt;
    if (m0->degree == 2 && m1->degree == 1)
        return std::pair{m0->coeff, m1->coeff};
    if (m0->degree == 1 && m1->degree == 2)
        return std::pair{m1->coeff, m0->coeff};
    return std::nullopt;
}

std::vector<LocalSite> factor_sites(const Equation& eq)
{
    std::vector<LocalSite> out;
    for (Side s : {Side::Lhs, Side::Rhs})
        if (is_zero_constant(other_of(eq, s)) && factor_shape(side_of(eq, s)))
            out.push_back({s, 0});
    return out;
}

std::vector<Equation> factor_apply(const Equation& eq, LocalSite site)
{
    auto [a, b] = *factor_shape(side_of(eq, site.side));
    Expr inner = build_sum({scaled_term(ExactNumber(a), Expr::var()),
                            {b.sign() < 0, Expr::constant(b.abs())}});
    return {oriented(site.side, Expr::product({Expr::var(), inner}), other_of(eq, site.side))};
}

// --- SPLIT_ZERO_PRODUCT -----------------------------------------------------

std::vector<LocalSite> split_sites(const Equation& eq)
{
    std::vector<LocalSite> out;
    for (Side s : {Side::Lhs, Side::Rhs}) {
        const Expr& a = side_of(eq, s);
        if (!a.is(ExprKind::Prod) || !is_zero_constant(other_of(eq, s)))
            continue;
        std::size_t vars = 0;
        bool zero_factor = false;
        for (const auto& c : a.children()) {
            if (c.is_var_free())
                zero_factor = zero_factor || is_zero_constant(c) || !try_value(c);
            else
                ++vars;
        }
        if (vars >= 2 && !zero_factor)
            out.push_back({s, 0});
    }
    return out;
}

std::vector<Equation> split_apply(const Equation& eq, LocalSite site)
{
    std::vector<Equation> out;
    for (const auto& c : side_of(eq, site.side).children()) {
        if (c.is_var_free())
            continue;
        const Expr& f = c.is(ExprKind::Pow) ? c.operand() : c;
        out.push_back(oriented(site.side, f, Expr::constant(Rational(0))));
    }
    return out;
}

// --- QUADRATIC_FORMULA ------------------------------------------------------

struct QuadraticCoefficients {
    Rational a, b, c;
};

std::optional<QuadraticCoefficients> quadratic_shape(const Expr& side)
{
    Rational coeff[3];
    bool present[3] = {false, false, false};
    for (const auto& s : summands(side)) {
        auto m = as_monomial(s);
        if (!m || m->degree > 2 || present[m->degree])
            return std::nullopt;
        present[m->degree] = true;
        coeff[m->degree] = m->coeff;
    }
    if (!present[2] || coeff[2].is_zero())
        return std::nullopt;
    QuadraticCoefficients q{coeff[2], coeff[1], coeff[0]};
    if ((q.b * q.b - Rational(4) * q.a * q.c).sign() < 0)
        return std::nullopt;
    return q;
}

std::vector<LocalSite> quadratic_sites(const Equation& eq)
{
    std::vector<LocalSite> out;
    for (Side s : {Side::Lhs, Side::Rhs})
        if (is_zero_constant(other_of(eq, s)) && quadratic_shape(side_of(eq, s)))
            out.push_back({s, 0});
    return out;
}

std::vector<Equation> quadratic_apply(const Equation& eq, LocalSite site)
{
    auto [a, b, c] = *quadratic_shape(side_of(eq, site.side));
    const Rational disc = b * b - Rational(4) * a * c;
    const Rational vertex = -b / (Rational(2) * a);
    if (disc.is_zero())
        return {{Expr::var(), number_expr(vertex)}};
    const Rational scale = Rational(1) / (Rational(2) * a).abs();
    Expr root = Expr::sqrt(Expr::constant(disc));
    Expr width = scale == Rational(1) ? root : Expr::product({Expr::constant(scale), root});
    std::vector<SignedTerm> plus;
    if (!vertex.is_zero())
        plus.push_back(split_sign(number_expr(vertex)));
    std::vector<SignedTerm> minus = plus;
    plus.push_back({false, width});
    minus.push_back({true, width});
    return {{Expr::var(), build_sum(plus)}, {Expr::var(), build_sum(minus)}};
}

// --- dispatch ---------------------------------------------------------------

std::vector<LocalSite> local_sites(RuleId id, const Equation& eq, bool directed)
{
    if (id == RuleId::MoveTerm && directed) {
        auto all = move_sites(eq);
        std::erase_if(all, [&](LocalSite l) { return !directed_move(eq, l); });
        return all;
    }
    if ((id == RuleId::NegateBothSides || id == RuleId::DivByConst) && directed) {
        auto all = id == RuleId::NegateBothSides ? negate_sites(eq) : div_sites(eq);
        std::erase_if(all, [&](LocalSite l) { return other_of(eq, l.side).is(ExprKind::Sum); });
        return all;
    }
    switch (id) {
    case RuleId::SqrtBothSides: return sqrt_sites(eq);
    case RuleId::MoveTerm: return move_sites(eq);
    case RuleId::CollectTerms: return collect_sites(eq);
    case RuleId::NegateBothSides: return negate_sites(eq);
    case RuleId::DivByConst: return div_sites(eq);
    case RuleId::Expand: return expand_sites(eq);
    case RuleId::FactorCommon: return factor_sites(eq);
    case RuleId::SplitZeroProduct: return split_sites(eq);
    case RuleId::QuadraticFormula: return quadratic_sites(eq);
    case RuleId::Tidy: break;
    }
    return {};
}

std::vector<Equation> local_apply(RuleId id, const Equation& eq, LocalSite site)
{
    switch (id) {
    case RuleId::SqrtBothSides: return sqrt_apply(eq, site);
    case RuleId::MoveTerm: return move_apply(eq, site);
    case RuleId::CollectTerms: return collect_apply(eq, site);
    case RuleId::NegateBothSides: return negate_apply(eq, site);
    case RuleId::DivByConst: return div_apply(eq, site);
    case RuleId::Expand: return expand_apply(eq, site);
    case RuleId::FactorCommon: return factor_apply(eq, site);
    case RuleId::SplitZeroProduct: return split_apply(eq, site);
    case RuleId::QuadraticFormula: return quadratic_apply(eq, site);
    case RuleId::Tidy: break;
    }
    throw std::logic_error("unreachable");
}

Equation tidy_equation(const Equation& e) { return {tidy(e.lhs), tidy(e.rhs)}; }

} // namespace

// --- TIDY -------------------------------------------------------------------

Expr tidy(const Expr& e)
{
    if (e.is_var_free()) {
        auto v = try_value(e);
        return v ? number_expr(*v) : e;
    }
    switch (e.kind()) {
    case ExprKind::Var:
        return e;
    case ExprKind::Neg: {
        Expr a = tidy(e.operand());
        if (a.is(ExprKind::Neg))
            return a.operand();
        return a == e.operand() ? e : Expr::neg(a);
    }
    case ExprKind::Pow: {
        Expr b = tidy(e.operand());
        return b == e.operand() ? e : Expr::power(b, e.exponent());
    }
    case ExprKind::Sqrt: {
        Expr r = tidy(e.operand());
        return r == e.operand() ? e : Expr::sqrt(r);
    }
    case ExprKind::Prod: {
        std::vector<Expr> kids;
        for (const auto& c : e.children())
            kids.push_back(tidy(c));
        Expr flat = Expr::product(kids);
        std::vector<Expr> vars;
        ExactNumber k(1);
        std::size_t constants = 0;
        std::optional<Expr> lone_constant;
        for (const auto& c : flat.children()) {
            if (c.is_var_free()) {
                auto v = try_value(c);
                if (!v)
                    return flat;
                k *= *v;
                ++constants;
                lone_constant = c;
            } else {
                vars.push_back(c);
            }
        }
        if (k.is_zero())
            return Expr::constant(Rational(0));
        if (constants == 0)
            return flat;
        if (constants == 1 && !(k == ExactNumber(1)) && *lone_constant == number_expr(k))
            return flat;
        if (k == ExactNumber(1))
            return Expr::product(std::move(vars));
        if (k == ExactNumber(-1)) {
            vars.front() = vars.front().is(ExprKind::Neg) ? vars.front().operand() : Expr::neg(vars.front());
            return Expr::product(std::move(vars));
        }
        vars.insert(vars.begin(), number_expr(k));
        return Expr::product(std::move(vars));
    }
    case ExprKind::Sum: {
        std::vector<Expr> kids;
        for (const auto& c : e.children())
            kids.push_back(tidy(c));
        Expr flat = Expr::sum(kids);
        if (!flat.is(ExprKind::Sum))
            return flat;
        ExactNumber total;
        std::optional<std::size_t> group_at;
        std::vector<SignedTerm> out;
        for (const auto& c : flat.children()) {
            auto v = c.is_var_free() ? try_value(c) : std::nullopt;
            if (!v) {
                out.push_back(split_sign(c));
                continue;
            }
            if (!group_at)
                group_at = out.size();
            total += *v;
        }
        if (group_at && !total.is_zero()) {
            std::vector<SignedTerm> group;
            for (const auto& s : summands(number_expr(total)))
                group.push_back(split_sign(s));
            out.insert(out.begin() + static_cast<std::ptrdiff_t>(*group_at), group.begin(), group.end());
        }
        return build_sum(out);
    }
    case ExprKind::Const:
        break;
    }
    return e;
}

// --- public surface ---------------------------------------------------------

namespace {

std::vector<Site> sites(RuleId id, const EqSet& s, bool directed)
{
    if (id == RuleId::Tidy) {
        for (const auto& e : s.equations())
            if (!(tidy_equation(e) == e))
                return {Site{std::nullopt, Side::Lhs, 0}};
        return {};
    }
    std::vector<std::vector<LocalSite>> per_eq;
    per_eq.reserve(s.size());
    for (const auto& e : s.equations())
        per_eq.push_back(local_sites(id, e, directed));

    std::vector<Site> out;
    if (s.size() > 1) {
        for (const auto& l : per_eq.front()) {
            const bool everywhere = std::all_of(per_eq.begin() + 1, per_eq.end(), [&](const auto& v) {
                return std::find(v.begin(), v.end(), l) != v.end();
            });
            if (everywhere)
                out.push_back(Site{std::nullopt, l.side, l.index});
        }
    }
    for (std::size_t i = 0; i < per_eq.size(); ++i)
        for (const auto& l : per_eq[i])
            out.push_back(Site{i, l.side, l.index});
    return out;
}

} // namespace

std::vector<Site> applicable_sites(RuleId id, const EqSet& s) { return sites(id, s, false); }

std::vector<Site> directed_sites(RuleId id, const EqSet& s) { return sites(id, s, true); }

EqSet apply_rule(RuleId id, const Site& site, const EqSet& s)
{
    auto sites = applicable_sites(id, s);
    if (std::find(sites.begin(), sites.end(), site) == sites.end())
        throw InvalidSite(std::string(rule_name(id)) + " does not apply at " + site.to_string() + " of " + render(s));

    std::vector<Equation> out;
    if (id == RuleId::Tidy) {
        for (const auto& e : s.equations())
            out.push_back(tidy_equation(e));
        return EqSet(std::move(out));
    }
    const LocalSite local{site.side, site.index};
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (site.uniform() || *site.equation == i) {
            auto produced = local_apply(id, s[i], local);
            out.insert(out.end(), produced.begin(), produced.end());
        } else {
            out.push_back(s[i]);
        }
    }
    return EqSet(std::move(out));
}

} // namespace reasoner
