#include "doctest.h"

#include "reasoner/algebra.hpp"
#include "reasoner/errors.hpp"
#include "reasoner/rules.hpp"
#include "reasoner/syntax.hpp"

using namespace reasoner;

namespace {

EqSet eq(const char* text) { return parse_eqset(text); }

std::string applied(RuleId id, const char* text, std::size_t which = 0)
{
    EqSet s = eq(text);
    auto sites = applicable_sites(id, s);
    REQUIRE(which < sites.size());
    return render(apply_rule(id, sites[which], s));
}

} // namespace

TEST_CASE("catalog")
{
    const auto& cat = rule_catalog();
    CHECK(cat.size() == 10);
    for (const auto& r : cat) {
        CHECK(rule_from_name(r.name) == r.id);
        CHECK(rule_info(r.id).name == r.name);
        CHECK_FALSE(r.description.empty());
        CHECK(r.minor == (r.id == RuleId::Tidy));
    }
    CHECK(rule_name(RuleId::SqrtBothSides) == "SQRT_BOTH_SIDES");
    CHECK_FALSE(rule_from_name("NOPE").has_value());
}

TEST_CASE("SQRT_BOTH_SIDES")
{
    CHECK(applicable_sites(RuleId::SqrtBothSides, eq("(-x+1)^2 = 9")).size() == 1);
    CHECK(applicable_sites(RuleId::SqrtBothSides, eq("x = 3")).empty());
    CHECK(applicable_sites(RuleId::SqrtBothSides, eq("(x+1)^2 = -4")).empty());
    CHECK(applied(RuleId::SqrtBothSides, "(-x+1)^2 = 9") == "-x + 1 = 3 or -x + 1 = -3");
    CHECK(applied(RuleId::SqrtBothSides, "x^2 = 2") == "x = sqrt(2) or x = -sqrt(2)");
    CHECK(applied(RuleId::SqrtBothSides, "x^2 = 8") == "x = sqrt(8) or x = -sqrt(8)");
    CHECK(applied(RuleId::SqrtBothSides, "9 = (x-2)^2") == "3 = x - 2 or -3 = x - 2");
}

TEST_CASE("MOVE_TERM")
{
    EqSet s = eq("(-x+1)^2 - 9 = 0");
    auto sites = applicable_sites(RuleId::MoveTerm, s);
    REQUIRE(sites.size() == 2);
    CHECK(sites[0].side == Side::Lhs);
    CHECK(sites[0].index == 0);
    CHECK(sites[1].side == Side::Lhs);
    CHECK(sites[1].index == 1);
    CHECK(render(apply_rule(RuleId::MoveTerm, sites[1], s)) == "(-x+1)^2 = 9");

    // The constant 1 in both equations at once.
    EqSet both = eq("-x+1 = 3 or -x+1 = -3");
    auto bs = applicable_sites(RuleId::MoveTerm, both);
    REQUIRE_FALSE(bs.empty());
    CHECK(bs[0].uniform());
    const Site one{std::nullopt, Side::Lhs, 1};
    EqSet moved = apply_rule(RuleId::MoveTerm, one, both);
    CHECK(render(moved) == "-x = 3 - 1 or -x = -3 - 1");
    CHECK(render(apply_rule(RuleId::Tidy, applicable_sites(RuleId::Tidy, moved).at(0), moved)) ==
          "-x = 2 or -x = -4");

    CHECK(applied(RuleId::MoveTerm, "x^2 + 2*x = 8", 2) == "x^2 + 2*x - 8 = 0");
    CHECK(applicable_sites(RuleId::MoveTerm, eq("x = 0")).size() == 1);
}

TEST_CASE("directed sites are a subset")
{
    for (const char* text : {"-x+1 = 3 or -x+1 = -3", "x^2 + 2*x = 8", "-8*x + 1 = 7*x", "-x = 3 - 1"})
        for (const auto& r : rule_catalog()) {
            EqSet s = eq(text);
            auto all = applicable_sites(r.id, s);
            for (const auto& site : directed_sites(r.id, s))
                CHECK(std::find(all.begin(), all.end(), site) != all.end());
        }
    CHECK(directed_sites(RuleId::NegateBothSides, eq("-x = 3 - 1")).empty());
    CHECK_FALSE(applicable_sites(RuleId::NegateBothSides, eq("-x = 3 - 1")).empty());
}

TEST_CASE("NEGATE_BOTH_SIDES and DIV_BY_CONST")
{
    CHECK(applied(RuleId::NegateBothSides, "-x = 2 or -x = -4") == "x = -2 or x = 4");
    CHECK(applied(RuleId::DivByConst, "2*x = 6") == "x = 3");
    CHECK(applied(RuleId::DivByConst, "4*x = 6") == "x = 3/2");
    CHECK(applied(RuleId::DivByConst, "2*(x+1)^2 = 18") == "(x+1)^2 = 9");
    CHECK(applicable_sites(RuleId::DivByConst, eq("x = 3")).empty());
}

TEST_CASE("COLLECT_TERMS and EXPAND")
{
    CHECK(applied(RuleId::CollectTerms, "-8*x - 7*x = -1") == "-15*x = -1");
    CHECK(applied(RuleId::CollectTerms, "x + 1 + x = 3") == "2*x + 1 = 3");
    CHECK(applicable_sites(RuleId::CollectTerms, eq("x + 1 = 3")).empty());
    CHECK(applied(RuleId::Expand, "(-x+1)^2 = 9") == "x^2 - 2*x + 1 = 9");
    CHECK(applied(RuleId::Expand, "2*(x+3) = 4") == "2*x + 6 = 4");
    CHECK(applicable_sites(RuleId::Expand, eq("x^2 = 4")).empty());
}

TEST_CASE("FACTOR_COMMON, SPLIT_ZERO_PRODUCT, QUADRATIC_FORMULA")
{
    CHECK(applied(RuleId::FactorCommon, "x^2 - 3*x = 0") == "x*(x-3) = 0");
    CHECK(applied(RuleId::SplitZeroProduct, "x*(x-3) = 0") == "x = 0 or x - 3 = 0");
    CHECK(applicable_sites(RuleId::FactorCommon, eq("x^2 - 3*x = 1")).empty());

    EqSet q = apply_rule(RuleId::QuadraticFormula, applicable_sites(RuleId::QuadraticFormula, eq("x^2 + 2*x - 8 = 0")).at(0),
                         eq("x^2 + 2*x - 8 = 0"));
    CHECK(root_set(q) == root_set(eq("x = 2 or x = -4")));
    for (const auto& e : q.equations())
        CHECK(e.lhs == Expr::var());

    EqSet irr = eq("x^2 - 2*x - 1 = 0");
    EqSet r = apply_rule(RuleId::QuadraticFormula, applicable_sites(RuleId::QuadraticFormula, irr).at(0), irr);
    CHECK(equivalent(irr, r));
    CHECK(applicable_sites(RuleId::QuadraticFormula, eq("x^2 + 1 = 0")).empty());
}

TEST_CASE("TIDY")
{
    CHECK(applied(RuleId::Tidy, "x = 6/4") == "x = 3/2");
    CHECK(applied(RuleId::Tidy, "x = sqrt(9) or x = -sqrt(9)") == "x = 3 or x = -3");
    CHECK(applied(RuleId::Tidy, "x = sqrt(8)") == "x = 2*sqrt(2)");
    CHECK(applicable_sites(RuleId::Tidy, eq("x = 3")).empty());
    CHECK(tidy(parse_expr("2 + 3")) == parse_expr("5"));
    Expr t = tidy(parse_expr("(4 - 2)*x + 6/3"));
    CHECK(tidy(t) == t);
}

TEST_CASE("invalid sites are rejected")
{
    EqSet s = eq("x = 3");
    CHECK_THROWS_AS(apply_rule(RuleId::SqrtBothSides, Site{}, s), InvalidSite);
    CHECK_THROWS_AS(apply_rule(RuleId::MoveTerm, Site{std::nullopt, Side::Lhs, 5}, s), InvalidSite);
    CHECK_THROWS_AS(apply_rule(RuleId::MoveTerm, Site{std::size_t{3}, Side::Rhs, 0}, s), InvalidSite);
}

TEST_CASE("untouched equations are kept verbatim")
{
    EqSet s = eq("x - 3 = 0 or 4*x = 6");
    auto sites = applicable_sites(RuleId::DivByConst, s);
    REQUIRE(sites.size() == 1);
    CHECK(sites[0].equation == std::size_t{1});
    EqSet out = apply_rule(RuleId::DivByConst, sites[0], s);
    CHECK(out[0] == s[0]);
    CHECK(render(out) == "x - 3 = 0 or x = 3/2");
    CHECK(sites[0].to_string() == "eq1:lhs:0");
}
