#include "doctest.h"

#include "generators.hpp"
#include "reasoner/algebra.hpp"
#include "reasoner/errors.hpp"
#include "reasoner/strategy.hpp"
#include "reasoner/syntax.hpp"

#include <map>
#include <set>

using namespace reasoner;

namespace {

EqSet eq(const char* text) { return parse_eqset(text); }

Strategy named(const char* name) { return strategy_by_name(name)->strategy; }

std::vector<std::string> rendered(const std::vector<EqSet>& states)
{
    std::vector<std::string> out;
    for (const auto& s : states)
        out.push_back(render(s));
    return out;
}

EqSet replay(EqSet s, const std::vector<Step>& path)
{
    for (const auto& step : path)
        s = apply_rule(step.rule, step.site, s);
    return s;
}

} // namespace

TEST_CASE("combinators")
{
    CHECK_THROWS_AS(Strategy::many(Strategy::succeed()), InvalidStrategy);
    CHECK_THROWS_AS(Strategy::many(Strategy::option(Strategy::apply(RuleId::Tidy))), InvalidStrategy);
    CHECK(Strategy::option(Strategy::apply(RuleId::Tidy)).nullable());
    CHECK_FALSE(Strategy::apply(RuleId::Tidy).nullable());
    Strategy s = Strategy::seq({Strategy::apply(RuleId::Expand), Strategy::succeed()});
    CHECK(s == Strategy::apply(RuleId::Expand));
    CHECK(Strategy::apply(RuleId::MoveTerm, true).to_string() == "directed(MOVE_TERM)");
    CHECK(Strategy::many(Strategy::apply(RuleId::Expand)).nullable());
}

TEST_CASE("firsts examples")
{
    auto f = firsts(named("sqrt"), eq("(-x+1)^2 = 9"));
    REQUIRE(f.size() == 1);
    CHECK(f[0].rule == RuleId::SqrtBothSides);
    CHECK(render(f[0].next) == "-x + 1 = 3 or -x + 1 = -3");

    CHECK(firsts(Strategy::succeed(), eq("(-x+1)^2 = 9")).empty());

    auto both = firsts(Strategy::choice({Strategy::apply(RuleId::Expand), Strategy::apply(RuleId::SqrtBothSides)}),
                       eq("(-x+1)^2 = 9"));
    REQUIRE(both.size() == 2);
    CHECK(both[0].rule == RuleId::Expand);
    CHECK(both[1].rule == RuleId::SqrtBothSides);
}

TEST_CASE("reachable states of the square task contain the model solution")
{
    const auto nodes = reachable_states(named("sqrt"), eq("(-x+1)^2 = 9"), 3);
    std::map<std::string, std::size_t> depth;
    for (const auto& n : nodes)
        depth[render(n.state)] = n.depth;
    CHECK(depth.at("-x + 1 = 3 or -x + 1 = -3") == 1);
    CHECK(depth.at("-x = 2 or -x = -4") == 2);
    CHECK(depth.at("x = -2 or x = 4") == 3);
    for (std::size_t i = 1; i < nodes.size(); ++i)
        CHECK(nodes[i - 1].depth <= nodes[i].depth);

    CHECK(reachable_states(named("sqrt"), eq("x = -2 or x = 4"), 5).empty());
    CHECK_THROWS_AS(reachable_states(named("sqrt"), eq("x = 1"), 9), DepthCapExceeded);

    auto root = reachable_states_from_root(named("sqrt"), eq("(-x+1)^2 = 9"), 1);
    REQUIRE_FALSE(root.empty());
    CHECK(root[0].depth == 0);
    CHECK(root[0].path.empty());
    CHECK(root[0].residual == named("sqrt"));
}

TEST_CASE("choice of square-root and expansion reaches both branches")
{
    Strategy expand_st = Strategy::seq({Strategy::apply(RuleId::Expand),
                                        Strategy::many(Strategy::choice({Strategy::apply(RuleId::MoveTerm),
                                                                         Strategy::apply(RuleId::CollectTerms)}))});
    Strategy st = tidy_wrap(Strategy::choice({named("sqrt"), expand_st}));
    const auto nodes = reachable_states(st, eq("(-x+1)^2 = 9"), 2);
    bool sqrt_branch = false, expanded = false;
    for (const auto& n : nodes) {
        sqrt_branch |= render(n.state) == "-x + 1 = 3 or -x + 1 = -3";
        expanded |= relation_key(n.state) == relation_key(eq("x^2 - 2*x - 8 = 0"));
    }
    CHECK(sqrt_branch);
    CHECK(expanded);
}

TEST_CASE("model solution examples")
{
    ModelSolution s = model_solution(eq("(-x+1)^2 = 9"), named("sqrt"));
    CHECK(rendered(s.states) == std::vector<std::string>{"(-x+1)^2 = 9", "-x + 1 = 3 or -x + 1 = -3",
                                                          "-x = 2 or -x = -4", "x = -2 or x = 4"});
    REQUIRE(s.steps.size() == 3);
    CHECK(s.steps[0].front().rule == RuleId::SqrtBothSides);
    CHECK(s.steps[1].front().rule == RuleId::MoveTerm);
    CHECK(s.steps[2].front().rule == RuleId::NegateBothSides);
    CHECK(s.residuals.size() == s.states.size());

    ModelSolution trivial = model_solution(eq("x = 5"), named("linear"));
    CHECK(trivial.states.size() == 1);
    CHECK(trivial.steps.empty());

    ModelSolution f = model_solution(eq("x^2 - 3*x = 0"), named("factor"));
    CHECK(render(f.states.back()) == "x = 0 or x = 3");
    CHECK(f.steps[0].front().rule == RuleId::FactorCommon);
    CHECK(f.steps[1].front().rule == RuleId::SplitZeroProduct);

    CHECK_THROWS_AS(model_solution(eq("(-x+1)^2 = 9"), named("factor")), NoDerivation);
}

TEST_CASE("select_strategy examples")
{
    CHECK(select_strategy(eq("(-x+1)^2 = 9")).name == "sqrt");
    CHECK(select_strategy(eq("x = 5")).name == "linear");
    CHECK(select_strategy(eq("x^2 + 2*x = 8")).name == "quadratic-formula");
    CHECK(select_strategy(eq("x^2 - 3*x = 0")).name == "factor");
    CHECK(select_strategy(eq("2*(x-1)^2 = 8")).name == "sqrt");
    CHECK(select_strategy(eq("(x-1)^2 = -4")).name == "quadratic-formula");
    CHECK_THROWS_AS(select_strategy(eq("x^3 = 8")), DegreeTooHigh);
    CHECK_FALSE(strategy_by_name("bogus").has_value());
}

TEST_CASE("model solutions of generated tasks replay and end solved")
{
    for (const auto& t : testsupport::generate_tasks(77, 240)) {
        const NamedStrategy st = select_strategy(t.task);
        ModelSolution sol = model_solution(t.task, st.strategy);
        REQUIRE(sol.states.size() == sol.steps.size() + 1);
        for (std::size_t i = 0; i < sol.steps.size(); ++i)
            CHECK(replay(sol.states[i], sol.steps[i]) == sol.states[i + 1]);
        CHECK(is_solved_form(sol.states.back()));
        CHECK(root_set(sol.states.back()) == root_set(t.task));
        std::set<std::string> keys;
        for (const auto& s : sol.states)
            CHECK(keys.insert(relation_key(s)).second);
    }
}

TEST_CASE("reachable states replay, stay equivalent and are keyed uniquely")
{
    for (const auto& t : testsupport::generate_tasks(13, 30)) {
        const NamedStrategy st = select_strategy(t.task);
        std::set<std::string> keys;
        for (const auto& n : reachable_states(st.strategy, t.task, 4)) {
            CHECK(replay(t.task, n.path) == n.state);
            CHECK(equivalent(n.state, t.task));
            CHECK(keys.insert(relation_key(n.state)).second);
            std::size_t major = 0;
            for (const auto& p : n.path)
                major += !rule_info(p.rule).minor;
            CHECK(n.depth <= major);
            CHECK(n.depth >= 1);
        }
    }
}
