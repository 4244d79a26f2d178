#include "doctest.h"

#include "generators.hpp"
#include "reasoner/algebra.hpp"
#include "reasoner/diagnosis.hpp"
#include "reasoner/errors.hpp"
#include "reasoner/syntax.hpp"

#include <random>

using namespace reasoner;
namespace dg = reasoner::diagnosis;

namespace {

EqSet eq(const char* text) { return parse_eqset(text); }

const EqSet kTask = parse_eqset("(-x+1)^2 = 9");

Strategy sqrt_st() { return strategy_by_name("sqrt")->strategy; }

Diagnosis at_task(const char* input) { return diagnose(kTask, eq(input), sqrt_st(), kTask); }

} // namespace

TEST_CASE("check_relations examples")
{
    auto r3 = check_relations(eq("(-x+1)^2 - 9 = 0"), kTask);
    CHECK(r3.violated == RelationId::ExpectedZeroDerivation);
    CHECK(r3.detail.rfind("expected ", 0) == 0);
    CHECK(r3.detail.find(", observed ") != std::string::npos);

    CHECK(check_relations(eq("x^2 - 2*x - 8 = 0"), kTask).violated == RelationId::ExpectedNormalForm);
    CHECK(check_relations(eq("1 - x = 3 or 1 - x = -3"), eq("-x+1 = 3 or -x+1 = -3")).matched());
    CHECK(check_relations(eq("-2*x + x = 2"), eq("-x = 2")).violated == RelationId::ExpectedTermCount);
}

TEST_CASE("relation order: a failed first relation hides the others")
{
    // Expanded and derived to zero: relations 1 and 3 both fail.
    auto out = check_relations(eq("x^2 - 2*x - 8 = 0"), eq("(-x+1)^2 = 9"));
    CHECK(out.violated == RelationId::ExpectedNormalForm);
    CHECK(out.detail.find("derived to zero") == std::string::npos);
    CHECK(out.detail.find("terms") == std::string::npos);
    // Term count and zero flag both differ, normal form equal.
    auto two = check_relations(eq("(-x+1)^2 - 9 = 0"), eq("(-x+1)^2 - 4 = 5"));
    CHECK(two.violated == RelationId::ExpectedTermCount);
    CHECK(two.detail.find("derived to zero") == std::string::npos);
}

TEST_CASE("diagnose examples on the square task")
{
    auto v = at_task("1 - x = 3 or 1 - x = -3");
    REQUIRE(std::holds_alternative<dg::Correct>(v));
    const auto& c = std::get<dg::Correct>(v);
    CHECK(c.steps_combined == 1);
    CHECK(c.rules == std::vector<RuleId>{RuleId::SqrtBothSides});
    CHECK(c.is_variant);
    CHECK(render(c.matched_state) == "-x + 1 = 3 or -x + 1 = -3");

    auto z = at_task("(-x+1)^2 - 9 = 0");
    REQUIRE(std::holds_alternative<dg::Deviation>(z));
    CHECK(std::get<dg::Deviation>(z).relation == RelationId::ExpectedZeroDerivation);
    CHECK(std::get<dg::Deviation>(z).feedback_code == "unexpected-zero-derivation");

    auto e = at_task("x^2 - 2*x - 8 = 0");
    REQUIRE(std::holds_alternative<dg::Deviation>(e));
    CHECK(std::get<dg::Deviation>(e).relation == RelationId::ExpectedNormalForm);
    CHECK(std::get<dg::Deviation>(e).feedback_code == "unexpected-structure-change");

    auto two = at_task("-x = 2 or -x = -4");
    REQUIRE(std::holds_alternative<dg::Correct>(two));
    CHECK(std::get<dg::Correct>(two).steps_combined == 2);
    CHECK_FALSE(std::get<dg::Correct>(two).is_variant);

    auto fin = at_task("x = -2 or x = 4");
    REQUIRE(std::holds_alternative<dg::Finished>(fin));
    CHECK(render(std::get<dg::Finished>(fin).solution) == "x = -2 or x = 4");
    CHECK(std::holds_alternative<dg::Finished>(at_task("x = 4 or x = -2")));

    CHECK(std::holds_alternative<dg::NotEquivalent>(
        diagnose(eq("x = 5"), eq("x = 7"), strategy_by_name("linear")->strategy, eq("x = 5"))));
    CHECK(std::holds_alternative<dg::NotEquivalent>(at_task("x = 99")));
}

TEST_CASE("diagnosis classes and codes")
{
    CHECK(diagnosis_class(at_task("x = 99")) == "not-equivalent");
    CHECK(diagnosis_class(at_task("x = -2 or x = 4")) == "finished");
    CHECK(feedback_code(RelationId::ExpectedTermCount) == "unexpected-term-count");
    CHECK(relation_name(RelationId::ExpectedNormalForm) == "EXPECTED_NORMAL_FORM");
}

TEST_CASE("unknown when the strategy is exhausted")
{
    EqSet prev = eq("-x = 2");
    CHECK(std::holds_alternative<dg::Unknown>(diagnose(prev, eq("-x = 2"), Strategy::succeed(), prev)));
    CHECK(std::holds_alternative<dg::Unknown>(match_step(prev, eq("2 = -x"), Strategy::succeed())));
}

TEST_CASE("diagnose from a later state uses its residual")
{
    ModelSolution s = model_solution(kTask, sqrt_st());
    auto d = diagnose(s.states[1], eq("-x = 2 or -x = -4"), s.residuals[1], kTask);
    REQUIRE(std::holds_alternative<dg::Correct>(d));
    CHECK(std::get<dg::Correct>(d).steps_combined == 1);
    CHECK(std::get<dg::Correct>(d).rules == std::vector<RuleId>{RuleId::MoveTerm});
    auto m = match_step(s.states[1], s.states[3], s.residuals[1]);
    REQUIRE(std::holds_alternative<dg::Correct>(m));
    CHECK(std::get<dg::Correct>(m).steps_combined == 2);
}

TEST_CASE("lookahead cap")
{
    CHECK_THROWS_AS(diagnose(kTask, kTask, sqrt_st(), kTask, 9), DepthCapExceeded);
    auto shallow = diagnose(kTask, eq("-x = 2 or -x = -4"), sqrt_st(), kTask, 1);
    CHECK(std::holds_alternative<dg::Deviation>(shallow));
}

TEST_CASE("hint examples")
{
    Hint h = hint(kTask, sqrt_st());
    CHECK(h.rule == RuleId::SqrtBothSides);
    CHECK(render(h.result_state) == "-x + 1 = 3 or -x + 1 = -3");
    CHECK_FALSE(h.description.empty());

    ModelSolution s = model_solution(kTask, sqrt_st());
    Hint neg = hint(s.states[2], s.residuals[2]);
    CHECK(neg.rule == RuleId::NegateBothSides);
    CHECK(render(neg.result_state) == "x = -2 or x = 4");

    CHECK_THROWS_AS(hint(s.states[3], s.residuals[3]), StrategyExhausted);
}

TEST_CASE("locate finds canonical positions")
{
    auto c = locate(kTask, sqrt_st(), eq("1 - x = -3 or 1 - x = 3"));
    REQUIRE(c.has_value());
    CHECK(render(c->state) == "-x + 1 = 3 or -x + 1 = -3");
    auto root = locate(kTask, sqrt_st(), kTask);
    REQUIRE(root.has_value());
    CHECK(root->residual == sqrt_st());
    CHECK_FALSE(locate(kTask, sqrt_st(), eq("x^2 - 2*x - 8 = 0")).has_value());
}

TEST_CASE("safety and determinism on generated steps")
{
    std::mt19937_64 rng(19);
    for (const auto& t : testsupport::generate_tasks(23, 60)) {
        const Strategy st = select_strategy(t.task).strategy;
        ModelSolution sol = model_solution(t.task, st);
        const EqSet wrong = parse_eqset("x = 1000");
        for (std::size_t i = 0; i < sol.states.size(); ++i) {
            auto d = diagnose(sol.states[i], wrong, sol.residuals[i], t.task);
            CHECK(std::holds_alternative<dg::NotEquivalent>(d));
            if (i + 1 < sol.states.size()) {
                EqSet m = testsupport::mutate(sol.states[i + 1], rng);
                auto a = diagnose(sol.states[i], m, sol.residuals[i], t.task);
                auto b = diagnose(sol.states[i], m, sol.residuals[i], t.task);
                CHECK(diagnosis_class(a) == diagnosis_class(b));
                if (auto* ca = std::get_if<dg::Correct>(&a)) {
                    auto* cb = std::get_if<dg::Correct>(&b);
                    REQUIRE(cb);
                    CHECK(ca->matched_state == cb->matched_state);
                    CHECK(ca->rules == cb->rules);
                    CHECK(ca->steps_combined == cb->steps_combined);
                }
            }
        }
    }
}
