#include "reasoner/diagnosis.hpp"

#include "reasoner/algebra.hpp"
#include "reasoner/errors.hpp"
#include "reasoner/syntax.hpp"

#include <algorithm>

namespace reasoner {

std::string_view relation_name(RelationId r)
{
    switch (r) {
    case RelationId::ExpectedNormalForm: return "EXPECTED_NORMAL_FORM";
    case RelationId::ExpectedTermCount: return "EXPECTED_TERM_COUNT";
    case RelationId::ExpectedZeroDerivation: return "EXPECTED_ZERO_DERIVATION";
    }
    return "";
}

std::string_view feedback_code(RelationId r)
{
    switch (r) {
    case RelationId::ExpectedNormalForm: return "unexpected-structure-change";
    case RelationId::ExpectedTermCount: return "unexpected-term-count";
    case RelationId::ExpectedZeroDerivation: return "unexpected-zero-derivation";
    }
    return "";
}

namespace {

std::vector<std::string> zero_facets(const EqSet& s)
{
    std::vector<std::string> out;
    for (const auto& e : s.equations())
        out.push_back(render(nf_struct(e)) + (is_zero_derived(e) ? " [derived to zero]" : " [not derived to zero]"));
    std::sort(out.begin(), out.end());
    return out;
}

std::string joined(const std::vector<std::string>& parts)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i)
        out += (i ? ", " : "") + parts[i];
    return out;
}

std::string facet(const std::string& expected, const std::string& observed)
{
    return "expected " + expected + ", observed " + observed;
}

} // namespace

RelationOutcome check_relations(const EqSet& input, const EqSet& candidate)
{
    const EqSet nf_in = nf_struct(input);
    const EqSet nf_cand = nf_struct(candidate);
    if (!(nf_in == nf_cand))
        return {RelationId::ExpectedNormalForm, facet(render(nf_cand), render(nf_in))};

    const std::size_t tc_in = term_count(input);
    const std::size_t tc_cand = term_count(candidate);
    if (tc_in != tc_cand)
        return {RelationId::ExpectedTermCount,
                facet(std::to_string(tc_cand) + " terms", std::to_string(tc_in) + " terms")};

    auto z_in = zero_facets(input);
    auto z_cand = zero_facets(candidate);
    if (z_in != z_cand)
        return {RelationId::ExpectedZeroDerivation, facet(joined(z_cand), joined(z_in))};
    return {};
}

std::string_view diagnosis_class(const Diagnosis& d)
{
    switch (d.index()) {
    case 0: return "correct";
    case 1: return "finished";
    case 2: return "deviation";
    case 3: return "not-equivalent";
    default: return "unknown";
    }
}

Diagnosis diagnose(const EqSet& prev, const EqSet& input, const Strategy& residual, const EqSet& task,
                   std::size_t max_lookahead)
{
    if (max_lookahead > kMaxDepth)
        throw DepthCapExceeded(static_cast<int>(max_lookahead));
    if (!equivalent(prev, input))
        return diagnosis::NotEquivalent{};
    if (is_solved_form(input) && root_set(input) == root_set(task))
        return diagnosis::Finished{input};
    return match_step(prev, input, residual, max_lookahead);
}

Diagnosis match_step(const EqSet& prev, const EqSet& input, const Strategy& residual, std::size_t max_lookahead)
{
    const auto pool = reachable_states_from_root(residual, prev, max_lookahead);

    for (const auto& node : pool) {
        if (node.depth == 0 || !check_relations(input, node.state).matched())
            continue;
        std::vector<RuleId> rules;
        for (const auto& step : node.path)
            if (!rule_info(step.rule).minor)
                rules.push_back(step.rule);
        return diagnosis::Correct{node.state, node.depth, std::move(rules), !(input == node.state), node.residual};
    }

    const bool has_candidates =
        std::any_of(pool.begin(), pool.end(), [](const StateNode& n) { return n.depth > 0; });
    if (!has_candidates)
        return diagnosis::Unknown{};

    const StateNode* best = nullptr;
    RelationId best_rel = RelationId::ExpectedNormalForm;
    std::string best_detail;
    for (const auto& node : pool) {
        auto outcome = check_relations(input, node.state);
        // A full match here is only possible against a depth-0 node: a
        // rewrite of prev with no strategy progress.
        if (outcome.matched())
            return diagnosis::Unknown{};
        if (!best || static_cast<int>(*outcome.violated) > static_cast<int>(best_rel)) {
            best = &node;
            best_rel = *outcome.violated;
            best_detail = std::move(outcome.detail);
        }
    }
    return diagnosis::Deviation{best_rel, best->state, std::string(feedback_code(best_rel)), best_detail};
}

std::optional<Cursor> locate(const EqSet& task, const Strategy& st, const EqSet& state)
{
    const auto nodes = reachable_states_from_root(st, task, kMaxDepth);
    for (const auto& n : nodes)
        if (n.state == state)
            return Cursor{n.state, n.residual};
    for (const auto& n : nodes)
        if (check_relations(state, n.state).matched())
            return Cursor{n.state, n.residual};
    return std::nullopt;
}

Hint hint(const EqSet& prev, const Strategy& residual)
{
    auto next = firsts(residual, prev);
    if (next.empty())
        throw StrategyExhausted();
    auto& c = next.front();
    return Hint{c.rule, c.site, std::string(rule_info(c.rule).description), std::move(c.next)};
}

} // namespace reasoner
