#pragma once

#include "reasoner/expr.hpp"
#include "reasoner/rules.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace reasoner {

enum class StrategyKind { Apply, Seq, Choice, Many, Option, Succeed };

/// Strategy expression over rules: Apply, Seq, Choice, Many, Option, Succeed.
/// Immutable and cheap to copy.
class Strategy {
public:
    /// A directed Apply only fires at directed_sites.
    static Strategy apply(RuleId rule, bool directed = false);
    static Strategy seq(std::vector<Strategy> parts);
    static Strategy choice(std::vector<Strategy> options);
    /// Throws InvalidStrategy if the body can succeed without applying a rule.
    static Strategy many(Strategy body);
    static Strategy option(Strategy body);
    static Strategy succeed();

    StrategyKind kind() const;
    RuleId rule() const;
    bool directed() const;
    const std::vector<Strategy>& children() const;

    /// Can succeed without applying any rule.
    bool nullable() const;

    /// Compact textual form, also used as identity.
    const std::string& to_string() const;

    friend bool operator==(const Strategy& a, const Strategy& b) { return a.to_string() == b.to_string(); }

private:
    struct Node;
    explicit Strategy(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct Step {
    RuleId rule;
    Site site;

    friend bool operator==(const Step&, const Step&) = default;
};

struct Continuation {
    RuleId rule;
    Site site;
    EqSet next;
    Strategy residual;
};

/// Single-rule continuations admitted by `st` at `s`, deduplicated on
/// (rule, site), leftmost branch first and sites in canonical order.
std::vector<Continuation> firsts(const Strategy& st, const EqSet& s);

struct StateNode {
    EqSet state;
    /// Number of non-minor rules in path.
    std::size_t depth = 0;
    std::vector<Step> path;
    Strategy residual;
};

inline constexpr std::size_t kMaxDepth = 8;

/// Distinct states at depth 1..max_depth reachable under `st` from `s`.
/// Minor rules extend the path without adding depth. States are deduplicated
/// on relation_key, keeping the shallowest; sorted by (depth, rendering).
/// Throws DepthCapExceeded if max_depth > kMaxDepth.
std::vector<StateNode> reachable_states(const Strategy& st, const EqSet& s, std::size_t max_depth);

/// Like reachable_states but also returns the depth-0 nodes (the start
/// state and whatever minor rules alone produce from it) first.
std::vector<StateNode> reachable_states_from_root(const Strategy& st, const EqSet& s, std::size_t max_depth);

struct ModelSolution {
    /// Task first, final solved form last. Each later state is the result
    /// of one non-minor rule followed by any minor rules.
    std::vector<EqSet> states;
    /// steps[i] leads from states[i] to states[i + 1].
    std::vector<std::vector<Step>> steps;
    /// Strategy remaining at each state.
    std::vector<Strategy> residuals;
};

/// Shortest derivation to solved form (fewest non-minor rules), leftmost
/// choice and canonical site order breaking ties. Throws NoDerivation.
ModelSolution model_solution(const EqSet& task, const Strategy& st);

struct NamedStrategy {
    std::string name;
    Strategy strategy;
};

/// Every rule step may be followed by an optional TIDY.
Strategy tidy_wrap(const Strategy& st);

/// One of "linear", "sqrt", "factor", "quadratic-formula"; nullopt otherwise.
std::optional<NamedStrategy> strategy_by_name(std::string_view name);

/// Shape-based choice for a single-equation task of degree <= 2.
/// Throws DegreeTooHigh.
NamedStrategy select_strategy(const EqSet& task);

} // namespace reasoner
