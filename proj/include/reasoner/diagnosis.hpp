#pragma once

#include "reasoner/expr.hpp"
#include "reasoner/rules.hpp"
#include "reasoner/strategy.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace reasoner {

enum class RelationId {
    ExpectedNormalForm = 1,
    ExpectedTermCount = 2,
    ExpectedZeroDerivation = 3,
};

std::string_view relation_name(RelationId r);

/// Feedback code the UI keys its message on.
std::string_view feedback_code(RelationId r);

struct RelationOutcome {
    /// Empty on a match; otherwise the first violated relation.
    std::optional<RelationId> violated;
    /// "expected <facet>, observed <facet>" for the violated relation.
    std::string detail;

    bool matched() const { return !violated.has_value(); }
};

/// Checks relations 1, 2, 3 in order and stops at the first violation.
RelationOutcome check_relations(const EqSet& input, const EqSet& candidate);

namespace diagnosis {

struct Correct {
    EqSet matched_state;
    std::size_t steps_combined;
    std::vector<RuleId> rules;
    bool is_variant;
    /// Strategy remaining at matched_state.
    Strategy residual;
};

struct Finished {
    EqSet solution;
};

struct Deviation {
    RelationId relation;
    EqSet best_candidate;
    std::string feedback_code;
    std::string detail;
};

struct NotEquivalent {};

struct Unknown {};

} // namespace diagnosis

using Diagnosis = std::variant<diagnosis::Correct, diagnosis::Finished, diagnosis::Deviation,
                               diagnosis::NotEquivalent, diagnosis::Unknown>;

/// "correct", "finished", "deviation", "not-equivalent" or "unknown".
std::string_view diagnosis_class(const Diagnosis& d);

inline constexpr std::size_t kDefaultLookahead = 5;

/// Classifies `input` as a step from `prev`, where `residual` is the strategy
/// remaining at prev. Throws DepthCapExceeded, DegreeTooHigh.
Diagnosis diagnose(const EqSet& prev, const EqSet& input, const Strategy& residual, const EqSet& task,
                   std::size_t max_lookahead = kDefaultLookahead);

/// The strategy-matching part of diagnose, without the equivalence and
/// finished checks: Correct, Deviation or Unknown.
Diagnosis match_step(const EqSet& prev, const EqSet& input, const Strategy& residual,
                     std::size_t max_lookahead = kDefaultLookahead);

/// A position in the strategy: a canonical state and what remains there.
struct Cursor {
    EqSet state;
    Strategy residual;
};

/// Finds where `state` sits in the derivation space of `st` from `task`:
/// a node with structurally equal state if one exists, else one satisfying
/// all relations with it. Searches up to kMaxDepth.
std::optional<Cursor> locate(const EqSet& task, const Strategy& st, const EqSet& state);

struct Hint {
    RuleId rule;
    Site site;
    std::string description;
    EqSet result_state;
};

/// First continuation of `residual` at `prev`. Throws StrategyExhausted.
Hint hint(const EqSet& prev, const Strategy& residual);

} // namespace reasoner
