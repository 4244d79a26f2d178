#pragma once

#include "reasoner/expr.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reasoner {

enum class RuleId {
    SqrtBothSides,
    MoveTerm,
    CollectTerms,
    NegateBothSides,
    DivByConst,
    Expand,
    FactorCommon,
    SplitZeroProduct,
    QuadraticFormula,
    Tidy,
};

struct Rule {
    RuleId id;
    std::string_view name;
    std::string_view description;
    /// Minor (tidy-up) rules are free during strategy matching.
    bool minor;
};

const std::vector<Rule>& rule_catalog();
const Rule& rule_info(RuleId id);
std::string_view rule_name(RuleId id);
std::optional<RuleId> rule_from_name(std::string_view name);

enum class Side { Lhs, Rhs };

/// Where a rule fires: one equation of the set, or every equation at once
/// (`equation` empty), plus the side and summand/subterm index on it.
struct Site {
    std::optional<std::size_t> equation;
    Side side = Side::Lhs;
    std::size_t index = 0;

    bool uniform() const { return !equation.has_value(); }
    std::string to_string() const;

    friend bool operator==(const Site&, const Site&) = default;
};

/// Every site at which the rule can fire, in canonical order: sites acting
/// on all equations first, then per-equation sites by equation index, each
/// by side and index. Empty iff the rule does not apply.
std::vector<Site> applicable_sites(RuleId id, const EqSet& s);

/// The subset of applicable_sites a solving strategy uses. MOVE_TERM is
/// restricted to moving constants off a linear side whose partner is
/// constant, and to moving right-hand summands over when x appears on the
/// right or the left is nonlinear. NEGATE_BOTH_SIDES and DIV_BY_CONST wait
/// until the constant side is a single term.
std::vector<Site> directed_sites(RuleId id, const EqSet& s);

/// Applies the rule at `site`. Untouched equations are kept verbatim.
/// Throws InvalidSite if `site` is not in applicable_sites(id, s).
EqSet apply_rule(RuleId id, const Site& site, const EqSet& s);

/// The tidy rule on a single expression; idempotent.
Expr tidy(const Expr& e);

} // namespace reasoner
