#include "reasoner/strategy.hpp"

#include "reasoner/algebra.hpp"
#include "reasoner/errors.hpp"
#include "reasoner/syntax.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace reasoner {

struct Strategy::Node {
    StrategyKind kind;
    RuleId rule = RuleId::Tidy;
    bool directed = false;
    std::vector<Strategy> children;
    bool nullable = false;
    std::string text;
};

namespace {

std::string join(const std::vector<Strategy>& parts, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += sep;
        out += parts[i].to_string();
    }
    return out;
}

} // namespace

Strategy Strategy::apply(RuleId rule, bool directed)
{
    auto n = std::make_shared<Node>();
    n->kind = StrategyKind::Apply;
    n->rule = rule;
    n->directed = directed && (rule == RuleId::MoveTerm || rule == RuleId::NegateBothSides || rule == RuleId::DivByConst);
    n->text = n->directed ? "directed(" + std::string(rule_name(rule)) + ")" : std::string(rule_name(rule));
    return Strategy(std::move(n));
}

Strategy Strategy::succeed()
{
    static const Strategy s = [] {
        auto n = std::make_shared<Node>();
        n->kind = StrategyKind::Succeed;
        n->nullable = true;
        n->text = "succeed";
        return Strategy(std::move(n));
    }();
    return s;
}

Strategy Strategy::seq(std::vector<Strategy> parts)
{
    std::vector<Strategy> flat;
    for (auto& p : parts) {
        if (p.kind() == StrategyKind::Succeed)
            continue;
        if (p.kind() == StrategyKind::Seq)
            flat.insert(flat.end(), p.children().begin(), p.children().end());
        else
            flat.push_back(std::move(p));
    }
    if (flat.empty())
        return succeed();
    if (flat.size() == 1)
        return flat.front();
    auto n = std::make_shared<Node>();
    n->kind = StrategyKind::Seq;
    n->nullable = std::all_of(flat.begin(), flat.end(), [](const Strategy& s) { return s.nullable(); });
    n->text = "(" + join(flat, " ; ") + ")";
    n->children = std::move(flat);
    return Strategy(std::move(n));
}

Strategy Strategy::choice(std::vector<Strategy> options)
{
    if (options.empty())
        throw InvalidStrategy("choice needs at least one option");
    if (options.size() == 1)
        return options.front();
    auto n = std::make_shared<Node>();
    n->kind = StrategyKind::Choice;
    n->nullable = std::any_of(options.begin(), options.end(), [](const Strategy& s) { return s.nullable(); });
    n->text = "(" + join(options, " | ") + ")";
    n->children = std::move(options);
    return Strategy(std::move(n));
}

Strategy Strategy::many(Strategy body)
{
    if (body.nullable())
        throw InvalidStrategy("many body can succeed without progress: " + body.to_string());
    auto n = std::make_shared<Node>();
    n->kind = StrategyKind::Many;
    n->nullable = true;
    n->text = "many(" + body.to_string() + ")";
    n->children = {std::move(body)};
    return Strategy(std::move(n));
}

Strategy Strategy::option(Strategy body)
{
    auto n = std::make_shared<Node>();
    n->kind = StrategyKind::Option;
    n->nullable = true;
    n->text = "option(" + body.to_string() + ")";
    n->children = {std::move(body)};
    return Strategy(std::move(n));
}

StrategyKind Strategy::kind() const { return node_->kind; }
RuleId Strategy::rule() const { return node_->rule; }
bool Strategy::directed() const { return node_->directed; }
const std::vector<Strategy>& Strategy::children() const { return node_->children; }
bool Strategy::nullable() const { return node_->nullable; }
const std::string& Strategy::to_string() const { return node_->text; }

namespace {

struct Derivative {
    RuleId rule;
    bool directed;
    Strategy residual;
};

/// Rules the strategy may apply first, each with what remains afterwards.
void derivatives(const Strategy& st, std::vector<Derivative>& out)
{
    switch (st.kind()) {
    case StrategyKind::Succeed:
        return;
    case StrategyKind::Apply:
        out.push_back({st.rule(), st.directed(), Strategy::succeed()});
        return;
    case StrategyKind::Seq: {
        const auto& parts = st.children();
        for (std::size_t i = 0; i < parts.size(); ++i) {
            std::vector<Derivative> head;
            derivatives(parts[i], head);
            std::vector<Strategy> rest(parts.begin() + static_cast<std::ptrdiff_t>(i) + 1, parts.end());
            for (auto& d : head) {
                std::vector<Strategy> next{d.residual};
                next.insert(next.end(), rest.begin(), rest.end());
                out.push_back({d.rule, d.directed, Strategy::seq(std::move(next))});
            }
            if (!parts[i].nullable())
                return;
        }
        return;
    }
    case StrategyKind::Choice:
        for (const auto& c : st.children())
            derivatives(c, out);
        return;
    case StrategyKind::Option:
        derivatives(st.children().front(), out);
        return;
    case StrategyKind::Many: {
        std::vector<Derivative> body;
        derivatives(st.children().front(), body);
        for (auto& d : body)
            out.push_back({d.rule, d.directed, Strategy::seq({d.residual, st})});
        return;
    }
    }
}

/// All continuations, keeping distinct residuals for the same (rule, site).
std::vector<Continuation> continuations(const Strategy& st, const EqSet& s)
{
    std::vector<Derivative> ds;
    derivatives(st, ds);
    std::vector<Continuation> out;
    std::set<std::pair<std::string, std::string>> seen;
    std::unordered_map<int, std::vector<Site>> sites_cache;
    for (const auto& d : ds) {
        const int key = static_cast<int>(d.rule) * 2 + (d.directed ? 1 : 0);
        auto it = sites_cache.find(key);
        if (it == sites_cache.end())
            it = sites_cache.emplace(key, d.directed ? directed_sites(d.rule, s) : applicable_sites(d.rule, s)).first;
        for (const auto& site : it->second) {
            std::string step = std::string(rule_name(d.rule)) + "@" + site.to_string();
            if (!seen.insert({step, d.residual.to_string()}).second)
                continue;
            out.push_back({d.rule, site, apply_rule(d.rule, site, s), d.residual});
        }
    }
    return out;
}

bool is_minor(RuleId r) { return rule_info(r).minor; }

constexpr std::size_t kNodeLimit = 50000;

/// A non-minor rule that leaves the relation key unchanged is pending: it
/// merges into the next step that changes the key. Returns
/// {depth added, pending afterwards}.
std::pair<std::size_t, bool> step_cost(bool pending, RuleId rule, const std::string& key, const std::string& next_key)
{
    const bool pend = pending || !is_minor(rule);
    if (pend && next_key != key)
        return {1, false};
    return {0, pend};
}

struct Work {
    StateNode node;
    bool pending = false;
    std::string key;
};

std::vector<StateNode> generate(const Strategy& st, const EqSet& s, std::size_t max_depth, bool with_root)
{
    if (max_depth > kMaxDepth)
        throw DepthCapExceeded(static_cast<int>(max_depth));

    std::vector<std::vector<Work>> layers(max_depth + 1);
    layers[0].push_back(Work{StateNode{s, 0, {}, st}, false, relation_key(s)});
    std::unordered_set<std::string> expanded;
    std::size_t produced = 1;

    for (std::size_t d = 0; d <= max_depth; ++d) {
        auto& layer = layers[d];
        for (std::size_t i = 0; i < layer.size(); ++i) {
            const std::string id = render(layer[i].node.state) + "#" + layer[i].node.residual.to_string() +
                                   (layer[i].pending ? "#p" : "");
            if (!expanded.insert(id).second || produced >= kNodeLimit)
                continue;
            const Work w = layer[i];
            for (auto& c : continuations(w.node.residual, w.node.state)) {
                std::string key = relation_key(c.next);
                const auto [cost, pending] = step_cost(w.pending, c.rule, w.key, key);
                if (d + cost > max_depth)
                    continue;
                Work child{StateNode{std::move(c.next), d + cost, w.node.path, std::move(c.residual)},
                           pending, std::move(key)};
                child.node.path.push_back({c.rule, c.site});
                layers[child.node.depth].push_back(std::move(child));
                ++produced;
            }
        }
    }

    std::vector<StateNode> out;
    std::unordered_set<std::string> keys;
    for (std::size_t d = 0; d <= max_depth; ++d) {
        std::vector<StateNode> kept;
        for (auto& w : layers[d])
            if (!w.pending && keys.insert(w.key).second)
                kept.push_back(std::move(w.node));
        if (d == 0 && !with_root)
            continue;
        std::stable_sort(kept.begin(), kept.end(), [](const StateNode& a, const StateNode& b) {
            return render(a.state) < render(b.state);
        });
        if (d == 0 && !kept.empty())
            std::stable_partition(kept.begin(), kept.end(), [](const StateNode& n) { return n.path.empty(); });
        for (auto& n : kept)
            out.push_back(std::move(n));
    }
    return out;
}

} // namespace

std::vector<Continuation> firsts(const Strategy& st, const EqSet& s)
{
    std::vector<Continuation> out;
    for (auto& c : continuations(st, s)) {
        const bool dup = std::any_of(out.begin(), out.end(), [&](const Continuation& o) {
            return o.rule == c.rule && o.site == c.site;
        });
        if (!dup)
            out.push_back(std::move(c));
    }
    return out;
}

std::vector<StateNode> reachable_states(const Strategy& st, const EqSet& s, std::size_t max_depth)
{
    return generate(st, s, max_depth, false);
}

std::vector<StateNode> reachable_states_from_root(const Strategy& st, const EqSet& s, std::size_t max_depth)
{
    return generate(st, s, max_depth, true);
}

namespace {

bool strictly_solved(const EqSet& s)
{
    return is_solved_form(s) && applicable_sites(RuleId::Tidy, s).empty();
}

struct Search {
    std::size_t budget;
    std::vector<Step> path;
    std::vector<bool> counted;
    std::vector<EqSet> states;
    std::vector<Strategy> residuals;
    std::set<std::string> on_path;
    /// Relation keys of the states counted so far; model states stay
    /// pairwise distinguishable.
    std::set<std::string> counted_keys;

    bool dfs(const EqSet& s, const Strategy& residual, std::size_t used, bool pending, const std::string& key)
    {
        if (!pending && strictly_solved(s) && residual.nullable())
            return true;
        for (auto& c : continuations(residual, s)) {
            const std::string next_key = relation_key(c.next);
            const auto [inc, next_pending] = step_cost(pending, c.rule, key, next_key);
            const bool counts = inc == 1;
            const std::size_t cost = used + inc;
            if (cost > budget || (counts && counted_keys.contains(next_key)))
                continue;
            std::string id = render(c.next) + "#" + c.residual.to_string();
            if (on_path.contains(id))
                continue;
            on_path.insert(id);
            if (counts)
                counted_keys.insert(next_key);
            path.push_back({c.rule, c.site});
            counted.push_back(counts);
            states.push_back(c.next);
            residuals.push_back(c.residual);
            if (dfs(states.back(), residuals.back(), cost, next_pending, next_key))
                return true;
            path.pop_back();
            counted.pop_back();
            states.pop_back();
            residuals.pop_back();
            on_path.erase(id);
            if (counts)
                counted_keys.erase(next_key);
        }
        return false;
    }
};

} // namespace

ModelSolution model_solution(const EqSet& task, const Strategy& st)
{
    for (std::size_t budget = 0; budget <= kMaxDepth; ++budget) {
        Search search{budget, {}, {}, {}, {}, {render(task) + "#" + st.to_string()}, {relation_key(task)}};
        if (!search.dfs(task, st, 0, false, relation_key(task)))
            continue;

        // Counted steps open a new state; free steps right after one are
        // folded into it; other free steps join the next counted step.
        ModelSolution sol;
        sol.states.push_back(task);
        sol.residuals.push_back(st);
        std::vector<Step> carried;
        bool after_count = false;
        for (std::size_t i = 0; i < search.path.size(); ++i) {
            const Step& step = search.path[i];
            if (search.counted[i]) {
                carried.push_back(step);
                sol.steps.push_back(std::move(carried));
                carried.clear();
                sol.states.push_back(search.states[i]);
                sol.residuals.push_back(search.residuals[i]);
                after_count = true;
            } else if (after_count && is_minor(step.rule)) {
                sol.steps.back().push_back(step);
                sol.states.back() = search.states[i];
                sol.residuals.back() = search.residuals[i];
            } else {
                carried.push_back(step);
                after_count = false;
            }
        }
        return sol;
    }
    throw NoDerivation("no derivation to solved form for " + render(task));
}

Strategy tidy_wrap(const Strategy& st)
{
    struct Wrap {
        Strategy operator()(const Strategy& s) const
        {
            std::vector<Strategy> kids;
            for (const auto& c : s.children())
                kids.push_back((*this)(c));
            switch (s.kind()) {
            case StrategyKind::Apply:
                return Strategy::seq({s, Strategy::option(Strategy::apply(RuleId::Tidy))});
            case StrategyKind::Seq: return Strategy::seq(std::move(kids));
            case StrategyKind::Choice: return Strategy::choice(std::move(kids));
            case StrategyKind::Many: return Strategy::many(kids.front());
            case StrategyKind::Option: return Strategy::option(kids.front());
            case StrategyKind::Succeed: return s;
            }
            return s;
        }
    };
    return Strategy::seq({Strategy::option(Strategy::apply(RuleId::Tidy)), Wrap{}(st)});
}

namespace {

Strategy a(RuleId r) { return Strategy::apply(r, true); }

Strategy isolate()
{
    return Strategy::seq({
        Strategy::many(Strategy::choice({a(RuleId::MoveTerm), a(RuleId::CollectTerms)})),
        Strategy::many(Strategy::choice({a(RuleId::NegateBothSides), a(RuleId::DivByConst)})),
    });
}

Strategy linear_strategy()
{
    return Strategy::seq({
        Strategy::many(Strategy::choice({a(RuleId::MoveTerm), a(RuleId::CollectTerms), a(RuleId::Expand)})),
        Strategy::many(Strategy::choice({a(RuleId::NegateBothSides), a(RuleId::DivByConst)})),
    });
}

Strategy sqrt_strategy()
{
    return Strategy::seq({Strategy::option(a(RuleId::DivByConst)), a(RuleId::SqrtBothSides), isolate()});
}

Strategy factor_strategy()
{
    return Strategy::seq({
        Strategy::many(Strategy::choice({a(RuleId::MoveTerm), a(RuleId::CollectTerms)})),
        a(RuleId::FactorCommon),
        a(RuleId::SplitZeroProduct),
        isolate(),
    });
}

Strategy quadratic_formula_strategy()
{
    return Strategy::seq({
        Strategy::many(Strategy::choice({a(RuleId::MoveTerm), a(RuleId::CollectTerms), a(RuleId::Expand)})),
        a(RuleId::QuadraticFormula),
    });
}

/// k * A^2 = c (k possibly 1) with A containing x and c/k >= 0.
bool square_shape(const Expr& side, const Expr& other)
{
    if (!other.is_var_free())
        return false;
    ExactNumber c;
    try {
        c = constant_value(other);
    } catch (const Error&) {
        return false;
    }
    if (!c.is_rational())
        return false;
    Rational k(1);
    const Expr* square = nullptr;
    if (side.is(ExprKind::Pow)) {
        square = &side;
    } else if (side.is(ExprKind::Prod)) {
        ExactNumber kk(1);
        for (const auto& f : side.children()) {
            if (f.is_var_free()) {
                try {
                    kk *= constant_value(f);
                } catch (const Error&) {
                    return false;
                }
            } else if (square) {
                return false;
            } else {
                square = &f;
            }
        }
        if (!kk.is_rational() || kk.is_zero())
            return false;
        k = kk.rational_part();
    }
    if (!square || !square->is(ExprKind::Pow) || square->exponent() != 2 || square->operand().is_var_free())
        return false;
    return (c.rational_part() / k).sign() >= 0;
}

} // namespace

std::optional<NamedStrategy> strategy_by_name(std::string_view name)
{
    if (name == "linear")
        return NamedStrategy{"linear", tidy_wrap(linear_strategy())};
    if (name == "sqrt")
        return NamedStrategy{"sqrt", tidy_wrap(sqrt_strategy())};
    if (name == "factor")
        return NamedStrategy{"factor", tidy_wrap(factor_strategy())};
    if (name == "quadratic-formula")
        return NamedStrategy{"quadratic-formula", tidy_wrap(quadratic_formula_strategy())};
    return std::nullopt;
}

NamedStrategy select_strategy(const EqSet& task)
{
    std::size_t deg = 0;
    for (const auto& e : task.equations()) {
        Poly p = expand(e);
        deg = std::max(deg, degree(p));
    }
    if (deg > 2)
        throw DegreeTooHigh(deg);
    if (deg <= 1)
        return *strategy_by_name("linear");
    if (task.size() == 1) {
        const Equation& e = task[0];
        if (square_shape(e.lhs, e.rhs) || square_shape(e.rhs, e.lhs))
            return *strategy_by_name("sqrt");
        Poly p = expand(e);
        const bool no_constant = p[0].is_zero();
        const bool has_linear = p.size() > 1 && !p[1].is_zero();
        if (no_constant && has_linear)
            return *strategy_by_name("factor");
    }
    return *strategy_by_name("quadratic-formula");
}

} // namespace reasoner
