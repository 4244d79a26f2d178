// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "generators.hpp"
#include "properties.hpp"
#include "reasoner/algebra.hpp"
#include "reasoner/diagnosis.hpp"
#include "reasoner/service.hpp"
#include "reasoner/strategy.hpp"
#include "reasoner/syntax.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <unistd.h>

using namespace reasoner;
namespace dg = reasoner::diagnosis;

namespace {

// Pinned thresholds.
constexpr double kGoldenBudgetMs = 1000.0;
constexpr std::size_t kMinTasks = 200;
constexpr std::size_t kMinVariants = 1000;
constexpr std::size_t kPairSpan = 4;
constexpr double kP99BudgetMs = 50.0;
constexpr double kMaxBudgetMs = 550.0;
constexpr std::size_t kLookahead = 5;
constexpr std::size_t kRandomPairs = 500;
constexpr std::size_t kLogLines = 100;

constexpr std::uint64_t kTaskSeed = 20261016;
constexpr std::size_t kTaskCount = 600;

int failures = 0;

void line(bool ok, const std::string& name, const std::string& detail)
{
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
    failures += ok ? 0 : 1;
}

double since_ms(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void golden_walkthrough()
{
    const auto t0 = std::chrono::steady_clock::now();
    const EqSet task = parse_eqset("(-x+1)^2 = 9");
    const NamedStrategy st = select_strategy(task);
    const ModelSolution sol = model_solution(task, st.strategy);

    std::vector<std::string> states;
    for (const auto& s : sol.states)
        states.push_back(render(s));
    const std::vector<std::string> expected = {"(-x+1)^2 = 9", "-x + 1 = 3 or -x + 1 = -3", "-x = 2 or -x = -4",
                                               "x = -2 or x = 4"};
    std::string problems;
    if (st.name != "sqrt")
        problems += " strategy=" + st.name;
    if (states != expected)
        problems += " model solution differs";

    auto d = [&](const char* input) { return diagnose(task, parse_eqset(input), st.strategy, task, kLookahead); };
    auto zero = d("(-x+1)^2 - 9 = 0");
    auto* z = std::get_if<dg::Deviation>(&zero);
    if (!z || z->relation != RelationId::ExpectedZeroDerivation)
        problems += " zero-derivation case=" + std::string(diagnosis_class(zero));
    auto expanded = d("x^2 - 2*x - 8 = 0");
    auto* e = std::get_if<dg::Deviation>(&expanded);
    if (!e || e->relation != RelationId::ExpectedNormalForm)
        problems += " expansion case=" + std::string(diagnosis_class(expanded));
    auto variant = d("1 - x = 3 or 1 - x = -3");
    auto* v = std::get_if<dg::Correct>(&variant);
    if (!v || !v->is_variant || v->steps_combined != 1)
        problems += " variant case=" + std::string(diagnosis_class(variant));
    auto fin = d("x = -2 or x = 4");
    if (!std::holds_alternative<dg::Finished>(fin))
        problems += " final case=" + std::string(diagnosis_class(fin));

    const double ms = since_ms(t0);
    if (ms >= kGoldenBudgetMs)
        problems += " too slow";
    std::ostringstream os;
    os << "4 states, 3 inputs and final answer in " << ms << " ms (budget " << kGoldenBudgetMs << " ms)"
       << problems;
    line(problems.empty(), "golden walkthrough", os.str());
}

struct Multistep {
    std::size_t tasks = 0;
    std::size_t pairs = 0;
    std::size_t pair_failures = 0;
    std::size_t variants = 0;
    std::size_t variant_failures = 0;
    std::vector<double> timings_ms;
    std::vector<std::string> examples;
};

Multistep run_multistep()
{
    Multistep m;
    std::mt19937_64 rng(7);
    for (const auto& t : testsupport::generate_tasks(kTaskSeed, kTaskCount)) {
        ++m.tasks;
        ModelSolution sol;
        try {
            sol = model_solution(t.task, select_strategy(t.task).strategy);
        } catch (const std::exception& ex) {
            ++m.pair_failures;
            m.examples.push_back(t.text + ": " + ex.what());
            continue;
        }
        const std::size_t n = sol.states.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n && j <= i + kPairSpan; ++j) {
                ++m.pairs;
                const auto t0 = std::chrono::steady_clock::now();
                Diagnosis d = diagnose(sol.states[i], sol.states[j], sol.residuals[i], t.task, kLookahead);
                m.timings_ms.push_back(since_ms(t0));
                bool ok;
                if (j == n - 1) {
                    // The final answer is reported as Finished; the strategy
                    // match behind it must still count j - i steps.
                    Diagnosis s = match_step(sol.states[i], sol.states[j], sol.residuals[i], kLookahead);
                    auto* c = std::get_if<dg::Correct>(&s);
                    ok = std::holds_alternative<dg::Finished>(d) && c && c->steps_combined == j - i;
                } else {
                    auto* c = std::get_if<dg::Correct>(&d);
                    ok = c && c->steps_combined == j - i;
                }
                if (!ok) {
                    ++m.pair_failures;
                    if (m.examples.size() < 5)
                        m.examples.push_back(render(sol.states[i]) + " -> " + render(sol.states[j]) + ": " +
                                             std::string(diagnosis_class(d)));
                }
                if (j == n - 1)
                    continue;
                std::vector<EqSet> seen{sol.states[j]};
                for (int k = 0; k < 8 && seen.size() <= 4; ++k) {
                    EqSet mutated = testsupport::mutate(sol.states[j], rng);
                    if (std::find(seen.begin(), seen.end(), mutated) != seen.end())
                        continue;
                    seen.push_back(mutated);
                    ++m.variants;
                    const auto t1 = std::chrono::steady_clock::now();
                    Diagnosis dv = diagnose(sol.states[i], mutated, sol.residuals[i], t.task, kLookahead);
                    m.timings_ms.push_back(since_ms(t1));
                    auto* c = std::get_if<dg::Correct>(&dv);
                    if (!(c && c->is_variant && c->steps_combined == j - i)) {
                        ++m.variant_failures;
                        if (m.examples.size() < 5)
                            m.examples.push_back("variant " + render(mutated) + ": " +
                                                 std::string(diagnosis_class(dv)));
                    }
                }
            }
    }
    return m;
}

void report_multistep(const Multistep& m)
{
    std::ostringstream os;
    os << m.pairs - m.pair_failures << "/" << m.pairs << " pairs over " << m.tasks << " tasks (need >= " << kMinTasks
       << " tasks, 100%)";
    for (const auto& e : m.examples)
        os << "; " << e;
    line(m.tasks >= kMinTasks && m.pairs > 0 && m.pair_failures == 0, "multistep suite", os.str());

    std::ostringstream vs;
    vs << m.variants - m.variant_failures << "/" << m.variants << " mutated states (need >= " << kMinVariants
       << ", 100%)";
    line(m.variants >= kMinVariants && m.variant_failures == 0, "variant robustness", vs.str());

    BatchReport timing;
    timing.timings_ms = m.timings_ms;
    std::ostringstream ts;
    ts << timing.timings_ms.size() << " diagnoses at lookahead " << kLookahead << ": mean " << timing.mean_ms()
       << " ms, p99 " << timing.percentile_ms(99) << " ms (< " << kP99BudgetMs << "), max " << timing.max_ms()
       << " ms (< " << kMaxBudgetMs << ")";
    line(!timing.timings_ms.empty() && timing.percentile_ms(99) < kP99BudgetMs && timing.max_ms() < kMaxBudgetMs,
         "latency", ts.str());
}

void oracle_equivalence()
{
    using testsupport::Coeffs;
    auto as_eq = [](const Coeffs& c) { return parse_eqset(testsupport::poly_text(c) + " = 0"); };
    std::size_t cases = 0, agree = 0;

    std::vector<Coeffs> monic;
    for (int r1 = -5; r1 <= 5; ++r1)
        for (int r2 = r1; r2 <= 5; ++r2)
            monic.push_back({r1 * r2, -(r1 + r2), 1});
    for (const auto& a : monic)
        for (const auto& b : monic) {
            ++cases;
            const bool oracle = testsupport::trial_roots(a, -5, 5) == testsupport::trial_roots(b, -5, 5);
            agree += equivalent(as_eq(a), as_eq(b)) == oracle;
        }

    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::int64_t> coef(-9, 9);
    for (std::size_t i = 0; i < kRandomPairs; ++i) {
        Coeffs a{coef(rng), coef(rng), coef(rng)};
        // Every other pair is a scaled copy so agreement is not all "false".
        Coeffs b = i % 2 ? Coeffs{coef(rng), coef(rng), coef(rng)} : Coeffs{a[0] * 3, a[1] * 3, a[2] * 3};
        ++cases;
        const bool oracle = testsupport::oracle_roots(a) == testsupport::oracle_roots(b);
        agree += equivalent(as_eq(a), as_eq(b)) == oracle;
    }
    std::ostringstream os;
    os << agree << "/" << cases << " pairs agree (" << monic.size() << " monic quadratics pairwise + "
       << kRandomPairs << " random pairs, 100%)";
    line(agree == cases, "oracle equivalence", os.str());
}

void dataset_replay()
{
    const std::filesystem::path log = std::filesystem::path(TEST_DATA_DIR) / "synthetic_log.jsonl";
    BatchReport r = batch_eval(log, kLookahead);
    std::map<std::string, std::size_t> labels;
    std::ifstream in(log);
    for (std::string l; std::getline(in, l);)
        if (!l.empty())
            ++labels[json::parse(l).value("label", "")];
    bool counts_match = true;
    for (const auto& [label, n] : labels)
        counts_match &= r.counts.contains(label) && r.counts.at(label) == n;
    std::ostringstream os;
    os << "total " << r.total << ", correct " << r.counts["correct"] << ", deviation-1 " << r.counts["deviation-1"]
       << ", deviation-3 " << r.counts["deviation-3"] << ", label agreement " << r.label_agreement << "/"
       << r.labeled;
    line(r.total == kLogLines && counts_match && r.labeled == kLogLines && r.label_agreement == kLogLines,
         "dataset replay", os.str());
}

void property_suites()
{
    const auto scratch = std::filesystem::temp_directory_path() / ("reasoner-acceptance-" + std::to_string(::getpid()));
    const std::vector<testsupport::PropertyResult> results = {
        testsupport::nf_idempotence(101, 120),  testsupport::rule_equivalence(102, 80),
        testsupport::bfs_minimality(103, 80, 4), testsupport::relation_order(104, 240),
        testsupport::crash_replay(105, 40, scratch),    testsupport::round_trip(106, 120),
    };
    bool ok = true;
    std::ostringstream os;
    for (const auto& r : results) {
        ok &= r.ok();
        os << (os.tellp() > 0 ? ", " : "") << r.name << " " << r.cases - r.failures << "/" << r.cases;
        for (const auto& e : r.examples)
            os << " [" << e << "]";
    }
    line(ok, "property suites", os.str());
}

} // namespace

int main()
{
    golden_walkthrough();
    report_multistep(run_multistep());
    oracle_equivalence();
    dataset_replay();
    property_suites();
    return failures == 0 ? 0 : 1;
}
