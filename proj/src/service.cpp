#include "reasoner/service.hpp"

#include "reasoner/algebra.hpp"
#include "reasoner/syntax.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

namespace reasoner {

std::string_view tier(const Diagnosis& d)
{
    if (std::holds_alternative<diagnosis::Correct>(d) || std::holds_alternative<diagnosis::Finished>(d))
        return "green";
    if (std::holds_alternative<diagnosis::NotEquivalent>(d))
        return "red";
    return "yellow";
}

json to_json(const Diagnosis& d)
{
    json out = {{"class", diagnosis_class(d)}, {"tier", tier(d)}};
    if (auto c = std::get_if<diagnosis::Correct>(&d)) {
        out["steps_combined"] = c->steps_combined;
        json rules = json::array();
        for (auto r : c->rules)
            rules.push_back(rule_name(r));
        out["rules"] = rules;
        out["is_variant"] = c->is_variant;
        out["matched_state"] = render(c->matched_state);
    } else if (auto f = std::get_if<diagnosis::Finished>(&d)) {
        out["solution"] = render(f->solution);
    } else if (auto v = std::get_if<diagnosis::Deviation>(&d)) {
        out["relation"] = static_cast<int>(v->relation);
        out["relation_name"] = relation_name(v->relation);
        out["feedback_code"] = v->feedback_code;
        out["best_candidate"] = render(v->best_candidate);
        out["detail"] = v->detail;
    }
    return out;
}

json to_json(const Hint& h)
{
    return {{"rule", rule_name(h.rule)},
            {"site", h.site.to_string()},
            {"description", h.description},
            {"result_state", render(h.result_state)}};
}

json Session::summary() const
{
    json states = json::array();
    for (const auto& s : accepted_states)
        states.push_back(render(s));
    return {{"id", id},
            {"task", render(task)},
            {"strategy", strategy.name},
            {"accepted_states", states},
            {"current_state", render(cursor.state)},
            {"finished", cursor.residual.kind() == StrategyKind::Succeed && is_solved_form(cursor.state)},
            {"events", events.size()}};
}

bool operator==(const Session& a, const Session& b)
{
    return a.id == b.id && a.task == b.task && a.strategy.name == b.strategy.name &&
           a.strategy.strategy == b.strategy.strategy && a.accepted_states == b.accepted_states &&
           a.cursor.state == b.cursor.state && a.cursor.residual == b.cursor.residual && a.events == b.events;
}

namespace {

std::int64_t now_ms()
{
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::string new_session_id()
{
    static std::mutex m;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(m);
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << rng();
    return os.str();
}

bool valid_id(const std::string& id)
{
    return !id.empty() && id.size() <= 64 &&
           std::all_of(id.begin(), id.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); });
}

Session new_session(std::string id, const EqSet& task, NamedStrategy st)
{
    Session s{std::move(id), task, st, {task}, Cursor{task, st.strategy}, {}};
    return s;
}

/// Moves the session forward after an accepted step.
void advance(Session& s, const EqSet& input, const Diagnosis& d)
{
    if (auto c = std::get_if<diagnosis::Correct>(&d)) {
        s.accepted_states.push_back(input);
        s.cursor = Cursor{c->matched_state, c->residual};
    } else if (std::holds_alternative<diagnosis::Finished>(d)) {
        s.accepted_states.push_back(input);
        s.cursor = Cursor{input, Strategy::succeed()};
    }
}

Diagnosis diagnose_in(const Session& s, const EqSet& input, std::size_t max_lookahead)
{
    return diagnose(s.cursor.state, input, s.cursor.residual, s.task, max_lookahead);
}

} // namespace

Service::Service(std::filesystem::path data_dir, std::size_t max_lookahead)
    : data_dir_(std::move(data_dir)), max_lookahead_(max_lookahead)
{
    std::filesystem::create_directories(data_dir_ / "sessions");
}

std::filesystem::path Service::log_path(const std::string& id) const
{
    return data_dir_ / "sessions" / (id + ".jsonl");
}

void Service::append(Session& s, const std::string& kind, json payload)
{
    const std::int64_t last = s.events.empty() ? 0 : s.events.back().timestamp_ms;
    Event ev{std::max(now_ms(), last), kind, std::move(payload)};
    json line = {{"ts", ev.timestamp_ms}, {"kind", ev.kind}, {"payload", ev.payload}};
    std::ofstream out(log_path(s.id), std::ios::app);
    out << line.dump() << '\n';
    out.flush();
    if (!out)
        throw Error("cannot write session log " + log_path(s.id).string());
    s.events.push_back(std::move(ev));
}

std::shared_ptr<Service::Entry> Service::entry(const std::string& id)
{
    if (!valid_id(id))
        throw SessionNotFound(id);
    {
        std::shared_lock lock(sessions_mutex_);
        auto it = sessions_.find(id);
        if (it != sessions_.end())
            return it->second;
    }
    const auto path = log_path(id);
    if (!std::filesystem::exists(path))
        throw SessionNotFound(id);
    auto loaded = std::make_shared<Entry>(replay(path, max_lookahead_));
    std::unique_lock lock(sessions_mutex_);
    auto [it, inserted] = sessions_.emplace(id, loaded);
    return it->second;
}

json Service::create_session(const std::string& task_text)
{
    const EqSet task = parse_eqset(task_text);
    NamedStrategy st = select_strategy(task);
    std::string id = new_session_id();
    while (std::filesystem::exists(log_path(id)))
        id = new_session_id();
    auto e = std::make_shared<Entry>(new_session(id, task, st));
    {
        std::lock_guard guard(e->mutex);
        append(e->session, "created", {{"id", id}, {"task", task_text}, {"strategy", st.name}});
    }
    {
        std::unique_lock lock(sessions_mutex_);
        sessions_.emplace(id, e);
    }
    return {{"id", id}, {"task", render(task)}, {"strategy", st.name}};
}

json Service::post_step(const std::string& id, const std::string& input_text)
{
    auto e = entry(id);
    const EqSet input = parse_eqset(input_text);
    std::lock_guard guard(e->mutex);
    Session& s = e->session;
    Diagnosis d = diagnose_in(s, input, max_lookahead_);
    json record = to_json(d);
    append(s, "step", {{"input", input_text}, {"diagnosis", record}});
    advance(s, input, d);
    return record;
}

json Service::get_hint(const std::string& id)
{
    auto e = entry(id);
    std::lock_guard guard(e->mutex);
    Session& s = e->session;
    json record = to_json(hint(s.cursor.state, s.cursor.residual));
    append(s, "hint", {{"hint", record}});
    return record;
}

json Service::get_session(const std::string& id)
{
    auto e = entry(id);
    std::lock_guard guard(e->mutex);
    return e->session.summary();
}

Session Service::snapshot(const std::string& id)
{
    auto e = entry(id);
    std::lock_guard guard(e->mutex);
    return e->session;
}

Session Service::replay(const std::filesystem::path& log, std::size_t max_lookahead)
{
    std::ifstream in(log);
    if (!in)
        throw Error("cannot read session log " + log.string());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
        if (!line.empty())
            lines.push_back(std::move(line));
    std::optional<Session> s;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        json rec = json::parse(lines[i], nullptr, false);
        if (rec.is_discarded()) {
            // A torn final line is a write cut short by a crash.
            if (i + 1 == lines.size())
                break;
            throw Error("corrupt session log " + log.string());
        }
        Event ev{rec.at("ts").get<std::int64_t>(), rec.at("kind").get<std::string>(), rec.at("payload")};
        if (ev.kind == "created") {
            const EqSet task = parse_eqset(ev.payload.at("task").get<std::string>());
            auto st = strategy_by_name(ev.payload.at("strategy").get<std::string>());
            if (!st)
                throw Error("unknown strategy in session log " + log.string());
            s = new_session(ev.payload.at("id").get<std::string>(), task, *st);
        } else if (!s) {
            throw Error("session log does not start with a created event: " + log.string());
        } else if (ev.kind == "step") {
            const EqSet input = parse_eqset(ev.payload.at("input").get<std::string>());
            advance(*s, input, diagnose_in(*s, input, max_lookahead));
        }
        s->events.push_back(std::move(ev));
    }
    if (!s)
        throw Error("empty session log " + log.string());
    return *s;
}

// ---------------------------------------------------------------------------
// Batch replay

std::string batch_class(const Diagnosis& d)
{
    if (auto v = std::get_if<diagnosis::Deviation>(&d))
        return "deviation-" + std::to_string(static_cast<int>(v->relation));
    return std::string(diagnosis_class(d));
}

Diagnosis diagnose_step(const EqSet& task, const NamedStrategy& st, const EqSet& prev, const EqSet& input,
                        std::size_t max_lookahead)
{
    auto cursor = locate(task, st.strategy, prev);
    if (!cursor)
        return diagnose(prev, input, st.strategy, task, max_lookahead);
    return diagnose(cursor->state, input, cursor->residual, task, max_lookahead);
}

namespace {

const std::vector<std::string>& class_keys()
{
    static const std::vector<std::string> keys = {"correct",        "finished", "deviation-1", "deviation-2",
                                                  "deviation-3",    "not-equivalent", "unknown", "error"};
    return keys;
}

} // namespace

double BatchReport::mean_ms() const
{
    if (timings_ms.empty())
        return 0.0;
    return std::accumulate(timings_ms.begin(), timings_ms.end(), 0.0) / static_cast<double>(timings_ms.size());
}

double BatchReport::max_ms() const
{
    return timings_ms.empty() ? 0.0 : *std::max_element(timings_ms.begin(), timings_ms.end());
}

double BatchReport::percentile_ms(double p) const
{
    if (timings_ms.empty())
        return 0.0;
    std::vector<double> sorted = timings_ms;
    std::sort(sorted.begin(), sorted.end());
    auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(sorted.size())));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

std::string BatchReport::to_text() const
{
    std::ostringstream os;
    os << "total: " << total << '\n';
    for (const auto& k : class_keys())
        os << k << ": " << counts.at(k) << '\n';
    os << std::fixed << std::setprecision(3);
    os << "timing_ms: mean=" << mean_ms() << " max=" << max_ms() << " p50=" << percentile_ms(50)
       << " p90=" << percentile_ms(90) << " p99=" << percentile_ms(99) << '\n';
    if (labeled > 0)
        os << "label_agreement: " << label_agreement << "/" << labeled << '\n';
    for (const auto& e : errors)
        os << "error: " << e << '\n';
    return os.str();
}

json BatchReport::to_json() const
{
    json c = json::object();
    for (const auto& k : class_keys())
        c[k] = counts.at(k);
    return {{"total", total},
            {"counts", c},
            {"timing_ms",
             {{"mean", mean_ms()},
              {"max", max_ms()},
              {"p50", percentile_ms(50)},
              {"p90", percentile_ms(90)},
              {"p99", percentile_ms(99)}}},
            {"labeled", labeled},
            {"label_agreement", label_agreement},
            {"errors", errors}};
}

BatchReport batch_eval(std::istream& in, std::size_t max_lookahead)
{
    BatchReport report;
    for (const auto& k : class_keys())
        report.counts[k] = 0;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::string cls;
        std::optional<std::string> label;
        try {
            json rec = json::parse(line);
            if (rec.contains("label"))
                label = rec.at("label").get<std::string>();
            const std::string task_text = rec.at("task").get<std::string>();
            const EqSet task = parse_eqset(task_text);
            const EqSet prev = parse_eqset(rec.value("prev", task_text));
            const EqSet input = parse_eqset(rec.at("input").get<std::string>());
            const NamedStrategy st = select_strategy(task);

            const auto t0 = std::chrono::steady_clock::now();
            Diagnosis d = diagnose_step(task, st, prev, input, max_lookahead);
            const auto t1 = std::chrono::steady_clock::now();
            report.timings_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
            cls = batch_class(d);
        } catch (const std::exception& e) {
            cls = "error";
            report.errors.push_back("line " + std::to_string(line_no) + ": " + e.what());
        }
        ++report.total;
        ++report.counts[cls];
        report.classes.push_back(cls);
        if (label) {
            ++report.labeled;
            if (*label == cls)
                ++report.label_agreement;
        }
    }
    return report;
}

BatchReport batch_eval(const std::filesystem::path& log, std::size_t max_lookahead)
{
    std::ifstream in(log);
    if (!in)
        throw Error("cannot read batch log " + log.string());
    return batch_eval(in, max_lookahead);
}

} // namespace reasoner
