#pragma once

#include "reasoner/diagnosis.hpp"
#include "reasoner/errors.hpp"
#include "reasoner/expr.hpp"
#include "reasoner/strategy.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

namespace reasoner {

using json = nlohmann::json;

class SessionNotFound : public Error {
public:
    explicit SessionNotFound(const std::string& id) : Error("no session with id '" + id + "'") {}
};

/// "green", "yellow" or "red".
std::string_view tier(const Diagnosis& d);

json to_json(const Diagnosis& d);
json to_json(const Hint& h);

struct Event {
    std::int64_t timestamp_ms = 0;
    /// "created", "step" or "hint".
    std::string kind;
    json payload;

    friend bool operator==(const Event&, const Event&) = default;
};

struct Session {
    std::string id;
    EqSet task;
    NamedStrategy strategy;
    std::vector<EqSet> accepted_states;
    /// Canonical position the next step is diagnosed from.
    Cursor cursor;
    std::vector<Event> events;

    json summary() const;

    friend bool operator==(const Session& a, const Session& b);
};

/// Sessions kept in memory and persisted as one append-only JSON-lines
/// event log per session under <data_dir>/sessions/.
class Service {
public:
    explicit Service(std::filesystem::path data_dir, std::size_t max_lookahead = kDefaultLookahead);

    /// {"id", "task", "strategy"}. Throws SyntaxError, VariableError,
    /// DegreeTooHigh.
    json create_session(const std::string& task_text);

    /// Diagnosis record with "class" and "tier".
    json post_step(const std::string& id, const std::string& input_text);

    /// {"rule", "description", "result_state"}. Throws StrategyExhausted.
    json get_hint(const std::string& id);

    json get_session(const std::string& id);

    /// Copy of the in-memory session, loading it from disk if needed.
    Session snapshot(const std::string& id);

    /// Rebuilds a session from its event log.
    static Session replay(const std::filesystem::path& log, std::size_t max_lookahead = kDefaultLookahead);

    const std::filesystem::path& data_dir() const { return data_dir_; }

private:
    struct Entry {
        explicit Entry(Session s) : session(std::move(s)) {}
        std::mutex mutex;
        Session session;
    };

    std::shared_ptr<Entry> entry(const std::string& id);
    std::filesystem::path log_path(const std::string& id) const;
    void append(Session& s, const std::string& kind, json payload);

    std::filesystem::path data_dir_;
    std::size_t max_lookahead_;
    std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

struct BatchReport {
    std::size_t total = 0;
    /// correct, finished, deviation-1, deviation-2, deviation-3,
    /// not-equivalent, unknown, error.
    std::map<std::string, std::size_t> counts;
    /// Per-record class in input order ("error" for failed records).
    std::vector<std::string> classes;
    /// Records carrying a "label" field, and how many of them agree.
    std::size_t labeled = 0;
    std::size_t label_agreement = 0;
    std::vector<std::string> errors;
    std::vector<double> timings_ms;

    double mean_ms() const;
    double max_ms() const;
    /// Nearest-rank percentile, p in (0, 100].
    double percentile_ms(double p) const;

    std::string to_text() const;
    json to_json() const;
};

/// Class key of a diagnosis as counted in a BatchReport.
std::string batch_class(const Diagnosis& d);

/// Replays line-delimited {"task", "prev"?, "input", "label"?} records.
BatchReport batch_eval(std::istream& in, std::size_t max_lookahead = kDefaultLookahead);
BatchReport batch_eval(const std::filesystem::path& log, std::size_t max_lookahead = kDefaultLookahead);

/// Diagnoses one step of `task`: locates prev in the strategy's derivation
/// space and diagnoses from there.
Diagnosis diagnose_step(const EqSet& task, const NamedStrategy& st, const EqSet& prev, const EqSet& input,
                        std::size_t max_lookahead = kDefaultLookahead);

} // namespace reasoner
