#include "reasoner/algebra.hpp"
#include "reasoner/diagnosis.hpp"
#include "reasoner/http_server.hpp"
#include "reasoner/rules.hpp"
#include "reasoner/service.hpp"
#include "reasoner/strategy.hpp"
#include "reasoner/syntax.hpp"

#include "CLI11.hpp"

#include <csignal>
#include <fstream>
#include <iostream>

using namespace reasoner;

namespace {

HttpServer* active_server = nullptr;

void on_signal(int)
{
    if (active_server)
        active_server->stop();
}

int cmd_serve(const std::string& host, int port, const std::string& data_dir, std::size_t lookahead)
{
    Service service(data_dir, lookahead);
    HttpServer server(service);
    const int bound = server.bind(host, port);
    if (bound < 0) {
        std::cerr << "cannot bind " << host << ":" << port << "\n";
        return 1;
    }
    active_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "listening on " << host << ":" << bound << " (data dir " << data_dir << ")" << std::endl;
    server.run();
    active_server = nullptr;
    return 0;
}

int cmd_solve(const std::string& text, const std::string& strategy_name)
{
    const EqSet task = parse_eqset(text);
    NamedStrategy st = strategy_name == "auto" ? select_strategy(task) : *strategy_by_name(strategy_name);
    const ModelSolution sol = model_solution(task, st.strategy);
    std::cout << "strategy: " << st.name << "\n";
    for (std::size_t i = 0; i < sol.states.size(); ++i) {
        std::cout << i << ": " << render(sol.states[i]);
        if (i > 0) {
            std::cout << "   [";
            for (std::size_t k = 0; k < sol.steps[i - 1].size(); ++k)
                std::cout << (k ? ", " : "") << rule_name(sol.steps[i - 1][k].rule);
            std::cout << "]";
        }
        std::cout << "\n";
    }
    return 0;
}

int cmd_diagnose(const std::string& task_text, const std::string& prev_text, const std::string& input_text,
                 std::size_t lookahead)
{
    const EqSet task = parse_eqset(task_text);
    const EqSet prev = parse_eqset(prev_text.empty() ? task_text : prev_text);
    const EqSet input = parse_eqset(input_text);
    const NamedStrategy st = select_strategy(task);
    Diagnosis d = diagnose_step(task, st, prev, input, lookahead);
    json out = to_json(d);
    out["strategy"] = st.name;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_batch(const std::string& file, std::size_t lookahead, const std::string& summary, bool as_json)
{
    BatchReport report = batch_eval(std::filesystem::path(file), lookahead);
    if (as_json)
        std::cout << report.to_json().dump(2) << "\n";
    else
        std::cout << report.to_text();
    if (!summary.empty()) {
        std::ofstream out(summary);
        out << report.to_json().dump(2) << "\n";
        if (!out) {
            std::cerr << "cannot write " << summary << "\n";
            return 1;
        }
    }
    return 0;
}

int cmd_rules_list()
{
    for (const auto& r : rule_catalog())
        std::cout << r.name << (r.minor ? " (minor)" : "") << "\t" << r.description << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Stepwise diagnosis of quadratic-equation solutions"};
    app.require_subcommand(1);

    std::size_t lookahead = kDefaultLookahead;
    auto check_lookahead = CLI::Range(std::size_t{1}, kMaxDepth);

    auto* serve = app.add_subcommand("serve", "run the HTTP JSON service");
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string data_dir = "data";
    serve->add_option("--host", host, "interface to bind")->capture_default_str();
    serve->add_option("--port", port, "port to listen on (0 picks a free port)")->capture_default_str();
    serve->add_option("--data-dir", data_dir, "directory for session logs")->capture_default_str();
    serve->add_option("--max-lookahead", lookahead, "lookahead depth")->check(check_lookahead)->capture_default_str();

    auto* solve = app.add_subcommand("solve", "print the model solution of an equation");
    std::string equation;
    std::string strategy_name = "auto";
    solve->add_option("equation", equation, "equation to solve")->required();
    solve->add_option("--strategy", strategy_name, "strategy to use")
        ->check(CLI::IsMember({"auto", "linear", "sqrt", "factor", "quadratic-formula"}))
        ->capture_default_str();

    auto* diag = app.add_subcommand("diagnose", "diagnose one step");
    std::string task_text, prev_text, input_text;
    diag->add_option("--task", task_text, "task equation")->required();
    diag->add_option("--prev", prev_text, "previous state (defaults to the task)");
    diag->add_option("--input", input_text, "student input")->required();
    diag->add_option("--max-lookahead", lookahead, "lookahead depth")->check(check_lookahead)->capture_default_str();

    auto* batch = app.add_subcommand("batch", "replay a JSON-lines log of steps");
    std::string batch_file, summary_file;
    bool batch_json = false;
    batch->add_option("file", batch_file, "log file")->required()->check(CLI::ExistingFile);
    batch->add_option("--max-lookahead", lookahead, "lookahead depth")->check(check_lookahead)->capture_default_str();
    batch->add_option("--summary", summary_file, "also write the JSON summary to this path");
    batch->add_flag("--json", batch_json, "print the JSON summary instead of text");

    auto* rules = app.add_subcommand("rules", "rule catalog");
    rules->require_subcommand(1);
    auto* rules_list = rules->add_subcommand("list", "list all rules");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*serve)
            return cmd_serve(host, port, data_dir, lookahead);
        if (*solve)
            return cmd_solve(equation, strategy_name);
        if (*diag)
            return cmd_diagnose(task_text, prev_text, input_text, lookahead);
        if (*batch)
            return cmd_batch(batch_file, lookahead, summary_file, batch_json);
        if (*rules_list)
            return cmd_rules_list();
    } catch (const SyntaxError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const VariableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
