// gazeplan command-line front end: run scenarios, compute metrics, compare
// the planned and reactive systems, check traces against goldens, and serve
// live sessions.

#include "gazeplan/error.hpp"
#include "gazeplan/events/scenario_io.hpp"
#include "gazeplan/planner/config.hpp"
#include "gazeplan/service/server.hpp"
#include "gazeplan/sim/metrics.hpp"
#include "gazeplan/sim/simulator.hpp"
#include "gazeplan/sim/trace.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace gazeplan;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

Server* g_server = nullptr;

extern "C" void on_signal(int) {
    if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rolling-horizon robot gaze planner and simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "JSON file of planner/controller parameter overrides")
        ->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Override the scenario seed");

    // Lets --config/--seed also appear after the subcommand.
    app.fallthrough();

    auto* run = app.add_subcommand("run", "Simulate a scenario and write its trace (JSON lines)");
    std::string run_scenario_path;
    std::string run_system = "planned";
    std::string run_out;
    run->add_option("--scenario", run_scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
    run->add_option("--system", run_system, "planned or reactive")
        ->check(CLI::IsMember({"planned", "reactive"}));
    run->add_option("--out", run_out, "Trace output file (default: stdout)");

    auto* metrics = app.add_subcommand("metrics", "Compute metrics from a trace");
    std::string metrics_trace;
    std::string metrics_out;
    metrics->add_option("--trace", metrics_trace, "Trace file")->required()->check(CLI::ExistingFile);
    metrics->add_option("--out", metrics_out, "Metrics output file (default: stdout)");

    auto* compare = app.add_subcommand("compare", "Run both systems and report metrics side by side");
    std::string compare_scenario;
    std::string compare_out;
    compare->add_option("--scenario", compare_scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    compare->add_option("--out", compare_out, "Output file (default: stdout)");

    auto* verify = app.add_subcommand("verify", "Compare a trace with a golden trace");
    std::string verify_trace;
    std::string verify_golden;
    verify->add_option("--trace", verify_trace, "Trace file")->required()->check(CLI::ExistingFile);
    verify->add_option("--golden", verify_golden, "Golden trace file")->required()->check(CLI::ExistingFile);

    auto* serve = app.add_subcommand("serve", "Serve live sessions over WebSocket");
    ServerOptions server_options;
    int tick_ms = 200;
    serve->add_option("--port", server_options.port, "TCP port (0 picks a free one)");
    serve->add_option("--bind", server_options.bind_address, "IPv4 address to bind");
    serve->add_option("--tick-ms", tick_ms, "Real-time tick period in ms")->check(CLI::Range(10, 10000));

    CLI11_PARSE(app, argc, argv);

    try {
        EngineConfig config;
        if (!config_path.empty()) config = load_config_file(config_path);

        if (*run) {
            const Scenario scenario = parse_scenario(read_file(run_scenario_path));
            const auto system = *system_from_string(run_system);
            write_output(run_out, trace_to_jsonl(run_scenario(scenario, system, config, seed)));
        } else if (*metrics) {
            const auto trace = parse_trace_jsonl(read_file(metrics_trace));
            write_output(metrics_out, metrics_to_json(compute_metrics(trace)).dump(2) + "\n");
        } else if (*compare) {
            const Scenario scenario = parse_scenario(read_file(compare_scenario));
            const auto planned = compute_metrics(run_scenario(scenario, SystemKind::Planned, config, seed));
            const auto reactive = compute_metrics(run_scenario(scenario, SystemKind::Reactive, config, seed));
            write_output(compare_out, compare_to_json(planned, reactive).dump(2) + "\n");
        } else if (*verify) {
            const VerifyResult result = verify_traces(read_file(verify_trace), read_file(verify_golden));
            (result.ok ? std::cout : std::cerr) << result.message << '\n';
            return result.ok ? 0 : 1;
        } else if (*serve) {
            server_options.tick_period = std::chrono::milliseconds(tick_ms);
            Server server(server_options);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "gazeplan: listening on ws://" << server_options.bind_address << ':' << server.port()
                      << "/\n";
            server.run();
            g_server = nullptr;
        }
    } catch (const ParseError& e) {
        std::cerr << "gazeplan: parse error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "gazeplan: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "gazeplan: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
