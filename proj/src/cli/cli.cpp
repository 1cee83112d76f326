#include "swarm/cli/cli.hpp"

#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdlib>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "swarm/cli/experiment_config.hpp"
#include "swarm/gateway/http_api.hpp"
#include "swarm/gateway/replay.hpp"
#include "swarm/model_backend.hpp"

namespace swarm::cli {

namespace {

// Usage problems detected after CLI11 parsing.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <typename E>
E parse_flag(const std::string& flag, const std::string& text, std::optional<E> (*parse)(std::string_view),
             const std::string& valid) {
    const auto v = parse(text);
    if (!v) throw UsageError(fmt::format("{}: unknown value '{}' (valid: {})", flag, text, valid));
    return *v;
}

std::shared_ptr<DecisionBackend> make_backend(const std::string& name) {
    if (name == "rule") return std::make_shared<RuleTableBackend>();
    auto endpoint = endpoint_from_env();
    if (!endpoint) throw UsageError("--backend external requires DECISION_BACKEND_URL");
    return std::make_shared<HttpModelBackend>(*endpoint);
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateFlags {
    std::string mode = "all";
    bool all = false;
    std::size_t iterations = 0;
    double battery = 0.0;
    std::size_t initial_size = 0;
    std::string out_dir;
    std::string config_path;
    std::vector<std::string> formats;
    CLI::Option* iterations_opt = nullptr;
    CLI::Option* battery_opt = nullptr;
    CLI::Option* initial_opt = nullptr;
    CLI::Option* mode_opt = nullptr;
};

int cmd_simulate(const SimulateFlags& f, std::ostream& out) {
    auto exp = f.config_path.empty() ? default_experiment() : load_experiment(f.config_path);

    const std::string mode = f.all ? "all" : f.mode;
    if (mode != "all") {
        const auto wanted = parse_control_mode(mode);
        if (!wanted)
            throw UsageError("--mode: unknown value '" + mode +
                             "' (valid: centralized, hierarchical, holonic, adaptive, all)");
        std::erase_if(exp.runs, [&](const NamedRun& r) { return !(r.config.mode == *wanted); });
        if (exp.runs.empty()) throw UsageError("--mode " + mode + ": no configured run uses that mode");
    }
    for (auto& run : exp.runs) {
        if (f.iterations_opt->count()) run.config.iterations = f.iterations;
        if (f.battery_opt->count()) run.config.params.capacity_b = f.battery;
        if (f.initial_opt->count()) run.config.initial_size = f.initial_size;
    }
    if (!f.out_dir.empty()) exp.output_dir = f.out_dir;
    if (!f.formats.empty()) {
        exp.emit_formats.clear();
        for (const auto& name : f.formats) {
            exp.emit_formats.push_back(
                parse_flag<EmitFormat>("--format", name, parse_emit_format, "csv, summary, plotdata"));
        }
    }
    exp.validate();

    std::vector<Trajectory> trajectories(exp.runs.size());
    {
        std::vector<std::jthread> workers;
        for (std::size_t i = 0; i < exp.runs.size(); ++i)
            workers.emplace_back([&, i] { trajectories[i] = run(exp.runs[i].config); });
    }

    std::vector<NamedTrajectory> named;
    std::vector<RunSummary> summaries;
    for (std::size_t i = 0; i < exp.runs.size(); ++i) {
        named.push_back({exp.runs[i].name, &trajectories[i]});
        summaries.push_back(summarize(exp.runs[i].name, trajectories[i]));
    }

    out << format_report(summaries);
    if (summaries.size() >= 2) {
        out << "\nRelative scores (1 = best of this report)\n";
        out << fmt::format("{:<14} {:>12} {:>14} {:>18}\n", "run", "scalability", "connectivity", "energy_efficiency");
        const auto radar = radar_scores(summaries);
        for (const auto& s : summaries) {
            const auto& r = radar.at(s.name);
            out << fmt::format("{:<14} {:>12.3f} {:>14.3f} {:>18.3f}\n", s.name, r.scalability, r.connectivity,
                               r.energy_efficiency);
        }
    }

    const auto written = emit(named, exp.emit_formats, exp.output_dir);
    out << "\n";
    for (const auto& p : written) out << "wrote " << p.string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// recommend

struct RecommendFlags {
    std::string task, status, size, comm, failure;
    std::string backend = "rule";
};

int cmd_recommend(const RecommendFlags& f, std::ostream& out) {
    MissionContext ctx;
    if (!f.task.empty()) ctx.kind = parse_flag<Scenario>("--task", f.task, parse_scenario, valid_values_scenario());
    else ctx.kind = parse_flag<Status>("--status", f.status, parse_status, valid_values_status());
    ctx.size_class = parse_flag<SizeClass>("--size", f.size, parse_size_class, valid_values_size_class());
    ctx.comm_quality = parse_flag<CommQuality>("--comm", f.comm, parse_comm_quality, valid_values_comm_quality());
    ctx.failure_probability = parse_flag<FailureProbability>("--failure", f.failure, parse_failure_probability,
                                                             valid_values_failure_probability());

    auto backend = make_backend(f.backend);
    const auto rec = decide(ctx, *backend);
    out << "architecture: " << to_string(rec.architecture) << "\n";
    out << "matched_rule: " << (rec.matched_rule ? *rec.matched_rule : std::string("none (fallback)")) << "\n";
    out << "source: " << to_string(rec.source) << "\n";
    out << "rationale: " << rec.rationale << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// serve

struct ServeFlags {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string log_dir;
    std::size_t max_sessions = 64;
    unsigned tick_ms = gateway::kDefaultTickMs;
    std::string backend = "rule";
};

std::atomic<bool> g_shutdown{false};

extern "C" void on_signal(int) { g_shutdown = true; }

int cmd_serve(const ServeFlags& f, std::ostream& out) {
    if (f.tick_ms < gateway::kMinTickMs || f.tick_ms > gateway::kMaxTickMs)
        throw UsageError("--tick-ms: out of range");
    gateway::GatewayOptions opts;
    opts.max_sessions = f.max_sessions;
    opts.default_tick_ms = f.tick_ms;
    if (!f.log_dir.empty()) opts.log_dir = f.log_dir;

    gateway::ServerOptions server_opts;
    if (const char* key = std::getenv("GATEWAY_API_KEY")) server_opts.api_key = key;

    gateway::SessionManager sessions(opts, make_backend(f.backend));
    gateway::GatewayServer server(sessions, server_opts);
    const int port = server.bind(f.host, f.port);
    out << "listening on http://" << f.host << ":" << port << std::endl;
    spdlog::info("gateway listening on {}:{} (api key {})", f.host, port,
                 server_opts.api_key.empty() ? "off" : "on");

    g_shutdown = false;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::jthread watcher([&server](std::stop_token stop) {
        while (!stop.stop_requested() && !g_shutdown) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        server.stop();
    });
    server.serve();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// replay

int cmd_replay(const std::string& log_path, const std::string& csv_path, std::ostream& out) {
    const auto records = gateway::read_history(log_path);
    const auto result = gateway::replay(records);
    out << fmt::format("replayed {} events and {} ticks: {} snapshots, final iteration {}, size {}\n", result.events,
                       result.ticks, result.snapshots.size(), result.final_state.iteration,
                       result.final_state.size());
    if (!csv_path.empty()) {
        write_text_file(csv_path, to_csv(result.snapshots));
        out << "wrote " << csv_path << "\n";
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Drone swarm architecture simulator and decision system", "swarmsim"};
    app.require_subcommand(1);

    SimulateFlags sim;
    auto* simulate = app.add_subcommand("simulate", "Run control modes and write metrics artifacts");
    sim.mode_opt = simulate->add_option("--mode", sim.mode, "centralized|hierarchical|holonic|adaptive|all");
    simulate->add_flag("--all", sim.all, "Run every mode (same as --mode all)");
    sim.iterations_opt = simulate->add_option("--iterations", sim.iterations, "Iterations per run");
    sim.battery_opt = simulate->add_option("--battery", sim.battery, "Battery capacity B per drone (W)");
    sim.initial_opt = simulate->add_option("--initial-size", sim.initial_size, "Drones at iteration 0");
    simulate->add_option("--out", sim.out_dir, "Output directory (default: results)");
    simulate->add_option("--config", sim.config_path, "Experiment config file (JSON)");
    simulate->add_option("--format", sim.formats, "csv, summary, plotdata")->delimiter(',');

    RecommendFlags rec;
    auto* recommend_cmd = app.add_subcommand("recommend", "Recommend an architecture for a mission context");
    auto* task_opt = recommend_cmd->add_option("--task", rec.task, valid_values_scenario());
    auto* status_opt = recommend_cmd->add_option("--status", rec.status, valid_values_status());
    task_opt->excludes(status_opt);
    recommend_cmd->add_option("--size", rec.size, valid_values_size_class())->required();
    recommend_cmd->add_option("--comm", rec.comm, valid_values_comm_quality())->required();
    recommend_cmd->add_option("--failure", rec.failure, valid_values_failure_probability())->required();
    recommend_cmd->add_option("--backend", rec.backend, "rule|external")
        ->check(CLI::IsMember({"rule", "external"}));

    auto* rules = app.add_subcommand("rules", "Print the decision rule table as JSON");

    ServeFlags srv;
    auto* serve = app.add_subcommand("serve", "Run the operator gateway");
    serve->add_option("--host", srv.host, "Bind address");
    serve->add_option("--port", srv.port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
    serve->add_option("--log-dir", srv.log_dir, "Directory for per-session history logs");
    serve->add_option("--max-sessions", srv.max_sessions, "Concurrent session limit")->check(CLI::PositiveNumber);
    serve->add_option("--tick-ms", srv.tick_ms, "Default running-mode tick interval");
    serve->add_option("--backend", srv.backend, "rule|external")->check(CLI::IsMember({"rule", "external"}));

    std::string replay_log, replay_csv;
    auto* replay_cmd = app.add_subcommand("replay", "Replay a session history log");
    replay_cmd->add_option("log", replay_log, "History file (<session>.jsonl)")->required();
    replay_cmd->add_option("--csv", replay_csv, "Write the replayed snapshots as CSV");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*simulate) return cmd_simulate(sim, out);
        if (*recommend_cmd) {
            if (rec.task.empty() && rec.status.empty()) throw UsageError("one of --task or --status is required");
            return cmd_recommend(rec, out);
        }
        if (*rules) {
            out << nlohmann::json::parse(export_rule_table()).dump(2) << "\n";
            return kExitOk;
        }
        if (*serve) return cmd_serve(srv, out);
        if (*replay_cmd) return cmd_replay(replay_log, replay_csv, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const gateway::GatewayError& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == gateway::GatewayError::Code::Validation ? kExitUsage : kExitFailure;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace swarm::cli
