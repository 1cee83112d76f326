#include "swarm/cli/experiment_config.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "swarm/gateway/wire.hpp"

namespace swarm::cli {

namespace {

// Re-anchors a nested config error under a path prefix such as "runs[2]".
ConfigError nested(const std::string& prefix, const ConfigError& e) {
    std::string message = e.what();
    const auto own = e.field() + ": ";
    if (message.rfind(own, 0) == 0) message.erase(0, own.size());
    return ConfigError(prefix + "." + e.field(), message);
}

}  // namespace

void ExperimentConfig::validate() const {
    if (runs.empty()) throw ConfigError("runs", "at least one run is required");
    static const std::regex kSafeName("[A-Za-z0-9_.-]+");
    std::set<std::string> names;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto prefix = "runs[" + std::to_string(i) + "]";
        const auto& run = runs[i];
        if (!std::regex_match(run.name, kSafeName) || run.name == "summary")
            throw ConfigError(prefix + ".name", "'" + run.name + "' is not a usable file name");
        if (!names.insert(run.name).second) throw ConfigError(prefix + ".name", "duplicate run name '" + run.name + "'");
        try {
            run.config.validate();
        } catch (const ConfigError& e) {
            throw nested(prefix, e);
        }
    }
    if (emit_formats.empty()) throw ConfigError("emit_formats", "at least one format is required");
}

ExperimentConfig default_experiment() {
    ExperimentConfig cfg;
    for (const auto& mode : {ControlMode::fixed(ArchitectureKind::Centralized),
                             ControlMode::fixed(ArchitectureKind::Hierarchical),
                             ControlMode::fixed(ArchitectureKind::Holonic), ControlMode::adaptive()}) {
        RunConfig run;
        run.mode = mode;
        cfg.runs.push_back({std::string(mode.name()), run});
    }
    return cfg;
}

ExperimentConfig parse_experiment(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config", "must be an object");
    ExperimentConfig cfg = default_experiment();
    for (const auto& [key, value] : doc.items()) {
        if (key == "output_dir") {
            if (!value.is_string() || value.get<std::string>().empty())
                throw ConfigError("output_dir", "must be a non-empty string");
            cfg.output_dir = value.get<std::string>();
        } else if (key == "emit_formats") {
            if (!value.is_array()) throw ConfigError("emit_formats", "must be an array");
            cfg.emit_formats.clear();
            for (std::size_t i = 0; i < value.size(); ++i) {
                const auto field = "emit_formats[" + std::to_string(i) + "]";
                const auto f = value[i].is_string() ? parse_emit_format(value[i].get<std::string>()) : std::nullopt;
                if (!f) throw ConfigError(field, "must be one of csv, summary, plotdata");
                cfg.emit_formats.push_back(*f);
            }
        } else if (key == "runs") {
            if (!value.is_array()) throw ConfigError("runs", "must be an array");
            cfg.runs.clear();
            for (std::size_t i = 0; i < value.size(); ++i) {
                const auto prefix = "runs[" + std::to_string(i) + "]";
                auto entry = value[i];
                if (!entry.is_object()) throw ConfigError(prefix, "must be an object");
                std::string name;
                if (entry.contains("name")) {
                    if (!entry["name"].is_string()) throw ConfigError(prefix + ".name", "must be a string");
                    name = entry["name"].get<std::string>();
                    entry.erase("name");
                }
                RunConfig run;
                try {
                    run = gateway::run_config_from_json(entry);
                } catch (const ConfigError& e) {
                    throw nested(prefix, e);
                }
                if (name.empty()) name = run.mode.name();
                cfg.runs.push_back({std::move(name), run});
            }
        } else {
            throw ConfigError(key, "unknown field");
        }
    }
    return cfg;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path.string());
    std::stringstream text;
    text << in.rdbuf();
    const auto doc = nlohmann::json::parse(text.str(), nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config", path.string() + " is not valid JSON");
    return parse_experiment(doc);
}

}  // namespace swarm::cli
