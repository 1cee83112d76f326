#pragma once

// Batch experiment description: named runs plus where and what to write.
//
// File format (JSON):
//   {
//     "output_dir": "results",
//     "emit_formats": ["csv", "summary", "plotdata"],
//     "runs": [
//       {"name": "centralized", "mode": "centralized", "iterations": 150,
//        "initial_size": 0, "seed": 0, "params": {"capacity_b": 700}}
//     ]
//   }
// Every field is optional; omitted runs mean the four default modes.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarm/metrics_report.hpp"

namespace swarm::cli {

struct NamedRun {
    std::string name;
    RunConfig config;
};

struct ExperimentConfig {
    std::vector<NamedRun> runs;
    std::filesystem::path output_dir = "results";
    std::vector<EmitFormat> emit_formats{EmitFormat::Csv, EmitFormat::Summary};

    // Throws ConfigError: empty run list, duplicate or unsafe names, invalid run config.
    void validate() const;
};

// One default-parameter run per control mode, named after the mode.
ExperimentConfig default_experiment();

// Throws ConfigError naming the field (e.g. "runs[1].params.k_o").
ExperimentConfig parse_experiment(const nlohmann::json& doc);

// Throws IoError if unreadable, ConfigError if malformed.
ExperimentConfig load_experiment(const std::filesystem::path& path);

}  // namespace swarm::cli
