#pragma once

// Battery-tracked swarm lifecycle. Each iteration:
//   1. add drones_added_per_iteration fresh drones at full capacity
//   2. pick the architecture (fixed, or adaptive_select on the new size)
//   3. charge every drone the same per-drone energy
//   4. remove every drone whose battery is <= 0
// A run is deterministic; the seed is carried for stochastic extensions only.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "swarm/core_model.hpp"

namespace swarm {

struct RunConfig {
    ControlMode mode = ControlMode::adaptive();
    EnergyModelParams params;
    std::size_t initial_size = 0;
    std::size_t iterations = 150;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Trajectory {
    RunConfig config;
    std::vector<SwarmSnapshot> snapshots;
};

struct StepResult {
    SwarmSnapshot snapshot;
    DroneId next_id = 0;
};

// Smallest architecture that is connected at size n.
ArchitectureKind adaptive_select(std::size_t n, const EnergyModelParams& params) noexcept;

// Pre-run state: initial_size drones at full capacity, born at iteration -1.
StepResult initial_state(const RunConfig& config);

StepResult step(const SwarmSnapshot& snapshot, const ControlMode& mode,
                const EnergyModelParams& params, DroneId next_id);

// Throws ConfigError before stepping if the config is invalid.
Trajectory run(const RunConfig& config);

}  // namespace swarm
