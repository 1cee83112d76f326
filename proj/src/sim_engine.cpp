#include "swarm/sim_engine.hpp"

#include <algorithm>

namespace swarm {

void RunConfig::validate() const {
    try {
        params.validate();
    } catch (const ConfigError& e) {
        std::string message = e.what();
        message.erase(0, e.field().size() + 2);
        throw ConfigError("params." + e.field(), message);
    }
    if (iterations < 1) throw ConfigError("iterations", "must be >= 1");
}

ArchitectureKind adaptive_select(std::size_t n, const EnergyModelParams& params) noexcept {
    if (n < params.n_hier_min) return ArchitectureKind::Centralized;
    if (n < params.n_holonic_min) return ArchitectureKind::Hierarchical;
    return ArchitectureKind::Holonic;
}

StepResult initial_state(const RunConfig& config) {
    config.validate();
    StepResult out;
    auto& snap = out.snapshot;
    snap.iteration = -1;
    snap.drones.reserve(config.initial_size);
    for (std::size_t i = 0; i < config.initial_size; ++i) {
        snap.drones.push_back(DroneState{out.next_id++, config.params.capacity_b, -1});
    }
    snap.active_architecture = config.mode.is_adaptive()
                                   ? adaptive_select(snap.size(), config.params)
                                   : config.mode.architecture();
    snap.connected = is_connected(snap.active_architecture, snap.size(), config.params);
    return out;
}

StepResult step(const SwarmSnapshot& snapshot, const ControlMode& mode,
                const EnergyModelParams& params, DroneId next_id) {
    StepResult out;
    auto& next = out.snapshot;
    next.iteration = snapshot.iteration + 1;
    next.drones = snapshot.drones;
    for (std::size_t i = 0; i < params.drones_added_per_iteration; ++i) {
        next.drones.push_back(DroneState{next_id++, params.capacity_b, next.iteration});
    }

    const std::size_t n = next.drones.size();
    const auto arch = mode.is_adaptive() ? adaptive_select(n, params) : mode.architecture();
    const double energy = per_drone_energy(arch, n, params);
    for (auto& drone : next.drones) drone.battery -= energy;

    const auto alive_end = std::stable_partition(next.drones.begin(), next.drones.end(),
                                                 [](const DroneState& d) { return d.battery > 0.0; });
    next.removed.assign(alive_end, next.drones.end());
    next.depleted_this_iteration = next.removed.size();
    next.drones.erase(alive_end, next.drones.end());

    next.active_architecture = arch;
    next.connected = is_connected(arch, next.drones.size(), params);
    next.per_drone_energy = energy;
    next.charged = n;
    next.total_energy = energy * static_cast<double>(n);
    out.next_id = next_id;
    return out;
}

Trajectory run(const RunConfig& config) {
    auto state = initial_state(config);
    Trajectory traj{config, {}};
    traj.snapshots.reserve(config.iterations);
    for (std::size_t i = 0; i < config.iterations; ++i) {
        state = step(state.snapshot, config.mode, config.params, state.next_id);
        traj.snapshots.push_back(state.snapshot);
    }
    return traj;
}

}  // namespace swarm
