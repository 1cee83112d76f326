#pragma once

// Domain types and the per-drone energy / connectivity laws for the three
// swarm control architectures. Everything here is a pure function or a value
// type and may be used from any thread.
//
// Units: energies and battery budgets are "W-units", a depletable budget
// consumed once per iteration. The model never converts them to joules.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace swarm {

class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    // Name of the offending configuration field.
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class ArchitectureKind { Centralized, Hierarchical, Holonic };

inline constexpr ArchitectureKind kAllArchitectures[] = {
    ArchitectureKind::Centralized, ArchitectureKind::Hierarchical, ArchitectureKind::Holonic};

std::string_view to_string(ArchitectureKind arch) noexcept;

// Case-insensitive, ignores surrounding whitespace.
std::optional<ArchitectureKind> parse_architecture(std::string_view text);

// Static(architecture) or Adaptive. Fixed for the lifetime of a run.
class ControlMode {
public:
    static ControlMode fixed(ArchitectureKind arch) noexcept { return ControlMode(arch); }
    static ControlMode adaptive() noexcept { return ControlMode(std::nullopt); }

    bool is_adaptive() const noexcept { return !fixed_.has_value(); }

    // Throws std::logic_error for an adaptive mode.
    ArchitectureKind architecture() const;

    // "centralized" | "hierarchical" | "holonic" | "adaptive"
    std::string_view name() const noexcept;

    bool operator==(const ControlMode&) const = default;

private:
    explicit ControlMode(std::optional<ArchitectureKind> fixed) noexcept : fixed_(fixed) {}
    std::optional<ArchitectureKind> fixed_;
};

std::optional<ControlMode> parse_control_mode(std::string_view text);

using DroneId = std::uint64_t;

struct DroneState {
    DroneId id = 0;
    double battery = 0.0;
    std::int64_t born_at = 0;

    bool operator==(const DroneState&) const = default;
};

struct EnergyModelParams {
    double k_o = 10.0;   // fixed operational energy per drone per iteration
    double k_ce = 5.0;   // centralized: per drone of swarm size
    double k_hi = 3.0;   // hierarchical: per sqrt(swarm size)
    double k_ho = 1.0;   // holonic: constant neighbour-exchange cost
    double capacity_b = 700.0;
    std::size_t n_hier_min = 14;
    std::size_t n_holonic_min = 42;
    std::size_t drones_added_per_iteration = 2;

    // Throws ConfigError naming the first invalid field.
    void validate() const;

    bool operator==(const EnergyModelParams&) const = default;
};

struct SwarmSnapshot {
    // -1 denotes the pre-run state; stepped snapshots are numbered from 0.
    std::int64_t iteration = -1;
    std::vector<DroneState> drones;
    ArchitectureKind active_architecture = ArchitectureKind::Centralized;
    bool connected = false;
    double per_drone_energy = 0.0;
    double total_energy = 0.0;
    // Drones that paid per_drone_energy this iteration (including those that died).
    std::size_t charged = 0;
    std::size_t depleted_this_iteration = 0;
    // Final states of the drones removed this iteration (battery <= 0).
    std::vector<DroneState> removed;

    std::size_t size() const noexcept { return drones.size(); }

    bool operator==(const SwarmSnapshot&) const = default;
};

// Energy each drone spends in one iteration when the swarm has n drones.
// Throws std::domain_error for n == 0.
double per_drone_energy(ArchitectureKind arch, std::size_t n, const EnergyModelParams& params);

bool is_connected(ArchitectureKind arch, std::size_t n, const EnergyModelParams& params) noexcept;

}  // namespace swarm
