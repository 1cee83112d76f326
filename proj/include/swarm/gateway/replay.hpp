#pragma once

// Rebuilds a session from its history: the "created" record gives config and
// policy, "event" and "tick" records are re-applied in order, and logged
// recommendations stand in for the decision backend so an external model is
// not consulted again.

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "swarm/gateway/wire.hpp"

namespace swarm::gateway {

struct ReplayResult {
    std::vector<SwarmSnapshot> snapshots;
    SwarmSnapshot final_state;
    std::size_t events = 0;
    std::size_t ticks = 0;
};

// One JSON document per non-empty line. Throws IoError or GatewayError{Validation}.
std::vector<json> read_history(const std::filesystem::path& path);

// Throws GatewayError{Validation} for a log that is malformed or does not
// reproduce (e.g. runs out of recorded recommendations).
ReplayResult replay(std::span<const json> records);

}  // namespace swarm::gateway
