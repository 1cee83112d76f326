#include "swarm/core_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace swarm {

namespace {

std::string normalize(std::string_view text) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    auto last = text.find_last_not_of(" \t\r\n");
    std::string out(text.substr(first, last - first + 1));
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::string_view to_string(ArchitectureKind arch) noexcept {
    switch (arch) {
        case ArchitectureKind::Centralized: return "centralized";
        case ArchitectureKind::Hierarchical: return "hierarchical";
        case ArchitectureKind::Holonic: return "holonic";
    }
    return "unknown";
}

std::optional<ArchitectureKind> parse_architecture(std::string_view text) {
    const auto key = normalize(text);
    for (auto arch : kAllArchitectures) {
        if (key == to_string(arch)) return arch;
    }
    return std::nullopt;
}

ArchitectureKind ControlMode::architecture() const {
    if (!fixed_) throw std::logic_error("adaptive mode has no fixed architecture");
    return *fixed_;
}

std::string_view ControlMode::name() const noexcept {
    return fixed_ ? to_string(*fixed_) : std::string_view("adaptive");
}

std::optional<ControlMode> parse_control_mode(std::string_view text) {
    if (normalize(text) == "adaptive") return ControlMode::adaptive();
    if (auto arch = parse_architecture(text)) return ControlMode::fixed(*arch);
    return std::nullopt;
}

void EnergyModelParams::validate() const {
    auto positive = [](const char* field, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be a finite value > 0");
    };
    positive("k_o", k_o);
    positive("k_ce", k_ce);
    positive("k_hi", k_hi);
    positive("k_ho", k_ho);
    positive("capacity_b", capacity_b);
    if (!(capacity_b > k_o)) {
        throw ConfigError("capacity_b", "must exceed k_o so a fresh drone survives one iteration");
    }
    if (n_hier_min == 0) throw ConfigError("n_hier_min", "must be > 0");
    if (!(n_hier_min < n_holonic_min)) {
        throw ConfigError("n_holonic_min", "must be greater than n_hier_min");
    }
    if (drones_added_per_iteration == 0) {
        throw ConfigError("drones_added_per_iteration", "must be > 0");
    }
}

double per_drone_energy(ArchitectureKind arch, std::size_t n, const EnergyModelParams& params) {
    if (n == 0) throw std::domain_error("per_drone_energy: empty swarm has no per-drone energy");
    const double size = static_cast<double>(n);
    switch (arch) {
        case ArchitectureKind::Centralized:
            return params.k_o + params.k_ce * size;
        case ArchitectureKind::Hierarchical:
            return n >= params.n_hier_min ? params.k_o + params.k_hi * std::sqrt(size) : params.k_o;
        case ArchitectureKind::Holonic:
            return n >= params.n_holonic_min ? params.k_o + params.k_ho : params.k_o;
    }
    return params.k_o;
}

bool is_connected(ArchitectureKind arch, std::size_t n, const EnergyModelParams& params) noexcept {
    if (n == 0) return false;
    switch (arch) {
        case ArchitectureKind::Centralized: return true;
        case ArchitectureKind::Hierarchical: return n >= params.n_hier_min;
        case ArchitectureKind::Holonic: return n >= params.n_holonic_min;
    }
    return false;
}

}  // namespace swarm
