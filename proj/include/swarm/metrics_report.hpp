#pragma once

// Scalability / energy statistics over trajectories and their serialized forms.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarm/sim_engine.hpp"

namespace swarm {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SizeAt {
    std::size_t size = 0;
    std::int64_t iteration = 0;
    bool operator==(const SizeAt&) const = default;
};

struct SaturationPoint {
    double size = 0.0;  // median of the terminal window; may be x.5
    std::int64_t iteration = 0;
    bool operator==(const SaturationPoint&) const = default;
};

struct ScalabilitySummary {
    std::optional<SizeAt> connected_from;  // nullopt: never connected
    std::size_t growth_limit = 0;
    SaturationPoint saturation;
};

struct EnergySummary {
    double median_energy = 0.0;
    double variance = 0.0;  // population variance
    double peak_energy = 0.0;
};

inline constexpr std::size_t kSaturationWindow = 10;
inline constexpr double kSaturationBand = 2.0;

double median(std::vector<double> values);

// Throws std::invalid_argument for an empty trajectory.
ScalabilitySummary summarize_scalability(std::span<const SwarmSnapshot> snapshots);
EnergySummary summarize_energy(std::span<const SwarmSnapshot> snapshots);

// Fraction of snapshots with connected == true; 0 for an empty span.
double connectivity_fraction(std::span<const SwarmSnapshot> snapshots);

struct RunSummary {
    std::string name;
    ScalabilitySummary scalability;
    EnergySummary energy;
    double connectivity = 0.0;
};

RunSummary summarize(std::string name, const Trajectory& traj);

struct RadarScore {
    double scalability = 0.0;
    double connectivity = 0.0;
    double energy_efficiency = 0.0;
};

// Scores relative to the other entries of the same report, each in [0, 1].
// Throws std::invalid_argument for fewer than two entries.
std::map<std::string, RadarScore> radar_scores(std::span<const RunSummary> runs);

// ---------------------------------------------------------------------------
// Serialization. All writers are deterministic for identical inputs.

inline constexpr const char* kCsvHeader =
    "iteration,architecture,swarm_size,connected,per_drone_energy_w,total_energy_w,depleted";

// Fixed 3 decimals with trailing zeros removed: 1905.100 -> "1905.1", 2200 -> "2200".
std::string format_energy(double value);

void write_csv(std::ostream& out, std::span<const SwarmSnapshot> snapshots);
std::string to_csv(std::span<const SwarmSnapshot> snapshots);

// {"<name>": {"scalability": {...}, "energy": {...}, "connectivity": f}, ...} in input order.
std::string summary_document(std::span<const RunSummary> runs);

// Size/energy series and energy distribution (quartiles + sorted values).
std::string plot_document(const std::string& name, const Trajectory& traj);

enum class EmitFormat { Csv, Summary, PlotData };
std::optional<EmitFormat> parse_emit_format(std::string_view text);
std::string_view to_string(EmitFormat f) noexcept;

struct NamedTrajectory {
    std::string name;
    const Trajectory* trajectory = nullptr;
};

// Writes <name>.csv, summary.json and <name>.plot.json under dir for the
// requested formats. Creates dir if needed. Throws IoError naming the path.
// Returns the written paths.
std::vector<std::filesystem::path> emit(std::span<const NamedTrajectory> runs,
                                        std::span<const EmitFormat> formats,
                                        const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, const std::string& content);

// Plain-text scalability / energy tables for terminal output.
std::string format_report(std::span<const RunSummary> runs);

}  // namespace swarm
