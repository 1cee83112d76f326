#include "swarm/metrics_report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace swarm {

namespace {

using ordered_json = nlohmann::ordered_json;

void require_non_empty(std::span<const SwarmSnapshot> snapshots, const char* what) {
    if (snapshots.empty()) throw std::invalid_argument(std::string(what) + ": trajectory is empty");
}

// Linear interpolation between closest ranks on sorted data.
double quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

ordered_json scalability_json(const ScalabilitySummary& s) {
    ordered_json j;
    if (s.connected_from) {
        j["connected_from"] = {{"size", s.connected_from->size}, {"iteration", s.connected_from->iteration}};
    } else {
        j["connected_from"] = nullptr;
    }
    j["growth_limit"] = s.growth_limit;
    j["saturation"] = {{"size", s.saturation.size}, {"iteration", s.saturation.iteration}};
    return j;
}

ordered_json energy_json(const EnergySummary& e) {
    return {{"median_energy_w", e.median_energy}, {"variance", e.variance}, {"peak_energy_w", e.peak_energy}};
}

}  // namespace

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty series");
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

ScalabilitySummary summarize_scalability(std::span<const SwarmSnapshot> snapshots) {
    require_non_empty(snapshots, "summarize_scalability");
    ScalabilitySummary out;
    for (const auto& s : snapshots) {
        if (!out.connected_from && s.connected) out.connected_from = SizeAt{s.size(), s.iteration};
        out.growth_limit = std::max(out.growth_limit, s.size());
    }

    const auto window = std::min(kSaturationWindow, snapshots.size());
    std::vector<double> tail;
    for (auto it = snapshots.end() - static_cast<std::ptrdiff_t>(window); it != snapshots.end(); ++it) {
        tail.push_back(static_cast<double>(it->size()));
    }
    const double level = median(std::move(tail));
    auto off = [&](std::size_t i) { return std::abs(static_cast<double>(snapshots[i].size()) - level); };

    // Earliest index from which the size never leaves the band around the terminal level.
    std::size_t start = snapshots.size();
    while (start > 0 && off(start - 1) <= kSaturationBand) --start;
    // Report the first snapshot of that stretch that actually sits at the level (within one
    // drone), so the pair names a size the swarm had at that iteration.
    std::size_t at = start;
    while (at < snapshots.size() && off(at) > 1.0) ++at;
    if (at == snapshots.size()) at = start;

    out.saturation = SaturationPoint{level, snapshots[at].iteration};
    return out;
}

EnergySummary summarize_energy(std::span<const SwarmSnapshot> snapshots) {
    require_non_empty(snapshots, "summarize_energy");
    std::vector<double> totals;
    totals.reserve(snapshots.size());
    for (const auto& s : snapshots) totals.push_back(s.total_energy);

    EnergySummary out;
    out.peak_energy = *std::max_element(totals.begin(), totals.end());
    double mean = 0.0;
    for (double t : totals) mean += t;
    mean /= static_cast<double>(totals.size());
    double sq = 0.0;
    for (double t : totals) sq += (t - mean) * (t - mean);
    out.variance = sq / static_cast<double>(totals.size());
    out.median_energy = median(std::move(totals));
    return out;
}

double connectivity_fraction(std::span<const SwarmSnapshot> snapshots) {
    if (snapshots.empty()) return 0.0;
    const auto connected = std::count_if(snapshots.begin(), snapshots.end(),
                                         [](const SwarmSnapshot& s) { return s.connected; });
    return static_cast<double>(connected) / static_cast<double>(snapshots.size());
}

RunSummary summarize(std::string name, const Trajectory& traj) {
    return RunSummary{std::move(name), summarize_scalability(traj.snapshots), summarize_energy(traj.snapshots),
                      connectivity_fraction(traj.snapshots)};
}

std::map<std::string, RadarScore> radar_scores(std::span<const RunSummary> runs) {
    if (runs.size() < 2) throw std::invalid_argument("radar_scores needs at least two runs");
    std::size_t max_growth = 0;
    double max_conn = 0.0;
    double min_median = runs.front().energy.median_energy;
    for (const auto& r : runs) {
        max_growth = std::max(max_growth, r.scalability.growth_limit);
        max_conn = std::max(max_conn, r.connectivity);
        min_median = std::min(min_median, r.energy.median_energy);
    }
    std::map<std::string, RadarScore> out;
    for (const auto& r : runs) {
        RadarScore s;
        s.scalability = max_growth > 0
                            ? static_cast<double>(r.scalability.growth_limit) / static_cast<double>(max_growth)
                            : 1.0;
        s.connectivity = max_conn > 0.0 ? r.connectivity / max_conn : 0.0;
        s.energy_efficiency = r.energy.median_energy > 0.0 ? min_median / r.energy.median_energy : 1.0;
        out[r.name] = s;
    }
    return out;
}

std::string format_energy(double value) {
    auto text = fmt::format("{:.3f}", value);
    while (!text.empty() && text.back() == '0') text.pop_back();
    if (!text.empty() && text.back() == '.') text.pop_back();
    if (text == "-0") text = "0";
    return text;
}

void write_csv(std::ostream& out, std::span<const SwarmSnapshot> snapshots) {
    out << kCsvHeader << '\n';
    for (const auto& s : snapshots) {
        out << s.iteration << ',' << to_string(s.active_architecture) << ',' << s.size() << ','
            << (s.connected ? "true" : "false") << ',' << format_energy(s.per_drone_energy) << ','
            << format_energy(s.total_energy) << ',' << s.depleted_this_iteration << '\n';
    }
}

std::string to_csv(std::span<const SwarmSnapshot> snapshots) {
    std::ostringstream out;
    write_csv(out, snapshots);
    return out.str();
}

std::string summary_document(std::span<const RunSummary> runs) {
    ordered_json doc = ordered_json::object();
    for (const auto& r : runs) {
        ordered_json entry;
        entry["scalability"] = scalability_json(r.scalability);
        entry["energy"] = energy_json(r.energy);
        entry["connectivity"] = r.connectivity;
        doc[r.name] = std::move(entry);
    }
    return doc.dump(2) + "\n";
}

std::string plot_document(const std::string& name, const Trajectory& traj) {
    ordered_json doc;
    doc["name"] = name;
    doc["mode"] = traj.config.mode.name();
    auto iterations = ordered_json::array();
    auto sizes = ordered_json::array();
    auto totals = ordered_json::array();
    auto per_drone = ordered_json::array();
    auto connected = ordered_json::array();
    std::vector<double> sorted;
    for (const auto& s : traj.snapshots) {
        iterations.push_back(s.iteration);
        sizes.push_back(s.size());
        totals.push_back(s.total_energy);
        per_drone.push_back(s.per_drone_energy);
        connected.push_back(s.connected);
        sorted.push_back(s.total_energy);
    }
    std::sort(sorted.begin(), sorted.end());
    doc["size_vs_iteration"] = {{"iteration", iterations}, {"swarm_size", sizes}, {"connected", connected}};
    doc["energy_vs_iteration"] = {
        {"iteration", iterations}, {"total_energy_w", totals}, {"per_drone_energy_w", per_drone}};
    doc["energy_distribution"] = {
        {"min", sorted.empty() ? 0.0 : sorted.front()},
        {"q1", quantile(sorted, 0.25)},
        {"median", quantile(sorted, 0.5)},
        {"q3", quantile(sorted, 0.75)},
        {"max", sorted.empty() ? 0.0 : sorted.back()},
        {"values", sorted},
    };
    return doc.dump(2) + "\n";
}

std::optional<EmitFormat> parse_emit_format(std::string_view text) {
    if (text == "csv") return EmitFormat::Csv;
    if (text == "summary") return EmitFormat::Summary;
    if (text == "plotdata") return EmitFormat::PlotData;
    return std::nullopt;
}

std::string_view to_string(EmitFormat f) noexcept {
    switch (f) {
        case EmitFormat::Csv: return "csv";
        case EmitFormat::Summary: return "summary";
        case EmitFormat::PlotData: return "plotdata";
    }
    return "unknown";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<std::filesystem::path> emit(std::span<const NamedTrajectory> runs,
                                        std::span<const EmitFormat> formats,
                                        const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'" +
                      (ec ? ": " + ec.message() : std::string()));
    }
    auto wants = [&](EmitFormat f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };

    std::vector<std::filesystem::path> written;
    std::vector<RunSummary> summaries;
    for (const auto& run : runs) {
        if (wants(EmitFormat::Csv)) {
            auto path = dir / (run.name + ".csv");
            write_text_file(path, to_csv(run.trajectory->snapshots));
            written.push_back(path);
        }
        if (wants(EmitFormat::PlotData)) {
            auto path = dir / (run.name + ".plot.json");
            write_text_file(path, plot_document(run.name, *run.trajectory));
            written.push_back(path);
        }
        if (wants(EmitFormat::Summary) && !run.trajectory->snapshots.empty()) {
            summaries.push_back(summarize(run.name, *run.trajectory));
        }
    }
    if (wants(EmitFormat::Summary)) {
        auto path = dir / "summary.json";
        write_text_file(path, summary_document(summaries));
        written.push_back(path);
    }
    return written;
}

std::string format_report(std::span<const RunSummary> runs) {
    std::string out;
    out += "Scalability and connectivity\n";
    out += fmt::format("{:<14} {:>16} {:>14} {:>16} {:>14}\n", "run", "connected_from", "growth_limit",
                       "saturation", "connectivity");
    for (const auto& r : runs) {
        const auto& s = r.scalability;
        const auto cf = s.connected_from ? fmt::format("{}@{}", s.connected_from->size, s.connected_from->iteration)
                                         : std::string("never");
        const auto sat = fmt::format("{}@{}", format_energy(s.saturation.size), s.saturation.iteration);
        out += fmt::format("{:<14} {:>16} {:>14} {:>16} {:>14.3f}\n", r.name, cf, s.growth_limit, sat,
                           r.connectivity);
    }
    out += "\nEnergy consumption (swarm total per iteration, W)\n";
    out += fmt::format("{:<14} {:>14} {:>16} {:>14}\n", "run", "median", "variance", "peak");
    for (const auto& r : runs) {
        out += fmt::format("{:<14} {:>14} {:>16} {:>14}\n", r.name, format_energy(r.energy.median_energy),
                           format_energy(r.energy.variance), format_energy(r.energy.peak_energy));
    }
    return out;
}

}  // namespace swarm
