#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "edcasim/access_category.hpp"
#include "edcasim/traffic.hpp"

namespace edcasim::runner {

// A block of identical stations.
struct StationGroup {
    AccessCategory ac = AccessCategory::BE;
    std::uint32_t count = 0;
    traffic::TrafficSource source;
    double join_s = 0.0;
    std::optional<double> leave_s;

    bool operator==(const StationGroup&) const = default;
};

// Full description of one simulation setup. Times are seconds; the kernel
// converts to integer microsecond ticks.
struct ScenarioSpec {
    std::string scenario_id;
    std::vector<StationGroup> station_groups;
    double duration_s = 10.0;
    double warmup_s = 1.0;  // excluded from all metric sums
    double beacon_interval_s = 0.1024;
    double slot_time_s = 9e-6;
    double phy_rate_bps = 65e6;
    std::uint32_t retry_limit = 7;
    // frame exchange constants
    double sifs_s = 16e-6;
    double ack_s = 44e-6;
    double preamble_s = 40e-6;  // charged once per data or beacon transmission
    std::uint32_t beacon_bytes = 128;

    bool operator==(const ScenarioSpec&) const = default;
};

// Parse the plain-text scenario format (see README): `key = value` lines,
// `#` comments, one `[group]` header per station group. Unknown keys, bad
// values, and inconsistent fields raise ConfigError naming the line.
ScenarioSpec parse_scenario(const std::string& text);

// Parse a scenario file; IoError when unreadable.
ScenarioSpec load_scenario_file(const std::filesystem::path& path);

// Serialize so that parse_scenario(write_scenario(s)) == validated s.
std::string write_scenario(const ScenarioSpec& spec);

// Cross-field checks (at least one station, warmup < duration, join before
// leave, positive rates...). ConfigError on violation.
void validate(const ScenarioSpec& spec);

// The full comparison grid: BE populations {32, 64, 128, 256, 512} crossed
// with overlays {none, 5/15/30 VO, 5/15/30 VI, 15 VO + 15 VI}, saturated
// default sources, 10 s runs with 1 s warm-up. `scale` divides every station
// count (minimum 1); scaled variants carry an id suffix.
std::vector<ScenarioSpec> paper_grid(unsigned scale = 1);

}  // namespace edcasim::runner
