#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "edcasim/access_category.hpp"

namespace edcasim::metrics {

// One simulated microsecond.
inline constexpr double kTickSeconds = 1e-6;

// Accumulated totals for one access category. Frames that arrive at the MAC
// before the warm-up boundary are excluded from every field, including their
// later delivery or drop, so the buckets always balance.
struct AcTotals {
    std::uint64_t generated_frames = 0;
    std::uint64_t delivered_frames = 0;
    std::uint64_t dropped_frames = 0;
    std::uint64_t queued_end_frames = 0;  // still in a queue when the run ended
    std::uint64_t delivered_bits = 0;
    std::uint64_t offered_bits = 0;
    std::int64_t sum_access_delay_ticks = 0;  // MAC-queue arrival to ACK completion
    std::uint64_t sum_retransmissions = 0;    // attempts - 1, summed at service completion
    std::uint64_t collision_participations = 0;
    std::uint32_t station_count = 0;

    bool operator==(const AcTotals&) const = default;
};

// Everything one run reports. Global figures are sums over categories,
// except collisions: collision_events counts channel events once, while each
// category counts its own stations' participations.
struct MetricsLedger {
    std::string scenario_id;
    std::string policy;
    std::uint64_t seed = 0;
    double duration_s = 0.0;
    double warmup_s = 0.0;
    std::array<AcTotals, kAccessCategoryCount> ac{};
    std::uint64_t collision_events = 0;
    std::uint64_t trace_hash = 0;

    const AcTotals& for_ac(AccessCategory a) const { return ac[ac_index(a)]; }
    AcTotals& for_ac(AccessCategory a) { return ac[ac_index(a)]; }
    AcTotals global() const;

    bool operator==(const MetricsLedger&) const = default;
};

// Scope: a single category, or nothing for the whole run.
using Scope = std::optional<AccessCategory>;

// delivered_bits / offered_bits, in [0, 1]. UndefinedError when nothing was
// offered in the scope.
double normalized_throughput(const MetricsLedger& ledger, Scope scope = {});

// Mean seconds from MAC-queue arrival to ACK completion over delivered
// frames. UndefinedError when nothing was delivered.
double mean_access_delay_s(const MetricsLedger& ledger, Scope scope = {});

// Mean retransmissions per frame that completed service (delivered or
// dropped). UndefinedError when no frame completed.
double retransmission_attempts(const MetricsLedger& ledger, Scope scope = {});

// generated == delivered + dropped + queued for every category and globally;
// throws UndefinedError naming the offending bucket otherwise.
void verify_conservation(const MetricsLedger& ledger);

// Render a ledger set as CSV: fixed header, one row per (run, scope) with
// scope rows for the global view plus every category that had stations, rows
// ordered by (scenario_id, policy, seed, scope), floats at six significant
// digits. Scopes with no offered load, deliveries, or completions render the
// affected metrics as nan.
std::string export_csv(const std::vector<MetricsLedger>& ledgers);

// Write text to a file, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace edcasim::metrics
