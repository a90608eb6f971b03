#pragma once

#include <cstdint>

#include "edcasim/access_category.hpp"

namespace edcasim::traffic {

enum class TrafficMode { Saturated, ConstantRate };

// Frame generation model for one station.
//
// Saturated keeps the MAC queue non-empty for the station's whole
// membership: a fresh frame is generated the instant the previous head of
// line leaves the MAC (delivered or dropped), so offered load equals
// attempted-service demand. ConstantRate generates a frame every 1/rate_fps
// seconds into a bounded queue; an arrival that finds the queue full is
// recorded as generated and dropped.
struct TrafficSource {
    TrafficMode mode = TrafficMode::Saturated;
    std::uint32_t payload_bytes = 100;
    double rate_fps = 0.0;            // ConstantRate only
    std::uint32_t queue_capacity = 50;  // ConstantRate only; Saturated holds one frame

    bool operator==(const TrafficSource&) const = default;
};

// Saturated source with the per-category default payload:
// VO 50 B, VI 8738 B, BE 100 B. BK carries no traffic model here.
TrafficSource default_source_for(AccessCategory ac);

// Offered load over a measurement window:
//   Saturated     -> generated_frames * payload bits
//   ConstantRate  -> rate_fps * window_s * payload bits
double offered_load_bits(const TrafficSource& source, double window_s,
                         std::uint64_t delivered_frames, std::uint64_t generated_frames);

}  // namespace edcasim::traffic
