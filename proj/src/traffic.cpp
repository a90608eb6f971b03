#include "edcasim/traffic.hpp"

#include "edcasim/errors.hpp"

namespace edcasim::traffic {

TrafficSource default_source_for(AccessCategory ac) {
    TrafficSource s;
    switch (ac) {
        case AccessCategory::VO: s.payload_bytes = 50; return s;
        case AccessCategory::VI: s.payload_bytes = 8738; return s;
        case AccessCategory::BE: s.payload_bytes = 100; return s;
        case AccessCategory::BK: break;
    }
    throw UnsupportedError("no default traffic model for BK");
}

double offered_load_bits(const TrafficSource& source, double window_s,
                         std::uint64_t delivered_frames, std::uint64_t generated_frames) {
    (void)delivered_frames;
    const double frame_bits = 8.0 * source.payload_bytes;
    switch (source.mode) {
        case TrafficMode::Saturated:
            return static_cast<double>(generated_frames) * frame_bits;
        case TrafficMode::ConstantRate:
            return source.rate_fps * window_s * frame_bits;
    }
    return 0.0;
}

}  // namespace edcasim::traffic
