#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <vector>

#include "edcasim/access_category.hpp"
#include "edcasim/metrics.hpp"
#include "edcasim/policy.hpp"
#include "edcasim/rng.hpp"
#include "edcasim/scenario.hpp"

namespace edcasim::kernel {

// Simulation clock: integer microseconds. Every duration is rounded to ticks
// once, up front, so runs replay identically on every platform.
using SimTime = std::int64_t;

inline constexpr SimTime kNever = std::numeric_limits<SimTime>::max();

enum class PolicyKind { StaticEdca, Qcaaae };

// How stations get their MAC parameters. StaticEdca broadcasts `static_set`
// unchanged in every beacon; Qcaaae rebuilds the set from the live
// association counters right before each beacon goes out.
struct PolicyConfig {
    PolicyKind kind = PolicyKind::StaticEdca;
    policy::EdcaParamSet static_set = policy::static_edca_params();

    const char* label() const { return kind == PolicyKind::Qcaaae ? "qcaaae" : "edca"; }
};

PolicyConfig static_edca_policy();
PolicyConfig qcaaae_policy();

// One queued data frame.
struct Frame {
    SimTime arrival_tick = 0;
    std::uint32_t payload_bytes = 0;
    bool counted = true;  // false while the warm-up window is still open
};

// Per-station MAC contention state.
struct StationState {
    policy::AcParams params;        // from the most recent heard beacon
    std::uint32_t cw_current = 1;
    std::uint32_t backoff_counter = 0;
    bool backoff_drawn = false;     // a pending draw survives busy periods
    std::uint32_t retry_count = 0;  // failed attempts of the head frame so far
    std::deque<Frame> queue;
};

// Uniform draw over [0, cw_current], both ends inclusive.
std::uint32_t draw_backoff(Rng& rng, std::uint32_t cw_current);

// ACK received: the head frame leaves the queue, window and retries reset.
void on_success(StationState& st);

// Collision (missing ACK): the window doubles along the 2^k-1 ladder, capped
// at cw_max. Returns true when the head frame exhausted its retries and was
// dropped, which also resets the window and retry count.
bool on_failure(StationState& st, std::uint32_t retry_limit);

// New parameter set heard in a beacon: replace params and clamp the current
// window into the new range; an in-progress backoff counter is kept.
void apply_beacon_params(StationState& st, const policy::AcParams& params);

// A station ready to contend during one channel-idle period.
struct Contender {
    std::uint32_t station_id = 0;
    std::uint32_t aifsn = 2;
    std::uint32_t offset_slots = 0;  // idle slots skipped by becoming ready mid-period
    std::uint32_t backoff_slots = 0;
};

struct ContentionOutcome {
    enum class Kind { Idle, Success, Collision };
    Kind kind = Kind::Idle;
    std::uint64_t fire_slot = 0;              // slots after idle start where transmission begins
    std::vector<std::uint32_t> transmitters;  // station ids, ascending
};

// Resolves who transmits next within one idle period. Every contender waits
// offset + aifsn idle slots, then counts its backoff down once per further
// idle slot; whoever reaches zero first transmits, simultaneous zeros
// collide. Non-transmitters' backoff_slots are decremented in place by the
// idle slots they observed — the fire boundary itself included, matching a
// counter that decrements at the end of an idle slot — which always leaves a
// loser at one or more.
ContentionOutcome arbitrate_contention(std::span<Contender> contenders);

// Channel seized outside contention (a beacon) after `completed_boundaries`
// full idle slots: contenders keep their backoff minus the decrements made
// strictly before the seizure, so a station that would have fired exactly at
// the seizure instant holds at one instead.
void freeze_for_interruption(std::span<Contender> contenders, std::uint64_t completed_boundaries);

// Frame-exchange durations in ticks, fixed once per scenario.
struct FrameTiming {
    SimTime slot = 9;
    SimTime sifs = 16;
    SimTime ack = 44;
    SimTime preamble = 40;
    std::uint64_t rate_bps = 65'000'000;

    SimTime data_ticks(std::uint32_t payload_bytes) const;    // preamble + payload air time
    SimTime success_busy(std::uint32_t payload_bytes) const;  // data + SIFS + ACK
    SimTime collision_busy(std::uint32_t longest_payload_bytes) const;  // data + ACK timeout
    SimTime beacon_busy(std::uint32_t beacon_bytes) const;    // broadcast, no ACK
    static FrameTiming from_scenario(const runner::ScenarioSpec& spec);
};

struct RunOptions {
    bool paranoid = false;  // re-check station invariants after every channel event
};

// Executes one scenario under one policy. Deterministic in
// (scenario, policy, seed): identical inputs give identical ledgers,
// including the event-trace hash. Throws ConfigError for an invalid
// scenario; ProtocolError if paranoid checks or final conservation fail.
metrics::MetricsLedger run(const runner::ScenarioSpec& scenario, const PolicyConfig& policy,
                           std::uint64_t seed, const RunOptions& options = {});

}  // namespace edcasim::kernel
