#include "edcasim/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edcasim/errors.hpp"
#include "edcasim/traffic.hpp"

namespace edcasim::kernel {

namespace {

SimTime ticks_of(double seconds) { return static_cast<SimTime>(std::llround(seconds * 1e6)); }

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

// FNV-1a over the event stream; any divergence between two runs shows up here.
struct TraceHash {
    std::uint64_t state = 1469598103934665603ULL;

    void mix(std::uint64_t value) {
        for (int i = 0; i < 8; ++i) {
            state ^= (value >> (8 * i)) & 0xffULL;
            state *= 1099511628211ULL;
        }
    }
};

std::uint64_t fire_slot_of(const Contender& c) {
    return std::uint64_t{c.offset_slots} + c.aifsn + c.backoff_slots;
}

std::uint64_t waited_slots_of(const Contender& c) {
    return std::uint64_t{c.offset_slots} + c.aifsn;
}

}  // namespace

PolicyConfig static_edca_policy() { return {}; }

PolicyConfig qcaaae_policy() { return {PolicyKind::Qcaaae, policy::static_edca_params()}; }

std::uint32_t draw_backoff(Rng& rng, std::uint32_t cw_current) {
    if (cw_current < 1) throw ProtocolError("backoff draw with contention window below 1");
    return rng.uniform_below(cw_current + 1);
}

void on_success(StationState& st) {
    if (st.queue.empty()) throw ProtocolError("delivery finished on an empty queue");
    st.queue.pop_front();
    st.cw_current = st.params.cw_min;
    st.retry_count = 0;
}

bool on_failure(StationState& st, std::uint32_t retry_limit) {
    if (st.queue.empty()) throw ProtocolError("collision resolved on an empty queue");
    st.cw_current = std::min(2 * st.cw_current + 1, st.params.cw_max);
    st.retry_count += 1;
    if (st.retry_count > retry_limit) {
        st.queue.pop_front();
        st.cw_current = st.params.cw_min;
        st.retry_count = 0;
        return true;
    }
    return false;
}

void apply_beacon_params(StationState& st, const policy::AcParams& params) {
    st.params = params;
    st.cw_current = std::clamp(st.cw_current, params.cw_min, params.cw_max);
}

ContentionOutcome arbitrate_contention(std::span<Contender> contenders) {
    ContentionOutcome out;
    if (contenders.empty()) return out;

    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (const Contender& c : contenders) best = std::min(best, fire_slot_of(c));

    out.fire_slot = best;
    for (Contender& c : contenders) {
        if (fire_slot_of(c) == best) {
            out.transmitters.push_back(c.station_id);
        } else {
            const std::uint64_t waited = waited_slots_of(c);
            if (best > waited) {
                const auto dec = std::min<std::uint64_t>(c.backoff_slots, best - waited);
                c.backoff_slots -= static_cast<std::uint32_t>(dec);
            }
        }
    }
    std::sort(out.transmitters.begin(), out.transmitters.end());
    out.kind = out.transmitters.size() == 1 ? ContentionOutcome::Kind::Success
                                            : ContentionOutcome::Kind::Collision;
    return out;
}

void freeze_for_interruption(std::span<Contender> contenders, std::uint64_t completed_boundaries) {
    for (Contender& c : contenders) {
        const std::uint64_t waited = waited_slots_of(c);
        if (completed_boundaries > waited) {
            const auto dec = std::min<std::uint64_t>(c.backoff_slots, completed_boundaries - waited);
            c.backoff_slots -= static_cast<std::uint32_t>(dec);
        }
    }
}

SimTime FrameTiming::data_ticks(std::uint32_t payload_bytes) const {
    const std::uint64_t bits = std::uint64_t{payload_bytes} * 8;
    return preamble + static_cast<SimTime>(ceil_div(bits * 1'000'000ULL, rate_bps));
}

SimTime FrameTiming::success_busy(std::uint32_t payload_bytes) const {
    return data_ticks(payload_bytes) + sifs + ack;
}

SimTime FrameTiming::collision_busy(std::uint32_t longest_payload_bytes) const {
    // the ACK timeout equals SIFS + ACK, so the channel cost matches a success
    return data_ticks(longest_payload_bytes) + sifs + ack;
}

SimTime FrameTiming::beacon_busy(std::uint32_t beacon_bytes) const { return data_ticks(beacon_bytes); }

FrameTiming FrameTiming::from_scenario(const runner::ScenarioSpec& spec) {
    FrameTiming t;
    t.slot = ticks_of(spec.slot_time_s);
    t.sifs = ticks_of(spec.sifs_s);
    t.ack = ticks_of(spec.ack_s);
    t.preamble = ticks_of(spec.preamble_s);
    t.rate_bps = static_cast<std::uint64_t>(std::llround(spec.phy_rate_bps));
    return t;
}

namespace {

// A station plus the run-loop bookkeeping around its MAC state.
struct Station {
    std::uint32_t id = 0;
    AccessCategory ac = AccessCategory::BE;
    traffic::TrafficSource source;
    SimTime join_tick = 0;
    SimTime leave_tick = kNever;

    StationState mac;
    Rng rng{0};
    bool associated = false;
    SimTime ready_at = 0;  // earliest instant it may begin sensing for the head frame
    std::uint64_t next_arrival_index = 0;  // ConstantRate only
    SimTime next_arrival_tick = kNever;
    std::uint64_t generated_counted = 0;   // feeds the saturated offered-load total
};

// Out-of-band structural events, processed in (tick, rank, station) order.
// Rank places beacons before membership changes and arrivals at equal ticks.
enum class EventRank : int { Beacon = 0, Leave = 1, Join = 2, Arrival = 3 };

struct AssocEvent {
    SimTime tick = 0;
    EventRank rank = EventRank::Join;
    std::uint32_t station_id = 0;
};

class Simulation {
  public:
    Simulation(const runner::ScenarioSpec& spec, const PolicyConfig& policy, std::uint64_t seed,
               const RunOptions& options)
        : spec_(spec),
          policy_(policy),
          options_(options),
          timing_(FrameTiming::from_scenario(spec)) {
        runner::validate(spec);
        duration_ = ticks_of(spec.duration_s);
        warmup_ = ticks_of(spec.warmup_s);
        beacon_interval_ = ticks_of(spec.beacon_interval_s);
        broadcast_ = policy.static_set;
        last_built_ = policy.static_set;

        ledger_.scenario_id = spec.scenario_id;
        ledger_.policy = policy.label();
        ledger_.seed = seed;
        ledger_.duration_s = spec.duration_s;
        ledger_.warmup_s = spec.warmup_s;

        std::uint32_t id = 0;
        for (const runner::StationGroup& group : spec.station_groups) {
            for (std::uint32_t i = 0; i < group.count; ++i, ++id) {
                Station st;
                st.id = id;
                st.ac = group.ac;
                st.source = group.source;
                st.join_tick = ticks_of(group.join_s);
                st.leave_tick = group.leave_s ? ticks_of(*group.leave_s) : kNever;
                st.rng = Rng::for_stream(seed, id);
                stations_.push_back(std::move(st));
            }
            ledger_.for_ac(group.ac).station_count += group.count;
        }

        for (const Station& st : stations_) {
            events_.push_back({st.join_tick, EventRank::Join, st.id});
            if (st.leave_tick != kNever && st.leave_tick < duration_)
                events_.push_back({st.leave_tick, EventRank::Leave, st.id});
        }
        std::sort(events_.begin(), events_.end(), [](const AssocEvent& a, const AssocEvent& b) {
            return std::tie(a.tick, a.rank, a.station_id) < std::tie(b.tick, b.rank, b.station_id);
        });
    }

    metrics::MetricsLedger take_run() {
        while (step()) {
        }
        finalize();
        return std::move(ledger_);
    }

  private:
    // --- structural event lookahead -------------------------------------

    SimTime next_beacon_tick() const {
        const SimTime tick = beacon_index_ * beacon_interval_;
        return tick < duration_ ? tick : kNever;
    }

    SimTime arrival_tick_for(const Station& st, std::uint64_t index) const {
        return st.join_tick + static_cast<SimTime>(std::llround(
                                  static_cast<double>(index) * 1e6 / st.source.rate_fps));
    }

    // --- traffic ----------------------------------------------------------

    void generate_frame(Station& st, SimTime arrival) {
        const bool counted = arrival >= warmup_;
        const bool was_empty = st.mac.queue.empty();
        st.mac.queue.push_back(Frame{arrival, st.source.payload_bytes, counted});
        if (counted) {
            ledger_.for_ac(st.ac).generated_frames += 1;
            st.generated_counted += 1;
        }
        if (was_empty) {
            st.ready_at = arrival;
            st.mac.backoff_drawn = false;
        }
    }

    // --- contender scan ---------------------------------------------------

    void build_contenders() {
        contenders_.clear();
        contender_stations_.clear();
        for (Station& st : stations_) {
            if (!st.associated || st.mac.queue.empty()) continue;
            if (!st.mac.backoff_drawn) {
                st.mac.backoff_counter = draw_backoff(st.rng, st.mac.cw_current);
                st.mac.backoff_drawn = true;
            }
            std::uint32_t offset = 0;
            if (st.ready_at > idle_start_)
                offset = static_cast<std::uint32_t>(
                    ceil_div(static_cast<std::uint64_t>(st.ready_at - idle_start_),
                             static_cast<std::uint64_t>(timing_.slot)));
            contenders_.push_back(
                Contender{st.id, st.mac.params.aifsn, offset, st.mac.backoff_counter});
            contender_stations_.push_back(&st);
        }
    }

    SimTime min_fire_tick() const {
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        for (const Contender& c : contenders_) best = std::min(best, fire_slot_of(c));
        if (best == std::numeric_limits<std::uint64_t>::max()) return kNever;
        return idle_start_ + static_cast<SimTime>(best) * timing_.slot;
    }

    void write_back_backoffs() {
        for (std::size_t i = 0; i < contenders_.size(); ++i)
            contender_stations_[i]->mac.backoff_counter = contenders_[i].backoff_slots;
    }

    // --- event handlers ---------------------------------------------------

    void handle_beacon(SimTime scheduled) {
        const SimTime start = std::max(idle_start_, scheduled);  // deferred if the channel was busy
        if (start > idle_start_) {
            const std::uint64_t boundaries =
                static_cast<std::uint64_t>(start - idle_start_ - 1) /
                static_cast<std::uint64_t>(timing_.slot);
            freeze_for_interruption(std::span<Contender>(contenders_), boundaries);
            write_back_backoffs();
        }
        if (policy_.kind == PolicyKind::Qcaaae) {
            last_built_ = policy::build_param_set(counters_, last_built_);
            broadcast_ = last_built_;
        }
        for (Station& st : stations_)
            if (st.associated) apply_beacon_params(st.mac, broadcast_.for_ac(st.ac));
        idle_start_ = start + timing_.beacon_busy(spec_.beacon_bytes);
        beacon_index_ += 1;
        hash_.mix(1);
        hash_.mix(static_cast<std::uint64_t>(start));
        hash_.mix(broadcast_.epoch);
    }

    void handle_leave(const AssocEvent& ev) {
        Station& st = stations_[ev.station_id];
        if (!st.associated) throw ProtocolError("leave event for a station that is not associated");
        for (const Frame& frame : st.mac.queue)
            if (frame.counted) ledger_.for_ac(st.ac).queued_end_frames += 1;
        st.mac.queue.clear();
        st.mac.backoff_drawn = false;
        st.associated = false;
        st.next_arrival_tick = kNever;
        if (policy_.kind == PolicyKind::Qcaaae)
            counters_ = policy::register_disassociation(counters_, flags_for(st.ac));
        hash_.mix(2);
        hash_.mix(static_cast<std::uint64_t>(ev.tick));
        hash_.mix(st.id);
    }

    void handle_join(const AssocEvent& ev) {
        Station& st = stations_[ev.station_id];
        st.associated = true;
        st.mac.params = broadcast_.for_ac(st.ac);
        st.mac.cw_current = st.mac.params.cw_min;
        st.mac.retry_count = 0;
        st.mac.backoff_drawn = false;
        st.ready_at = ev.tick;
        if (st.source.mode == traffic::TrafficMode::Saturated) {
            generate_frame(st, ev.tick);
        } else {
            st.next_arrival_index = 1;
            st.next_arrival_tick = arrival_tick_for(st, 1);
        }
        if (policy_.kind == PolicyKind::Qcaaae)
            counters_ = policy::register_association(counters_, flags_for(st.ac));
        hash_.mix(3);
        hash_.mix(static_cast<std::uint64_t>(ev.tick));
        hash_.mix(st.id);
    }

    void handle_arrival(Station& st) {
        const SimTime tick = st.next_arrival_tick;
        st.next_arrival_index += 1;
        st.next_arrival_tick = arrival_tick_for(st, st.next_arrival_index);
        if (st.mac.queue.size() >= st.source.queue_capacity) {
            // full queue: the newest arrival is generated and immediately lost
            const bool counted = tick >= warmup_;
            if (counted) {
                auto& totals = ledger_.for_ac(st.ac);
                totals.generated_frames += 1;
                totals.dropped_frames += 1;
                st.generated_counted += 1;
            }
        } else {
            generate_frame(st, tick);
        }
    }

    void after_service(Station& st, SimTime busy_end) {
        st.ready_at = busy_end;
        st.mac.backoff_drawn = false;
        if (st.source.mode == traffic::TrafficMode::Saturated && st.associated &&
            busy_end < duration_)
            generate_frame(st, busy_end);
    }

    void resolve_fire() {
        const ContentionOutcome out = arbitrate_contention(std::span<Contender>(contenders_));
        write_back_backoffs();
        const SimTime t_fire = idle_start_ + static_cast<SimTime>(out.fire_slot) * timing_.slot;
        const bool after_warmup = t_fire >= warmup_;

        if (out.kind == ContentionOutcome::Kind::Success) {
            Station& st = stations_[out.transmitters.front()];
            const Frame frame = st.mac.queue.front();
            const SimTime busy_end = t_fire + timing_.success_busy(frame.payload_bytes);
            if (frame.counted) {
                auto& totals = ledger_.for_ac(st.ac);
                totals.delivered_frames += 1;
                totals.delivered_bits += std::uint64_t{frame.payload_bytes} * 8;
                totals.sum_access_delay_ticks += busy_end - frame.arrival_tick;
                totals.sum_retransmissions += st.mac.retry_count;
            }
            on_success(st.mac);
            after_service(st, busy_end);
            idle_start_ = busy_end;
            hash_.mix(4);
            hash_.mix(static_cast<std::uint64_t>(t_fire));
            hash_.mix(st.id);
        } else {
            std::uint32_t longest = 0;
            for (std::uint32_t id : out.transmitters)
                longest = std::max(longest, stations_[id].mac.queue.front().payload_bytes);
            const SimTime busy_end = t_fire + timing_.collision_busy(longest);
            if (after_warmup) ledger_.collision_events += 1;
            hash_.mix(5);
            hash_.mix(static_cast<std::uint64_t>(t_fire));
            for (std::uint32_t id : out.transmitters) {
                Station& st = stations_[id];
                hash_.mix(id);
                if (after_warmup) ledger_.for_ac(st.ac).collision_participations += 1;
                const Frame frame = st.mac.queue.front();
                const std::uint32_t prior_retries = st.mac.retry_count;
                const bool dropped = on_failure(st.mac, spec_.retry_limit);
                if (dropped) {
                    if (frame.counted) {
                        auto& totals = ledger_.for_ac(st.ac);
                        totals.dropped_frames += 1;
                        totals.sum_retransmissions += prior_retries;
                    }
                    after_service(st, busy_end);
                } else {
                    st.ready_at = busy_end;
                    st.mac.backoff_drawn = false;
                }
            }
            idle_start_ = busy_end;
        }
        if (options_.paranoid) check_invariants();
    }

    // --- main loop ----------------------------------------------------------

    bool step() {
        AssocEvent next{kNever, EventRank::Arrival, 0};
        bool have_event = false;

        if (const SimTime beacon = next_beacon_tick(); beacon != kNever) {
            next = {beacon, EventRank::Beacon, 0};
            have_event = true;
        }
        if (event_index_ < events_.size()) {
            const AssocEvent& ev = events_[event_index_];
            if (ev.tick < duration_ &&
                (!have_event || std::tie(ev.tick, ev.rank, ev.station_id) <
                                    std::tie(next.tick, next.rank, next.station_id))) {
                next = ev;
                have_event = true;
            }
        }
        for (const Station& st : stations_) {
            if (!st.associated || st.next_arrival_tick == kNever) continue;
            if (st.next_arrival_tick >= duration_) continue;
            const AssocEvent ev{st.next_arrival_tick, EventRank::Arrival, st.id};
            if (!have_event || std::tie(ev.tick, ev.rank, ev.station_id) <
                                   std::tie(next.tick, next.rank, next.station_id)) {
                next = ev;
                have_event = true;
            }
        }

        build_contenders();
        const SimTime fire = min_fire_tick();

        if (have_event && next.tick <= fire) {
            switch (next.rank) {
                case EventRank::Beacon:
                    handle_beacon(next.tick);
                    break;
                case EventRank::Leave:
                    handle_leave(next);
                    event_index_ += 1;
                    break;
                case EventRank::Join:
                    handle_join(next);
                    event_index_ += 1;
                    break;
                case EventRank::Arrival:
                    handle_arrival(stations_[next.station_id]);
                    break;
            }
            if (options_.paranoid) check_invariants();
            return true;
        }

        if (fire == kNever || fire >= duration_) return false;
        resolve_fire();
        return true;
    }

    void check_invariants() const {
        for (const Station& st : stations_) {
            if (!st.associated) continue;
            const auto& mac = st.mac;
            if (mac.cw_current < mac.params.cw_min || mac.cw_current > mac.params.cw_max)
                throw ProtocolError("station window left its configured range");
            if (mac.retry_count > spec_.retry_limit)
                throw ProtocolError("station exceeded the retry limit without dropping");
            if (mac.queue.empty() && mac.backoff_drawn)
                throw ProtocolError("station holds a backoff with nothing to send");
        }
    }

    void finalize() {
        for (Station& st : stations_) {
            if (!st.associated) continue;
            for (const Frame& frame : st.mac.queue)
                if (frame.counted) ledger_.for_ac(st.ac).queued_end_frames += 1;
        }
        for (const Station& st : stations_) {
            // For a constant-rate source the measurement window is the span its
            // counted arrivals cover, generated/rate, which makes the offered
            // total exactly generated x payload: a lossless run then scores a
            // normalized throughput of exactly 1 and never more.
            double window_s = 0.0;
            if (st.source.mode == traffic::TrafficMode::ConstantRate)
                window_s = static_cast<double>(st.generated_counted) / st.source.rate_fps;
            const double bits =
                traffic::offered_load_bits(st.source, window_s, 0, st.generated_counted);
            ledger_.for_ac(st.ac).offered_bits += static_cast<std::uint64_t>(std::llround(bits));
        }
        ledger_.trace_hash = hash_.state;
        metrics::verify_conservation(ledger_);
    }

    static policy::QosCapabilityFlags flags_for(AccessCategory ac) {
        policy::QosCapabilityFlags flags;
        switch (ac) {
            case AccessCategory::VO: flags.vo = true; break;
            case AccessCategory::VI: flags.vi = true; break;
            case AccessCategory::BE: flags.be = true; break;
            case AccessCategory::BK: flags.bk = true; break;
        }
        return flags;
    }

    const runner::ScenarioSpec& spec_;
    const PolicyConfig& policy_;
    const RunOptions options_;
    const FrameTiming timing_;

    SimTime duration_ = 0;
    SimTime warmup_ = 0;
    SimTime beacon_interval_ = 0;
    SimTime idle_start_ = 0;
    std::int64_t beacon_index_ = 1;

    std::vector<Station> stations_;
    std::vector<AssocEvent> events_;
    std::size_t event_index_ = 0;

    policy::AcCounters counters_;
    policy::EdcaParamSet broadcast_;
    policy::EdcaParamSet last_built_;

    std::vector<Contender> contenders_;
    std::vector<Station*> contender_stations_;

    metrics::MetricsLedger ledger_;
    TraceHash hash_;
};

}  // namespace

metrics::MetricsLedger run(const runner::ScenarioSpec& scenario, const PolicyConfig& policy,
                           std::uint64_t seed, const RunOptions& options) {
    Simulation sim(scenario, policy, seed, options);
    return sim.take_run();
}

}  // namespace edcasim::kernel
