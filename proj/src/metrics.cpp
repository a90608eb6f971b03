#include "edcasim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <tuple>

#include "edcasim/errors.hpp"

namespace edcasim::metrics {

namespace {

AcTotals scoped(const MetricsLedger& ledger, Scope scope) {
    return scope ? ledger.for_ac(*scope) : ledger.global();
}

std::string format_sig6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

AcTotals MetricsLedger::global() const {
    AcTotals g;
    for (const AcTotals& t : ac) {
        g.generated_frames += t.generated_frames;
        g.delivered_frames += t.delivered_frames;
        g.dropped_frames += t.dropped_frames;
        g.queued_end_frames += t.queued_end_frames;
        g.delivered_bits += t.delivered_bits;
        g.offered_bits += t.offered_bits;
        g.sum_access_delay_ticks += t.sum_access_delay_ticks;
        g.sum_retransmissions += t.sum_retransmissions;
        g.collision_participations += t.collision_participations;
        g.station_count += t.station_count;
    }
    return g;
}

double normalized_throughput(const MetricsLedger& ledger, Scope scope) {
    const AcTotals t = scoped(ledger, scope);
    if (t.offered_bits == 0)
        throw UndefinedError("normalized throughput undefined: no offered bits in scope");
    return static_cast<double>(t.delivered_bits) / static_cast<double>(t.offered_bits);
}

double mean_access_delay_s(const MetricsLedger& ledger, Scope scope) {
    const AcTotals t = scoped(ledger, scope);
    if (t.delivered_frames == 0)
        throw UndefinedError("mean access delay undefined: no delivered frames in scope");
    return static_cast<double>(t.sum_access_delay_ticks) * kTickSeconds /
           static_cast<double>(t.delivered_frames);
}

double retransmission_attempts(const MetricsLedger& ledger, Scope scope) {
    const AcTotals t = scoped(ledger, scope);
    const std::uint64_t completed = t.delivered_frames + t.dropped_frames;
    if (completed == 0)
        throw UndefinedError("retransmission rate undefined: no completed frames in scope");
    return static_cast<double>(t.sum_retransmissions) / static_cast<double>(completed);
}

void verify_conservation(const MetricsLedger& ledger) {
    auto check = [](const AcTotals& t, const std::string& name) {
        if (t.generated_frames != t.delivered_frames + t.dropped_frames + t.queued_end_frames)
            throw UndefinedError("frame conservation violated in scope " + name + ": " +
                                 std::to_string(t.generated_frames) + " generated vs " +
                                 std::to_string(t.delivered_frames) + " delivered + " +
                                 std::to_string(t.dropped_frames) + " dropped + " +
                                 std::to_string(t.queued_end_frames) + " queued");
    };
    for (AccessCategory ac : kAllAccessCategories) check(ledger.for_ac(ac), std::string(ac_name(ac)));
    check(ledger.global(), "global");
}

std::string export_csv(const std::vector<MetricsLedger>& ledgers) {
    struct Row {
        std::string scenario_id;
        std::string policy;
        std::uint64_t seed;
        std::string scope;
        std::string rendered;
    };

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<Row> rows;
    for (const MetricsLedger& ledger : ledgers) {
        auto add_scope = [&](Scope scope, const std::string& scope_name) {
            const AcTotals t = scoped(ledger, scope);
            const double thr = t.offered_bits
                                   ? static_cast<double>(t.delivered_bits) /
                                         static_cast<double>(t.offered_bits)
                                   : nan;
            const double delay = t.delivered_frames
                                     ? static_cast<double>(t.sum_access_delay_ticks) *
                                           kTickSeconds / static_cast<double>(t.delivered_frames)
                                     : nan;
            const std::uint64_t completed = t.delivered_frames + t.dropped_frames;
            const double retx = completed ? static_cast<double>(t.sum_retransmissions) /
                                                static_cast<double>(completed)
                                          : nan;
            const std::uint64_t collisions =
                scope ? t.collision_participations : ledger.collision_events;
            std::string line;
            line += ledger.scenario_id;
            line += ',';
            line += ledger.policy;
            line += ',';
            line += std::to_string(ledger.seed);
            line += ',';
            line += scope_name;
            line += ',';
            line += format_sig6(thr);
            line += ',';
            line += format_sig6(delay);
            line += ',';
            line += format_sig6(retx);
            line += ',';
            line += std::to_string(t.generated_frames);
            line += ',';
            line += std::to_string(t.delivered_frames);
            line += ',';
            line += std::to_string(t.dropped_frames);
            line += ',';
            line += std::to_string(collisions);
            line += '\n';
            rows.push_back({ledger.scenario_id, ledger.policy, ledger.seed, scope_name, line});
        };
        add_scope({}, "global");
        for (AccessCategory ac : kAllAccessCategories) {
            if (ledger.for_ac(ac).station_count > 0) add_scope(ac, std::string(ac_name(ac)));
        }
    }

    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.scenario_id, a.policy, a.seed, a.scope) <
               std::tie(b.scenario_id, b.policy, b.seed, b.scope);
    });

    std::string out =
        "scenario_id,policy,seed,scope,normalized_throughput,mean_delay_s,"
        "retx_per_frame,generated,delivered,dropped,collisions\n";
    for (const Row& r : rows) out += r.rendered;
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace edcasim::metrics
