#include <doctest.h>

#include <algorithm>
#include <string>

#include "edcasim/errors.hpp"
#include "edcasim/metrics.hpp"

using namespace edcasim;
using namespace edcasim::metrics;

namespace {

MetricsLedger sample_ledger() {
    MetricsLedger m;
    m.scenario_id = "demo";
    m.policy = "edca";
    m.seed = 3;
    m.duration_s = 10.0;
    m.warmup_s = 1.0;
    AcTotals& be = m.for_ac(AccessCategory::BE);
    be.station_count = 2;
    be.generated_frames = 10;
    be.delivered_frames = 9;
    be.dropped_frames = 1;
    be.delivered_bits = 9 * 800;
    be.offered_bits = 10 * 800;
    be.sum_access_delay_ticks = 9 * 2000;  // 2 ms each
    be.sum_retransmissions = 2;
    return m;
}

}  // namespace

TEST_CASE("normalized throughput is delivered over offered") {
    MetricsLedger m = sample_ledger();
    CHECK(normalized_throughput(m) == doctest::Approx(0.9));
    CHECK(normalized_throughput(m, AccessCategory::BE) == doctest::Approx(0.9));

    SUBCASE("lossless run scores one") {
        AcTotals& be = m.for_ac(AccessCategory::BE);
        be.delivered_frames = be.generated_frames;
        be.dropped_frames = 0;
        be.delivered_bits = be.offered_bits;
        CHECK(normalized_throughput(m) == doctest::Approx(1.0));
    }

    SUBCASE("empty scope is undefined") {
        CHECK_THROWS_AS(normalized_throughput(m, AccessCategory::VO), UndefinedError);
    }
}

TEST_CASE("mean access delay averages delivered frames") {
    MetricsLedger m = sample_ledger();
    CHECK(mean_access_delay_s(m) == doctest::Approx(2e-3));

    MetricsLedger empty;
    CHECK_THROWS_AS(mean_access_delay_s(empty), UndefinedError);
}

TEST_CASE("retransmissions per completed frame") {
    MetricsLedger m = sample_ledger();
    // 2 retransmissions across 10 completed frames
    CHECK(retransmission_attempts(m) == doctest::Approx(0.2));

    SUBCASE("a frame delivered after two failed attempts contributes two") {
        MetricsLedger one;
        AcTotals& be = one.for_ac(AccessCategory::BE);
        be.station_count = 1;
        be.generated_frames = be.delivered_frames = 1;
        be.sum_retransmissions = 2;
        CHECK(retransmission_attempts(one) == doctest::Approx(2.0));
    }

    SUBCASE("no completions is undefined") {
        MetricsLedger none;
        CHECK_THROWS_AS(retransmission_attempts(none), UndefinedError);
    }
}

TEST_CASE("conservation check") {
    MetricsLedger m = sample_ledger();
    CHECK_NOTHROW(verify_conservation(m));

    m.for_ac(AccessCategory::BE).dropped_frames = 0;
    CHECK_THROWS_AS(verify_conservation(m), UndefinedError);
}

TEST_CASE("csv export") {
    SUBCASE("header only for an empty set") {
        CHECK(export_csv({}) ==
              "scenario_id,policy,seed,scope,normalized_throughput,mean_delay_s,"
              "retx_per_frame,generated,delivered,dropped,collisions\n");
    }

    SUBCASE("one run with BE stations yields global and be rows") {
        const std::string csv = export_csv({sample_ledger()});
        CHECK(csv.find("demo,edca,3,global,") != std::string::npos);
        CHECK(csv.find("demo,edca,3,be,") != std::string::npos);
        CHECK(csv.find(",vo,") == std::string::npos);
        // two data rows plus header
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    }

    SUBCASE("rows are sorted and rendering is reproducible") {
        MetricsLedger a = sample_ledger();
        MetricsLedger b = sample_ledger();
        b.seed = 1;
        MetricsLedger c = sample_ledger();
        c.policy = "qcaaae";
        const std::string once = export_csv({a, b, c});
        const std::string again = export_csv({c, a, b});
        CHECK(once == again);
        CHECK(once.find(",1,global") < once.find(",3,global"));
        CHECK(once.find("edca") < once.find("qcaaae"));
    }

    SUBCASE("six significant digits") {
        MetricsLedger m = sample_ledger();
        AcTotals& be = m.for_ac(AccessCategory::BE);
        be.delivered_bits = 2;
        be.offered_bits = 3;
        const std::string csv = export_csv({m});
        CHECK(csv.find("0.666667") != std::string::npos);  // 2/3 rounded at the sixth digit
        CHECK(csv.find("0.6666666") == std::string::npos);
    }
}
