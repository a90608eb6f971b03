#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "edcasim/errors.hpp"
#include "edcasim/scenario.hpp"

using namespace edcasim;
using namespace edcasim::runner;

namespace {

const char* kSampleText = R"(# two saturated groups
scenario_id = sample
duration_s = 4
warmup_s = 0.5

[group]
ac = vo
count = 3

[group]
ac = be
count = 8
payload_bytes = 200
join_s = 1
leave_s = 3
)";

}  // namespace

TEST_CASE("parser fills defaults and reads groups") {
    const ScenarioSpec spec = parse_scenario(kSampleText);
    CHECK(spec.scenario_id == "sample");
    CHECK(spec.duration_s == 4.0);
    CHECK(spec.warmup_s == 0.5);
    // untouched fields keep their defaults
    CHECK(spec.beacon_interval_s == 0.1024);
    CHECK(spec.slot_time_s == 9e-6);
    CHECK(spec.phy_rate_bps == 65e6);
    CHECK(spec.retry_limit == 7);
    CHECK(spec.beacon_bytes == 128);

    REQUIRE(spec.station_groups.size() == 2);
    const StationGroup& vo = spec.station_groups[0];
    CHECK(vo.ac == AccessCategory::VO);
    CHECK(vo.count == 3);
    CHECK(vo.source.mode == traffic::TrafficMode::Saturated);
    CHECK(vo.source.payload_bytes == 50);  // category default applies
    CHECK(vo.join_s == 0.0);
    CHECK(!vo.leave_s.has_value());

    const StationGroup& be = spec.station_groups[1];
    CHECK(be.ac == AccessCategory::BE);
    CHECK(be.count == 8);
    CHECK(be.source.payload_bytes == 200);  // explicit value wins
    CHECK(be.join_s == 1.0);
    CHECK(be.leave_s == 3.0);
}

TEST_CASE("parser reports the offending line") {
    auto message_of = [](const std::string& text) {
        try {
            parse_scenario(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("(no error)");
    };

    SUBCASE("unknown top-level key") {
        const auto msg = message_of("scenario_id = x\nduratoin_s = 10\n");
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("duratoin_s") != std::string::npos);
    }
    SUBCASE("unknown group key") {
        const auto msg = message_of("scenario_id = x\n[group]\nac = be\ncont = 3\n");
        CHECK(msg.find("line 4") != std::string::npos);
        CHECK(msg.find("cont") != std::string::npos);
    }
    SUBCASE("bad number") {
        const auto msg = message_of("scenario_id = x\nduration_s = ten\n");
        CHECK(msg.find("line 2") != std::string::npos);
    }
    SUBCASE("negative count") {
        const auto msg = message_of("scenario_id = x\n[group]\nac = be\ncount = -1\n");
        CHECK(msg.find("line 4") != std::string::npos);
    }
    SUBCASE("missing '='") {
        const auto msg = message_of("scenario_id\n");
        CHECK(msg.find("line 1") != std::string::npos);
    }
    SUBCASE("unknown section") {
        const auto msg = message_of("scenario_id = x\n[stations]\n");
        CHECK(msg.find("line 2") != std::string::npos);
    }
    SUBCASE("unknown access category") {
        const auto msg = message_of("scenario_id = x\n[group]\nac = video\n");
        CHECK(msg.find("line 3") != std::string::npos);
    }
    SUBCASE("bk group without explicit payload") {
        const auto msg = message_of("scenario_id = x\n[group]\nac = bk\ncount = 1\n");
        CHECK(msg.find("payload_bytes") != std::string::npos);
    }
}

TEST_CASE("validate rejects inconsistent fields") {
    ScenarioSpec ok;
    ok.scenario_id = "ok";
    ok.station_groups.push_back({AccessCategory::BE, 2, traffic::default_source_for(AccessCategory::BE), 0.0, {}});
    CHECK_NOTHROW(validate(ok));

    SUBCASE("no stations") {
        ScenarioSpec s = ok;
        s.station_groups.clear();
        CHECK_THROWS_AS(validate(s), ConfigError);
        s.station_groups.push_back({AccessCategory::BE, 0, traffic::default_source_for(AccessCategory::BE), 0.0, {}});
        CHECK_THROWS_AS(validate(s), ConfigError);
    }
    SUBCASE("warmup not shorter than duration") {
        ScenarioSpec s = ok;
        s.warmup_s = s.duration_s;
        CHECK_THROWS_AS(validate(s), ConfigError);
    }
    SUBCASE("leave before join") {
        ScenarioSpec s = ok;
        s.station_groups[0].join_s = 2.0;
        s.station_groups[0].leave_s = 1.0;
        CHECK_THROWS_AS(validate(s), ConfigError);
    }
    SUBCASE("join past the end") {
        ScenarioSpec s = ok;
        s.station_groups[0].join_s = s.duration_s;
        CHECK_THROWS_AS(validate(s), ConfigError);
    }
    SUBCASE("constant rate without a rate") {
        ScenarioSpec s = ok;
        s.station_groups[0].source.mode = traffic::TrafficMode::ConstantRate;
        s.station_groups[0].source.rate_fps = 0.0;
        CHECK_THROWS_AS(validate(s), ConfigError);
    }
    SUBCASE("sub-microsecond slot") {
        ScenarioSpec s = ok;
        s.slot_time_s = 4e-7;
        CHECK_THROWS_AS(validate(s), ConfigError);
    }
    SUBCASE("scenario_id unsafe for csv") {
        ScenarioSpec s = ok;
        s.scenario_id = "a,b";
        CHECK_THROWS_AS(validate(s), ConfigError);
    }
}

TEST_CASE("serializer round-trips") {
    SUBCASE("hand-written sample") {
        const ScenarioSpec spec = parse_scenario(kSampleText);
        CHECK(parse_scenario(write_scenario(spec)) == spec);
    }
    SUBCASE("randomized specs") {
        std::mt19937_64 gen(99);
        for (int trial = 0; trial < 200; ++trial) {
            ScenarioSpec spec;
            spec.scenario_id = "trial_" + std::to_string(trial);
            spec.duration_s = 1.0 + static_cast<double>(gen() % 100) * 0.317;
            spec.warmup_s = spec.duration_s * 0.25;
            spec.slot_time_s = 1e-6 * static_cast<double>(1 + gen() % 20);
            spec.phy_rate_bps = 1e6 * static_cast<double>(1 + gen() % 100);
            spec.retry_limit = static_cast<std::uint32_t>(gen() % 10);
            spec.beacon_bytes = static_cast<std::uint32_t>(64 + gen() % 512);
            const unsigned groups = 1 + gen() % 3;
            for (unsigned i = 0; i < groups; ++i) {
                StationGroup g;
                g.ac = kAllAccessCategories[gen() % 3];  // vo/vi/be
                g.count = static_cast<std::uint32_t>(1 + gen() % 40);
                g.source = traffic::default_source_for(g.ac);
                if (gen() % 2 == 0) {
                    g.source.mode = traffic::TrafficMode::ConstantRate;
                    g.source.rate_fps = 10.0 + static_cast<double>(gen() % 1000) * 0.73;
                    g.source.queue_capacity = static_cast<std::uint32_t>(1 + gen() % 100);
                }
                g.join_s = spec.duration_s * 0.1 * static_cast<double>(gen() % 5);
                if (gen() % 3 == 0) g.leave_s = g.join_s + 0.5 + static_cast<double>(gen() % 4);
                spec.station_groups.push_back(g);
            }
            CAPTURE(trial);
            REQUIRE(parse_scenario(write_scenario(spec)) == spec);
        }
    }
}

TEST_CASE("comparison grid enumerates every population mix") {
    const auto grid = paper_grid();
    REQUIRE(grid.size() == 40);

    std::set<std::string> ids;
    for (const ScenarioSpec& spec : grid) {
        ids.insert(spec.scenario_id);
        CHECK_NOTHROW(validate(spec));
        for (const StationGroup& g : spec.station_groups)
            CHECK(g.source.mode == traffic::TrafficMode::Saturated);
    }
    CHECK(ids.size() == 40);  // no duplicate ids
    CHECK(ids.count("be032") == 1);
    CHECK(ids.count("be512") == 1);
    CHECK(ids.count("be128_vo30") == 1);
    CHECK(ids.count("be256_vi05") == 1);
    CHECK(ids.count("be512_vo15_vi15") == 1);

    // the largest cell: 512 BE + 15 VO + 15 VI
    const auto largest = std::find_if(grid.begin(), grid.end(), [](const ScenarioSpec& s) {
        return s.scenario_id == "be512_vo15_vi15";
    });
    REQUIRE(largest != grid.end());
    std::uint64_t total = 0;
    for (const StationGroup& g : largest->station_groups) total += g.count;
    CHECK(total == 542);

    // per-category counts in a mixed cell
    const auto mixed = std::find_if(grid.begin(), grid.end(), [](const ScenarioSpec& s) {
        return s.scenario_id == "be064_vo15";
    });
    REQUIRE(mixed != grid.end());
    REQUIRE(mixed->station_groups.size() == 2);
    CHECK(mixed->station_groups[0].ac == AccessCategory::VO);
    CHECK(mixed->station_groups[0].count == 15);
    CHECK(mixed->station_groups[1].ac == AccessCategory::BE);
    CHECK(mixed->station_groups[1].count == 64);
}

TEST_CASE("grid scale divides counts with a floor of one") {
    const auto grid = paper_grid(16);
    REQUIRE(grid.size() == 40);

    std::set<std::uint32_t> be_counts;
    for (const ScenarioSpec& spec : grid) {
        CHECK(spec.scenario_id.ends_with("_s16"));
        for (const StationGroup& g : spec.station_groups) {
            if (g.ac == AccessCategory::BE) be_counts.insert(g.count);
            if (g.ac == AccessCategory::VO) CHECK((g.count == 1 || g.count == 0));
            CHECK(g.count >= 1);
        }
    }
    CHECK(be_counts == std::set<std::uint32_t>{2, 4, 8, 16, 32});

    CHECK_THROWS_AS(paper_grid(0), DomainError);
}
