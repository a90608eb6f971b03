#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "edcasim/sweep.hpp"

using namespace edcasim;
using namespace edcasim::runner;

namespace {

ScenarioSpec tiny_scenario(const std::string& id, std::uint32_t be_count) {
    ScenarioSpec spec;
    spec.scenario_id = id;
    spec.duration_s = 0.3;
    spec.warmup_s = 0.05;
    spec.station_groups.push_back(
        {AccessCategory::BE, be_count, traffic::default_source_for(AccessCategory::BE), 0.0, {}});
    return spec;
}

}  // namespace

TEST_CASE("sweep covers the cross product in input order") {
    const std::vector<ScenarioSpec> scenarios = {tiny_scenario("cell_a", 2),
                                                 tiny_scenario("cell_b", 3)};
    const std::vector<kernel::PolicyConfig> policies = {kernel::static_edca_policy(),
                                                        kernel::qcaaae_policy()};
    SweepOptions options;
    options.seeds = {1, 2};
    options.jobs = 2;

    const SweepResult result = run_sweep(scenarios, policies, options);
    REQUIRE(result.ok());
    REQUIRE(result.ledgers.size() == 8);

    // scenario-major, then policy, then seed — regardless of worker timing
    CHECK(result.ledgers[0].scenario_id == "cell_a");
    CHECK(result.ledgers[0].policy == "edca");
    CHECK(result.ledgers[0].seed == 1);
    CHECK(result.ledgers[3].policy == "qcaaae");
    CHECK(result.ledgers[3].seed == 2);
    CHECK(result.ledgers[4].scenario_id == "cell_b");

    SUBCASE("parallel and serial sweeps agree") {
        SweepOptions serial = options;
        serial.jobs = 1;
        const SweepResult again = run_sweep(scenarios, policies, serial);
        REQUIRE(again.ledgers.size() == result.ledgers.size());
        for (std::size_t i = 0; i < result.ledgers.size(); ++i)
            CHECK(again.ledgers[i] == result.ledgers[i]);
    }
}

TEST_CASE("a failing cell is reported and the rest complete") {
    ScenarioSpec bad = tiny_scenario("broken", 1);
    bad.station_groups.clear();  // no stations: rejected when the run starts
    const std::vector<ScenarioSpec> scenarios = {tiny_scenario("fine", 1), bad};
    const std::vector<kernel::PolicyConfig> policies = {kernel::static_edca_policy()};
    SweepOptions options;
    options.seeds = {1};

    const SweepResult result = run_sweep(scenarios, policies, options);
    CHECK_FALSE(result.ok());
    REQUIRE(result.failures.size() == 1);
    CHECK(result.failures[0].scenario_id == "broken");
    CHECK(result.failures[0].policy == "edca");
    CHECK(!result.failures[0].message.empty());
    REQUIRE(result.ledgers.size() == 1);
    CHECK(result.ledgers[0].scenario_id == "fine");
}

TEST_CASE("summary pairs the policies per scenario and scope") {
    const std::vector<ScenarioSpec> scenarios = {tiny_scenario("cell_a", 2),
                                                 tiny_scenario("cell_b", 3)};
    const std::vector<kernel::PolicyConfig> policies = {kernel::static_edca_policy(),
                                                        kernel::qcaaae_policy()};
    SweepOptions options;
    options.seeds = {1, 2};
    options.jobs = 1;

    const SweepResult result = run_sweep(scenarios, policies, options);
    const std::string csv = summary_csv(result.ledgers);

    // header + (global, be) rows for each of the two scenarios
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(csv.find("scenario_id,scope,edca_norm_tput,qcaaae_norm_tput,tput_gain,") == 0);
    CHECK(csv.find("cell_a,be,") != std::string::npos);
    CHECK(csv.find("cell_a,global,") != std::string::npos);
    CHECK(csv.find("cell_b,global,") != std::string::npos);
    CHECK(csv.find("nan") == std::string::npos);  // every metric defined here

    CHECK(summary_csv(result.ledgers) == csv);  // stable rendering
}
