#include "edcasim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <thread>

#include "edcasim/errors.hpp"

namespace edcasim::runner {

namespace {

struct Cell {
    const ScenarioSpec* scenario = nullptr;
    const kernel::PolicyConfig* policy = nullptr;
    std::uint64_t seed = 0;
};

std::string render(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double mean_of(const std::vector<double>& values) {
    if (values.empty()) return std::nan("");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

// Per-(scenario, scope) accumulation of one metric's per-seed values.
struct ScopeAccumulator {
    std::vector<double> tput_edca, tput_qcaaae;
    std::vector<double> delay_edca, delay_qcaaae;
    std::vector<double> retx_edca, retx_qcaaae;
};

template <typename Fn>
void push_metric(std::vector<double>& into, Fn&& compute) {
    try {
        into.push_back(compute());
    } catch (const UndefinedError&) {
        // scope had no offered load / deliveries / completions for this seed
    }
}

}  // namespace

SweepResult run_sweep(const std::vector<ScenarioSpec>& scenarios,
                      const std::vector<kernel::PolicyConfig>& policies,
                      const SweepOptions& options) {
    std::vector<Cell> cells;
    cells.reserve(scenarios.size() * policies.size() * options.seeds.size());
    for (const ScenarioSpec& scenario : scenarios)
        for (const kernel::PolicyConfig& policy : policies)
            for (std::uint64_t seed : options.seeds) cells.push_back({&scenario, &policy, seed});

    std::vector<std::optional<metrics::MetricsLedger>> done(cells.size());
    std::vector<std::optional<SweepFailure>> failed(cells.size());
    std::atomic<std::size_t> cursor{0};

    auto worker = [&] {
        kernel::RunOptions run_options;
        run_options.paranoid = options.paranoid;
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& cell = cells[i];
            try {
                done[i] = kernel::run(*cell.scenario, *cell.policy, cell.seed, run_options);
            } catch (const std::exception& e) {
                failed[i] = SweepFailure{cell.scenario->scenario_id, cell.policy->label(),
                                         cell.seed, e.what()};
            }
        }
    };

    unsigned jobs = options.jobs != 0 ? options.jobs
                                      : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, cells.size()));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    SweepResult out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (done[i]) out.ledgers.push_back(std::move(*done[i]));
        if (failed[i]) out.failures.push_back(std::move(*failed[i]));
    }
    return out;
}

std::string summary_csv(const std::vector<metrics::MetricsLedger>& ledgers) {
    std::map<std::pair<std::string, std::string>, ScopeAccumulator> rows;

    for (const metrics::MetricsLedger& ledger : ledgers) {
        const bool adaptive = ledger.policy == "qcaaae";
        if (!adaptive && ledger.policy != "edca") continue;  // no counterpart to compare with

        std::vector<std::pair<std::string, metrics::Scope>> scopes = {{"global", {}}};
        for (AccessCategory ac : kAllAccessCategories)
            if (ledger.for_ac(ac).station_count > 0) scopes.emplace_back(ac_name(ac), ac);

        for (const auto& [scope_name, scope] : scopes) {
            ScopeAccumulator& acc = rows[{ledger.scenario_id, scope_name}];
            push_metric(adaptive ? acc.tput_qcaaae : acc.tput_edca,
                        [&] { return metrics::normalized_throughput(ledger, scope); });
            push_metric(adaptive ? acc.delay_qcaaae : acc.delay_edca,
                        [&] { return metrics::mean_access_delay_s(ledger, scope); });
            push_metric(adaptive ? acc.retx_qcaaae : acc.retx_edca,
                        [&] { return metrics::retransmission_attempts(ledger, scope); });
        }
    }

    std::string out =
        "scenario_id,scope,edca_norm_tput,qcaaae_norm_tput,tput_gain,"
        "edca_mean_delay_s,qcaaae_mean_delay_s,edca_retx,qcaaae_retx,retx_drop\n";
    for (const auto& [key, acc] : rows) {
        const double tput_e = mean_of(acc.tput_edca);
        const double tput_q = mean_of(acc.tput_qcaaae);
        const double delay_e = mean_of(acc.delay_edca);
        const double delay_q = mean_of(acc.delay_qcaaae);
        const double retx_e = mean_of(acc.retx_edca);
        const double retx_q = mean_of(acc.retx_qcaaae);
        out += key.first + ',' + key.second;
        out += ',' + render(tput_e) + ',' + render(tput_q) + ',' + render((tput_q - tput_e) / tput_e);
        out += ',' + render(delay_e) + ',' + render(delay_q);
        out += ',' + render(retx_e) + ',' + render(retx_q) + ',' + render(retx_e - retx_q);
        out += '\n';
    }
    return out;
}

}  // namespace edcasim::runner
