#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edcasim/errors.hpp"
#include "edcasim/kernel.hpp"
#include "edcasim/metrics.hpp"
#include "edcasim/scenario.hpp"
#include "edcasim/sweep.hpp"

namespace {

edcasim::kernel::PolicyConfig policy_from_name(const std::string& name) {
    return name == "qcaaae" ? edcasim::kernel::qcaaae_policy()
                            : edcasim::kernel::static_edca_policy();
}

int run_simulate(const std::string& scenario_path, const std::string& policy_name,
                 std::uint64_t seed, const std::string& out_path, bool paranoid) {
    const auto spec = edcasim::runner::load_scenario_file(scenario_path);
    edcasim::kernel::RunOptions options;
    options.paranoid = paranoid;
    const auto ledger = edcasim::kernel::run(spec, policy_from_name(policy_name), seed, options);
    const std::string csv = edcasim::metrics::export_csv({ledger});
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        edcasim::metrics::write_text_file(out_path, csv);
        std::cerr << "wrote " << out_path << "\n";
    }
    return 0;
}

int run_sweep_command(unsigned scale, unsigned seed_count, const std::string& out_dir,
                      unsigned jobs, bool paranoid) {
    const auto grid = edcasim::runner::paper_grid(scale);
    const std::vector<edcasim::kernel::PolicyConfig> policies = {
        edcasim::kernel::static_edca_policy(), edcasim::kernel::qcaaae_policy()};

    edcasim::runner::SweepOptions options;
    options.seeds.clear();
    for (std::uint64_t s = 1; s <= seed_count; ++s) options.seeds.push_back(s);
    options.jobs = jobs;
    options.paranoid = paranoid;

    std::cerr << grid.size() << " scenarios x " << policies.size() << " policies x "
              << options.seeds.size() << " seeds\n";
    const auto result = edcasim::runner::run_sweep(grid, policies, options);

    std::filesystem::create_directories(out_dir);
    const auto results_path = std::filesystem::path(out_dir) / "results.csv";
    const auto summary_path = std::filesystem::path(out_dir) / "summary.csv";
    edcasim::metrics::write_text_file(results_path, edcasim::metrics::export_csv(result.ledgers));
    edcasim::metrics::write_text_file(summary_path, edcasim::runner::summary_csv(result.ledgers));
    std::cerr << "wrote " << results_path.string() << " (" << result.ledgers.size() << " runs)\n";
    std::cerr << "wrote " << summary_path.string() << "\n";

    for (const auto& failure : result.failures)
        std::cerr << "failed: " << failure.scenario_id << " " << failure.policy << " seed "
                  << failure.seed << ": " << failure.message << "\n";
    return result.ok() ? 0 : 1;
}

int run_grid_command(unsigned scale, bool list, const std::string& write_dir) {
    const auto grid = edcasim::runner::paper_grid(scale);
    if (list) {
        for (const auto& spec : grid) std::cout << spec.scenario_id << "\n";
    }
    if (!write_dir.empty()) {
        std::filesystem::create_directories(write_dir);
        for (const auto& spec : grid) {
            const auto path =
                std::filesystem::path(write_dir) / (spec.scenario_id + ".scenario");
            edcasim::metrics::write_text_file(path, edcasim::runner::write_scenario(spec));
        }
        std::cerr << "wrote " << grid.size() << " scenario files to " << write_dir << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic simulator of 802.11 EDCA uplink contention with "
                 "adaptive MAC-parameter policies"};
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "Run one scenario file under one policy");
    std::string scenario_path;
    std::string policy_name = "edca";
    std::uint64_t seed = 1;
    std::string out_path;
    bool paranoid = false;
    simulate->add_option("--scenario", scenario_path, "scenario file to run")
        ->required()
        ->check(CLI::ExistingFile);
    simulate->add_option("--policy", policy_name, "MAC parameter policy")
        ->check(CLI::IsMember({"edca", "qcaaae"}));
    simulate->add_option("--seed", seed, "run seed (default 1)");
    simulate->add_option("--out", out_path, "CSV output path (default: stdout)");
    simulate->add_flag("--paranoid", paranoid, "re-check invariants after every channel event");

    auto* sweep = app.add_subcommand("sweep", "Run the built-in comparison grid, both policies");
    std::string grid_name = "paper";
    unsigned scale = 1;
    unsigned seed_count = 5;
    std::string out_dir = "out";
    unsigned jobs = 0;
    bool sweep_paranoid = false;
    sweep->add_option("--grid", grid_name, "grid to run (only: paper)")
        ->check(CLI::IsMember({"paper"}));
    sweep->add_option("--scale", scale, "divide every station count (min 1)")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--seeds", seed_count, "seeds 1..n per cell (default 5)")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--out-dir", out_dir, "directory for results.csv and summary.csv");
    sweep->add_option("--jobs", jobs, "worker threads (default: one per core)");
    sweep->add_flag("--paranoid", sweep_paranoid, "re-check invariants in every run");

    auto* grid = app.add_subcommand("grid", "Inspect the built-in scenario grid");
    bool list = false;
    unsigned grid_scale = 1;
    std::string write_dir;
    grid->add_flag("--list", list, "print the scenario ids");
    grid->add_option("--scale", grid_scale, "divide every station count (min 1)")
        ->check(CLI::PositiveNumber);
    grid->add_option("--write-dir", write_dir, "write each scenario as a file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return run_simulate(scenario_path, policy_name, seed, out_path, paranoid);
        if (sweep->parsed())
            return run_sweep_command(scale, seed_count, out_dir, jobs, sweep_paranoid);
        if (grid->parsed()) return run_grid_command(grid_scale, list, write_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
