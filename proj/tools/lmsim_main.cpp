// lmsim — discrete-event simulator of a specialty insurance market.
//
//   lmsim simulate --preset scenario1 --seeds 10 --out results/
//   lmsim simulate --config market.cfg --seeds 0,3,7 --emit-trace
//
// Every config key can also be overridden through the environment with
// the LMSIM_ prefix, e.g. LMSIM_RISKS_PER_DAY=0.1.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lmsim/config.hpp"
#include "lmsim/runner.hpp"

namespace {

// "--seeds 10" means seeds 0..9; "--seeds 2,5,11" is an explicit list.
std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
    std::vector<std::uint64_t> seeds;
    if (spec.find(',') == std::string::npos) {
        std::size_t pos = 0;
        unsigned long n = std::stoul(spec, &pos);
        if (pos != spec.size()) throw lmsim::ConfigError("--seeds: expected a count or list");
        for (unsigned long i = 0; i < n; ++i) seeds.push_back(i);
        return seeds;
    }
    std::string item;
    std::istringstream in(spec);
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        seeds.push_back(std::stoull(item));
    }
    return seeds;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-event simulation of a specialty insurance market"};
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "Run one scenario across replications");
    std::string config_path, preset, seeds_spec = "10", out_dir = "results";
    int jobs = 1;
    bool emit_trace = false, no_plots = false;
    simulate->add_option("--config", config_path, "Path to a key = value config file");
    simulate->add_option("--preset", preset, "Scenario preset (scenario1..scenario4)")
        ->check(CLI::IsMember(lmsim::scenario_preset_names()));
    simulate->add_option("--seeds", seeds_spec, "Replication count N (seeds 0..N-1) or list a,b,c");
    simulate->add_option("--out", out_dir, "Output directory for CSV/JSON/SVG");
    simulate->add_option("--jobs", jobs, "Replications to run in parallel")
        ->check(CLI::PositiveNumber);
    simulate->add_flag("--emit-trace", emit_trace, "Write the ordered event log per replication");
    simulate->add_flag("--no-plots", no_plots, "Skip SVG chart output");

    CLI11_PARSE(app, argc, argv);

    try {
        lmsim::ConfigSources sources;
        sources.preset = preset;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw lmsim::ConfigError("cannot open config file: " + config_path);
            sources.file_entries = lmsim::parse_config_text(in);
        } else if (preset.empty()) {
            throw lmsim::ConfigError("need --config and/or --preset");
        }
        sources.env_entries = lmsim::env_overrides();
        lmsim::ScenarioConfig cfg = lmsim::build_config(sources);

        lmsim::BundleOptions options;
        options.out_dir = out_dir;
        options.scenario_name = preset.empty() ? "custom" : preset;
        options.replications.seeds = parse_seeds(seeds_spec);
        options.replications.jobs = jobs;
        options.emit_trace = emit_trace;
        options.emit_plots = !no_plots;
        if (options.replications.seeds.empty())
            throw lmsim::ConfigError("--seeds: need at least one replication");

        auto runs = lmsim::run_bundle(cfg, options);

        std::uint64_t events = 0;
        int insolvencies = 0;
        for (const auto& run : runs) {
            events += run.events_dispatched;
            for (const auto& account : run.accounts)
                if (account.insolvent) ++insolvencies;
        }
        std::cout << runs.size() << " replication(s), " << events << " events, " << insolvencies
                  << " insolvencies -> " << out_dir << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
