#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lmsim/config.hpp"
#include "lmsim/metrics.hpp"
#include "lmsim/simulation.hpp"
#include "lmsim/summary.hpp"

namespace lmsim {

// ---------------------------------------------------------------------------
// CSV export

inline constexpr const char* metrics_csv_header =
    "seed,year,syndicate_id,capital,premiums_offered_mean,premiums_earned,claims_paid,"
    "loss_ratio,insolvent";

namespace detail_csv {

inline std::string money(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string ratio(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace detail_csv

// One row per (year, live-or-just-died syndicate); optional fields stay
// empty when undefined (no quotes offered / no premium earned).
inline std::string metrics_to_csv(const RunResult& run) {
    std::string out = metrics_csv_header;
    out += '\n';
    for (const auto& frame : run.frames) {
        out += std::to_string(run.seed);
        out += ',';
        out += std::to_string(frame.year);
        out += ',';
        out += std::to_string(frame.syndicate_id);
        out += ',';
        out += detail_csv::money(frame.capital);
        out += ',';
        if (frame.premiums_offered_mean) out += detail_csv::money(*frame.premiums_offered_mean);
        out += ',';
        out += detail_csv::money(frame.premiums_earned);
        out += ',';
        out += detail_csv::money(frame.claims_paid);
        out += ',';
        if (frame.loss_ratio) out += detail_csv::ratio(*frame.loss_ratio);
        out += ',';
        out += frame.insolvent ? '1' : '0';
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// SVG line charts

// Minimal static chart: one polyline per syndicate over the years.
inline std::string svg_line_chart(const std::string& title,
                                  const std::map<int, std::map<int, double>>& series,
                                  int horizon_years) {
    const double width = 880, height = 420;
    const double left = 70, right = 20, top = 40, bottom = 40;
    double lo = 0.0, hi = 1.0;
    bool first = true;
    for (const auto& [id, points] : series)
        for (const auto& [year, value] : points) {
            if (first) {
                lo = hi = value;
                first = false;
            }
            lo = std::min(lo, value);
            hi = std::max(hi, value);
        }
    if (hi <= lo) hi = lo + 1.0;
    double span = hi - lo;
    lo -= 0.05 * span;
    hi += 0.05 * span;

    auto x_of = [&](double year) {
        return left + (width - left - right) * (year - 1.0) / std::max(1.0, horizon_years - 1.0);
    };
    auto y_of = [&](double v) {
        return height - bottom - (height - top - bottom) * (v - lo) / (hi - lo);
    };

    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    std::string svg;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.0f %.0f\">\n",
                  width, height, width, height);
    svg += buf;
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.0f\" y=\"22\" font-family=\"sans-serif\" font-size=\"16\">%s</text>\n",
                  left, title.c_str());
    svg += buf;
    // axes
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  left, height - bottom, width - right, height - bottom);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  left, top, left, height - bottom);
    svg += buf;
    for (int i = 0; i <= 4; ++i) {
        double v = lo + (hi - lo) * i / 4.0;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"4\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\">"
                      "%.3g</text>\n",
                      y_of(v) + 4, v);
        svg += buf;
    }
    for (int year = 0; year <= horizon_years; year += std::max(1, horizon_years / 10)) {
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\">"
                      "%d</text>\n",
                      x_of(std::max(1, year)), height - bottom + 16, year);
        svg += buf;
    }

    int color = 0;
    for (const auto& [id, points] : series) {
        if (points.empty()) continue;
        std::string path = "<polyline fill=\"none\" stroke=\"";
        path += palette[color % 10];
        path += "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [year, value] : points) {
            std::snprintf(buf, sizeof buf, "%.1f,%.1f ", x_of(year), y_of(value));
            path += buf;
        }
        path += "\"/>\n";
        svg += path;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" "
                      "fill=\"%s\">syndicate %d</text>\n",
                      width - right - 110.0, top + 14.0 * (color + 1), palette[color % 10], id);
        svg += buf;
        ++color;
    }
    svg += "</svg>\n";
    return svg;
}

inline std::string run_chart(const RunResult& run, const std::string& metric,
                             int horizon_years) {
    std::map<int, std::map<int, double>> series;
    for (const auto& frame : run.frames) {
        if (metric == "capital") {
            series[frame.syndicate_id][frame.year] = frame.capital;
        } else if (metric == "premium" && frame.premiums_offered_mean) {
            series[frame.syndicate_id][frame.year] = *frame.premiums_offered_mean;
        } else if (metric == "loss_ratio" && frame.loss_ratio) {
            series[frame.syndicate_id][frame.year] = *frame.loss_ratio;
        }
    }
    std::string title = metric == "capital"      ? "Capital by year"
                        : metric == "premium"    ? "Mean offered premium by year"
                                                 : "Loss ratio by year";
    return svg_line_chart(title, series, horizon_years);
}

// ---------------------------------------------------------------------------
// Replications

struct ReplicationOptions {
    std::vector<std::uint64_t> seeds;
    int jobs = 1;
    bool capture_trace = false;
};

// Runs one full simulation per seed. Replications are independent, so they
// may fan out across threads; results always come back in seed order and
// are byte-identical to a serial run.
inline std::vector<RunResult> run_replications(const ScenarioConfig& cfg,
                                               const ReplicationOptions& options) {
    std::vector<RunResult> results(options.seeds.size());
    int jobs = std::max(1, options.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < options.seeds.size(); ++i)
            results[i] = run_simulation(cfg, options.seeds[i], options.capture_trace);
        return results;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= options.seeds.size()) return;
            results[i] = run_simulation(cfg, options.seeds[i], options.capture_trace);
        }
    };
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& thread : threads) thread.join();
    return results;
}

// ---------------------------------------------------------------------------
// JSON summary

inline nlohmann::json config_to_json(const ScenarioConfig& cfg) {
    nlohmann::json j;
    for (const auto& [key, binding] : detail::field_bindings()) j[key] = binding.get(cfg);
    return j;
}

inline nlohmann::json summary_to_json(const ScenarioConfig& cfg,
                                      const std::vector<RunResult>& runs,
                                      const std::string& scenario_name) {
    nlohmann::json j;
    j["scenario"] = scenario_name;
    j["config"] = config_to_json(cfg);

    std::vector<SeedSummary> summaries;
    for (const auto& run : runs) summaries.push_back(summarize_run(run, cfg));

    nlohmann::json per_seed = nlohmann::json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const RunResult& run = runs[i];
        const SeedSummary& s = summaries[i];
        nlohmann::json js;
        js["seed"] = run.seed;
        js["insolvencies"] = s.insolvencies;
        nlohmann::json years = nlohmann::json::object();
        for (const auto& [id, year] : s.insolvency_year) years[std::to_string(id)] = year;
        js["insolvency_years"] = years;
        js["mean_offered_premium_final_window"] =
            s.mean_offered_premium ? nlohmann::json(*s.mean_offered_premium) : nlohmann::json();
        js["premium_cross_syndicate_std"] =
            s.premium_cross_std ? nlohmann::json(*s.premium_cross_std) : nlohmann::json();
        js["mean_pairwise_loss_ratio_correlation"] =
            s.mean_loss_ratio_correlation ? nlohmann::json(*s.mean_loss_ratio_correlation)
                                          : nlohmann::json();
        js["mean_uniform_deviation_final_decade"] = s.mean_uniform_deviation_final_decade;

        nlohmann::json accounts = nlohmann::json::array();
        for (const auto& account : run.accounts) {
            nlohmann::json ja;
            ja["syndicate_id"] = account.syndicate_id;
            ja["initial_capital"] = account.initial_capital;
            ja["final_capital"] = account.final_capital;
            ja["premiums"] = account.premiums_total;
            ja["claims"] = account.claims_total;
            ja["dividends"] = account.dividends_total;
            ja["insolvent"] = account.insolvent;
            accounts.push_back(ja);
        }
        js["accounts"] = accounts;

        nlohmann::json cats = nlohmann::json::array();
        for (const auto& window : s.catastrophes) {
            nlohmann::json jc;
            jc["year"] = window.record.year;
            jc["day"] = window.record.day;
            jc["peril_region"] = window.record.peril_region;
            jc["total_loss"] = window.record.total_loss;
            jc["insured_loss"] = window.record.insured_loss;
            jc["window_valid"] = window.window_valid;
            jc["premium_mean_2y_before"] = window.premium_mean_before
                                               ? nlohmann::json(*window.premium_mean_before)
                                               : nlohmann::json();
            jc["premium_mean_2y_after"] = window.premium_mean_after
                                              ? nlohmann::json(*window.premium_mean_after)
                                              : nlohmann::json();
            cats.push_back(jc);
        }
        js["catastrophes"] = cats;
        per_seed.push_back(js);
    }
    j["per_seed"] = per_seed;

    PoolSummary pool = pool_summaries(summaries);
    nlohmann::json jp;
    jp["insolvencies"] = pool.insolvencies;
    jp["mean_offered_premium_final_window"] =
        pool.mean_offered_premium ? nlohmann::json(*pool.mean_offered_premium) : nlohmann::json();
    jp["premium_cross_syndicate_std"] =
        pool.premium_cross_std ? nlohmann::json(*pool.premium_cross_std) : nlohmann::json();
    jp["mean_pairwise_loss_ratio_correlation"] =
        pool.mean_loss_ratio_correlation ? nlohmann::json(*pool.mean_loss_ratio_correlation)
                                         : nlohmann::json();
    jp["mean_uniform_deviation_final_decade"] = pool.mean_uniform_deviation_final_decade;
    j["pooled"] = jp;
    return j;
}

// ---------------------------------------------------------------------------
// Result bundle on disk

struct BundleOptions {
    std::string out_dir;
    std::string scenario_name = "custom";
    ReplicationOptions replications;
    bool emit_trace = false;
    bool emit_plots = true;
};

// Writes metrics_seed<N>.csv per replication, summary.json, optional
// trace_seed<N>.log and plots/*.svg. Returns the run results.
inline std::vector<RunResult> run_bundle(const ScenarioConfig& cfg, const BundleOptions& options) {
    namespace fs = std::filesystem;
    fs::path out(options.out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    // probe writability before burning any simulation time
    {
        std::ofstream probe(out / ".write_probe");
        if (!probe) throw ConfigError("output directory is not writable: " + options.out_dir);
    }
    fs::remove(out / ".write_probe", ec);

    ReplicationOptions reps = options.replications;
    reps.capture_trace = options.emit_trace;
    std::vector<RunResult> runs = run_replications(cfg, reps);

    for (const auto& run : runs) {
        std::ofstream csv(out / ("metrics_seed" + std::to_string(run.seed) + ".csv"),
                          std::ios::binary);
        csv << metrics_to_csv(run);
        if (options.emit_trace) {
            std::ofstream trace(out / ("trace_seed" + std::to_string(run.seed) + ".log"),
                                std::ios::binary);
            trace << run.trace;
        }
    }

    std::ofstream json_out(out / "summary.json", std::ios::binary);
    json_out << summary_to_json(cfg, runs, options.scenario_name).dump(2) << '\n';

    if (options.emit_plots && !runs.empty()) {
        fs::create_directories(out / "plots", ec);
        for (const auto& run : runs) {
            for (const char* metric : {"capital", "premium", "loss_ratio"}) {
                std::ofstream svg(out / "plots" /
                                      (std::string(metric) + "_seed" + std::to_string(run.seed) +
                                       ".svg"),
                                  std::ios::binary);
                svg << run_chart(run, metric, cfg.horizon_years);
            }
        }
    }
    return runs;
}

} // namespace lmsim
