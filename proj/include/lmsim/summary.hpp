#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "lmsim/config.hpp"
#include "lmsim/metrics.hpp"

namespace lmsim {

// Premium window around a catastrophe: the two whole years before the
// event year against the two after it. Pricing only reacts at year ends,
// so the event year itself belongs to neither side.
struct CatastropheWindow {
    CatastropheRecord record;
    std::optional<double> premium_mean_before;
    std::optional<double> premium_mean_after;
    std::map<int, double> capital_change_at_year; // syndicate -> year-over-year delta
    bool window_valid = false;
};

struct SeedSummary {
    std::uint64_t seed = 0;
    int insolvencies = 0;
    std::map<int, int> insolvency_year;            // syndicate -> year
    std::optional<double> mean_offered_premium;    // fair-price window
    std::optional<double> premium_cross_std;       // mean yearly cross-syndicate std
    std::optional<double> mean_loss_ratio_correlation;
    double mean_uniform_deviation_final_decade = 0.0;
    std::map<int, double> worst_yoy_capital_change; // per syndicate
    std::map<int, std::map<int, double>> capital_by_year;
    std::vector<CatastropheWindow> catastrophes;
};

namespace detail_summary {

inline std::map<int, std::map<int, const SyndicateYearFrame*>> frames_by_syndicate(
    const RunResult& run) {
    std::map<int, std::map<int, const SyndicateYearFrame*>> out;
    for (const auto& frame : run.frames) out[frame.syndicate_id][frame.year] = &frame;
    return out;
}

} // namespace detail_summary

// Mean offered premium across all syndicate-years in [from_year, to_year];
// syndicate-years without quotes are skipped.
inline std::optional<double> mean_offered_premium(const RunResult& run, int from_year,
                                                  int to_year) {
    std::vector<double> values;
    for (const auto& frame : run.frames)
        if (frame.year >= from_year && frame.year <= to_year && frame.premiums_offered_mean)
            values.push_back(*frame.premiums_offered_mean);
    if (values.empty()) return std::nullopt;
    return mean_of(values);
}

// Cross-syndicate standard deviation of offered premiums, per year, then
// averaged across the window. Years with fewer than two quoting
// syndicates carry no information and are skipped.
inline std::optional<double> premium_cross_syndicate_std(const RunResult& run, int from_year,
                                                         int to_year) {
    std::map<int, std::vector<double>> by_year;
    for (const auto& frame : run.frames)
        if (frame.year >= from_year && frame.year <= to_year && frame.premiums_offered_mean)
            by_year[frame.year].push_back(*frame.premiums_offered_mean);
    std::vector<double> stds;
    for (const auto& [year, values] : by_year)
        if (values.size() >= 2) stds.push_back(stddev_of(values));
    if (stds.empty()) return std::nullopt;
    return mean_of(stds);
}

// Mean Pearson correlation of yearly loss ratios across syndicate pairs,
// using the years where both sides have a defined ratio.
inline std::optional<double> mean_pairwise_loss_ratio_correlation(const RunResult& run) {
    auto frames = detail_summary::frames_by_syndicate(run);
    std::vector<int> ids;
    for (const auto& [id, series] : frames) ids.push_back(id);
    std::vector<double> correlations;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            std::vector<double> xs, ys;
            for (const auto& [year, frame] : frames[ids[i]]) {
                auto other = frames[ids[j]].find(year);
                if (other == frames[ids[j]].end()) continue;
                if (!frame->loss_ratio || !other->second->loss_ratio) continue;
                xs.push_back(*frame->loss_ratio);
                ys.push_back(*other->second->loss_ratio);
            }
            if (auto r = pearson_correlation(xs, ys)) correlations.push_back(*r);
        }
    }
    if (correlations.empty()) return std::nullopt;
    return mean_of(correlations);
}

inline double mean_uniform_deviation(const RunResult& run, int from_year, int to_year) {
    std::vector<double> values;
    for (const auto& frame : run.frames)
        if (frame.year >= from_year && frame.year <= to_year)
            values.push_back(frame.uniform_dev);
    return mean_of(values);
}

inline SeedSummary summarize_run(const RunResult& run, const ScenarioConfig& cfg) {
    SeedSummary s;
    s.seed = run.seed;
    int horizon = cfg.horizon_years;

    for (const auto& account : run.accounts) {
        if (account.insolvent) {
            ++s.insolvencies;
            s.insolvency_year[account.syndicate_id] = account.insolvency_year;
        }
    }
    s.mean_offered_premium = mean_offered_premium(run, horizon - 10, horizon);
    s.premium_cross_std = premium_cross_syndicate_std(run, 10, horizon);
    s.mean_loss_ratio_correlation = mean_pairwise_loss_ratio_correlation(run);
    s.mean_uniform_deviation_final_decade =
        mean_uniform_deviation(run, horizon - 10 + 1, horizon);

    // capital paths and worst year-over-year drops
    for (const auto& frame : run.frames) s.capital_by_year[frame.syndicate_id][frame.year] = frame.capital;
    for (const auto& [id, series] : s.capital_by_year) {
        double prev = cfg.initial_capital;
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& [year, capital] : series) {
            worst = std::min(worst, capital - prev);
            prev = capital;
        }
        if (!series.empty()) s.worst_yoy_capital_change[id] = worst;
    }

    for (const auto& record : run.catastrophes) {
        CatastropheWindow window;
        window.record = record;
        int y = record.year;
        window.window_valid = (y - 2 >= 1) && (y + 2 <= horizon);
        if (window.window_valid) {
            window.premium_mean_before = mean_offered_premium(run, y - 2, y - 1);
            window.premium_mean_after = mean_offered_premium(run, y + 1, y + 2);
        }
        for (const auto& [id, series] : s.capital_by_year) {
            auto at = series.find(y);
            if (at == series.end()) continue;
            double prev = cfg.initial_capital;
            auto before = series.find(y - 1);
            if (before != series.end()) prev = before->second;
            else if (y > 1) continue; // syndicate has a gap (born later? not possible) — skip
            window.capital_change_at_year[id] = at->second - prev;
        }
        s.catastrophes.push_back(window);
    }
    return s;
}

// Pooled view over replications.
struct PoolSummary {
    int insolvencies = 0;
    std::optional<double> mean_offered_premium;
    std::optional<double> premium_cross_std;
    std::optional<double> mean_loss_ratio_correlation;
    double mean_uniform_deviation_final_decade = 0.0;
};

inline PoolSummary pool_summaries(const std::vector<SeedSummary>& seeds) {
    PoolSummary pool;
    std::vector<double> premiums, stds, correlations, deviations;
    for (const auto& s : seeds) {
        pool.insolvencies += s.insolvencies;
        if (s.mean_offered_premium) premiums.push_back(*s.mean_offered_premium);
        if (s.premium_cross_std) stds.push_back(*s.premium_cross_std);
        if (s.mean_loss_ratio_correlation) correlations.push_back(*s.mean_loss_ratio_correlation);
        deviations.push_back(s.mean_uniform_deviation_final_decade);
    }
    if (!premiums.empty()) pool.mean_offered_premium = mean_of(premiums);
    if (!stds.empty()) pool.premium_cross_std = mean_of(stds);
    if (!correlations.empty()) pool.mean_loss_ratio_correlation = mean_of(correlations);
    pool.mean_uniform_deviation_final_decade = mean_of(deviations);
    return pool;
}

} // namespace lmsim
