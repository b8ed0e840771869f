#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lmsim/config.hpp"
#include "lmsim/engine.hpp"
#include "lmsim/events.hpp"
#include "lmsim/syndicate.hpp"
#include "lmsim/time.hpp"

namespace lmsim {

// Total-variation distance between a portfolio's peril-region counts and
// the uniform distribution; 0 is perfectly diversified, an empty portfolio
// counts as 0 by convention.
inline double uniform_deviation(const std::vector<std::int64_t>& region_counts) {
    double total = 0.0;
    for (auto c : region_counts) total += static_cast<double>(c);
    if (total <= 0.0 || region_counts.empty()) return 0.0;
    double n = static_cast<double>(region_counts.size());
    double d = 0.0;
    for (auto c : region_counts) d += std::fabs(static_cast<double>(c) / total - 1.0 / n);
    return 0.5 * d;
}

// ---------------------------------------------------------------------------
// Small statistics helpers

inline double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double stddev_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

inline std::optional<double> pearson_correlation(const std::vector<double>& xs,
                                                 const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) return std::nullopt;
    double mx = mean_of(xs), my = mean_of(ys);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------------------
// Frames

struct SyndicateYearFrame {
    int year = 0;
    int syndicate_id = 0;
    double capital = 0.0;
    std::optional<double> premiums_offered_mean;
    double premiums_earned = 0.0;
    double claims_paid = 0.0;
    std::optional<double> loss_ratio; // null when no premium was earned
    bool insolvent = false;
    double uniform_dev = 0.0; // of the in-force portfolio at year end
};

struct IndustryYearFrame {
    int year = 0;
    double claim_frequency = 0.0;
    double mean_severity = 0.0;
    std::int64_t policies_bound = 0;
    double uninsured_loss = 0.0; // cumulative
};

struct CatastropheRecord {
    std::int64_t cat_id = 0;
    int day = 0;
    int year = 0;
    int peril_region = 0;
    double total_loss = 0.0;
    double insured_loss = 0.0;
};

struct SyndicateAccount {
    int syndicate_id = 0;
    double initial_capital = 0.0;
    double final_capital = 0.0;
    double premiums_total = 0.0;
    double claims_total = 0.0;
    double dividends_total = 0.0;
    bool insolvent = false;
    int insolvency_year = 0; // 0 when solvent throughout
};

// Everything one replication reports.
struct RunResult {
    std::uint64_t seed = 0;
    std::vector<SyndicateYearFrame> frames;          // year-major, syndicate-minor
    std::vector<IndustryYearFrame> industry;
    std::vector<CatastropheRecord> catastrophes;
    std::vector<SyndicateAccount> accounts;
    std::uint64_t events_dispatched = 0;
    std::string trace; // populated only when tracing was requested
};

// Passive observer that reconstructs the per-year reporting frames from
// the event stream alone, which keeps the metrics a pure function of the
// trace.
class MetricsCollector : public Process {
public:
    MetricsCollector(const ScenarioConfig& cfg, std::uint64_t seed) : cfg_(&cfg) {
        result_.seed = seed;
        for (int s = 0; s < cfg.num_syndicates; ++s) {
            SyndicateAccount account;
            account.syndicate_id = s;
            account.initial_capital = cfg.initial_capital;
            account.final_capital = cfg.initial_capital;
            accounts_[s] = account;
            capital_by_year_[s] = {};
        }
    }

    void on_event(const Event& ev, Engine& sim) override {
        int year = calendar_year(sim.now());
        switch (ev.kind) {
            case EventKind::LeadQuoteOffered:
            case EventKind::FollowQuoteOffered: {
                const auto& offer = ev.as<QuoteOffer>();
                offered_[offer.syndicate_id][year].push_back(offer.price);
                break;
            }
            case EventKind::LeadQuoteAccepted:
            case EventKind::FollowQuoteAccepted: {
                const auto& accept = ev.as<QuoteAccept>();
                earned_[accept.syndicate_id][year] += accept.premium * accept.signed_line;
                holdings_[accept.syndicate_id].push_back(
                    Holding{accept.risk.peril_region, accept.risk.inception_day,
                            accept.risk.expiry_day});
                break;
            }
            case EventKind::ClaimReceived: {
                const auto& claim = ev.as<Claim>();
                claims_[claim.syndicate_id][year] += claim.amount;
                if (claim.cat_id != 0) cat_insured_[claim.cat_id] += claim.amount;
                break;
            }
            case EventKind::CatastropheLossOccurred: {
                const auto& cat = ev.as<CatastropheLoss>();
                CatastropheRecord record;
                record.cat_id = cat.cat_id;
                record.day = sim.now();
                record.year = year;
                record.peril_region = cat.peril_region;
                record.total_loss = cat.total_loss;
                result_.catastrophes.push_back(record);
                break;
            }
            case EventKind::SyndicateCapitalReported: {
                const auto& report = ev.as<CapitalReport>();
                capital_by_year_[report.syndicate_id][report.year] = report.capital;
                break;
            }
            case EventKind::SyndicateBankrupted: {
                const auto& b = ev.as<Bankruptcy>();
                auto& account = accounts_[b.syndicate_id];
                account.insolvent = true;
                account.insolvency_year = year;
                account.final_capital = b.final_capital;
                break;
            }
            case EventKind::IndustryLossStatisticsReported: {
                const auto& stats = ev.as<IndustryLossStats>();
                IndustryYearFrame frame;
                frame.year = stats.year;
                frame.claim_frequency = stats.claim_frequency;
                frame.mean_severity = stats.mean_severity;
                frame.policies_bound = policies_bound_ytd_;
                frame.uninsured_loss = uninsured_latest_;
                result_.industry.push_back(frame);
                policies_bound_ytd_ = 0;
                break;
            }
            case EventKind::IndustryPricingStatisticsReported:
                uninsured_latest_ = ev.as<IndustryPricingStats>().uninsured_loss;
                break;
            default:
                break;
        }
        if (ev.kind == EventKind::LeadQuoteAccepted) ++policies_bound_ytd_;
    }

    static std::vector<EventKind> subscriptions() {
        return {EventKind::LeadQuoteOffered,
                EventKind::FollowQuoteOffered,
                EventKind::LeadQuoteAccepted,
                EventKind::FollowQuoteAccepted,
                EventKind::ClaimReceived,
                EventKind::CatastropheLossOccurred,
                EventKind::SyndicateCapitalReported,
                EventKind::SyndicateBankrupted,
                EventKind::IndustryLossStatisticsReported,
                EventKind::IndustryPricingStatisticsReported};
    }

    // Builds the reporting frames; `final_books` supplies the closing
    // accounts straight from the syndicates.
    RunResult finalize(const std::map<int, SyndicateBooks>& final_books) {
        for (const auto& [id, books] : final_books) {
            auto& account = accounts_[id];
            account.premiums_total = books.premiums_total;
            account.claims_total = books.claims_total;
            account.dividends_total = books.dividends_total;
            account.final_capital = books.capital;
            account.insolvent = books.insolvent;
        }
        for (const auto& [id, account] : accounts_) result_.accounts.push_back(account);

        for (int year = 1; year <= cfg_->horizon_years; ++year) {
            for (const auto& [id, account] : accounts_) {
                bool died_this_year = account.insolvent && account.insolvency_year == year;
                bool alive_through = !account.insolvent || account.insolvency_year > year;
                if (!alive_through && !died_this_year) continue;

                SyndicateYearFrame frame;
                frame.year = year;
                frame.syndicate_id = id;
                frame.insolvent = died_this_year;
                frame.capital = died_this_year ? account.final_capital
                                               : capital_at(id, year);
                const auto& offers = offered_[id][year];
                if (!offers.empty()) frame.premiums_offered_mean = mean_of(offers);
                frame.premiums_earned = value_or_zero(earned_[id], year);
                frame.claims_paid = value_or_zero(claims_[id], year);
                if (frame.premiums_earned > 0.0)
                    frame.loss_ratio = frame.claims_paid / frame.premiums_earned;
                frame.uniform_dev = portfolio_uniform_deviation(id, year * days_per_year);
                result_.frames.push_back(frame);
            }
        }

        for (auto& record : result_.catastrophes) {
            auto it = cat_insured_.find(record.cat_id);
            if (it != cat_insured_.end()) record.insured_loss = it->second;
        }
        return std::move(result_);
    }

    double portfolio_uniform_deviation(int syndicate_id, int day) const {
        std::vector<std::int64_t> counts(static_cast<std::size_t>(cfg_->num_peril_regions), 0);
        auto it = holdings_.find(syndicate_id);
        if (it != holdings_.end())
            for (const Holding& h : it->second)
                if (h.inception_day <= day && day < h.expiry_day)
                    ++counts[static_cast<std::size_t>(h.region)];
        return uniform_deviation(counts);
    }

private:
    struct Holding {
        int region;
        int inception_day;
        int expiry_day;
    };

    double capital_at(int id, int year) const {
        // Latest report up to and including this year; reports are
        // emitted monthly so a live syndicate always has one.
        const auto& series = capital_by_year_.at(id);
        double value = cfg_->initial_capital;
        for (const auto& [y, capital] : series) {
            if (y > year) break;
            value = capital;
        }
        return value;
    }

    static double value_or_zero(const std::map<int, double>& by_year, int year) {
        auto it = by_year.find(year);
        return it == by_year.end() ? 0.0 : it->second;
    }

    const ScenarioConfig* cfg_;
    RunResult result_;
    std::map<int, SyndicateAccount> accounts_;
    std::map<int, std::map<int, std::vector<double>>> offered_; // syndicate -> year -> prices
    std::map<int, std::map<int, double>> earned_;
    std::map<int, std::map<int, double>> claims_;
    std::map<int, std::map<int, double>> capital_by_year_;
    std::map<int, std::vector<Holding>> holdings_;
    std::map<std::int64_t, double> cat_insured_;
    std::int64_t policies_bound_ytd_ = 0;
    double uninsured_latest_ = 0.0;
};

} // namespace lmsim
