#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "lmsim/config.hpp"
#include "lmsim/engine.hpp"
#include "lmsim/events.hpp"
#include "lmsim/time.hpp"

namespace lmsim {

// Market-wide loss statistics. Claims are logged once per physical loss
// event per risk, at 100%-of-risk cost, no matter how many syndicates
// share the policy. Frequency is claims per policy-year of live cover:
// cover starts when the lead binds and ends at expiry or when the last
// syndicate on the policy fails, whichever comes first. When a
// denominator is empty the previous value carries forward.
class IndustryStatisticsProcess : public Process {
public:
    explicit IndustryStatisticsProcess(const ScenarioConfig& cfg)
        : claim_frequency_(cfg.initial_industry_frequency),
          mean_severity_(cfg.initial_industry_severity) {}

    void on_event(const Event& ev, Engine& sim) override {
        switch (ev.kind) {
            case EventKind::RiskBroadcasted:
                ++risks_entered_;
                break;
            case EventKind::LeadQuoteAccepted: {
                const auto& accept = ev.as<QuoteAccept>();
                ++policies_bound_;
                Cover& cover = covers_[accept.risk.risk_id];
                cover.bind_day = sim.now();
                cover.end_day = accept.risk.expiry_day;
                cover.holders.insert(accept.syndicate_id);
                break;
            }
            case EventKind::FollowQuoteAccepted: {
                const auto& accept = ev.as<QuoteAccept>();
                auto it = covers_.find(accept.risk.risk_id);
                if (it != covers_.end()) it->second.holders.insert(accept.syndicate_id);
                break;
            }
            case EventKind::SyndicateBankrupted: {
                int dead = ev.as<Bankruptcy>().syndicate_id;
                for (auto& [risk_id, cover] : covers_) {
                    cover.holders.erase(dead);
                    if (cover.holders.empty()) cover.end_day = std::min(cover.end_day, sim.now());
                }
                break;
            }
            case EventKind::ClaimReceived: {
                const auto& claim = ev.as<Claim>();
                if (claim.loss_id == last_loss_id_) break; // one count per loss event
                last_loss_id_ = claim.loss_id;
                ++claims_count_ytd_;
                total_claims_ytd_ += claim.full_risk_loss;
                break;
            }
            case EventKind::Year: {
                year_end(sim);
                break;
            }
            default:
                break;
        }
    }

    static std::vector<EventKind> subscriptions() {
        return {EventKind::RiskBroadcasted, EventKind::LeadQuoteAccepted,
                EventKind::FollowQuoteAccepted, EventKind::SyndicateBankrupted,
                EventKind::ClaimReceived, EventKind::Year};
    }

    double claim_frequency() const { return claim_frequency_; }
    double mean_severity() const { return mean_severity_; }
    std::int64_t risks_entered() const { return risks_entered_; }
    std::int64_t policies_bound() const { return policies_bound_; }

private:
    struct Cover {
        int bind_day = 0;
        int end_day = 0;
        std::set<int> holders;
    };

    void year_end(Engine& sim) {
        int today = sim.now();
        int year_start = today - days_per_year;
        double policy_years = 0.0;
        for (const auto& [risk_id, cover] : covers_) {
            int overlap = std::min(cover.end_day, today) - std::max(cover.bind_day, year_start);
            if (overlap > 0) policy_years += static_cast<double>(overlap) / days_per_year;
        }
        if (policy_years > 0.0)
            claim_frequency_ = static_cast<double>(claims_count_ytd_) / policy_years;
        if (claims_count_ytd_ > 0)
            mean_severity_ = total_claims_ytd_ / static_cast<double>(claims_count_ytd_);
        sim.emit(EventKind::IndustryLossStatisticsReported,
                 IndustryLossStats{calendar_year(today), claim_frequency_, mean_severity_});
        claims_count_ytd_ = 0;
        total_claims_ytd_ = 0.0;
        std::erase_if(covers_, [&](const auto& entry) { return entry.second.end_day <= today; });
    }

    double claim_frequency_;
    double mean_severity_;
    std::int64_t risks_entered_ = 0;
    std::int64_t policies_bound_ = 0;
    std::int64_t claims_count_ytd_ = 0;
    double total_claims_ytd_ = 0.0;
    std::int64_t last_loss_id_ = -1;
    std::map<std::int64_t, Cover> covers_;
};

} // namespace lmsim
