#pragma once

#include <cstdint>
#include <string>

#include "lmsim/config.hpp"
#include "lmsim/engine.hpp"
#include "lmsim/events.hpp"

namespace lmsim {

// Quote-lifecycle deadlines, as offsets from the broadcast day. The spread
// keeps lead selection strictly before follow consolidation, so candidate
// followers always know the lead price when they size their lines.
struct QuoteDeadlineOffsets {
    int lead_consolidation = 3;
    int lead_selection = 5;
    int follow_consolidation = 8;
    int follow_selection = 10;
};

// Brings new risks to market: every Day event draws a Poisson count of
// fresh risks, assigns each a uniform peril region, broadcasts it and
// schedules its four quote deadlines.
class BrokerProcess : public Process {
public:
    BrokerProcess(int broker_id, const ScenarioConfig& cfg, std::int64_t* risk_id_counter,
                  std::string stream_label)
        : broker_id_(broker_id), cfg_(&cfg), risk_id_counter_(risk_id_counter),
          stream_label_(std::move(stream_label)) {}

    void on_event(const Event&, Engine& sim) override {
        RngStream& rng = sim.rng(stream_label_);
        int n = rng.poisson(cfg_->risks_per_day);
        for (int i = 0; i < n; ++i) {
            Risk risk;
            risk.risk_id = (*risk_id_counter_)++;
            risk.broker_id = broker_id_;
            risk.inception_day = sim.now();
            risk.expiry_day = sim.now() + days_per_year;
            risk.limit = cfg_->risk_limit;
            risk.peril_region = rng.uniform_int(0, cfg_->num_peril_regions - 1);

            sim.emit(EventKind::RiskBroadcasted, RiskBroadcast{risk});
            int d = sim.now();
            sim.schedule(d + offsets_.lead_consolidation,
                         EventKind::LeadQuoteConsolidationDeadlineReached, QuoteDeadline{risk.risk_id});
            sim.schedule(d + offsets_.lead_selection, EventKind::LeadQuoteSelectionDeadlineReached,
                         QuoteDeadline{risk.risk_id});
            sim.schedule(d + offsets_.follow_consolidation,
                         EventKind::FollowQuoteConsolidationDeadlineReached, QuoteDeadline{risk.risk_id});
            sim.schedule(d + offsets_.follow_selection,
                         EventKind::FollowQuoteSelectionDeadlineReached, QuoteDeadline{risk.risk_id});
        }
    }

    static std::vector<EventKind> subscriptions() {
        return {EventKind::Day};
    }

    const QuoteDeadlineOffsets& offsets() const { return offsets_; }

private:
    int broker_id_;
    const ScenarioConfig* cfg_;
    std::int64_t* risk_id_counter_;
    std::string stream_label_;
    QuoteDeadlineOffsets offsets_;
};

} // namespace lmsim
