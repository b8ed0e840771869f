#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "lmsim/config.hpp"
#include "lmsim/engine.hpp"
#include "lmsim/events.hpp"
#include "lmsim/time.hpp"

namespace lmsim {

// Follow line sizing: the default follow line scaled by pricing strength
// (own price over the lead's price), clamped into (0, 1]. A follower whose
// own view prices the risk above the lead's terms finds the deal cheap and
// signs a larger line, and vice versa.
inline double follow_line_size(double default_line, double own_price, double lead_price) {
    if (lead_price <= 0.0 || own_price <= 0.0) return 0.0;
    double line = default_line * (own_price / lead_price);
    return std::min(line, 1.0);
}

// Dividend sub-module: a fixed fraction of the year's profit, paid only
// when the year was profitable.
inline double dividend_due(double profit, double profit_fraction) {
    return profit > 0.0 ? profit_fraction * profit : 0.0;
}

// Capital accounts of one syndicate. Every capital movement flows through
// these three verbs so the accounting identity
// capital = initial + premiums - claims - dividends holds by construction.
struct SyndicateBooks {
    double capital = 0.0;
    double capital_at_year_start = 0.0;
    double premiums_written_ytd = 0.0;
    double premiums_total = 0.0;
    double claims_total = 0.0;
    double dividends_total = 0.0;
    double initial_capital = 0.0;
    bool insolvent = false;

    void credit_premium(double amount) {
        capital += amount;
        premiums_written_ytd += amount;
        premiums_total += amount;
    }
    void debit_claim(double amount) {
        capital -= amount;
        claims_total += amount;
    }
    void debit_dividend(double amount) {
        capital -= amount;
        dividends_total += amount;
    }
};

// The syndicate process: collects the quote components its sub-processes
// computed, consolidates them at the deadlines, books accepted policies,
// pays claims and declares insolvency, and vents dividends at year end.
class SyndicateProcess : public Process {
public:
    SyndicateProcess(int syndicate_id, const ScenarioConfig& cfg)
        : syndicate_id_(syndicate_id), cfg_(&cfg) {
        books_.capital = cfg.initial_capital;
        books_.capital_at_year_start = cfg.initial_capital;
        books_.initial_capital = cfg.initial_capital;
        required_components_ = 2; // actuarial price + markup factor
        if (cfg.premium_em) ++required_components_;
        if (cfg.var_em) ++required_components_;
    }

    void on_event(const Event& ev, Engine& sim) override {
        switch (ev.kind) {
            case EventKind::SimulationStarted:
            case EventKind::Month:
                report_capital(sim);
                break;
            case EventKind::Year:
                on_year(sim);
                break;
            case EventKind::LeadQuoteRequested:
            case EventKind::FollowQuoteRequested: {
                const auto& req = ev.as<QuoteRequest>();
                if (req.syndicate_id != syndicate_id_ || books_.insolvent) return;
                pending_[key_of(req.risk.risk_id, req.role)] = PendingQuote{req.risk};
                break;
            }
            case EventKind::QuoteComponentComputed: {
                const auto& comp = ev.as<QuoteComponent>();
                if (comp.syndicate_id != syndicate_id_) return;
                auto it = pending_.find(key_of(comp.risk_id, comp.role));
                if (it == pending_.end()) return;
                it->second.components.push_back(comp);
                break;
            }
            case EventKind::LeadQuoteConsolidationDeadlineReached:
                consolidate(ev.as<QuoteDeadline>().risk_id, Role::lead, sim);
                break;
            case EventKind::FollowQuoteConsolidationDeadlineReached:
                consolidate(ev.as<QuoteDeadline>().risk_id, Role::follow, sim);
                break;
            case EventKind::LeadQuoteAccepted: {
                const auto& accept = ev.as<QuoteAccept>();
                // Everyone notes the lead price; candidate followers need
                // it to assess their pricing strength.
                lead_price_[accept.risk.risk_id] = accept.premium;
                if (accept.syndicate_id == syndicate_id_ && !books_.insolvent) {
                    books_.credit_premium(accept.premium * accept.signed_line);
                    report_capital(sim); // keep the exposure checks current
                }
                break;
            }
            case EventKind::FollowQuoteAccepted: {
                const auto& accept = ev.as<QuoteAccept>();
                if (accept.syndicate_id == syndicate_id_ && !books_.insolvent) {
                    books_.credit_premium(accept.premium * accept.signed_line);
                    report_capital(sim);
                }
                break;
            }
            case EventKind::ClaimReceived: {
                const auto& claim = ev.as<Claim>();
                if (claim.syndicate_id != syndicate_id_ || books_.insolvent) return;
                pay_claim(claim.amount, sim);
                break;
            }
            default:
                break;
        }
    }

    static std::vector<EventKind> subscriptions() {
        return {EventKind::SimulationStarted,
                EventKind::Month,
                EventKind::Year,
                EventKind::LeadQuoteRequested,
                EventKind::FollowQuoteRequested,
                EventKind::QuoteComponentComputed,
                EventKind::LeadQuoteConsolidationDeadlineReached,
                EventKind::FollowQuoteConsolidationDeadlineReached,
                EventKind::LeadQuoteAccepted,
                EventKind::FollowQuoteAccepted,
                EventKind::ClaimReceived};
    }

    const SyndicateBooks& books() const { return books_; }
    int id() const { return syndicate_id_; }

private:
    struct PendingQuote {
        Risk risk;
        std::vector<QuoteComponent> components;
    };

    static std::int64_t key_of(std::int64_t risk_id, Role role) {
        return risk_id * 2 + (role == Role::follow ? 1 : 0);
    }

    void report_capital(Engine& sim) {
        if (books_.insolvent) return;
        sim.emit(EventKind::SyndicateCapitalReported,
                 CapitalReport{syndicate_id_, books_.capital, books_.capital_at_year_start,
                               books_.premiums_written_ytd, calendar_year(sim.now())});
    }

    void on_year(Engine& sim) {
        if (books_.insolvent) return;
        double profit = books_.capital - books_.capital_at_year_start;
        double dividend = dividend_due(profit, cfg_->dividend_profit_fraction);
        if (dividend > 0.0) books_.debit_dividend(dividend);
        books_.capital_at_year_start = books_.capital;
        books_.premiums_written_ytd = 0.0;
        report_capital(sim);
    }

    void pay_claim(double amount, Engine& sim) {
        books_.debit_claim(amount);
        if (books_.capital < 0.0) {
            // Capital stays at the failure value; the process family is
            // removed when the bankruptcy event dispatches.
            books_.insolvent = true;
            sim.emit(EventKind::SyndicateBankrupted, Bankruptcy{syndicate_id_, books_.capital});
        }
    }

    // At the deadline the quote goes out only if every registered
    // component reported and none vetoed; a missing component counts as a
    // veto so the deadline always resolves.
    void consolidate(std::int64_t risk_id, Role role, Engine& sim) {
        auto it = pending_.find(key_of(risk_id, role));
        if (it == pending_.end()) return;
        PendingQuote pending = std::move(it->second);
        pending_.erase(it);
        if (books_.insolvent) return;

        if (static_cast<int>(pending.components.size()) < required_components_) return;
        double price = 1.0;
        for (const QuoteComponent& comp : pending.components) {
            if (!comp.allow) return;
            if (comp.component != ComponentKind::var_check) price *= comp.value;
        }

        if (role == Role::lead) {
            sim.emit(EventKind::LeadQuoteOffered,
                     QuoteOffer{risk_id, syndicate_id_, role, price,
                                cfg_->default_lead_line_size});
        } else {
            auto lp = lead_price_.find(risk_id);
            if (lp == lead_price_.end()) return; // no lead bound, no offer
            double line = follow_line_size(cfg_->default_follow_line_size, price, lp->second);
            if (line <= 0.0) return;
            sim.emit(EventKind::FollowQuoteOffered,
                     QuoteOffer{risk_id, syndicate_id_, role, price, line});
        }
    }

    int syndicate_id_;
    const ScenarioConfig* cfg_;
    SyndicateBooks books_;
    int required_components_;
    std::map<std::int64_t, PendingQuote> pending_;
    std::map<std::int64_t, double> lead_price_;
};

} // namespace lmsim
