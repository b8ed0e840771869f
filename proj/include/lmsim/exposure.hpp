#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lmsim/config.hpp"
#include "lmsim/engine.hpp"
#include "lmsim/events.hpp"
#include "lmsim/losses.hpp"

namespace lmsim {

// Premium-proxy exposure check. Every unit of premium written this year
// reserves 1/reserve_ratio units of capital (at the 0.5 default, a dollar
// of premium locks two dollars of capital); the quote is vetoed once the
// reserve eats the capital or the reserved-to-working ratio breaches the
// limit. Between the breach point and the veto, the excess ratio scales
// the quote price up linearly, capped at max_scaling (1 at defaults,
// which turns the scaling path into a plain veto).
struct PremiumEmPolicy {
    double reserve_ratio = 0.5;       // premiums : reserved capital
    double max_reserve_to_working = 1.0;
    double max_scaling = 1.0;

    std::optional<double> evaluate(double capital, double premiums_written) const {
        double reserved = premiums_written / reserve_ratio;
        double working = capital - reserved;
        if (working <= 0.0) return std::nullopt;
        double ratio = reserved / working;
        if (ratio <= max_reserve_to_working) return 1.0;
        double factor = 1.0 + (ratio - max_reserve_to_working);
        if (factor > max_scaling) return std::nullopt;
        return factor;
    }
};

// Per-region tail-loss fractions for the VaR check: the (1 - alpha)
// quantile of a single catastrophe's regional loss, expressed as a
// fraction of one risk limit. The per-event law is used because at the
// default event frequency the unconditional annual quantile is zero
// (most region-years see no event at all), which would disable the check.
struct VarEmTable {
    std::vector<double> tail_fraction; // per region

    static VarEmTable precompute(const CatastropheParams& params, int num_regions,
                                 double exceedance_probability, double reference_limit,
                                 int samples, RngStream& rng) {
        if (samples < 1000)
            throw ConfigError("var_em_mc_samples: must be >= 1000");
        VarEmTable table;
        table.tail_fraction.resize(static_cast<std::size_t>(num_regions), 0.0);
        if (params.events_per_year <= 0.0) return table;
        std::vector<double> draws(static_cast<std::size_t>(samples));
        for (int region = 0; region < num_regions; ++region) {
            for (auto& d : draws) d = sample_catastrophe_severity(params, rng);
            std::sort(draws.begin(), draws.end());
            // quantile index ceil((1 - alpha) * N), 1-based
            auto idx = static_cast<std::size_t>(
                std::ceil((1.0 - exceedance_probability) * samples));
            idx = std::min(std::max<std::size_t>(idx, 1), draws.size());
            table.tail_fraction[static_cast<std::size_t>(region)] =
                draws[idx - 1] / reference_limit;
        }
        return table;
    }
};

// Capital-at-risk check: accepting the quote must keep
// safety_factor x tail_fraction x projected regional exposure within the
// syndicate's capital. Regions are checked independently.
struct VarEmPolicy {
    double safety_factor = 1.0;

    bool allows(double tail_fraction, double projected_exposure, double capital) const {
        return safety_factor * tail_fraction * projected_exposure <= capital;
    }
    double required_capital(double tail_fraction, double projected_exposure) const {
        return safety_factor * tail_fraction * projected_exposure;
    }
};

// ---------------------------------------------------------------------------
// Sub-processes

class PremiumEmSubProcess : public Process {
public:
    PremiumEmSubProcess(int syndicate_id, const ScenarioConfig& cfg)
        : syndicate_id_(syndicate_id),
          policy_{cfg.premium_reserve_ratio, cfg.min_capital_reserve_ratio,
                  cfg.max_premium_scaling},
          capital_(cfg.initial_capital) {}

    void on_event(const Event& ev, Engine& sim) override {
        switch (ev.kind) {
            case EventKind::LeadQuoteRequested:
            case EventKind::FollowQuoteRequested: {
                const auto& req = ev.as<QuoteRequest>();
                if (req.syndicate_id != syndicate_id_) return;
                std::optional<double> factor = policy_.evaluate(capital_, premiums_written_);
                sim.emit(EventKind::QuoteComponentComputed,
                         QuoteComponent{req.risk.risk_id, syndicate_id_, req.role,
                                        ComponentKind::premium_scaling, factor.has_value(),
                                        factor.value_or(0.0)});
                break;
            }
            case EventKind::SyndicateCapitalReported: {
                const auto& report = ev.as<CapitalReport>();
                if (report.syndicate_id != syndicate_id_) return;
                // The reserve test runs against the capital committed at
                // the start of the year. Current capital carries the
                // premium float of everything just written, which would
                // cancel out of the ratio and disarm the check.
                capital_ = report.capital_at_year_start;
                premiums_written_ = report.premiums_written_ytd;
                break;
            }
            default:
                break;
        }
    }

    static std::vector<EventKind> subscriptions() {
        return {EventKind::LeadQuoteRequested, EventKind::FollowQuoteRequested,
                EventKind::SyndicateCapitalReported};
    }

private:
    int syndicate_id_;
    PremiumEmPolicy policy_;
    double capital_;
    double premiums_written_ = 0.0;
};

class VarEmSubProcess : public Process {
public:
    VarEmSubProcess(int syndicate_id, const ScenarioConfig& cfg, std::string stream_label)
        : syndicate_id_(syndicate_id), cfg_(&cfg), policy_{cfg.var_safety_factor},
          capital_(cfg.initial_capital), stream_label_(std::move(stream_label)) {
        default_line_[0] = cfg.default_lead_line_size;
        default_line_[1] = cfg.default_follow_line_size;
    }

    void on_event(const Event& ev, Engine& sim) override {
        switch (ev.kind) {
            case EventKind::SimulationStarted: {
                CatastropheParams params = catastrophe_params(*cfg_);
                if (!cfg_->catastrophe_losses) params.events_per_year = 0.0;
                table_ = VarEmTable::precompute(params, cfg_->num_peril_regions,
                                                cfg_->var_exceedance_probability, cfg_->risk_limit,
                                                cfg_->var_em_mc_samples, sim.rng(stream_label_));
                break;
            }
            case EventKind::LeadQuoteRequested:
            case EventKind::FollowQuoteRequested: {
                const auto& req = ev.as<QuoteRequest>();
                if (req.syndicate_id != syndicate_id_) return;
                double line = default_line_[req.role == Role::follow ? 1 : 0];
                double projected = exposure_in(req.risk.peril_region, sim.now()) +
                                   req.risk.limit * line;
                double fraction =
                    table_.tail_fraction.at(static_cast<std::size_t>(req.risk.peril_region));
                bool ok = policy_.allows(fraction, projected, capital_);
                sim.emit(EventKind::QuoteComponentComputed,
                         QuoteComponent{req.risk.risk_id, syndicate_id_, req.role,
                                        ComponentKind::var_check, ok,
                                        policy_.required_capital(fraction, projected)});
                break;
            }
            case EventKind::LeadQuoteAccepted:
            case EventKind::FollowQuoteAccepted: {
                const auto& accept = ev.as<QuoteAccept>();
                if (accept.syndicate_id != syndicate_id_) return;
                holdings_.push_back(Holding{accept.risk.peril_region, accept.risk.expiry_day,
                                            accept.risk.limit * accept.signed_line});
                break;
            }
            case EventKind::SyndicateCapitalReported: {
                const auto& report = ev.as<CapitalReport>();
                if (report.syndicate_id == syndicate_id_) capital_ = report.capital;
                break;
            }
            default:
                break;
        }
    }

    static std::vector<EventKind> subscriptions() {
        return {EventKind::SimulationStarted,   EventKind::LeadQuoteRequested,
                EventKind::FollowQuoteRequested, EventKind::LeadQuoteAccepted,
                EventKind::FollowQuoteAccepted,  EventKind::SyndicateCapitalReported};
    }

    // Limit-based exposure of in-force holdings in a region.
    double exposure_in(int region, int day) const {
        double total = 0.0;
        for (const Holding& h : holdings_)
            if (h.region == region && h.expiry_day > day) total += h.exposure;
        return total;
    }

    const VarEmTable& table() const { return table_; }

private:
    struct Holding {
        int region;
        int expiry_day;
        double exposure; // limit x signed line
    };

    int syndicate_id_;
    const ScenarioConfig* cfg_;
    VarEmPolicy policy_;
    double capital_;
    std::string stream_label_;
    VarEmTable table_;
    std::vector<Holding> holdings_;
    double default_line_[2] = {1.0, 0.1};
};

} // namespace lmsim
