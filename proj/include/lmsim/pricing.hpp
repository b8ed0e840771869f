#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lmsim/config.hpp"
#include "lmsim/engine.hpp"
#include "lmsim/events.hpp"
#include "lmsim/time.hpp"

namespace lmsim {

// Exponentially weighted claim experience of one syndicate. The tracked
// quantity is the annual claim cost per risk at 100% share. Each claim
// contributes one observation: its de-shared amount annualised by the
// prevailing claim frequency, so the average carries both severity
// experience and the frequency of loss. A raw severity average would sit
// an order of magnitude above the annual cost and could never meet the
// fair price it feeds.
class ActuarialExperience {
public:
    ActuarialExperience() = default;
    ActuarialExperience(double bootstrap_mean, double recency_weight)
        : mean_(bootstrap_mean), weight_(recency_weight) {}

    // One observation: the full-risk annual claim cost implied by a claim.
    void observe(double annual_cost_per_risk) {
        double delta = annual_cost_per_risk - mean_;
        mean_ += weight_ * delta;
        variance_ = (1.0 - weight_) * (variance_ + weight_ * delta * delta);
    }

    double mean() const { return mean_; }                  // X-bar
    double std_dev() const { return std::sqrt(variance_); } // F

private:
    double mean_ = 0.0;
    double variance_ = 0.0;
    double weight_ = 0.2;
};

// Expected claim cost: a credibility blend of own experience and the
// industry-wide frequency x severity view.
inline double expected_claim_cost(double internal_weight, double own_mean,
                                  double industry_frequency, double industry_severity) {
    return internal_weight * own_mean +
           (1.0 - internal_weight) * industry_frequency * industry_severity;
}

// Actuarial price: expected cost plus a volatility loading on the claims
// standard deviation.
inline double actuarial_price(double expected_cost, double volatility_weight, double claims_std) {
    return expected_cost + volatility_weight * claims_std;
}

// Underwriter log-markup state. Disabled in the four standard scenarios;
// when enabled it drifts with the syndicate's quote win rate so that
// scarce capacity (high win rate) pushes prices up.
class MarkupState {
public:
    MarkupState() = default;
    MarkupState(bool enabled, double recency_weight, double sensitivity, double target_win_rate)
        : enabled_(enabled), weight_(recency_weight), sensitivity_(sensitivity),
          target_(target_win_rate) {}

    double factor() const { return enabled_ ? std::exp(log_markup_) : 1.0; }
    double log_markup() const { return enabled_ ? log_markup_ : 0.0; }

    void update(double win_rate) {
        if (!enabled_) return;
        log_markup_ = (1.0 - weight_) * log_markup_ + weight_ * sensitivity_ * (win_rate - target_);
    }

    bool enabled() const { return enabled_; }

private:
    bool enabled_ = false;
    double log_markup_ = 0.0;
    double weight_ = 0.2;
    double sensitivity_ = 1.0;
    double target_ = 0.5;
};

// ---------------------------------------------------------------------------
// Sub-processes

// Prices quote requests for its syndicate and maintains the claim
// experience. Industry statistics arrive through the yearly loss report;
// until the first report the configured bootstrap priors apply.
class ActuarialSubProcess : public Process {
public:
    ActuarialSubProcess(int syndicate_id, const ScenarioConfig& cfg)
        : syndicate_id_(syndicate_id),
          experience_(cfg.initial_industry_frequency * cfg.initial_industry_severity,
                      cfg.loss_recency_weight),
          internal_weight_(cfg.internal_experience_weight),
          volatility_weight_(cfg.volatility_weight),
          annualisation_frequency_(cfg.initial_industry_frequency),
          industry_frequency_(cfg.initial_industry_frequency),
          industry_severity_(cfg.initial_industry_severity) {}

    void on_event(const Event& ev, Engine& sim) override {
        switch (ev.kind) {
            case EventKind::LeadQuoteRequested:
            case EventKind::FollowQuoteRequested: {
                const auto& req = ev.as<QuoteRequest>();
                if (req.syndicate_id != syndicate_id_) return;
                double cost = expected_claim_cost(internal_weight_, experience_.mean(),
                                                  industry_frequency_, industry_severity_);
                double price = actuarial_price(cost, volatility_weight_, experience_.std_dev());
                sim.emit(EventKind::QuoteComponentComputed,
                         QuoteComponent{req.risk.risk_id, syndicate_id_, req.role,
                                        ComponentKind::actuarial_price, true, price});
                break;
            }
            case EventKind::ClaimReceived: {
                const auto& claim = ev.as<Claim>();
                if (claim.syndicate_id != syndicate_id_) return;
                // annualised cost of the affected risk at 100% share; the
                // annualisation basis stays at the configured assumption
                // so a noisy industry estimate cannot feed back into the
                // syndicate's own experience
                experience_.observe(claim.full_risk_loss * annualisation_frequency_);
                break;
            }
            case EventKind::IndustryLossStatisticsReported: {
                const auto& stats = ev.as<IndustryLossStats>();
                industry_frequency_ = stats.claim_frequency;
                industry_severity_ = stats.mean_severity;
                break;
            }
            default:
                break;
        }
    }

    static std::vector<EventKind> subscriptions() {
        return {EventKind::LeadQuoteRequested, EventKind::FollowQuoteRequested,
                EventKind::ClaimReceived, EventKind::IndustryLossStatisticsReported};
    }

    const ActuarialExperience& experience() const { return experience_; }
    double industry_frequency() const { return industry_frequency_; }
    double industry_severity() const { return industry_severity_; }

private:
    int syndicate_id_;
    ActuarialExperience experience_;
    double internal_weight_;
    double volatility_weight_;
    double annualisation_frequency_;
    double industry_frequency_;
    double industry_severity_;
};

// Supplies the markup factor applied on top of the actuarial price and
// learns from the syndicate's yearly win rate.
class UnderwritingSubProcess : public Process {
public:
    UnderwritingSubProcess(int syndicate_id, const ScenarioConfig& cfg)
        : syndicate_id_(syndicate_id),
          markup_(cfg.underwriter_markup, cfg.markup_recency_weight, cfg.markup_sensitivity,
                  cfg.markup_target_win_rate) {}

    void on_event(const Event& ev, Engine& sim) override {
        switch (ev.kind) {
            case EventKind::LeadQuoteRequested:
            case EventKind::FollowQuoteRequested: {
                const auto& req = ev.as<QuoteRequest>();
                if (req.syndicate_id != syndicate_id_) return;
                sim.emit(EventKind::QuoteComponentComputed,
                         QuoteComponent{req.risk.risk_id, syndicate_id_, req.role,
                                        ComponentKind::markup_factor, true, markup_.factor()});
                break;
            }
            case EventKind::LeadQuoteOffered:
            case EventKind::FollowQuoteOffered:
                if (ev.as<QuoteOffer>().syndicate_id == syndicate_id_) ++offered_;
                break;
            case EventKind::LeadQuoteAccepted:
            case EventKind::FollowQuoteAccepted:
                if (ev.as<QuoteAccept>().syndicate_id == syndicate_id_) ++accepted_;
                break;
            case EventKind::Year:
                if (offered_ > 0)
                    markup_.update(static_cast<double>(accepted_) / static_cast<double>(offered_));
                offered_ = accepted_ = 0;
                break;
            default:
                break;
        }
    }

    static std::vector<EventKind> subscriptions() {
        return {EventKind::LeadQuoteRequested, EventKind::FollowQuoteRequested,
                EventKind::LeadQuoteOffered,   EventKind::FollowQuoteOffered,
                EventKind::LeadQuoteAccepted,  EventKind::FollowQuoteAccepted,
                EventKind::Year};
    }

    const MarkupState& markup() const { return markup_; }

private:
    int syndicate_id_;
    MarkupState markup_;
    std::int64_t offered_ = 0;
    std::int64_t accepted_ = 0;
};

} // namespace lmsim
