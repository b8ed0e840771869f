#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "lmsim/config.hpp"
#include "lmsim/engine.hpp"
#include "lmsim/events.hpp"
#include "lmsim/rng.hpp"

namespace lmsim {

// ---------------------------------------------------------------------------
// Severity samplers

struct AttritionalParams {
    double yearly_claim_frequency = 0.1;
    double cov = 1.0;
    double mean_severity = 3'000'000.0;

    double gamma_shape() const { return 1.0 / (cov * cov); }
    double gamma_scale() const { return mean_severity * cov * cov; }
};

struct CatastropheParams {
    double events_per_year = 0.05;
    double pareto_shape = 5.0;
    double min_damage = 2'500'000.0; // fraction x risk limit, resolved by caller
    double cap_multiple = 10.0;

    double cap() const { return min_damage * cap_multiple; }
    // Mean of the untruncated law; the truncation at cap() trims a
    // negligible sliver at the default shape.
    double untruncated_mean() const { return min_damage * pareto_shape / (pareto_shape - 1.0); }
};

inline double sample_attritional_severity(const AttritionalParams& p, RngStream& rng) {
    return rng.gamma(p.gamma_shape(), p.gamma_scale());
}

inline double sample_catastrophe_severity(const CatastropheParams& p, RngStream& rng) {
    return rng.truncated_pareto(p.min_damage, p.pareto_shape, p.cap());
}

// Splits a regional catastrophe loss across the in-force bound risks in
// proportion to their limits, capping each share at its limit. Because the
// allocation is proportional to limits, the caps all bind together: each
// risk insures limit * min(1, total / sum_limits).
struct RegionalAllocation {
    std::vector<double> per_risk; // aligned with the input limits
    double insured = 0.0;
    double uninsured = 0.0;
};

inline RegionalAllocation allocate_regional_loss(double total_loss,
                                                 const std::vector<double>& limits) {
    RegionalAllocation out;
    out.per_risk.resize(limits.size(), 0.0);
    double total_limit = 0.0;
    for (double l : limits) total_limit += l;
    if (total_limit <= 0.0 || total_loss <= 0.0) {
        out.uninsured = std::max(0.0, total_loss);
        return out;
    }
    double scale = std::min(1.0, total_loss / total_limit);
    for (std::size_t i = 0; i < limits.size(); ++i) {
        out.per_risk[i] = limits[i] * scale;
        out.insured += out.per_risk[i];
    }
    out.uninsured = std::max(0.0, total_loss - out.insured);
    return out;
}

// ---------------------------------------------------------------------------
// Generator processes

// Pre-generates the attritional losses of a risk the moment it is
// broadcast: a Poisson count for the one-year term, each loss at a
// uniform day within [inception, expiry) with gamma severity.
class AttritionalLossGenerator : public Process {
public:
    AttritionalLossGenerator(AttritionalParams params, std::string stream_label)
        : params_(params), stream_label_(std::move(stream_label)) {}

    void on_event(const Event& ev, Engine& sim) override {
        const Risk& risk = ev.as<RiskBroadcast>().risk;
        RngStream& rng = sim.rng(stream_label_);
        int n = rng.poisson(params_.yearly_claim_frequency);
        for (int i = 0; i < n; ++i) {
            int day = rng.uniform_int(risk.inception_day, risk.expiry_day - 1);
            double severity = sample_attritional_severity(params_, rng);
            sim.schedule(day, EventKind::AttritionalLossOccurred,
                         AttritionalLoss{next_loss_id_++, risk.risk_id, severity});
        }
    }

    static std::vector<EventKind> subscriptions() {
        return {EventKind::RiskBroadcasted};
    }

private:
    AttritionalParams params_;
    std::string stream_label_;
    std::int64_t next_loss_id_ = 1;
};

// Pre-generates every catastrophe of the run when the simulation starts:
// a Poisson count over the whole horizon, each event at a uniform day
// with a uniform peril region and truncated-Pareto total loss.
class CatastropheLossGenerator : public Process {
public:
    CatastropheLossGenerator(CatastropheParams params, int num_regions, int horizon_days,
                             std::string stream_label)
        : params_(params), num_regions_(num_regions), horizon_days_(horizon_days),
          stream_label_(std::move(stream_label)) {}

    void on_event(const Event&, Engine& sim) override {
        RngStream& rng = sim.rng(stream_label_);
        double years = static_cast<double>(horizon_days_) / days_per_year;
        int n = rng.poisson(params_.events_per_year * years);
        for (int i = 0; i < n; ++i) {
            int day = rng.uniform_int(1, horizon_days_);
            int region = rng.uniform_int(0, num_regions_ - 1);
            double loss = sample_catastrophe_severity(params_, rng);
            sim.schedule(day, EventKind::CatastropheLossOccurred,
                         CatastropheLoss{next_cat_id_++, region, loss});
        }
    }

    static std::vector<EventKind> subscriptions() {
        return {EventKind::SimulationStarted};
    }

private:
    CatastropheParams params_;
    int num_regions_;
    int horizon_days_;
    std::string stream_label_;
    std::int64_t next_cat_id_ = 1;
};

inline AttritionalParams attritional_params(const ScenarioConfig& cfg) {
    return AttritionalParams{cfg.yearly_claim_frequency, cfg.attritional_cov,
                             cfg.attritional_mean_severity};
}

inline CatastropheParams catastrophe_params(const ScenarioConfig& cfg) {
    return CatastropheParams{cfg.catastrophe_events_per_year, cfg.pareto_shape,
                             cfg.min_catastrophe_damage_fraction * cfg.risk_limit,
                             cfg.catastrophe_cap_multiple};
}

} // namespace lmsim
