#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "lmsim/broker.hpp"
#include "lmsim/config.hpp"
#include "lmsim/engine.hpp"
#include "lmsim/exposure.hpp"
#include "lmsim/industry_stats.hpp"
#include "lmsim/losses.hpp"
#include "lmsim/metrics.hpp"
#include "lmsim/network.hpp"
#include "lmsim/pricing.hpp"
#include "lmsim/risk_repository.hpp"
#include "lmsim/syndicate.hpp"

namespace lmsim {

// One fully wired market. Owns the engine and the process graph; inspect
// the parts after run() for white-box checks.
class Simulation {
public:
    Simulation(const ScenarioConfig& cfg, std::uint64_t seed, bool capture_trace = false)
        : cfg_(cfg), engine_(seed), seed_(seed) {
        validate_config(cfg_);
        if (capture_trace) {
            engine_.set_trace_hook([this](const Event& ev) { append_trace(ev); });
        }

        for (int b = 0; b < cfg_.num_brokers; ++b) {
            auto broker = std::make_shared<BrokerProcess>(b, cfg_, &next_risk_id_,
                                                          "broker:" + std::to_string(b));
            brokers_.push_back(broker);
            engine_.add_process(broker, BrokerProcess::subscriptions());
        }

        Topology topology = Topology::make(cfg_.topology, cfg_.num_brokers, cfg_.num_syndicates,
                                           engine_.rng("topology-init"));
        network_ = std::make_shared<NetworkProcess>(cfg_, std::move(topology), "network");
        engine_.add_process(network_, NetworkProcess::subscriptions());

        repository_ = std::make_shared<RiskRepositoryProcess>();
        engine_.add_process(repository_, RiskRepositoryProcess::subscriptions());

        if (cfg_.attritional_losses) {
            attritional_ = std::make_shared<AttritionalLossGenerator>(attritional_params(cfg_),
                                                                      "attritional");
            engine_.add_process(attritional_, AttritionalLossGenerator::subscriptions());
        }
        if (cfg_.catastrophe_losses) {
            catastrophe_ = std::make_shared<CatastropheLossGenerator>(
                catastrophe_params(cfg_), cfg_.num_peril_regions, cfg_.horizon_days(),
                "catastrophe");
            engine_.add_process(catastrophe_, CatastropheLossGenerator::subscriptions());
        }

        industry_ = std::make_shared<IndustryStatisticsProcess>(cfg_);
        engine_.add_process(industry_, IndustryStatisticsProcess::subscriptions());

        for (int s = 0; s < cfg_.num_syndicates; ++s) {
            std::string group = "syndicate:" + std::to_string(s);
            auto syndicate = std::make_shared<SyndicateProcess>(s, cfg_);
            syndicates_[s] = syndicate;
            engine_.add_process(syndicate, SyndicateProcess::subscriptions(), group);

            auto actuarial = std::make_shared<ActuarialSubProcess>(s, cfg_);
            actuarials_[s] = actuarial;
            engine_.add_process(actuarial, ActuarialSubProcess::subscriptions(), group);

            auto underwriting = std::make_shared<UnderwritingSubProcess>(s, cfg_);
            engine_.add_process(underwriting, UnderwritingSubProcess::subscriptions(), group);

            if (cfg_.premium_em) {
                auto premium_em = std::make_shared<PremiumEmSubProcess>(s, cfg_);
                engine_.add_process(premium_em, PremiumEmSubProcess::subscriptions(), group);
            }
            if (cfg_.var_em) {
                auto var_em = std::make_shared<VarEmSubProcess>(s, cfg_,
                                                                "varem:" + std::to_string(s));
                var_ems_[s] = var_em;
                engine_.add_process(var_em, VarEmSubProcess::subscriptions(), group);
            }
        }

        collector_ = std::make_shared<MetricsCollector>(cfg_, seed);
        engine_.add_process(collector_, MetricsCollector::subscriptions());
    }

    RunResult run() {
        engine_.schedule_calendar(cfg_.horizon_days());
        engine_.run_until(cfg_.horizon_days());
        std::map<int, SyndicateBooks> books;
        for (const auto& [id, syndicate] : syndicates_) books[id] = syndicate->books();
        RunResult result = collector_->finalize(books);
        result.events_dispatched = engine_.dispatched_count();
        result.trace = std::move(trace_);
        return result;
    }

    Engine& engine() { return engine_; }
    const ScenarioConfig& config() const { return cfg_; }
    RiskRepositoryProcess& repository() { return *repository_; }
    const std::map<int, std::shared_ptr<SyndicateProcess>>& syndicates() const {
        return syndicates_;
    }
    const std::map<int, std::shared_ptr<ActuarialSubProcess>>& actuarials() const {
        return actuarials_;
    }
    const std::map<int, std::shared_ptr<VarEmSubProcess>>& var_ems() const { return var_ems_; }
    IndustryStatisticsProcess& industry() { return *industry_; }
    MetricsCollector& collector() { return *collector_; }

private:
    void append_trace(const Event& ev) {
        std::ostringstream line;
        line << ev.day << ',' << ev.seq << ',' << event_kind_name(ev.kind) << ','
             << payload_summary(ev) << '\n';
        trace_ += line.str();
    }

    static std::string payload_summary(const Event& ev) {
        std::ostringstream out;
        switch (ev.kind) {
            case EventKind::RiskBroadcasted: {
                const Risk& r = ev.as<RiskBroadcast>().risk;
                out << "risk=" << r.risk_id << " region=" << r.peril_region;
                break;
            }
            case EventKind::LeadQuoteRequested:
            case EventKind::FollowQuoteRequested: {
                const auto& q = ev.as<QuoteRequest>();
                out << "risk=" << q.risk.risk_id << " syndicate=" << q.syndicate_id;
                break;
            }
            case EventKind::LeadQuoteConsolidationDeadlineReached:
            case EventKind::LeadQuoteSelectionDeadlineReached:
            case EventKind::FollowQuoteConsolidationDeadlineReached:
            case EventKind::FollowQuoteSelectionDeadlineReached:
                out << "risk=" << ev.as<QuoteDeadline>().risk_id;
                break;
            case EventKind::LeadQuoteOffered:
            case EventKind::FollowQuoteOffered: {
                const auto& q = ev.as<QuoteOffer>();
                out << "risk=" << q.risk_id << " syndicate=" << q.syndicate_id
                    << " price=" << q.price << " line=" << q.line;
                break;
            }
            case EventKind::LeadQuoteAccepted:
            case EventKind::FollowQuoteAccepted: {
                const auto& q = ev.as<QuoteAccept>();
                out << "risk=" << q.risk.risk_id << " syndicate=" << q.syndicate_id
                    << " premium=" << q.premium << " line=" << q.signed_line;
                break;
            }
            case EventKind::AttritionalLossOccurred: {
                const auto& l = ev.as<AttritionalLoss>();
                out << "risk=" << l.risk_id << " amount=" << l.amount;
                break;
            }
            case EventKind::CatastropheLossOccurred: {
                const auto& c = ev.as<CatastropheLoss>();
                out << "region=" << c.peril_region << " loss=" << c.total_loss;
                break;
            }
            case EventKind::ClaimReceived: {
                const auto& c = ev.as<Claim>();
                out << "risk=" << c.risk_id << " syndicate=" << c.syndicate_id
                    << " amount=" << c.amount;
                break;
            }
            case EventKind::QuoteComponentComputed: {
                const auto& c = ev.as<QuoteComponent>();
                out << "risk=" << c.risk_id << " syndicate=" << c.syndicate_id
                    << " allow=" << (c.allow ? 1 : 0);
                break;
            }
            case EventKind::SyndicateCapitalReported: {
                const auto& r = ev.as<CapitalReport>();
                out << "syndicate=" << r.syndicate_id << " capital=" << r.capital;
                break;
            }
            case EventKind::SyndicateBankrupted: {
                const auto& b = ev.as<Bankruptcy>();
                out << "syndicate=" << b.syndicate_id << " capital=" << b.final_capital;
                break;
            }
            case EventKind::IndustryLossStatisticsReported: {
                const auto& s = ev.as<IndustryLossStats>();
                out << "frequency=" << s.claim_frequency << " severity=" << s.mean_severity;
                break;
            }
            case EventKind::IndustryPricingStatisticsReported: {
                const auto& s = ev.as<IndustryPricingStats>();
                out << "bound=" << s.policies_bound << " mean_premium=" << s.mean_bound_premium;
                break;
            }
            default:
                out << "-";
                break;
        }
        return out.str();
    }

    ScenarioConfig cfg_;
    Engine engine_;
    std::uint64_t seed_;
    std::int64_t next_risk_id_ = 1;

    std::vector<std::shared_ptr<BrokerProcess>> brokers_;
    std::shared_ptr<NetworkProcess> network_;
    std::shared_ptr<RiskRepositoryProcess> repository_;
    std::shared_ptr<AttritionalLossGenerator> attritional_;
    std::shared_ptr<CatastropheLossGenerator> catastrophe_;
    std::shared_ptr<IndustryStatisticsProcess> industry_;
    std::map<int, std::shared_ptr<SyndicateProcess>> syndicates_;
    std::map<int, std::shared_ptr<ActuarialSubProcess>> actuarials_;
    std::map<int, std::shared_ptr<VarEmSubProcess>> var_ems_;
    std::shared_ptr<MetricsCollector> collector_;
    std::string trace_;
};

inline RunResult run_simulation(const ScenarioConfig& cfg, std::uint64_t seed,
                                bool capture_trace = false) {
    Simulation sim(cfg, seed, capture_trace);
    return sim.run();
}

} // namespace lmsim
