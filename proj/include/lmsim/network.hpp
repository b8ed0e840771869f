#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "lmsim/config.hpp"
#include "lmsim/engine.hpp"
#include "lmsim/events.hpp"
#include "lmsim/rng.hpp"

namespace lmsim {

// Selects which syndicates are asked to quote a risk. Circular ranks by
// distance on a unit circle (near = cheap to deal with), graph ranks by a
// static edge weight (strong relationship first), random shuffles.
class Topology {
public:
    Topology() = default;

    static Topology make(TopologyKind kind, int num_brokers, int num_syndicates,
                         RngStream& init_rng) {
        Topology t;
        t.kind_ = kind;
        t.num_brokers_ = num_brokers;
        t.num_syndicates_ = num_syndicates;
        if (kind == TopologyKind::circular) {
            for (int b = 0; b < num_brokers; ++b)
                t.broker_pos_.push_back(num_brokers > 0 ? static_cast<double>(b) / num_brokers : 0.0);
            for (int s = 0; s < num_syndicates; ++s)
                t.syndicate_pos_.push_back(num_syndicates > 0 ? static_cast<double>(s) / num_syndicates
                                                              : 0.0);
        } else if (kind == TopologyKind::graph) {
            t.weights_.resize(static_cast<std::size_t>(num_brokers) * num_syndicates);
            for (auto& w : t.weights_) {
                double u = init_rng.uniform();
                w = u > 0.0 ? u : 1.0; // weights live in (0, 1]
            }
        }
        return t;
    }

    // Top-k syndicates for a broker, best first, restricted to `live`.
    // Pure for circular/graph; the random variant consumes `rng`.
    std::vector<int> select(int broker_id, int top_k, const std::set<int>& live,
                            const std::set<int>& excluded, RngStream& rng) const {
        std::vector<int> candidates;
        for (int s : live)
            if (!excluded.count(s)) candidates.push_back(s);
        if (top_k <= 0 || candidates.empty()) return {};

        if (kind_ == TopologyKind::random) {
            // Fisher–Yates prefix of length top_k.
            int take = std::min<int>(top_k, static_cast<int>(candidates.size()));
            for (int i = 0; i < take; ++i) {
                int j = rng.uniform_int(i, static_cast<int>(candidates.size()) - 1);
                std::swap(candidates[static_cast<std::size_t>(i)], candidates[static_cast<std::size_t>(j)]);
            }
            candidates.resize(static_cast<std::size_t>(take));
            return candidates;
        }

        auto score = [&](int syndicate_id) {
            if (kind_ == TopologyKind::circular) {
                double d = std::fabs(broker_pos_.at(static_cast<std::size_t>(broker_id)) -
                                     syndicate_pos_.at(static_cast<std::size_t>(syndicate_id)));
                return std::min(d, 1.0 - d); // smaller distance is better
            }
            // graph: larger weight is better, negate so that smaller wins
            return -weights_.at(static_cast<std::size_t>(broker_id) * num_syndicates_ +
                                static_cast<std::size_t>(syndicate_id));
        };
        std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
            double sa = score(a), sb = score(b);
            if (sa != sb) return sa < sb;
            return a < b; // deterministic tie-break
        });
        if (static_cast<int>(candidates.size()) > top_k) candidates.resize(static_cast<std::size_t>(top_k));
        return candidates;
    }

    double edge_weight(int broker_id, int syndicate_id) const {
        return weights_.at(static_cast<std::size_t>(broker_id) * num_syndicates_ +
                           static_cast<std::size_t>(syndicate_id));
    }

    // Circle distance, exposed for tests.
    double circle_distance(int broker_id, int syndicate_id) const {
        double d = std::fabs(broker_pos_.at(static_cast<std::size_t>(broker_id)) -
                             syndicate_pos_.at(static_cast<std::size_t>(syndicate_id)));
        return std::min(d, 1.0 - d);
    }

private:
    TopologyKind kind_ = TopologyKind::random;
    int num_brokers_ = 0;
    int num_syndicates_ = 0;
    std::vector<double> broker_pos_;
    std::vector<double> syndicate_pos_;
    std::vector<double> weights_; // broker-major [broker][syndicate]
};

// The broker-syndicate network process: on each RiskBroadcasted it picks
// the lead candidates, then the follow candidates from the remaining
// syndicates (a syndicate asked to lead never also follows on that risk),
// and emits the corresponding quote requests.
class NetworkProcess : public Process {
public:
    NetworkProcess(const ScenarioConfig& cfg, Topology topology, std::string stream_label)
        : topology_(std::move(topology)), lead_top_k_(cfg.lead_top_k),
          follow_top_k_(cfg.lead_follow ? cfg.follow_top_k : 0),
          stream_label_(std::move(stream_label)) {
        for (int s = 0; s < cfg.num_syndicates; ++s) live_.insert(s);
    }

    void on_event(const Event& ev, Engine& sim) override {
        if (ev.kind == EventKind::SyndicateBankrupted) {
            live_.erase(ev.as<Bankruptcy>().syndicate_id);
            return;
        }
        const Risk& risk = ev.as<RiskBroadcast>().risk;
        RngStream& rng = sim.rng(stream_label_);
        std::vector<int> leads = topology_.select(risk.broker_id, lead_top_k_, live_, {}, rng);
        for (int s : leads)
            sim.emit(EventKind::LeadQuoteRequested, QuoteRequest{risk, s, Role::lead});
        if (follow_top_k_ > 0) {
            std::set<int> excluded(leads.begin(), leads.end());
            std::vector<int> follows =
                topology_.select(risk.broker_id, follow_top_k_, live_, excluded, rng);
            for (int s : follows)
                sim.emit(EventKind::FollowQuoteRequested, QuoteRequest{risk, s, Role::follow});
        }
    }

    static std::vector<EventKind> subscriptions() {
        return {EventKind::RiskBroadcasted, EventKind::SyndicateBankrupted};
    }

    const std::set<int>& live_syndicates() const { return live_; }

private:
    Topology topology_;
    int lead_top_k_;
    int follow_top_k_;
    std::string stream_label_;
    std::set<int> live_;
};

} // namespace lmsim
