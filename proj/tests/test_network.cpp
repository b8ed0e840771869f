#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <memory>
#include <set>
#include <vector>

#include "lmsim/engine.hpp"
#include "lmsim/network.hpp"

using namespace lmsim;

namespace {

std::set<int> all_live(int n) {
    std::set<int> live;
    for (int i = 0; i < n; ++i) live.insert(i);
    return live;
}

struct RequestRecorder : Process {
    std::vector<QuoteRequest> leads, follows;
    void on_event(const Event& ev, Engine&) override {
        if (ev.kind == EventKind::LeadQuoteRequested)
            leads.push_back(ev.as<QuoteRequest>());
        else
            follows.push_back(ev.as<QuoteRequest>());
    }
};

} // namespace

TEST_CASE("random topology draws distinct syndicates up to top_k") {
    RngStream init(1, "init"), rng(2, "sel");
    Topology t = Topology::make(TopologyKind::random, 3, 5, init);

    auto picks = t.select(0, 2, all_live(5), {}, rng);
    REQUIRE(picks.size() == 2);
    CHECK(picks[0] != picks[1]);

    SECTION("clamps to the live pool") {
        auto clamped = t.select(0, 2, {4}, {}, rng);
        REQUIRE(clamped.size() == 1);
        CHECK(clamped[0] == 4);
    }
    SECTION("empty pool selects nothing") {
        CHECK(t.select(0, 2, {}, {}, rng).empty());
    }
    SECTION("all five when top_k spans the market") {
        auto all = t.select(0, 5, all_live(5), {}, rng);
        CHECK(std::set<int>(all.begin(), all.end()) == all_live(5));
    }
    SECTION("top_k zero selects nothing") {
        CHECK(t.select(0, 0, all_live(5), {}, rng).empty());
    }
}

TEST_CASE("random topology requests every syndicate equally often") {
    RngStream init(1, "init"), rng(3, "sel");
    Topology t = Topology::make(TopologyKind::random, 1, 5, init);
    std::map<int, int> hits;
    const int trials = 10'000;
    for (int i = 0; i < trials; ++i)
        for (int s : t.select(0, 2, all_live(5), {}, rng)) ++hits[s];
    double expected = trials * 2.0 / 5.0;
    for (const auto& [s, count] : hits)
        CHECK(std::abs(count - expected) / expected < 0.05);
}

TEST_CASE("circular topology picks the nearest syndicates") {
    RngStream init(1, "init"), rng(4, "sel");
    // 10 brokers and 5 syndicates on the unit circle; broker 0 sits on
    // syndicate 0, and syndicates 1 and 4 tie at distance 0.2.
    Topology t = Topology::make(TopologyKind::circular, 10, 5, init);
    CHECK(t.circle_distance(0, 0) == Catch::Approx(0.0));
    CHECK(t.circle_distance(0, 1) == Catch::Approx(0.2));
    CHECK(t.circle_distance(0, 4) == Catch::Approx(0.2));

    auto picks = t.select(0, 2, all_live(5), {}, rng);
    REQUIRE(picks.size() == 2);
    CHECK(picks[0] == 0);
    CHECK(picks[1] == 1); // tie at 0.2 breaks on the lower id

    SECTION("selection is a pure function of the topology") {
        auto again = t.select(0, 2, all_live(5), {}, rng);
        CHECK(again == picks);
    }
}

TEST_CASE("graph topology prefers the strongest relationships") {
    RngStream init(9, "init"), rng(5, "sel");
    Topology t = Topology::make(TopologyKind::graph, 2, 4, init);
    auto picks = t.select(1, 2, all_live(4), {}, rng);
    REQUIRE(picks.size() == 2);
    CHECK(t.edge_weight(1, picks[0]) >= t.edge_weight(1, picks[1]));
    for (int s : all_live(4))
        if (s != picks[0] && s != picks[1])
            CHECK(t.edge_weight(1, picks[1]) >= t.edge_weight(1, s));
    for (int s = 0; s < 4; ++s) {
        CHECK(t.edge_weight(1, s) > 0.0);
        CHECK(t.edge_weight(1, s) <= 1.0);
    }
}

TEST_CASE("network process enforces role exclusivity and liveness") {
    ScenarioConfig cfg;
    cfg.num_syndicates = 5;
    cfg.lead_top_k = 2;
    cfg.follow_top_k = 5;
    cfg.lead_follow = true;

    Engine sim(7);
    RngStream init(1, "init");
    auto network = std::make_shared<NetworkProcess>(
        cfg, Topology::make(TopologyKind::random, cfg.num_brokers, cfg.num_syndicates, init),
        "network");
    auto rec = std::make_shared<RequestRecorder>();
    sim.add_process(network, NetworkProcess::subscriptions());
    sim.add_process(rec, {EventKind::LeadQuoteRequested, EventKind::FollowQuoteRequested});

    Risk risk{1, 0, 1, 361, 1e7, 2};
    sim.schedule(1, EventKind::RiskBroadcasted, RiskBroadcast{risk});
    sim.run_until(1);

    CHECK(rec->leads.size() == 2);
    // the two lead candidates never appear among the follow requests
    std::set<int> lead_ids, follow_ids;
    for (const auto& q : rec->leads) lead_ids.insert(q.syndicate_id);
    for (const auto& q : rec->follows) follow_ids.insert(q.syndicate_id);
    CHECK(rec->follows.size() == 3); // 5 live minus 2 lead candidates
    for (int id : follow_ids) CHECK_FALSE(lead_ids.count(id));

    SECTION("bankrupt syndicates drop out of the pools immediately") {
        sim.schedule(2, EventKind::SyndicateBankrupted, Bankruptcy{*lead_ids.begin(), -1.0});
        sim.run_until(2);
        rec->leads.clear();
        rec->follows.clear();
        sim.schedule(3, EventKind::RiskBroadcasted, RiskBroadcast{risk});
        sim.run_until(3);
        for (const auto& q : rec->leads) CHECK(q.syndicate_id != *lead_ids.begin());
        for (const auto& q : rec->follows) CHECK(q.syndicate_id != *lead_ids.begin());
        CHECK(rec->leads.size() + rec->follows.size() == 4);
    }
}

TEST_CASE("zero live syndicates leaves the risk unquoted") {
    ScenarioConfig cfg;
    cfg.num_syndicates = 0;
    Engine sim(7);
    RngStream init(1, "init");
    auto network = std::make_shared<NetworkProcess>(
        cfg, Topology::make(TopologyKind::random, 1, 0, init), "network");
    auto rec = std::make_shared<RequestRecorder>();
    sim.add_process(network, NetworkProcess::subscriptions());
    sim.add_process(rec, {EventKind::LeadQuoteRequested, EventKind::FollowQuoteRequested});
    sim.schedule(1, EventKind::RiskBroadcasted, RiskBroadcast{Risk{1, 0, 1, 361, 1e7, 0}});
    sim.run_until(1);
    CHECK(rec->leads.empty());
    CHECK(rec->follows.empty());
}
