#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <vector>

#include "lmsim/engine.hpp"
#include "lmsim/industry_stats.hpp"

using namespace lmsim;

namespace {

struct StatsRecorder : Process {
    std::vector<IndustryLossStats> reports;
    void on_event(const Event& ev, Engine&) override {
        reports.push_back(ev.as<IndustryLossStats>());
    }
};

Claim make_claim(std::int64_t loss_id, int syndicate, double amount, double line,
                 double full_risk) {
    Claim c;
    c.loss_id = loss_id;
    c.risk_id = 1;
    c.syndicate_id = syndicate;
    c.amount = amount;
    c.signed_line = line;
    c.full_risk_loss = full_risk;
    return c;
}

} // namespace

TEST_CASE("industry loss statistics de-share and de-duplicate claims") {
    ScenarioConfig cfg;
    Engine sim(3);
    auto stats = std::make_shared<IndustryStatisticsProcess>(cfg);
    auto rec = std::make_shared<StatsRecorder>();
    sim.add_process(stats, IndustryStatisticsProcess::subscriptions());
    sim.add_process(rec, {EventKind::IndustryLossStatisticsReported});

    // ten policies, in force for the whole year
    for (int i = 0; i < 10; ++i) {
        Risk risk{i + 1, 0, 0, 360, 10e6, 0};
        sim.schedule(0, EventKind::RiskBroadcasted, RiskBroadcast{risk});
        sim.schedule(0, EventKind::LeadQuoteAccepted, QuoteAccept{risk, 0, Role::lead, 3e5, 0.5});
    }
    // one physical loss of 1,000,000 shared by two syndicates: it must
    // count once, at the full-risk amount
    sim.schedule(30, EventKind::ClaimReceived, make_claim(1, 0, 500'000.0, 0.5, 1'000'000.0));
    sim.schedule(30, EventKind::ClaimReceived, make_claim(1, 1, 100'000.0, 0.1, 1'000'000.0));
    // and a second loss on another day
    sim.schedule(60, EventKind::ClaimReceived, make_claim(2, 0, 250'000.0, 0.5, 500'000.0));
    sim.schedule(360, EventKind::Year);
    sim.run_until(360);

    REQUIRE(rec->reports.size() == 1);
    const auto& report = rec->reports[0];
    CHECK(report.year == 1);
    CHECK(report.claim_frequency == Catch::Approx(2.0 / 10.0));
    CHECK(report.mean_severity == Catch::Approx(750'000.0));
    CHECK(stats->risks_entered() == 10);
    CHECK(stats->policies_bound() == 10);
}

TEST_CASE("carry rules for empty denominators") {
    ScenarioConfig cfg; // priors: frequency 0.1, severity 3,000,000
    Engine sim(3);
    auto stats = std::make_shared<IndustryStatisticsProcess>(cfg);
    auto rec = std::make_shared<StatsRecorder>();
    sim.add_process(stats, IndustryStatisticsProcess::subscriptions());
    sim.add_process(rec, {EventKind::IndustryLossStatisticsReported});

    SECTION("no policies: frequency and severity carry the priors") {
        sim.schedule(360, EventKind::Year);
        sim.run_until(360);
        REQUIRE(rec->reports.size() == 1);
        CHECK(rec->reports[0].claim_frequency == Catch::Approx(0.1));
        CHECK(rec->reports[0].mean_severity == Catch::Approx(3'000'000.0));
    }
    SECTION("policies but no claims: frequency drops to zero, severity carries") {
        Risk risk{1, 0, 0, 360, 10e6, 0};
        sim.schedule(0, EventKind::LeadQuoteAccepted, QuoteAccept{risk, 0, Role::lead, 3e5, 1.0});
        sim.schedule(360, EventKind::Year);
        sim.run_until(360);
        REQUIRE(rec->reports.size() == 1);
        CHECK(rec->reports[0].claim_frequency == 0.0);
        CHECK(rec->reports[0].mean_severity == Catch::Approx(3'000'000.0));
    }
    SECTION("a later lean year carries the last computed severity") {
        Risk risk{1, 0, 0, 360, 10e6, 0};
        sim.schedule(0, EventKind::LeadQuoteAccepted, QuoteAccept{risk, 0, Role::lead, 3e5, 1.0});
        sim.schedule(30, EventKind::ClaimReceived, make_claim(1, 0, 800'000.0, 1.0, 800'000.0));
        sim.schedule(360, EventKind::Year);
        sim.schedule(720, EventKind::Year);
        sim.run_until(720);
        REQUIRE(rec->reports.size() == 2);
        CHECK(rec->reports[0].claim_frequency == Catch::Approx(1.0));
        CHECK(rec->reports[0].mean_severity == Catch::Approx(800'000.0));
        // year 2: no policies in force, no claims
        CHECK(rec->reports[1].claim_frequency == Catch::Approx(1.0)); // carried
        CHECK(rec->reports[1].mean_severity == Catch::Approx(800'000.0));
    }
}

TEST_CASE("cover ends when the last holder fails") {
    ScenarioConfig cfg;
    Engine sim(3);
    auto stats = std::make_shared<IndustryStatisticsProcess>(cfg);
    auto rec = std::make_shared<StatsRecorder>();
    sim.add_process(stats, IndustryStatisticsProcess::subscriptions());
    sim.add_process(rec, {EventKind::IndustryLossStatisticsReported});

    Risk risk{1, 0, 0, 360, 10e6, 0};
    sim.schedule(0, EventKind::LeadQuoteAccepted, QuoteAccept{risk, 0, Role::lead, 3e5, 0.5});
    sim.schedule(0, EventKind::FollowQuoteAccepted, QuoteAccept{risk, 1, Role::follow, 3e5, 0.1});
    sim.schedule(30, EventKind::ClaimReceived, make_claim(1, 0, 400'000.0, 0.5, 800'000.0));
    // the lead fails mid-year; the follower keeps the cover alive
    sim.schedule(90, EventKind::SyndicateBankrupted, Bankruptcy{0, -1.0});
    // ... until the follower fails too at day 180
    sim.schedule(180, EventKind::SyndicateBankrupted, Bankruptcy{1, -1.0});
    sim.schedule(360, EventKind::Year);
    sim.run_until(360);
    REQUIRE(rec->reports.size() == 1);
    // one claim over half a policy-year of live cover
    CHECK(rec->reports[0].claim_frequency == Catch::Approx(2.0));
}

TEST_CASE("partial-year policies contribute fractional policy-years") {
    ScenarioConfig cfg;
    Engine sim(3);
    auto stats = std::make_shared<IndustryStatisticsProcess>(cfg);
    auto rec = std::make_shared<StatsRecorder>();
    sim.add_process(stats, IndustryStatisticsProcess::subscriptions());
    sim.add_process(rec, {EventKind::IndustryLossStatisticsReported});

    // bound mid-year: 180 days in the first calendar year
    Risk risk{1, 0, 180, 540, 10e6, 0};
    sim.schedule(180, EventKind::LeadQuoteAccepted, QuoteAccept{risk, 0, Role::lead, 3e5, 1.0});
    sim.schedule(200, EventKind::ClaimReceived, make_claim(1, 0, 600'000.0, 1.0, 600'000.0));
    sim.schedule(360, EventKind::Year);
    sim.run_until(360);
    REQUIRE(rec->reports.size() == 1);
    CHECK(rec->reports[0].claim_frequency == Catch::Approx(1.0 / 0.5));
}
