#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "lmsim/risk_repository.hpp"

using namespace lmsim;

namespace {

Risk make_risk(std::int64_t id, int inception = 0, double limit = 10e6, int region = 0) {
    return Risk{id, 0, inception, inception + 360, limit, region};
}

} // namespace

TEST_CASE("lead selection takes the cheapest quote") {
    RiskRepository repo;
    repo.register_risk(make_risk(1));
    repo.register_lead_quote(QuoteOffer{1, 0, Role::lead, 310'000.0, 1.0});
    repo.register_lead_quote(QuoteOffer{1, 1, Role::lead, 295'000.0, 1.0});
    repo.register_lead_quote(QuoteOffer{1, 2, Role::lead, 305'000.0, 1.0});
    const Policy* policy = repo.select_lead(1);
    REQUIRE(policy != nullptr);
    CHECK(policy->premium == 295'000.0);
    CHECK(policy->shares.front().syndicate_id == 1);
}

TEST_CASE("no lead quotes means the risk lapses unbound") {
    RiskRepository repo;
    repo.register_risk(make_risk(1));
    CHECK(repo.select_lead(1) == nullptr);
    CHECK(repo.policy_for(1) == nullptr);
}

TEST_CASE("price ties break on the lowest syndicate id") {
    RiskRepository repo;
    repo.register_risk(make_risk(1));
    repo.register_lead_quote(QuoteOffer{1, 3, Role::lead, 300'000.0, 1.0});
    repo.register_lead_quote(QuoteOffer{1, 1, Role::lead, 300'000.0, 1.0});
    const Policy* policy = repo.select_lead(1);
    REQUIRE(policy != nullptr);
    CHECK(policy->shares.front().syndicate_id == 1);
}

TEST_CASE("lead selection is invariant under a positive rescaling of all quotes") {
    for (double scale : {0.5, 1.0, 7.25}) {
        RiskRepository repo;
        repo.register_risk(make_risk(1));
        repo.register_lead_quote(QuoteOffer{1, 0, Role::lead, 310'000.0 * scale, 1.0});
        repo.register_lead_quote(QuoteOffer{1, 1, Role::lead, 295'000.0 * scale, 1.0});
        repo.register_lead_quote(QuoteOffer{1, 2, Role::lead, 305'000.0 * scale, 1.0});
        const Policy* policy = repo.select_lead(1);
        REQUIRE(policy != nullptr);
        CHECK(policy->shares.front().syndicate_id == 1);
    }
}

TEST_CASE("follow lines sign as requested while capacity lasts") {
    RiskRepository repo;
    repo.register_risk(make_risk(1));
    repo.register_lead_quote(QuoteOffer{1, 0, Role::lead, 300'000.0, 0.5});
    REQUIRE(repo.select_lead(1) != nullptr);
    for (int s = 1; s <= 5; ++s)
        repo.register_follow_quote(QuoteOffer{1, s, Role::follow, 300'000.0, 0.1});
    auto accepted = repo.select_follows(1);
    REQUIRE(accepted.size() == 5);
    for (const auto& share : accepted) CHECK(share.signed_line == Catch::Approx(0.1));
    CHECK(repo.policy_for(1)->total_signed_line() == Catch::Approx(1.0));
}

TEST_CASE("over-subscribed follows sign down proportionally") {
    RiskRepository repo;
    repo.register_risk(make_risk(1));
    repo.register_lead_quote(QuoteOffer{1, 0, Role::lead, 300'000.0, 0.5});
    REQUIRE(repo.select_lead(1) != nullptr);
    for (int s = 1; s <= 7; ++s)
        repo.register_follow_quote(QuoteOffer{1, s, Role::follow, 300'000.0, 0.1});
    auto accepted = repo.select_follows(1);
    REQUIRE(accepted.size() == 7);
    double expected = 0.5 / 0.7 * 0.1;
    for (const auto& share : accepted)
        CHECK(std::fabs(share.signed_line - expected) <= 1e-9);
    CHECK(std::fabs(repo.policy_for(1)->total_signed_line() - 1.0) <= 1e-9);
}

TEST_CASE("follow quotes without a lead are discarded") {
    RiskRepository repo;
    repo.register_risk(make_risk(1));
    repo.register_follow_quote(QuoteOffer{1, 1, Role::follow, 300'000.0, 0.1});
    CHECK(repo.select_follows(1).empty());
    CHECK(repo.policy_for(1) == nullptr);
}

TEST_CASE("a lead line of one leaves no follow capacity") {
    RiskRepository repo;
    repo.register_risk(make_risk(1));
    repo.register_lead_quote(QuoteOffer{1, 0, Role::lead, 300'000.0, 1.0});
    REQUIRE(repo.select_lead(1) != nullptr);
    repo.register_follow_quote(QuoteOffer{1, 1, Role::follow, 300'000.0, 0.1});
    CHECK(repo.select_follows(1).empty());
    CHECK(repo.policy_for(1)->total_signed_line() == Catch::Approx(1.0));
}

TEST_CASE("per-risk losses cascade by signed line") {
    RiskRepository repo;
    repo.register_risk(make_risk(1));
    repo.register_lead_quote(QuoteOffer{1, 0, Role::lead, 300'000.0, 0.5});
    REQUIRE(repo.select_lead(1) != nullptr);
    repo.register_follow_quote(QuoteOffer{1, 1, Role::follow, 300'000.0, 0.1});
    REQUIRE(repo.select_follows(1).size() == 1);

    SECTION("shares are proportional and conserve the capped loss") {
        auto claims = repo.cascade_per_risk_loss(1, 1'000'000.0, 30, LossSource::attritional, 1, 0);
        REQUIRE(claims.size() == 2);
        CHECK(claims[0].amount == Catch::Approx(500'000.0));
        CHECK(claims[1].amount == Catch::Approx(100'000.0));
        double covered = claims[0].amount + claims[1].amount;
        double lines = repo.policy_for(1)->total_signed_line();
        CHECK(covered == Catch::Approx(1'000'000.0 * lines).epsilon(1e-6));
        // the remaining 400,000 lapses back to the insured
        CHECK(repo.uninsured_loss() == Catch::Approx(400'000.0));
    }
    SECTION("losses cap at the risk limit before sharing") {
        auto claims = repo.cascade_per_risk_loss(1, 15'000'000.0, 30, LossSource::attritional, 1, 0);
        REQUIRE(claims.size() == 2);
        CHECK(claims[0].full_risk_loss == Catch::Approx(10'000'000.0));
        CHECK(claims[0].amount == Catch::Approx(5'000'000.0));
        CHECK(claims[1].amount == Catch::Approx(1'000'000.0));
    }
    SECTION("losses on expired risks are dropped") {
        auto claims = repo.cascade_per_risk_loss(1, 1'000'000.0, 400, LossSource::attritional, 1, 0);
        CHECK(claims.empty());
    }
    SECTION("losses on unknown risks are dropped") {
        auto claims = repo.cascade_per_risk_loss(99, 1'000'000.0, 30, LossSource::attritional, 1, 0);
        CHECK(claims.empty());
    }
}

TEST_CASE("bankrupt syndicates lose their outstanding shares") {
    RiskRepository repo;
    repo.register_risk(make_risk(1));
    repo.register_lead_quote(QuoteOffer{1, 0, Role::lead, 300'000.0, 0.5});
    REQUIRE(repo.select_lead(1) != nullptr);
    repo.register_follow_quote(QuoteOffer{1, 1, Role::follow, 300'000.0, 0.1});
    REQUIRE(repo.select_follows(1).size() == 1);

    repo.mark_bankrupt(0);
    auto claims = repo.cascade_per_risk_loss(1, 1'000'000.0, 30, LossSource::attritional, 1, 0);
    REQUIRE(claims.size() == 1);
    CHECK(claims[0].syndicate_id == 1);

    // and they can no longer win new leads
    repo.register_risk(make_risk(2));
    repo.register_lead_quote(QuoteOffer{2, 0, Role::lead, 1.0, 0.5});
    CHECK(repo.select_lead(2) == nullptr);
}

TEST_CASE("monthly statistics carry means through empty months") {
    RiskRepository repo;
    repo.register_risk(make_risk(1));
    repo.count_risk();
    repo.register_risk(make_risk(2));
    repo.count_risk();
    repo.register_lead_quote(QuoteOffer{1, 0, Role::lead, 290'000.0, 1.0});
    repo.register_lead_quote(QuoteOffer{2, 1, Role::lead, 310'000.0, 1.0});
    REQUIRE(repo.select_lead(1) != nullptr);
    REQUIRE(repo.select_lead(2) != nullptr);

    IndustryPricingStats first = repo.month_end(1);
    CHECK(first.risks_entered == 2);
    CHECK(first.policies_bound == 2);
    CHECK(first.mean_bound_premium == Catch::Approx(300'000.0));
    CHECK_FALSE(first.carried);

    IndustryPricingStats second = repo.month_end(2);
    CHECK(second.policies_bound == 0);
    CHECK(second.carried);
    CHECK(second.mean_bound_premium == Catch::Approx(300'000.0));
}

TEST_CASE("empty market reports zeros") {
    RiskRepository repo;
    IndustryPricingStats stats = repo.month_end(1);
    CHECK(stats.risks_entered == 0);
    CHECK(stats.policies_bound == 0);
    CHECK(stats.mean_bound_premium == 0.0);
}

TEST_CASE("signed lines never exceed one") {
    // randomised follow loads against a random lead line
    RngStream rng(99, "prop");
    for (int trial = 0; trial < 200; ++trial) {
        RiskRepository repo;
        repo.register_risk(make_risk(1));
        double lead_line = rng.uniform(0.05, 1.0);
        repo.register_lead_quote(QuoteOffer{1, 0, Role::lead, 300'000.0, lead_line});
        REQUIRE(repo.select_lead(1) != nullptr);
        int followers = rng.uniform_int(0, 12);
        for (int s = 1; s <= followers; ++s)
            repo.register_follow_quote(
                QuoteOffer{1, s, Role::follow, 300'000.0, rng.uniform(0.01, 0.4)});
        repo.select_follows(1);
        CHECK(repo.policy_for(1)->total_signed_line() <= 1.0 + 1e-9);
    }
}
