#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "lmsim/config.hpp"

using namespace lmsim;

TEST_CASE("preset scenario toggles") {
    SECTION("scenario1: attritional only, premium EM") {
        ScenarioConfig c = preset_config("scenario1");
        CHECK(c.attritional_losses);
        CHECK_FALSE(c.catastrophe_losses);
        CHECK(c.premium_em);
        CHECK_FALSE(c.var_em);
        CHECK_FALSE(c.lead_follow);
        CHECK(c.follow_top_k == 0);
        CHECK(c.default_lead_line_size == 1.0);
        CHECK(c.horizon_years == 50);
    }
    SECTION("scenario2: catastrophes on, var EM off, premium EM on") {
        ScenarioConfig c = preset_config("scenario2");
        CHECK(c.catastrophe_losses);
        CHECK_FALSE(c.var_em);
        CHECK(c.premium_em);
        CHECK(c.catastrophe_events_per_year == 0.05);
        CHECK(c.pareto_shape == 5.0);
        CHECK(c.min_catastrophe_damage_fraction == 0.25);
    }
    SECTION("scenario3: VaR EM replaces premium EM") {
        ScenarioConfig c = preset_config("scenario3");
        CHECK(c.catastrophe_losses);
        CHECK(c.var_em);
        CHECK_FALSE(c.premium_em);
        CHECK(c.var_exceedance_probability == 0.05);
        CHECK(c.var_safety_factor == 1.0);
    }
    SECTION("scenario4: syndication on, catastrophes off") {
        ScenarioConfig c = preset_config("scenario4");
        CHECK(c.lead_follow);
        CHECK(c.follow_top_k == 5);
        CHECK(c.default_lead_line_size == 0.5);
        CHECK(c.default_follow_line_size == 0.1);
        CHECK_FALSE(c.catastrophe_losses);
        CHECK(c.premium_em);
    }
    SECTION("market defaults") {
        ScenarioConfig c = preset_config("scenario1");
        CHECK(c.num_syndicates == 5);
        CHECK(c.num_brokers == 25);
        CHECK(c.risks_per_day == 0.06);
        CHECK(c.num_peril_regions == 10);
        CHECK(c.risk_limit == 10'000'000.0);
        CHECK(c.lead_top_k == 2);
        CHECK(c.yearly_claim_frequency == 0.1);
        CHECK(c.attritional_cov == 1.0);
        CHECK(c.attritional_mean_severity == 3'000'000.0);
        CHECK(c.initial_capital == 10'000'000.0);
        CHECK(c.internal_experience_weight == 0.5);
        CHECK(c.loss_recency_weight == 0.2);
        CHECK(c.volatility_weight == 0.0);
        CHECK(c.markup_recency_weight == 0.2);
        CHECK(c.dividend_profit_fraction == 0.4);
        CHECK(c.premium_reserve_ratio == 0.5);
        CHECK(c.min_capital_reserve_ratio == 1.0);
        CHECK(c.max_premium_scaling == 1.0);
        CHECK_FALSE(c.underwriter_markup);
    }
}

TEST_CASE("config text parsing") {
    std::istringstream in("  # market\n"
                          "num_syndicates = 3\n"
                          "risks_per_day = 0.2   # denser market\n"
                          "\n"
                          "catastrophe_losses = on\n");
    auto entries = parse_config_text(in);
    REQUIRE(entries.size() == 3);
    CHECK(entries.at("num_syndicates") == "3");
    CHECK(entries.at("risks_per_day") == "0.2");
    CHECK(entries.at("catastrophe_losses") == "on");

    ConfigSources sources;
    sources.file_entries = entries;
    ScenarioConfig cfg = build_config(sources);
    CHECK(cfg.num_syndicates == 3);
    CHECK(cfg.risks_per_day == 0.2);
    CHECK(cfg.catastrophe_losses);
}

TEST_CASE("config rejections name the offending field") {
    SECTION("unknown key") {
        ConfigSources sources;
        sources.file_entries["risk_limitt"] = "1";
        CHECK_THROWS_WITH(build_config(sources), Catch::Matchers::ContainsSubstring("risk_limitt"));
    }
    SECTION("range violation") {
        ConfigSources sources;
        sources.file_entries["volatility_weight"] = "-1";
        CHECK_THROWS_WITH(build_config(sources),
                          Catch::Matchers::ContainsSubstring("volatility_weight"));
    }
    SECTION("malformed number") {
        ConfigSources sources;
        sources.file_entries["risk_limit"] = "ten";
        CHECK_THROWS_AS(build_config(sources), ConfigError);
    }
    SECTION("duplicate key") {
        std::istringstream in("risk_limit = 1\nrisk_limit = 2\n");
        CHECK_THROWS_AS(parse_config_text(in), ConfigError);
    }
    SECTION("preset conflict") {
        ConfigSources sources;
        sources.preset = "scenario1";
        sources.file_entries["catastrophe_losses"] = "on";
        CHECK_THROWS_WITH(build_config(sources),
                          Catch::Matchers::ContainsSubstring("conflicts with preset"));
    }
    SECTION("restating a preset value is fine") {
        ConfigSources sources;
        sources.preset = "scenario2";
        sources.file_entries["catastrophe_losses"] = "on";
        CHECK_NOTHROW(build_config(sources));
    }
    SECTION("non-pinned keys override freely under a preset") {
        ConfigSources sources;
        sources.preset = "scenario1";
        sources.file_entries["num_syndicates"] = "7";
        ScenarioConfig cfg = build_config(sources);
        CHECK(cfg.num_syndicates == 7);
    }
    SECTION("var_em sample floor applies when var_em is on") {
        ConfigSources sources;
        sources.preset = "scenario3";
        sources.file_entries["var_em_mc_samples"] = "999";
        CHECK_THROWS_WITH(build_config(sources),
                          Catch::Matchers::ContainsSubstring("var_em_mc_samples"));
    }
}

TEST_CASE("environment overrides win over file entries") {
    ConfigSources sources;
    sources.file_entries["num_brokers"] = "10";
    sources.env_entries["num_brokers"] = "12";
    ScenarioConfig cfg = build_config(sources);
    CHECK(cfg.num_brokers == 12);
}

TEST_CASE("env override harvesting uses the uppercased key") {
    auto fake_getenv = [](const char* key) -> const char* {
        if (std::string(key) == "LMSIM_RISKS_PER_DAY") return "0.5";
        return nullptr;
    };
    auto entries = env_overrides(fake_getenv);
    REQUIRE(entries.size() == 1);
    CHECK(entries.at("risks_per_day") == "0.5");
}
