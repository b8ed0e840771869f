#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "lmsim/time.hpp"

namespace lmsim {

enum class EventKind : std::uint8_t {
    SimulationStarted,
    Day,
    Month,
    Year,
    RiskBroadcasted,
    LeadQuoteRequested,
    FollowQuoteRequested,
    LeadQuoteConsolidationDeadlineReached,
    LeadQuoteSelectionDeadlineReached,
    FollowQuoteConsolidationDeadlineReached,
    FollowQuoteSelectionDeadlineReached,
    LeadQuoteOffered,
    FollowQuoteOffered,
    LeadQuoteAccepted,
    FollowQuoteAccepted,
    AttritionalLossOccurred,
    CatastropheLossOccurred,
    ClaimReceived,
    QuoteComponentComputed,
    SyndicateCapitalReported,
    SyndicateBankrupted,
    IndustryLossStatisticsReported,
    IndustryPricingStatisticsReported,
    KindCount,
};

constexpr std::size_t event_kind_count = static_cast<std::size_t>(EventKind::KindCount);

// Same-day dispatch order: simulation start, then time ticks (Day before
// Month before Year), then losses and the claims/bankruptcies they raise,
// then the quote lifecycle, then statistics broadcasts. FIFO within a tier.
enum class Tier : std::uint8_t {
    start = 0,
    day = 1,
    month = 2,
    year = 3,
    loss = 4,
    quote = 5,
    stats = 6,
};

constexpr Tier tier_of(EventKind kind) {
    switch (kind) {
        case EventKind::SimulationStarted: return Tier::start;
        case EventKind::Day: return Tier::day;
        case EventKind::Month: return Tier::month;
        case EventKind::Year: return Tier::year;
        case EventKind::AttritionalLossOccurred:
        case EventKind::CatastropheLossOccurred:
        case EventKind::ClaimReceived:
        case EventKind::SyndicateBankrupted: return Tier::loss;
        case EventKind::IndustryLossStatisticsReported:
        case EventKind::IndustryPricingStatisticsReported: return Tier::stats;
        default: return Tier::quote;
    }
}

enum class Role : std::uint8_t { lead, follow };
enum class LossSource : std::uint8_t { attritional, catastrophe };

inline const char* role_name(Role r) { return r == Role::lead ? "lead" : "follow"; }

// ---------------------------------------------------------------------------
// Payloads

struct Risk {
    std::int64_t risk_id = 0;
    int broker_id = 0;
    int inception_day = 0;
    int expiry_day = 0; // exclusive; policies cover [inception, expiry)
    double limit = 0.0;
    int peril_region = 0;

    bool in_force(int day) const { return day >= inception_day && day < expiry_day; }
};

struct RiskBroadcast {
    Risk risk;
};

struct QuoteRequest {
    Risk risk;
    int syndicate_id = 0;
    Role role = Role::lead;
};

struct QuoteDeadline {
    std::int64_t risk_id = 0;
};

struct QuoteOffer {
    std::int64_t risk_id = 0;
    int syndicate_id = 0;
    Role role = Role::lead;
    double price = 0.0; // full policy premium at 100% share
    double line = 0.0;
};

struct QuoteAccept {
    Risk risk;
    int syndicate_id = 0;
    Role role = Role::lead;
    double premium = 0.0; // policy premium at 100% share (the winning lead price)
    double signed_line = 0.0;
};

struct AttritionalLoss {
    std::int64_t loss_id = 0;
    std::int64_t risk_id = 0;
    double amount = 0.0;
};

struct CatastropheLoss {
    std::int64_t cat_id = 0;
    int peril_region = 0;
    double total_loss = 0.0;
};

struct Claim {
    std::int64_t loss_id = 0; // unique per (loss event, risk)
    std::int64_t cat_id = 0;  // 0 for attritional losses
    std::int64_t risk_id = 0;
    int syndicate_id = 0;
    double amount = 0.0;         // this syndicate's share
    double signed_line = 0.0;
    double full_risk_loss = 0.0; // capped loss at 100% share
    LossSource source = LossSource::attritional;
};

enum class ComponentKind : std::uint8_t {
    actuarial_price,
    markup_factor,
    premium_scaling,
    var_check,
};

struct QuoteComponent {
    std::int64_t risk_id = 0;
    int syndicate_id = 0;
    Role role = Role::lead;
    ComponentKind component = ComponentKind::actuarial_price;
    bool allow = true;
    double value = 0.0;
};

struct CapitalReport {
    int syndicate_id = 0;
    double capital = 0.0;
    double capital_at_year_start = 0.0; // committed capital base, no premium float
    double premiums_written_ytd = 0.0;
    int year = 0; // calendar year of the report
};

struct Bankruptcy {
    int syndicate_id = 0;
    double final_capital = 0.0;
};

struct IndustryLossStats {
    int year = 0;
    double claim_frequency = 0.0; // claims per policy-year, 100%-of-risk basis
    double mean_severity = 0.0;   // mean claim cost at 100% share
};

struct IndustryPricingStats {
    int month = 0;
    std::int64_t risks_entered = 0;
    std::int64_t policies_bound = 0;
    double mean_bound_premium = 0.0;
    double mean_signed_line_total = 0.0;
    bool carried = false; // true when the means repeat the previous month's values
    double uninsured_loss = 0.0; // cumulative losses that fell outside any policy
};

using Payload = std::variant<std::monostate, RiskBroadcast, QuoteRequest, QuoteDeadline,
                             QuoteOffer, QuoteAccept, AttritionalLoss, CatastropheLoss, Claim,
                             QuoteComponent, CapitalReport, Bankruptcy, IndustryLossStats,
                             IndustryPricingStats>;

struct Event {
    int day = 0;
    Tier tier = Tier::quote;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::Day;
    Payload payload;

    template <typename T>
    const T& as() const { return std::get<T>(payload); }
};

// Strict-weak order for the event queue: (day, tier, seq).
struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.day != b.day) return a.day > b.day;
        if (a.tier != b.tier) return a.tier > b.tier;
        return a.seq > b.seq;
    }
};

inline const char* event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::SimulationStarted: return "SimulationStarted";
        case EventKind::Day: return "Day";
        case EventKind::Month: return "Month";
        case EventKind::Year: return "Year";
        case EventKind::RiskBroadcasted: return "RiskBroadcasted";
        case EventKind::LeadQuoteRequested: return "LeadQuoteRequested";
        case EventKind::FollowQuoteRequested: return "FollowQuoteRequested";
        case EventKind::LeadQuoteConsolidationDeadlineReached: return "LeadQuoteConsolidationDeadlineReached";
        case EventKind::LeadQuoteSelectionDeadlineReached: return "LeadQuoteSelectionDeadlineReached";
        case EventKind::FollowQuoteConsolidationDeadlineReached: return "FollowQuoteConsolidationDeadlineReached";
        case EventKind::FollowQuoteSelectionDeadlineReached: return "FollowQuoteSelectionDeadlineReached";
        case EventKind::LeadQuoteOffered: return "LeadQuoteOffered";
        case EventKind::FollowQuoteOffered: return "FollowQuoteOffered";
        case EventKind::LeadQuoteAccepted: return "LeadQuoteAccepted";
        case EventKind::FollowQuoteAccepted: return "FollowQuoteAccepted";
        case EventKind::AttritionalLossOccurred: return "AttritionalLossOccurred";
        case EventKind::CatastropheLossOccurred: return "CatastropheLossOccurred";
        case EventKind::ClaimReceived: return "ClaimReceived";
        case EventKind::QuoteComponentComputed: return "QuoteComponentComputed";
        case EventKind::SyndicateCapitalReported: return "SyndicateCapitalReported";
        case EventKind::SyndicateBankrupted: return "SyndicateBankrupted";
        case EventKind::IndustryLossStatisticsReported: return "IndustryLossStatisticsReported";
        case EventKind::IndustryPricingStatisticsReported: return "IndustryPricingStatisticsReported";
        default: return "Unknown";
    }
}

} // namespace lmsim
