#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "lmsim/engine.hpp"
#include "lmsim/events.hpp"
#include "lmsim/losses.hpp"

namespace lmsim {

struct PolicyShare {
    int syndicate_id = 0;
    Role role = Role::lead;
    double signed_line = 0.0;
};

struct Policy {
    Risk risk;
    double premium = 0.0; // winning lead price, 100% share
    std::vector<PolicyShare> shares;

    double total_signed_line() const {
        double s = 0.0;
        for (const auto& sh : shares) s += sh.signed_line;
        return s;
    }
    bool in_force(int day) const { return risk.in_force(day); }
};

// The central register of risks, quotes and bound policies. Pure market
// state plus the selection and loss-cascade rules; the event glue lives in
// RiskRepositoryProcess below so the rules stay directly testable.
class RiskRepository {
public:
    void register_risk(const Risk& risk) { risks_[risk.risk_id] = risk; }

    void register_lead_quote(const QuoteOffer& q) { lead_quotes_[q.risk_id].push_back(q); }
    void register_follow_quote(const QuoteOffer& q) { follow_quotes_[q.risk_id].push_back(q); }

    bool has_risk(std::int64_t risk_id) const { return risks_.count(risk_id) != 0; }
    const Policy* policy_for(std::int64_t risk_id) const {
        auto it = policies_.find(risk_id);
        return it == policies_.end() ? nullptr : &it->second;
    }

    void mark_bankrupt(int syndicate_id) {
        bankrupt_.insert(syndicate_id);
        // Outstanding shares are extinguished; remaining shortfalls fall
        // back on the insured.
        for (auto& [id, policy] : policies_) {
            auto& shares = policy.shares;
            shares.erase(std::remove_if(shares.begin(), shares.end(),
                                        [&](const PolicyShare& s) {
                                            return s.syndicate_id == syndicate_id;
                                        }),
                         shares.end());
        }
    }

    // Cheapest lead quote wins; ties break on the lowest syndicate id.
    // Returns nullptr when no eligible quote exists (the risk lapses).
    const Policy* select_lead(std::int64_t risk_id) {
        auto rit = risks_.find(risk_id);
        if (rit == risks_.end()) return nullptr;
        auto qit = lead_quotes_.find(risk_id);
        if (qit == lead_quotes_.end()) return nullptr;

        const QuoteOffer* best = nullptr;
        for (const QuoteOffer& q : qit->second) {
            if (bankrupt_.count(q.syndicate_id)) continue;
            if (!best || q.price < best->price ||
                (q.price == best->price && q.syndicate_id < best->syndicate_id))
                best = &q;
        }
        if (!best) return nullptr;

        Policy policy;
        policy.risk = rit->second;
        policy.premium = best->price;
        policy.shares.push_back(PolicyShare{best->syndicate_id, Role::lead, best->line});
        auto [it, inserted] = policies_.insert_or_assign(risk_id, std::move(policy));
        (void)inserted;
        ++policies_bound_mtd_;
        bound_premium_mtd_ += best->price;
        return &it->second;
    }

    // Signs follow lines against the capacity the lead left open,
    // proportionally signing down when over-subscribed. Requires a lead;
    // otherwise the follow quotes are discarded.
    std::vector<PolicyShare> select_follows(std::int64_t risk_id) {
        std::vector<PolicyShare> accepted;
        auto pit = policies_.find(risk_id);
        auto qit = follow_quotes_.find(risk_id);
        if (pit == policies_.end() || qit == follow_quotes_.end()) return accepted;

        Policy& policy = pit->second;
        double lead_line = 0.0;
        for (const auto& s : policy.shares)
            if (s.role == Role::lead) lead_line += s.signed_line;
        double remaining = 1.0 - lead_line;
        if (remaining <= 1e-12) return accepted;

        double requested = 0.0;
        std::vector<const QuoteOffer*> eligible;
        for (const QuoteOffer& q : qit->second) {
            if (bankrupt_.count(q.syndicate_id)) continue;
            eligible.push_back(&q);
            requested += q.line;
        }
        if (eligible.empty()) return accepted;

        double scale = requested > remaining ? remaining / requested : 1.0;
        for (const QuoteOffer* q : eligible) {
            PolicyShare share{q->syndicate_id, Role::follow, q->line * scale};
            policy.shares.push_back(share);
            accepted.push_back(share);
        }
        signed_line_total_mtd_ += policy.total_signed_line();
        ++signed_policies_mtd_;
        return accepted;
    }

    // Applies a per-risk loss to a policy: capped at the risk limit, then
    // shared by signed line. Losses on unbound or expired risks are
    // uninsured.
    std::vector<Claim> cascade_per_risk_loss(std::int64_t risk_id, double amount, int day,
                                             LossSource source, std::int64_t loss_id,
                                             std::int64_t cat_id) {
        std::vector<Claim> claims;
        auto pit = policies_.find(risk_id);
        if (amount <= 0.0) return claims;
        if (pit == policies_.end() || !pit->second.in_force(day)) {
            uninsured_loss_ += amount;
            return claims;
        }
        const Policy& policy = pit->second;
        double capped = std::min(amount, policy.risk.limit);
        double covered = 0.0;
        for (const PolicyShare& share : policy.shares) {
            Claim c;
            c.loss_id = loss_id;
            c.cat_id = cat_id;
            c.risk_id = risk_id;
            c.syndicate_id = share.syndicate_id;
            c.amount = capped * share.signed_line;
            c.signed_line = share.signed_line;
            c.full_risk_loss = capped;
            c.source = source;
            covered += c.amount;
            claims.push_back(c);
        }
        uninsured_loss_ += amount - covered;
        return claims;
    }

    // In-force bound risks of a peril region, sorted by risk id.
    std::vector<const Policy*> in_force_in_region(int region, int day) const {
        std::vector<const Policy*> out;
        for (const auto& [id, policy] : policies_)
            if (policy.risk.peril_region == region && policy.in_force(day))
                out.push_back(&policy);
        return out;
    }

    void note_uninsured(double amount) { uninsured_loss_ += amount; }

    void count_risk() { ++risks_entered_mtd_; }

    // Monthly pricing statistics; means carry forward through months with
    // no new policies, flagged as carried.
    IndustryPricingStats month_end(int month) {
        IndustryPricingStats stats;
        stats.month = month;
        stats.risks_entered = risks_entered_mtd_;
        stats.policies_bound = policies_bound_mtd_;
        if (policies_bound_mtd_ > 0) {
            last_mean_premium_ = bound_premium_mtd_ / static_cast<double>(policies_bound_mtd_);
            if (signed_policies_mtd_ > 0)
                last_mean_signed_total_ =
                    signed_line_total_mtd_ / static_cast<double>(signed_policies_mtd_);
            stats.carried = false;
        } else {
            stats.carried = true;
        }
        stats.mean_bound_premium = last_mean_premium_;
        stats.mean_signed_line_total = last_mean_signed_total_;
        stats.uninsured_loss = uninsured_loss_;
        risks_entered_mtd_ = 0;
        policies_bound_mtd_ = 0;
        bound_premium_mtd_ = 0.0;
        signed_line_total_mtd_ = 0.0;
        signed_policies_mtd_ = 0;
        return stats;
    }

    const std::map<std::int64_t, Policy>& policies() const { return policies_; }
    const std::map<std::int64_t, Risk>& risks() const { return risks_; }
    double uninsured_loss() const { return uninsured_loss_; }

private:
    std::map<std::int64_t, Risk> risks_;
    std::map<std::int64_t, std::vector<QuoteOffer>> lead_quotes_;
    std::map<std::int64_t, std::vector<QuoteOffer>> follow_quotes_;
    std::map<std::int64_t, Policy> policies_;
    std::set<int> bankrupt_;

    std::int64_t risks_entered_mtd_ = 0;
    std::int64_t policies_bound_mtd_ = 0;
    double bound_premium_mtd_ = 0.0;
    double signed_line_total_mtd_ = 0.0;
    std::int64_t signed_policies_mtd_ = 0;
    double last_mean_premium_ = 0.0;
    double last_mean_signed_total_ = 0.0;
    double uninsured_loss_ = 0.0;
};

class RiskRepositoryProcess : public Process {
public:
    RiskRepositoryProcess() = default;

    void on_event(const Event& ev, Engine& sim) override {
        switch (ev.kind) {
            case EventKind::RiskBroadcasted: {
                repo_.register_risk(ev.as<RiskBroadcast>().risk);
                repo_.count_risk();
                break;
            }
            case EventKind::LeadQuoteOffered:
                repo_.register_lead_quote(ev.as<QuoteOffer>());
                break;
            case EventKind::FollowQuoteOffered:
                repo_.register_follow_quote(ev.as<QuoteOffer>());
                break;
            case EventKind::LeadQuoteSelectionDeadlineReached: {
                std::int64_t risk_id = ev.as<QuoteDeadline>().risk_id;
                if (const Policy* policy = repo_.select_lead(risk_id)) {
                    const PolicyShare& lead = policy->shares.front();
                    sim.emit(EventKind::LeadQuoteAccepted,
                             QuoteAccept{policy->risk, lead.syndicate_id, Role::lead,
                                         policy->premium, lead.signed_line});
                }
                break;
            }
            case EventKind::FollowQuoteSelectionDeadlineReached: {
                std::int64_t risk_id = ev.as<QuoteDeadline>().risk_id;
                const Policy* policy = repo_.policy_for(risk_id);
                for (const PolicyShare& share : repo_.select_follows(risk_id))
                    sim.emit(EventKind::FollowQuoteAccepted,
                             QuoteAccept{policy->risk, share.syndicate_id, Role::follow,
                                         policy->premium, share.signed_line});
                break;
            }
            case EventKind::AttritionalLossOccurred: {
                const auto& loss = ev.as<AttritionalLoss>();
                for (const Claim& claim :
                     repo_.cascade_per_risk_loss(loss.risk_id, loss.amount, sim.now(),
                                                 LossSource::attritional, next_claim_loss_id(),
                                                 0))
                    sim.emit(EventKind::ClaimReceived, claim);
                break;
            }
            case EventKind::CatastropheLossOccurred: {
                const auto& cat = ev.as<CatastropheLoss>();
                cascade_catastrophe(cat, sim);
                break;
            }
            case EventKind::Month:
                sim.emit(EventKind::IndustryPricingStatisticsReported,
                         repo_.month_end(SimTime{sim.now()}.month()));
                break;
            case EventKind::SyndicateBankrupted:
                repo_.mark_bankrupt(ev.as<Bankruptcy>().syndicate_id);
                break;
            default:
                break;
        }
    }

    static std::vector<EventKind> subscriptions() {
        return {EventKind::RiskBroadcasted,
                EventKind::LeadQuoteOffered,
                EventKind::FollowQuoteOffered,
                EventKind::LeadQuoteSelectionDeadlineReached,
                EventKind::FollowQuoteSelectionDeadlineReached,
                EventKind::AttritionalLossOccurred,
                EventKind::CatastropheLossOccurred,
                EventKind::Month,
                EventKind::SyndicateBankrupted};
    }

    RiskRepository& repository() { return repo_; }
    const RiskRepository& repository() const { return repo_; }

private:
    std::int64_t next_claim_loss_id() { return next_loss_id_++; }

    void cascade_catastrophe(const CatastropheLoss& cat, Engine& sim) {
        std::vector<const Policy*> hit = repo_.in_force_in_region(cat.peril_region, sim.now());
        std::vector<double> limits;
        limits.reserve(hit.size());
        for (const Policy* p : hit) limits.push_back(p->risk.limit);
        RegionalAllocation allocation = allocate_regional_loss(cat.total_loss, limits);
        repo_.note_uninsured(allocation.uninsured);
        for (std::size_t i = 0; i < hit.size(); ++i) {
            if (allocation.per_risk[i] <= 0.0) continue;
            for (const Claim& claim : repo_.cascade_per_risk_loss(
                     hit[i]->risk.risk_id, allocation.per_risk[i], sim.now(),
                     LossSource::catastrophe, next_claim_loss_id(), cat.cat_id))
                sim.emit(EventKind::ClaimReceived, claim);
        }
    }

    RiskRepository repo_;
    std::int64_t next_loss_id_ = 1;
};

} // namespace lmsim
