#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmsim/events.hpp"
#include "lmsim/rng.hpp"
#include "lmsim/time.hpp"

namespace lmsim {

class Engine;

// A process reacts to the events it subscribed to and may emit new ones.
// All communication between processes goes through the event queue; no
// process ever calls into another directly.
class Process {
public:
    virtual ~Process() = default;
    virtual void on_event(const Event& ev, Engine& sim) = 0;
};

using ProcessId = int;

class Engine {
public:
    explicit Engine(std::uint64_t master_seed = 0) : rngs_(master_seed) {}

    // Registration order fixes same-event delivery order. `group` ties a
    // process to a syndicate so the whole family can be removed at once.
    ProcessId add_process(std::shared_ptr<Process> process,
                          const std::vector<EventKind>& subscriptions,
                          std::string group = {}) {
        ProcessId id = static_cast<ProcessId>(processes_.size());
        processes_.push_back(Entry{std::move(process), std::move(group), true});
        for (EventKind kind : subscriptions)
            subscribers_[static_cast<std::size_t>(kind)].push_back(id);
        return id;
    }

    void remove_process(ProcessId id) { processes_.at(static_cast<std::size_t>(id)).live = false; }

    void remove_group(const std::string& group) {
        if (group.empty()) return;
        for (auto& entry : processes_)
            if (entry.group == group) entry.live = false;
    }

    bool is_live(ProcessId id) const { return processes_.at(static_cast<std::size_t>(id)).live; }

    int now() const { return now_; }

    RngStream& rng(const std::string& label) { return rngs_.stream(label); }

    // Schedule an event at a future (or current) day. Scheduling into the
    // past signals a model bug and is rejected hard.
    void schedule(int day, EventKind kind, Payload payload = std::monostate{}) {
        if (day < now_)
            throw std::logic_error(std::string("event scheduled into the past: ") +
                                   event_kind_name(kind));
        queue_.push(Event{day, tier_of(kind), next_seq_++, kind, std::move(payload)});
    }

    // Emit at the current day (dispatch order still honours the kind's tier).
    void emit(EventKind kind, Payload payload = std::monostate{}) {
        schedule(now_, kind, std::move(payload));
    }

    std::size_t queue_size() const { return queue_.size(); }

    // Pre-schedules SimulationStarted plus the full Day/Month/Year grid.
    // Day 0 is the start marker; ticks run from day 1 through end_day.
    void schedule_calendar(int end_day) {
        schedule(0, EventKind::SimulationStarted);
        for (int day = 1; day <= end_day; ++day) {
            schedule(day, EventKind::Day);
            if (day % days_per_month == 0) schedule(day, EventKind::Month);
            if (day % days_per_year == 0) schedule(day, EventKind::Year);
        }
    }

    // Dispatch until the queue is empty or the next event falls beyond
    // end_day. Events are delivered to every live subscriber, in
    // registration order. A SyndicateBankrupted event removes the whole
    // process group after delivery.
    void run_until(int end_day) {
        while (!queue_.empty()) {
            const Event& top = queue_.top();
            if (top.day > end_day) break;
            Event ev = top;
            queue_.pop();
            now_ = ev.day;
            dispatch(ev);
        }
    }

    void set_trace_hook(std::function<void(const Event&)> hook) { trace_hook_ = std::move(hook); }

    std::uint64_t dispatched_count() const { return dispatched_; }

private:
    struct Entry {
        std::shared_ptr<Process> process;
        std::string group;
        bool live = true;
    };

    void dispatch(const Event& ev) {
        ++dispatched_;
        if (trace_hook_) trace_hook_(ev);
        for (ProcessId id : subscribers_[static_cast<std::size_t>(ev.kind)]) {
            Entry& entry = processes_[static_cast<std::size_t>(id)];
            if (entry.live) entry.process->on_event(ev, *this);
        }
        if (ev.kind == EventKind::SyndicateBankrupted)
            remove_group("syndicate:" + std::to_string(ev.as<Bankruptcy>().syndicate_id));
    }

    std::vector<Entry> processes_;
    std::vector<ProcessId> subscribers_[event_kind_count];
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    int now_ = 0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t dispatched_ = 0;
    RngStreamSet rngs_;
    std::function<void(const Event&)> trace_hook_;
};

} // namespace lmsim
