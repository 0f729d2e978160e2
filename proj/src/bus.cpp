#include "guard/bus.hpp"

#include <algorithm>

#include "guard/errors.hpp"

namespace guard {

std::string_view to_string(Topic t) {
    switch (t) {
        case Topic::Telemetry: return "telemetry";
        case Topic::Network: return "network";
        case Topic::Verdict: return "verdict";
        case Topic::Alert: return "alert";
        case Topic::StateChange: return "state_change";
        case Topic::Decision: return "decision";
        case Topic::Compliance: return "compliance";
    }
    return "?";
}

Topic topic_from_string(std::string_view s) {
    if (s == "telemetry") return Topic::Telemetry;
    if (s == "network") return Topic::Network;
    if (s == "verdict") return Topic::Verdict;
    if (s == "alert") return Topic::Alert;
    if (s == "state_change") return Topic::StateChange;
    if (s == "decision") return Topic::Decision;
    if (s == "compliance") return Topic::Compliance;
    throw ConfigError("unknown topic: '" + std::string(s) + "'");
}

void EventBus::begin_tick(Tick tick) {
    tick_ = tick;
    next_sequence_ = 0;
    tick_events_.clear();
    // Deliver delayed events that are due, in (due tick, sequence) order.
    std::stable_sort(delayed_.begin(), delayed_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t kept = 0;
    for (auto& [due, ev] : delayed_) {
        if (due <= tick_)
            deliver(ev);
        else
            delayed_[kept++] = {due, std::move(ev)};
    }
    delayed_.resize(kept);
}

void EventBus::publish(BusEvent ev) {
    if (ev.tick < tick_)
        throw ValidationError("bus: event tick " + std::to_string(ev.tick) +
                              " precedes current tick " + std::to_string(tick_));
    ev.sequence = next_sequence_++;
    tick_events_.push_back(ev);

    Tick delay = 0;
    if (auto it = delays_.find(ev.topic); it != delays_.end()) delay = it->second;
    if (delay <= 0)
        deliver(ev);
    else
        delayed_.emplace_back(ev.tick + delay, std::move(ev));
}

void EventBus::deliver(const BusEvent& ev) {
    for (const Sub& s : subs_)
        if (!s.topic || *s.topic == ev.topic) s.handler(ev);
}

int EventBus::subscribe(Topic topic, BusHandler handler) {
    subs_.push_back({topic, std::move(handler)});
    // Replay this tick's backlog so a subscriber attached mid-tick still
    // observes the tick's events.
    for (const BusEvent& ev : tick_events_)
        if (ev.topic == topic) subs_.back().handler(ev);
    return static_cast<int>(subs_.size()) - 1;
}

int EventBus::subscribe_all(BusHandler handler) {
    subs_.push_back({std::nullopt, std::move(handler)});
    for (const BusEvent& ev : tick_events_) subs_.back().handler(ev);
    return static_cast<int>(subs_.size()) - 1;
}

std::vector<BusEvent> EventBus::ordered_tick_events() const {
    std::vector<BusEvent> out = tick_events_;
    std::stable_sort(out.begin(), out.end(), [](const BusEvent& a, const BusEvent& b) {
        if (a.topic != b.topic) return a.topic < b.topic;
        return a.sequence < b.sequence;
    });
    return out;
}

}  // namespace guard
