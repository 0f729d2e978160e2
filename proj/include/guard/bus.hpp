#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "guard/agents.hpp"
#include "guard/detectors.hpp"
#include "guard/failover.hpp"
#include "guard/models.hpp"
#include "guard/regulatory.hpp"
#include "guard/sensors.hpp"
#include "guard/workload.hpp"

namespace guard {

/// Channels on the intra-tick bus, in delivery-priority order. Events within
/// a tick are totally ordered by (topic priority, sequence).
enum class Topic : std::uint8_t {
    Telemetry = 0,
    Network,
    Verdict,
    Alert,
    StateChange,
    Decision,
    Compliance,
};

constexpr int kTopicCount = 7;

std::string_view to_string(Topic t);
Topic topic_from_string(std::string_view s);  // throws ConfigError on unknown topic

struct TelemetryRec {
    TelemetryFrame frame;
    SensorBank active_bank = SensorBank::A;
};

struct NetworkRec {
    NetworkSample sample;
};

struct VerdictRec {
    DetectorVerdict verdict;
};

struct AlertRec {
    Alert alert;
};

struct StateChangeRec {
    StateChange change;
    SensorBank active_bank = SensorBank::A;
    int route_model = 0;
};

struct DecisionRec {
    Decision decision;
    int source_model = 0;
    bool degraded = false;
};

struct ComplianceRec {
    ComplianceRecord record;
};

using EventPayload = std::variant<TelemetryRec, NetworkRec, VerdictRec, AlertRec, StateChangeRec,
                                  DecisionRec, ComplianceRec>;

struct BusEvent {
    Tick tick = 0;
    Topic topic = Topic::Telemetry;
    std::uint32_t sequence = 0;  // assigned by the bus, resets each tick
    EventPayload payload;
};

using BusHandler = std::function<void(const BusEvent&)>;

/// Synchronous intra-tick event bus. Publishing assigns the per-tick
/// sequence number; subscribers registered mid-tick are replayed the current
/// tick's backlog for their topic. An optional per-topic delay (default 0)
/// postpones delivery to subscribers by that many ticks; the event keeps its
/// publish tick.
class EventBus {
public:
    explicit EventBus(std::map<Topic, Tick> topic_delays = {})
        : delays_(std::move(topic_delays)) {}

    /// Advance the clock; delivers any delayed events now due.
    void begin_tick(Tick tick);

    /// Throws ValidationError when the event's tick precedes the current
    /// tick (stale events are never accepted).
    void publish(BusEvent ev);

    int subscribe(Topic topic, BusHandler handler);
    int subscribe_all(BusHandler handler);

    Tick current_tick() const { return tick_; }

    /// This tick's events in their canonical total order
    /// (topic priority, then sequence).
    std::vector<BusEvent> ordered_tick_events() const;

private:
    void deliver(const BusEvent& ev);

    Tick tick_ = 0;
    std::uint32_t next_sequence_ = 0;
    std::map<Topic, Tick> delays_;
    std::vector<BusEvent> tick_events_;
    std::vector<std::pair<Tick, BusEvent>> delayed_;
    struct Sub {
        std::optional<Topic> topic;  // nullopt = all topics
        BusHandler handler;
    };
    std::vector<Sub> subs_;
};

}  // namespace guard
