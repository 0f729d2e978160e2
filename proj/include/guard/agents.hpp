#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "guard/attacks.hpp"
#include "guard/detectors.hpp"

namespace guard {

enum class AgentId : std::uint8_t { Behavioral, Hardware, ShadowProcessing, Failover, Regulatory };

std::string_view to_string(AgentId a);
AgentId agent_from_string(std::string_view s);

/// Default detector-to-agent routing. Every fired verdict lands in exactly
/// one agent's evidence stream; scenarios may override per detector.
AgentId default_owner(DetectorId d);

using RoutingTable = std::map<DetectorId, AgentId>;
RoutingTable default_routing();

enum class Severity : std::uint8_t { Advisory, Suspected, Confirmed };

std::string_view to_string(Severity s);
Severity severity_from_string(std::string_view s);

struct VerdictRef {
    Tick tick = 0;
    DetectorId detector = DetectorId::ZScore;
    ChannelId channel;
};

struct Alert {
    Tick tick = 0;
    AgentId agent = AgentId::Hardware;
    Severity severity = Severity::Advisory;
    AttackClassSet hypothesis;
    std::vector<VerdictRef> evidence;
    /// Suspected spoofed bank, when the evidence identifies one.
    std::optional<SensorBank> suspect_bank;
    std::string note;
};

struct FusionPolicy {
    int corroboration = 2;  // fired verdicts within the window for Confirmed
    int window = 5;         // ticks
    /// Per-class override of the corroboration count (e.g. escalate a
    /// glitch-consistent pair faster). Missing = default.
    std::map<AttackKind, int> escalation_overrides;
};

/// Sliding-window monitoring agent: accumulates its own fired verdicts and
/// emits an alert on every tick that contributes new evidence. Hypothesis is
/// the intersection of the window's verdict hypotheses when non-empty, else
/// their union.
class MonitoringAgent {
public:
    MonitoringAgent(AgentId id, FusionPolicy policy) : id_(id), policy_(policy) {}

    AgentId id() const { return id_; }

    std::optional<Alert> step(Tick tick, std::span<const DetectorVerdict> owned_fired);

    void reset() { window_.clear(); }

private:
    struct Entry {
        Tick tick;
        VerdictRef ref;
        AttackClassSet hypothesis;
        std::optional<SensorBank> suspect_bank;
    };
    AgentId id_;
    FusionPolicy policy_;
    std::deque<Entry> window_;
};

enum class ThreatKind : std::uint8_t { None, Suspect, Confirmed, NetworkDown };

std::string_view to_string(ThreatKind t);

struct SystemThreatLevel {
    ThreatKind kind = ThreatKind::None;
    AttackClassSet hypothesis;
};

/// Max severity wins; a NetworkOutage observation maps to NetworkDown
/// regardless of anything else (the outage hypothesis set is kept so the
/// log retains concurrent findings).
SystemThreatLevel fuse(std::span<const Alert> alerts, const FusionPolicy& policy);

/// Per-class EMA feature store for attack-pattern learning. Features are a
/// fixed-layout vector: fired fraction per detector, mean |score| per
/// detector, fired fraction per modality.
class SignatureStore {
public:
    static constexpr int kFeatureDim = 2 * kDetectorCount + kModalityCount;

    explicit SignatureStore(double decay = 0.2) : decay_(decay) {}

    /// The grid maps tile channels onto the modality-footprint features;
    /// without it only share channels contribute to the footprint.
    static std::vector<double> features_of(std::span<const DetectorVerdict> bundle,
                                           const TileGrid* grid = nullptr);

    /// EMA update; the first incident of a class stores its features as-is.
    void learn(AttackKind cls, std::span<const double> features);

    /// Best cosine match: (class, score in [0,1]); ties break to the
    /// lexicographically smaller class name. Empty store matches nothing.
    std::pair<std::optional<AttackKind>, double> match(std::span<const double> features) const;

    int incident_count(AttackKind cls) const;
    bool empty() const { return classes_.empty(); }
    double decay() const { return decay_; }

    std::string to_json() const;
    static SignatureStore from_json(const std::string& text);
    void save(const std::string& path) const;
    static SignatureStore load(const std::string& path);

private:
    struct Stored {
        std::vector<double> vec;
        int incidents = 0;
    };
    double decay_;
    std::map<AttackKind, Stored> classes_;
};

}  // namespace guard
