#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "guard/agents.hpp"
#include "guard/models.hpp"
#include "guard/sensors.hpp"

namespace guard {

enum class GuardStateKind : std::uint8_t { Normal, Suspect, FailoverActive, OfflineLocal, Recovery };

std::string_view to_string(GuardStateKind s);
GuardStateKind guard_state_from_string(std::string_view s);

struct FailoverConfig {
    Tick quiet_period = 50;  // Q: consecutive quiet ticks before de-escalating
    /// Model indices tried in order when a shadow must take over. Defaults
    /// to the active-mode shadows in roster order.
    std::vector<int> shadow_priority;
};

struct StateChange {
    Tick tick = 0;
    GuardStateKind from = GuardStateKind::Normal;
    GuardStateKind to = GuardStateKind::Normal;
    std::string reason;
};

struct RoutedDecision {
    Decision decision;
    int source_model = 0;
    /// Failover demanded a shadow but none was available; the primary's
    /// output is served flagged.
    bool degraded = false;
};

/// Hypotheses that mean the primary model itself is compromised.
AttackClassSet model_targeting_kinds();
/// Hypotheses remediated by cutting the network and processing locally.
AttackClassSet network_attack_kinds();

/// Five-state failover machine with hysteresis. One transition per tick;
/// every change is reported so the run loop can publish it.
///
/// Rows: Normal/Suspect move with the threat level; Confirmed enters
/// FailoverActive; an observed outage enters OfflineLocal from anywhere and
/// restores the previous functional state when the network returns. Leaving
/// FailoverActive takes Q quiet ticks to Recovery and Q more to Normal; any
/// firing during Recovery drops straight back to FailoverActive.
class FailoverMachine {
public:
    explicit FailoverMachine(FailoverConfig cfg) : cfg_(std::move(cfg)) {}

    GuardStateKind state() const { return state_; }
    bool primary_compromised() const { return compromised_; }

    std::optional<StateChange> transition(const SystemThreatLevel& threat, bool outage_observed,
                                          Tick tick);

    struct Actions {
        bool switched_bank = false;
        SensorBank bank_switched_to = SensorBank::A;
        bool isolated_network = false;
        bool shadow_route_requested = false;
    };

    /// Confirmed-threat remediation: spoofing on the active bank switches
    /// banks, model-targeting hypotheses mark the primary compromised (the
    /// state machine already routes shadows), network-attack hypotheses cut
    /// the link and continue locally. Empty hypothesis sets do nothing.
    Actions remediate(const SystemThreatLevel& threat, std::optional<SensorBank> suspect_bank,
                      SensorSuite& sensors, Tick tick, std::vector<StateChange>& changes);

    /// (model index, degraded flag) the current state routes.
    std::pair<int, bool> route_index(const std::vector<ModelSpec>& models) const;

    /// Pick this tick's system output. `decisions` is aligned with the model
    /// roster. Exactly one decision is returned in every state.
    RoutedDecision route_decision(std::span<const Decision> decisions,
                                  const std::vector<ModelSpec>& models) const;

    /// True while the machine has voluntarily isolated the network.
    bool network_isolated() const {
        return state_ == GuardStateKind::OfflineLocal && offline_reason_ == OfflineReason::Isolated;
    }

private:
    enum class OfflineReason : std::uint8_t { None, OutageObserved, Isolated };

    std::optional<StateChange> enter(GuardStateKind to, Tick tick, const std::string& reason);
    void apply_threat_row(const SystemThreatLevel& threat, Tick tick,
                          std::optional<StateChange>& change);

    FailoverConfig cfg_;
    GuardStateKind state_ = GuardStateKind::Normal;
    GuardStateKind prev_functional_ = GuardStateKind::Normal;
    OfflineReason offline_reason_ = OfflineReason::None;
    Tick quiet_ticks_ = 0;
    bool compromised_ = false;
};

}  // namespace guard
