#include "guard/failover.hpp"

#include "guard/errors.hpp"

namespace guard {

std::string_view to_string(GuardStateKind s) {
    switch (s) {
        case GuardStateKind::Normal: return "normal";
        case GuardStateKind::Suspect: return "suspect";
        case GuardStateKind::FailoverActive: return "failover_active";
        case GuardStateKind::OfflineLocal: return "offline_local";
        case GuardStateKind::Recovery: return "recovery";
    }
    return "?";
}

GuardStateKind guard_state_from_string(std::string_view s) {
    if (s == "normal") return GuardStateKind::Normal;
    if (s == "suspect") return GuardStateKind::Suspect;
    if (s == "failover_active") return GuardStateKind::FailoverActive;
    if (s == "offline_local") return GuardStateKind::OfflineLocal;
    if (s == "recovery") return GuardStateKind::Recovery;
    throw ValidationError("unknown guard state: '" + std::string(s) + "'");
}

AttackClassSet model_targeting_kinds() {
    return {AttackKind::AdversarialPerturbation, AttackKind::DataPoisoning,
            AttackKind::VoltageGlitch, AttackKind::TrojanTrigger};
}

AttackClassSet network_attack_kinds() {
    return {AttackKind::DDoSFlood, AttackKind::Sybil};
}

std::optional<StateChange> FailoverMachine::enter(GuardStateKind to, Tick tick,
                                                  const std::string& reason) {
    if (to == state_) return std::nullopt;
    StateChange change{tick, state_, to, reason};
    state_ = to;
    quiet_ticks_ = 0;
    return change;
}

void FailoverMachine::apply_threat_row(const SystemThreatLevel& threat, Tick tick,
                                       std::optional<StateChange>& change) {
    const bool firing = threat.kind == ThreatKind::Suspect || threat.kind == ThreatKind::Confirmed;
    if (threat.kind == ThreatKind::Confirmed && threat.hypothesis.intersects(model_targeting_kinds()))
        compromised_ = true;

    switch (state_) {
        case GuardStateKind::Normal:
            if (threat.kind == ThreatKind::Suspect)
                change = enter(GuardStateKind::Suspect, tick, "threat_suspected");
            else if (threat.kind == ThreatKind::Confirmed)
                change = enter(GuardStateKind::FailoverActive,
                               tick, "confirmed:" + threat.hypothesis.to_string());
            break;
        case GuardStateKind::Suspect:
            if (threat.kind == ThreatKind::None)
                change = enter(GuardStateKind::Normal, tick, "suspicion_cleared");
            else if (threat.kind == ThreatKind::Confirmed)
                change = enter(GuardStateKind::FailoverActive,
                               tick, "confirmed:" + threat.hypothesis.to_string());
            break;
        case GuardStateKind::FailoverActive:
            if (firing) {
                quiet_ticks_ = 0;
            } else if (++quiet_ticks_ >= cfg_.quiet_period) {
                change = enter(GuardStateKind::Recovery, tick, "quiet_period_elapsed");
            }
            break;
        case GuardStateKind::Recovery:
            if (firing) {
                change = enter(GuardStateKind::FailoverActive, tick, "firing_during_recovery");
            } else if (++quiet_ticks_ >= cfg_.quiet_period) {
                change = enter(GuardStateKind::Normal, tick, "recovery_complete");
                compromised_ = false;
            }
            break;
        case GuardStateKind::OfflineLocal:
            break;  // handled by the caller
    }
}

std::optional<StateChange> FailoverMachine::transition(const SystemThreatLevel& threat,
                                                       bool outage_observed, Tick tick) {
    std::optional<StateChange> change;

    if (state_ == GuardStateKind::OfflineLocal) {
        if (outage_observed) {
            offline_reason_ = OfflineReason::OutageObserved;
            quiet_ticks_ = 0;
            if (threat.kind == ThreatKind::Confirmed &&
                threat.hypothesis.intersects(model_targeting_kinds()))
                compromised_ = true;
            return std::nullopt;
        }
        if (offline_reason_ == OfflineReason::OutageObserved) {
            // Network restored: return to the previous functional state.
            // The current threat level acts on it from the next tick (one
            // transition per tick).
            change = enter(prev_functional_, tick, "network_restored");
            offline_reason_ = OfflineReason::None;
            return change;
        }
        // Voluntary isolation ends after a full quiet period.
        if (threat.kind == ThreatKind::None || threat.kind == ThreatKind::NetworkDown) {
            if (++quiet_ticks_ >= cfg_.quiet_period) {
                change = enter(prev_functional_, tick, "isolation_lifted");
                offline_reason_ = OfflineReason::None;
            }
        } else {
            quiet_ticks_ = 0;
            if (threat.kind == ThreatKind::Confirmed &&
                threat.hypothesis.intersects(model_targeting_kinds()))
                compromised_ = true;
        }
        return change;
    }

    if (threat.kind == ThreatKind::NetworkDown || outage_observed) {
        prev_functional_ = state_;
        offline_reason_ = OfflineReason::OutageObserved;
        return enter(GuardStateKind::OfflineLocal, tick, "network_outage_observed");
    }

    apply_threat_row(threat, tick, change);
    return change;
}

FailoverMachine::Actions FailoverMachine::remediate(const SystemThreatLevel& threat,
                                                    std::optional<SensorBank> suspect_bank,
                                                    SensorSuite& sensors, Tick tick,
                                                    std::vector<StateChange>& changes) {
    Actions actions;
    if (threat.kind != ThreatKind::Confirmed || threat.hypothesis.empty()) return actions;

    if (threat.hypothesis.contains(AttackKind::Spoofing) && suspect_bank &&
        *suspect_bank == sensors.active_bank()) {
        const SensorBank clean = other_bank(*suspect_bank);
        if (sensors.switch_bank(clean)) {
            actions.switched_bank = true;
            actions.bank_switched_to = clean;
        }
    }

    if (threat.hypothesis.intersects(model_targeting_kinds())) {
        compromised_ = true;
        actions.shadow_route_requested = true;
    }

    if (threat.hypothesis.intersects(network_attack_kinds()) &&
        state_ != GuardStateKind::OfflineLocal) {
        prev_functional_ = state_;
        if (auto change = enter(GuardStateKind::OfflineLocal, tick,
                                "isolate_network:" + threat.hypothesis.to_string())) {
            offline_reason_ = OfflineReason::Isolated;
            changes.push_back(*change);
            actions.isolated_network = true;
        }
    }
    return actions;
}

std::pair<int, bool> FailoverMachine::route_index(const std::vector<ModelSpec>& models) const {
    int primary_index = 0;
    for (std::size_t i = 0; i < models.size(); ++i)
        if (models[i].role == ModelRole::Primary) primary_index = static_cast<int>(i);

    const bool want_shadow =
        state_ == GuardStateKind::FailoverActive ||
        (state_ == GuardStateKind::OfflineLocal && compromised_);
    if (!want_shadow) return {primary_index, false};

    for (int idx : cfg_.shadow_priority) {
        if (idx < 0 || idx >= static_cast<int>(models.size())) continue;
        const ModelSpec& m = models[static_cast<std::size_t>(idx)];
        if (m.role != ModelRole::Shadow || m.mode != ModelMode::Active) continue;
        return {idx, false};
    }
    // No routable shadow: serve the primary, flagged.
    return {primary_index, true};
}

RoutedDecision FailoverMachine::route_decision(std::span<const Decision> decisions,
                                               const std::vector<ModelSpec>& models) const {
    const auto [idx, degraded] = route_index(models);
    RoutedDecision routed;
    routed.decision = decisions[static_cast<std::size_t>(idx)];
    routed.source_model = idx;
    routed.degraded = degraded;
    return routed;
}

}  // namespace guard
