#include <doctest.h>

#include "guard/failover.hpp"

using namespace guard;

namespace {

FailoverConfig quick_config(Tick q = 3) {
    FailoverConfig cfg;
    cfg.quiet_period = q;
    cfg.shadow_priority = {1, 2};
    return cfg;
}

std::vector<ModelSpec> roster() {
    return {{"primary", ModelRole::Primary, ModelMode::Active, 1.0, {}, 0.0},
            {"shadow-1", ModelRole::Shadow, ModelMode::Active, 0.9, {}, 0.0},
            {"shadow-2", ModelRole::Shadow, ModelMode::Passive, 0.9, {}, 0.0}};
}

SystemThreatLevel none() { return {ThreatKind::None, {}}; }
SystemThreatLevel suspect() { return {ThreatKind::Suspect, {AttackKind::DDoSFlood}}; }
SystemThreatLevel confirmed(AttackClassSet hyp) { return {ThreatKind::Confirmed, hyp}; }

std::vector<Decision> decisions_for(const std::vector<ModelSpec>& models) {
    std::vector<Decision> out;
    for (std::size_t i = 0; i < models.size(); ++i) {
        Decision d;
        d.model = static_cast<int>(i);
        d.emitted_label = static_cast<int>(i);
        out.push_back(d);
    }
    return out;
}

}  // namespace

TEST_CASE("identity row: normal stays normal under no threat") {
    FailoverMachine fsm(quick_config());
    for (Tick t = 0; t < 10; ++t) CHECK_FALSE(fsm.transition(none(), false, t).has_value());
    CHECK(fsm.state() == GuardStateKind::Normal);
}

TEST_CASE("confirmed threat activates failover and routes the first active shadow") {
    FailoverMachine fsm(quick_config());
    const auto models = roster();
    const auto change = fsm.transition(confirmed({AttackKind::DDoSFlood}), false, 4);
    REQUIRE(change.has_value());
    CHECK(change->from == GuardStateKind::Normal);
    CHECK(change->to == GuardStateKind::FailoverActive);
    const auto routed = fsm.route_decision(decisions_for(models), models);
    CHECK(routed.source_model == 1);
    CHECK_FALSE(routed.degraded);
}

TEST_CASE("quiet periods walk failover back to normal through recovery") {
    FailoverMachine fsm(quick_config(3));
    const auto models = roster();
    fsm.transition(confirmed({AttackKind::DataPoisoning}), false, 0);
    CHECK(fsm.state() == GuardStateKind::FailoverActive);
    CHECK(fsm.primary_compromised());

    Tick t = 1;
    std::vector<GuardStateKind> seen;
    for (; t < 12; ++t) {
        if (auto c = fsm.transition(none(), false, t)) seen.push_back(c->to);
    }
    REQUIRE(seen.size() == 2);
    CHECK(seen[0] == GuardStateKind::Recovery);
    CHECK(seen[1] == GuardStateKind::Normal);
    CHECK_FALSE(fsm.primary_compromised());
    CHECK(fsm.route_decision(decisions_for(models), models).source_model == 0);
}

TEST_CASE("recovery falls straight back to failover on any firing") {
    FailoverMachine fsm(quick_config(2));
    fsm.transition(confirmed({AttackKind::DDoSFlood}), false, 0);
    fsm.transition(none(), false, 1);
    fsm.transition(none(), false, 2);
    CHECK(fsm.state() == GuardStateKind::Recovery);
    const auto change = fsm.transition(suspect(), false, 3);
    REQUIRE(change.has_value());
    CHECK(change->to == GuardStateKind::FailoverActive);
}

TEST_CASE("suspect is entered and cleared by the threat level") {
    FailoverMachine fsm(quick_config());
    CHECK(fsm.transition(suspect(), false, 0)->to == GuardStateKind::Suspect);
    CHECK(fsm.transition(suspect(), false, 1) == std::nullopt);
    CHECK(fsm.transition(none(), false, 2)->to == GuardStateKind::Normal);
}

TEST_CASE("an observed outage enters offline-local and restores the prior state") {
    FailoverMachine fsm(quick_config());
    const auto models = roster();
    fsm.transition(suspect(), false, 0);
    const auto change = fsm.transition(none(), true, 1);
    REQUIRE(change.has_value());
    CHECK(change->to == GuardStateKind::OfflineLocal);
    // Uncompromised primary keeps serving while offline.
    CHECK(fsm.route_decision(decisions_for(models), models).source_model == 0);
    for (Tick t = 2; t < 5; ++t) CHECK_FALSE(fsm.transition(none(), true, t).has_value());
    const auto back = fsm.transition(none(), false, 5);
    REQUIRE(back.has_value());
    CHECK(back->from == GuardStateKind::OfflineLocal);
    CHECK(back->to == GuardStateKind::Suspect);
}

TEST_CASE("offline with a compromised primary routes the shadow") {
    FailoverMachine fsm(quick_config());
    const auto models = roster();
    fsm.transition(confirmed({AttackKind::VoltageGlitch}), false, 0);
    CHECK(fsm.primary_compromised());
    fsm.transition(none(), true, 1);
    CHECK(fsm.state() == GuardStateKind::OfflineLocal);
    CHECK(fsm.route_decision(decisions_for(models), models).source_model == 1);
}

TEST_CASE("transition is total over states and threat levels") {
    for (int threat_kind = 0; threat_kind < 4; ++threat_kind) {
        for (int outage = 0; outage < 2; ++outage) {
            // Drive a machine into each reachable state, then apply the row.
            for (int target_state = 0; target_state < 5; ++target_state) {
                FailoverMachine fsm(quick_config(2));
                Tick t = 0;
                switch (static_cast<GuardStateKind>(target_state)) {
                    case GuardStateKind::Normal: break;
                    case GuardStateKind::Suspect: fsm.transition(suspect(), false, t++); break;
                    case GuardStateKind::FailoverActive:
                        fsm.transition(confirmed({AttackKind::DDoSFlood}), false, t++);
                        break;
                    case GuardStateKind::OfflineLocal: fsm.transition(none(), true, t++); break;
                    case GuardStateKind::Recovery:
                        fsm.transition(confirmed({AttackKind::DDoSFlood}), false, t++);
                        fsm.transition(none(), false, t++);
                        fsm.transition(none(), false, t++);
                        break;
                }
                SystemThreatLevel threat;
                threat.kind = static_cast<ThreatKind>(threat_kind);
                if (threat.kind == ThreatKind::Confirmed)
                    threat.hypothesis = {AttackKind::DDoSFlood};
                // Must never throw and must land in a defined state.
                CHECK_NOTHROW(fsm.transition(threat, outage == 1, t));
                const auto s = fsm.state();
                CHECK((s == GuardStateKind::Normal || s == GuardStateKind::Suspect ||
                       s == GuardStateKind::FailoverActive || s == GuardStateKind::OfflineLocal ||
                       s == GuardStateKind::Recovery));
            }
        }
    }
}

TEST_CASE("failover without any active shadow degrades to the primary") {
    FailoverConfig cfg;
    cfg.quiet_period = 3;
    cfg.shadow_priority = {};  // nothing configured
    FailoverMachine fsm(cfg);
    std::vector<ModelSpec> models{{"primary", ModelRole::Primary, ModelMode::Active, 1.0, {}, 0.0}};
    fsm.transition(confirmed({AttackKind::DataPoisoning}), false, 0);
    std::vector<Decision> ds{Decision{}};
    const auto routed = fsm.route_decision(ds, models);
    CHECK(routed.source_model == 0);
    CHECK(routed.degraded);
}

TEST_CASE("priority list skips missing or passive shadows") {
    FailoverConfig cfg;
    cfg.quiet_period = 3;
    cfg.shadow_priority = {2, 1};  // first entry is passive: falls through to 1
    FailoverMachine fsm(cfg);
    const auto models = roster();
    fsm.transition(confirmed({AttackKind::DataPoisoning}), false, 0);
    CHECK(fsm.route_decision(decisions_for(models), models).source_model == 1);
}

TEST_CASE("remediation switches away from a spoofed active bank") {
    FailoverMachine fsm(quick_config());
    SensorSuite sensors;  // active bank A
    std::vector<StateChange> changes;
    fsm.transition(confirmed({AttackKind::Spoofing}), false, 0);
    const auto actions =
        fsm.remediate(confirmed({AttackKind::Spoofing}), SensorBank::A, sensors, 0, changes);
    CHECK(actions.switched_bank);
    CHECK(actions.bank_switched_to == SensorBank::B);
    CHECK(sensors.active_bank() == SensorBank::B);

    // Spoofing the passive bank needs no switch.
    const auto again =
        fsm.remediate(confirmed({AttackKind::Spoofing}), SensorBank::A, sensors, 1, changes);
    CHECK_FALSE(again.switched_bank);
}

TEST_CASE("network-attack remediation isolates and keeps serving locally") {
    FailoverMachine fsm(quick_config(2));
    SensorSuite sensors;
    std::vector<StateChange> changes;
    fsm.transition(confirmed({AttackKind::DDoSFlood}), false, 0);
    const auto actions =
        fsm.remediate(confirmed({AttackKind::DDoSFlood}), std::nullopt, sensors, 0, changes);
    CHECK(actions.isolated_network);
    CHECK(fsm.state() == GuardStateKind::OfflineLocal);
    CHECK(fsm.network_isolated());
    REQUIRE(changes.size() == 1);
    CHECK(changes[0].to == GuardStateKind::OfflineLocal);

    // Isolation lifts after a full quiet period and restores the prior state.
    fsm.transition(none(), false, 1);
    const auto back = fsm.transition(none(), false, 2);
    REQUIRE(back.has_value());
    CHECK(back->to == GuardStateKind::FailoverActive);
    CHECK_FALSE(fsm.network_isolated());
}

TEST_CASE("empty hypothesis sets trigger no remediation") {
    FailoverMachine fsm(quick_config());
    SensorSuite sensors;
    std::vector<StateChange> changes;
    const auto actions = fsm.remediate(confirmed({}), std::nullopt, sensors, 0, changes);
    CHECK_FALSE(actions.switched_bank);
    CHECK_FALSE(actions.isolated_network);
    CHECK_FALSE(actions.shadow_route_requested);
    CHECK(changes.empty());
}

TEST_CASE("hysteresis bounds flapping under an intermittent threat") {
    FailoverMachine fsm(quick_config(5));
    int failover_entries = 0;
    // Threat fires every third tick for a while: quiet runs never reach Q,
    // so the machine must not leave FailoverActive between bursts.
    for (Tick t = 0; t < 60; ++t) {
        const bool firing = t % 3 == 0 && t < 45;
        const auto change = fsm.transition(
            firing ? confirmed({AttackKind::VoltageGlitch}) : none(), false, t);
        if (change && change->to == GuardStateKind::FailoverActive) ++failover_entries;
    }
    CHECK(failover_entries == 1);
}
