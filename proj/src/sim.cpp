#include "guard/sim.hpp"

#include <optional>

#include "guard/attacks.hpp"
#include "guard/errors.hpp"
#include "guard/metrics.hpp"
#include "guard/strutil.hpp"

namespace guard {

namespace {

struct AgentSet {
    MonitoringAgent hardware;
    MonitoringAgent behavioral;
    MonitoringAgent shadow_processing;

    explicit AgentSet(const FusionPolicy& policy)
        : hardware(AgentId::Hardware, policy),
          behavioral(AgentId::Behavioral, policy),
          shadow_processing(AgentId::ShadowProcessing, policy) {}

    MonitoringAgent* by_id(AgentId id) {
        switch (id) {
            case AgentId::Hardware: return &hardware;
            case AgentId::Behavioral: return &behavioral;
            case AgentId::ShadowProcessing: return &shadow_processing;
            default: return nullptr;
        }
    }
};

}  // namespace

RunOutput run_full(const Scenario& scenario, const SimConfig& config, std::uint64_t seed,
                   const SignatureStore* initial_signatures) {
    if (scenario.horizon < 1) throw ValidationError("horizon: empty run (horizon must be >= 1)");

    RunTranscript transcript;
    transcript.header.scenario_name = scenario.name;
    transcript.header.seed = seed;
    transcript.header.horizon = scenario.horizon;
    transcript.header.scenario_json = canonical_json(scenario);

    const RngStream root(seed);
    Rng rng_workload = root.substream("workload");
    Rng rng_sensors = root.substream("sensors");
    Rng rng_attacks = root.substream("attacks");
    std::vector<Rng> rng_models;
    rng_models.reserve(scenario.models.size());
    for (const ModelSpec& m : scenario.models)
        rng_models.push_back(root.substream("model/" + m.id));

    SensorSuite sensors(scenario.sensors, scenario.initial_bank);
    const SigmaModel sigma = SigmaModel::build(scenario.grid, scenario.workload, scenario.sensors);
    const AttackTimeline timeline(scenario.attacks);
    DetectorBank detectors(scenario.grid, scenario.sensors, scenario.detection,
                           scenario.workload.meaning_class_count());
    AgentSet agents(scenario.fusion);
    FailoverMachine failover(scenario.failover);
    RegulatoryAgent regulatory(scenario.jurisdictions.profiles, scenario.jurisdictions.initial);
    SignatureStore signatures = initial_signatures ? *initial_signatures : SignatureStore{};
    std::vector<bool> signature_learned(scenario.attacks.size(), false);
    EventBus bus(config.topic_delays);

    const int primary = scenario.primary_index();
    const auto shadow_idx = scenario.shadow_indices();
    const int label_space = scenario.workload.label_space;
    const int meaning_classes = scenario.workload.meaning_class_count();

    // Advisory alerts raised by the actuator agents (degraded routing,
    // regulatory interventions) after the alert stage enter the alert stream
    // on the following tick, keeping intra-tick stage order strict.
    std::vector<Alert> pending_advisories;

    std::vector<Decision> decisions(scenario.models.size());
    std::vector<Decision> shadow_decisions;
    std::size_t next_jurisdiction_change = 0;

    for (Tick tick = 0; tick < scenario.horizon; ++tick) {
        bus.begin_tick(tick);

        // Stage 1: workload.
        const InputBatch batch = generate_workload(scenario.workload, tick, rng_workload);

        // Stage 2: attack mutation.
        const auto active = timeline.active_at(tick);
        const TickEffects fx =
            apply_attacks(tick, active, scenario.grid, sigma, scenario.models, rng_attacks);

        NetworkSample net = batch.network;
        net.packets *= fx.packets_multiplier;
        net.identities += fx.extra_identities;
        if (fx.outage)
            net.status = NetworkStatus::Outage;
        else if (failover.network_isolated())
            net.status = NetworkStatus::Isolated;
        if (net.status != NetworkStatus::Up) {
            net.packets = 0.0;
            net.identities = 0.0;
            net.telemetry_uplink = false;
        }

        // Stage 3: telemetry sampling.
        const bool sampling_tick = tick % config.telemetry_every_n_ticks == 0;
        std::optional<TelemetryFrame> frame;
        if (sampling_tick) {
            frame = sample_telemetry(scenario.grid, batch, fx.telemetry, sensors, tick,
                                     rng_sensors);
            bus.publish({tick, Topic::Telemetry, 0, TelemetryRec{*frame, sensors.active_bank()}});
        }
        bus.publish({tick, Topic::Network, 0, NetworkRec{net}});

        // Stage 4: primary and shadow inference.
        for (std::size_t i = 0; i < scenario.models.size(); ++i)
            decisions[i] = infer(scenario.models[i], static_cast<int>(i), batch.decision_item,
                                 fx.per_model[i], label_space, meaning_classes, tick,
                                 rng_models[i]);
        shadow_decisions.clear();
        for (int i : shadow_idx) shadow_decisions.push_back(decisions[static_cast<std::size_t>(i)]);

        // Stage 5: detectors.
        DetectorInputs din;
        din.frame = frame ? &*frame : nullptr;
        din.network = &net;
        din.primary = &decisions[static_cast<std::size_t>(primary)];
        din.shadows = shadow_decisions;
        din.active_bank = sensors.active_bank();
        din.freeze_all = failover.state() != GuardStateKind::Normal;
        const std::vector<DetectorVerdict> verdicts = detectors.step(tick, din);
        for (const DetectorVerdict& v : verdicts)
            if (config.log_all_verdicts || v.fired)
                bus.publish({tick, Topic::Verdict, 0, VerdictRec{v}});

        // Stage 6: monitoring agents, in fixed order.
        std::vector<DetectorVerdict> fired_hw, fired_bh, fired_sp;
        for (const DetectorVerdict& v : verdicts) {
            if (!v.fired) continue;
            AgentId owner = default_owner(v.detector);
            if (auto it = scenario.routing.find(v.detector); it != scenario.routing.end())
                owner = it->second;
            if (owner == AgentId::Hardware)
                fired_hw.push_back(v);
            else if (owner == AgentId::Behavioral)
                fired_bh.push_back(v);
            else if (owner == AgentId::ShadowProcessing)
                fired_sp.push_back(v);
        }

        std::vector<Alert> alerts;
        if (auto a = agents.hardware.step(tick, fired_hw)) alerts.push_back(std::move(*a));
        if (auto a = agents.behavioral.step(tick, fired_bh)) alerts.push_back(std::move(*a));
        if (auto a = agents.shadow_processing.step(tick, fired_sp)) {
            if (!signatures.empty()) {
                std::vector<DetectorVerdict> fired_all = fired_hw;
                fired_all.insert(fired_all.end(), fired_bh.begin(), fired_bh.end());
                fired_all.insert(fired_all.end(), fired_sp.begin(), fired_sp.end());
                auto [cls, score] =
                    signatures.match(SignatureStore::features_of(fired_all, &scenario.grid));
                if (cls)
                    a->note = "match:" + std::string(to_string(*cls)) + ":" + canon_double(score);
            }
            alerts.push_back(std::move(*a));
        }
        for (Alert& adv : pending_advisories) {
            adv.tick = tick;
            alerts.push_back(std::move(adv));
        }
        pending_advisories.clear();
        for (const Alert& a : alerts) bus.publish({tick, Topic::Alert, 0, AlertRec{a}});

        // Stage 7: fusion.
        const SystemThreatLevel threat = fuse(alerts, scenario.fusion);

        // Stage 8: failover transition and remediation.
        const bool outage_observed = net.status == NetworkStatus::Outage;
        std::vector<StateChange> changes;
        if (auto change = failover.transition(threat, outage_observed, tick))
            changes.push_back(*change);

        std::optional<SensorBank> suspect_bank;
        for (const Alert& a : alerts)
            if (a.suspect_bank && a.severity == Severity::Confirmed) {
                suspect_bank = a.suspect_bank;
                break;
            }
        const auto actions = failover.remediate(threat, suspect_bank, sensors, tick, changes);
        if (actions.switched_bank) {
            StateChange bank_change;
            bank_change.tick = tick;
            bank_change.from = failover.state();
            bank_change.to = failover.state();
            bank_change.reason =
                "switch_bank:" + std::string(to_string(actions.bank_switched_to));
            changes.push_back(bank_change);
        }
        const auto [route_model, route_degraded] = failover.route_index(scenario.models);
        for (const StateChange& change : changes)
            bus.publish({tick, Topic::StateChange, 0,
                         StateChangeRec{change, sensors.active_bank(), route_model}});

        // Decision routing: the system output for this tick.
        const RoutedDecision routed = failover.route_decision(decisions, scenario.models);
        bus.publish({tick, Topic::Decision, 0,
                     DecisionRec{routed.decision, routed.source_model, routed.degraded}});
        detectors.observe_routed(routed.decision);
        if (routed.degraded) {
            Alert adv;
            adv.agent = AgentId::Failover;
            adv.severity = Severity::Advisory;
            adv.evidence.push_back(
                {tick, DetectorId::CrossVerify,
                 ChannelId{ChannelId::Kind::Disagreement, SensorBank::A, 0}});
            adv.note = "degraded_route:no_active_shadow";
            pending_advisories.push_back(std::move(adv));
        }
        (void)route_degraded;

        // Stage 9: regulatory checks under the jurisdiction active this tick.
        while (next_jurisdiction_change < scenario.jurisdictions.changes.size() &&
               scenario.jurisdictions.changes[next_jurisdiction_change].tick == tick) {
            const auto& change = scenario.jurisdictions.changes[next_jurisdiction_change];
            const ComplianceRecord rec = regulatory.handle_jurisdiction_change(tick, change.profile);
            bus.publish({tick, Topic::Compliance, 0, ComplianceRec{rec}});
            ++next_jurisdiction_change;
        }
        const ComplianceResult compliance =
            regulatory.check_decision(routed.decision, routed.degraded, net.telemetry_uplink, tick);
        for (const ComplianceRecord& rec : compliance.records)
            bus.publish({tick, Topic::Compliance, 0, ComplianceRec{rec}});
        if (compliance.intervention) {
            Alert adv;
            adv.agent = AgentId::Regulatory;
            adv.severity = Severity::Advisory;
            adv.evidence.push_back(
                {tick, DetectorId::SemanticEntropy,
                 ChannelId{ChannelId::Kind::MeaningEntropy, SensorBank::A, 0}});
            adv.note = "intervention:low_conf_streak";
            pending_advisories.push_back(std::move(adv));
        }

        // Attack-pattern learning from confirmed incidents, labeled post hoc
        // from scenario ground truth.
        if (threat.kind == ThreatKind::Confirmed) {
            std::vector<DetectorVerdict> fired_all = fired_hw;
            fired_all.insert(fired_all.end(), fired_bh.begin(), fired_bh.end());
            fired_all.insert(fired_all.end(), fired_sp.begin(), fired_sp.end());
            for (const AttackEvent* ev : active) {
                const std::size_t pos = static_cast<std::size_t>(ev - scenario.attacks.data());
                if (signature_learned[pos] || !threat.hypothesis.contains(ev->kind)) continue;
                signatures.learn(ev->kind, SignatureStore::features_of(fired_all, &scenario.grid));
                signature_learned[pos] = true;
            }
        }

        // Stage 10: logging, in canonical order.
        for (BusEvent& ev : bus.ordered_tick_events()) transcript.events.push_back(std::move(ev));
    }

    const MetricsReport metrics = compute_metrics(transcript, scenario);
    transcript.metrics_text = render_metrics(metrics);
    return {std::move(transcript), std::move(signatures)};
}

}  // namespace guard
