#include "guard/metrics.hpp"

#include <algorithm>
#include <map>

#include "guard/strutil.hpp"

namespace guard {

MetricsReport compute_metrics(const RunTranscript& transcript, const Scenario& scenario) {
    MetricsReport m;
    m.scenario = transcript.header.scenario_name;
    m.seed = transcript.header.seed;
    m.horizon = transcript.header.horizon;

    for (const AttackEvent& ev : scenario.attacks)
        m.attacks.push_back({ev.kind, ev.onset, ev.duration, ev.intensity, false, -1});

    // Rolling behavioral statistics keep reacting for up to a window length
    // after an attack ends, so both detection credit and false-positive
    // exclusion extend that far past the event.
    const Tick grace =
        scenario.fusion.window +
        std::max({scenario.detection.disagreement_window, scenario.detection.ensemble_window,
                  scenario.detection.meaning_window});
    auto attack_active_near = [&](Tick t) {
        for (const AttackEvent& ev : scenario.attacks)
            if (t >= ev.onset && t < ev.onset + ev.duration + grace) return true;
        return false;
    };

    std::vector<std::pair<Tick, int>> failover_entries;  // tick, matched shadow decision tick
    std::vector<Tick> shadow_decision_ticks;

    for (const BusEvent& ev : transcript.events) {
        if (const auto* r = std::get_if<DecisionRec>(&ev.payload)) {
            ++m.routed_decisions;
            if (r->degraded) ++m.degraded_decisions;
            const auto& model = scenario.models[static_cast<std::size_t>(r->source_model)];
            if (model.role == ModelRole::Shadow) shadow_decision_ticks.push_back(ev.tick);
        } else if (const auto* r = std::get_if<AlertRec>(&ev.payload)) {
            switch (r->alert.severity) {
                case Severity::Advisory: ++m.alerts_advisory; break;
                case Severity::Suspected: ++m.alerts_suspected; break;
                case Severity::Confirmed: ++m.alerts_confirmed; break;
            }
            if (r->alert.severity == Severity::Confirmed) {
                for (AttackOutcome& out : m.attacks) {
                    if (ev.tick >= out.onset && ev.tick < out.onset + out.duration + grace &&
                        r->alert.hypothesis.contains(out.kind) && !out.detected) {
                        out.detected = true;
                        out.latency = ev.tick - out.onset;
                    }
                }
                if (!attack_active_near(ev.tick)) ++m.false_positive_confirmed;
            }
        } else if (const auto* r = std::get_if<StateChangeRec>(&ev.payload)) {
            if (r->change.to == GuardStateKind::FailoverActive &&
                r->change.from != GuardStateKind::FailoverActive)
                failover_entries.push_back({ev.tick, -1});
        } else if (const auto* r = std::get_if<ComplianceRec>(&ev.payload)) {
            if (r->record.outcome == ComplianceOutcome::Violation) ++m.compliance_violations;
            if (r->record.outcome == ComplianceOutcome::Intervention) ++m.compliance_interventions;
        } else if (const auto* r = std::get_if<VerdictRec>(&ev.payload)) {
            if (r->verdict.fired)
                ++m.detector_fired[static_cast<std::size_t>(r->verdict.detector)];
        }
    }

    m.availability_pct = m.horizon > 0 ? 100.0 * static_cast<double>(m.routed_decisions) /
                                             static_cast<double>(m.horizon)
                                       : 0.0;

    for (const AttackOutcome& out : m.attacks)
        if (out.detected) ++m.attacks_detected;
    if (!m.attacks.empty()) {
        m.true_positive_rate =
            static_cast<double>(m.attacks_detected) / static_cast<double>(m.attacks.size());
        m.has_tpr = true;
    }

    m.failover_entries = static_cast<long>(failover_entries.size());
    double switch_total = 0.0;
    long switch_n = 0;
    for (auto& [entry_tick, matched] : failover_entries) {
        auto it = std::lower_bound(shadow_decision_ticks.begin(), shadow_decision_ticks.end(),
                                   entry_tick);
        if (it != shadow_decision_ticks.end()) {
            switch_total += static_cast<double>(*it - entry_tick);
            ++switch_n;
        }
        (void)matched;
    }
    if (switch_n > 0) {
        m.mean_switchover_ticks = switch_total / static_cast<double>(switch_n);
        m.has_switchover = true;
    }
    return m;
}

std::string render_metrics(const MetricsReport& m) {
    std::string out = "guardsim-metrics v1\n";
    auto line = [&](std::string_view key, const std::string& value) {
        out += key;
        out += '=';
        out += value;
        out += '\n';
    };
    line("scenario", m.scenario);
    line("seed", canon_u64(m.seed));
    line("horizon", canon_i64(m.horizon));
    line("routed_decisions", canon_i64(m.routed_decisions));
    line("degraded_decisions", canon_i64(m.degraded_decisions));
    line("availability_pct", canon_double(m.availability_pct));
    line("attacks_total", canon_i64(static_cast<long>(m.attacks.size())));
    line("attacks_detected", canon_i64(m.attacks_detected));
    line("true_positive_rate", m.has_tpr ? canon_double(m.true_positive_rate) : "na");
    line("false_positive_confirmed", canon_i64(m.false_positive_confirmed));
    line("failover_entries", canon_i64(m.failover_entries));
    line("mean_switchover_ticks", m.has_switchover ? canon_double(m.mean_switchover_ticks) : "na");
    line("compliance_violations", canon_i64(m.compliance_violations));
    line("compliance_interventions", canon_i64(m.compliance_interventions));
    line("alerts_advisory", canon_i64(m.alerts_advisory));
    line("alerts_suspected", canon_i64(m.alerts_suspected));
    line("alerts_confirmed", canon_i64(m.alerts_confirmed));
    for (const AttackOutcome& a : m.attacks) {
        out += "attack kind=" + std::string(to_string(a.kind)) + " onset=" + canon_i64(a.onset) +
               " duration=" + canon_i64(a.duration) + " intensity=" + canon_double(a.intensity) +
               " detected=" + (a.detected ? "1" : "0") +
               " latency=" + (a.detected ? canon_i64(a.latency) : "na") + "\n";
    }
    for (int d = 0; d < kDetectorCount; ++d) {
        out += "detector id=" + std::string(to_string(static_cast<DetectorId>(d))) +
               " fired=" + canon_i64(m.detector_fired[static_cast<std::size_t>(d)]) + "\n";
    }
    return out;
}

std::string render_audit(const RunTranscript& transcript) {
    std::string out = "guardsim-audit v1\n";
    out += "scenario=" + transcript.header.scenario_name + " seed=" + canon_u64(transcript.header.seed) +
           " horizon=" + canon_i64(transcript.header.horizon) + "\n";

    std::map<std::string, long> violations_by_profile;
    for (const BusEvent& ev : transcript.events) {
        if (const auto* r = std::get_if<DecisionRec>(&ev.payload)) {
            out += "decision tick=" + canon_i64(ev.tick) + " model=" + canon_i64(r->source_model) +
                   " label=" + canon_i64(r->decision.emitted_label) +
                   " conf=" + canon_double(r->decision.confidence) +
                   " degraded=" + (r->degraded ? "1" : "0") + "\n";
        } else if (const auto* r = std::get_if<ComplianceRec>(&ev.payload)) {
            const ComplianceRecord& rec = r->record;
            out += "compliance tick=" + canon_i64(ev.tick) + " profile=" + rec.profile +
                   " rule=" + std::string(to_string(rec.rule)) +
                   " outcome=" + std::string(to_string(rec.outcome)) +
                   " subject=" + (rec.subject.empty() ? "-" : rec.subject) + "\n";
            if (rec.outcome == ComplianceOutcome::Violation) ++violations_by_profile[rec.profile];
        }
    }
    out += "totals\n";
    for (const auto& [profile, count] : violations_by_profile)
        out += "violations profile=" + profile + " count=" + canon_i64(count) + "\n";
    return out;
}

}  // namespace guard
