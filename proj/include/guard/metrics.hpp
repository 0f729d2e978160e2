#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "guard/scenario.hpp"
#include "guard/transcript.hpp"

namespace guard {

struct AttackOutcome {
    AttackKind kind = AttackKind::DDoSFlood;
    Tick onset = 0;
    Tick duration = 0;
    double intensity = 0.0;
    bool detected = false;
    Tick latency = -1;  // first correct Confirmed tick minus onset; -1 = miss
};

struct MetricsReport {
    std::string scenario;
    std::uint64_t seed = 0;
    Tick horizon = 0;

    long routed_decisions = 0;
    long degraded_decisions = 0;
    double availability_pct = 0.0;

    std::vector<AttackOutcome> attacks;
    long attacks_detected = 0;
    double true_positive_rate = 0.0;  // meaningful only when attacks exist
    bool has_tpr = false;

    /// Confirmed alerts on ticks with no attack active anywhere in the
    /// fusion window behind them.
    long false_positive_confirmed = 0;

    long failover_entries = 0;
    double mean_switchover_ticks = 0.0;
    bool has_switchover = false;

    long compliance_violations = 0;
    long compliance_interventions = 0;

    long alerts_advisory = 0;
    long alerts_suspected = 0;
    long alerts_confirmed = 0;

    std::array<long, kDetectorCount> detector_fired{};
};

/// Pure function of (transcript, scenario): `report` recomputing from a
/// saved transcript reproduces `run`'s metrics byte for byte.
MetricsReport compute_metrics(const RunTranscript& transcript, const Scenario& scenario);

std::string render_metrics(const MetricsReport& m);

/// Audit file: jurisdiction activity, every routed decision, every
/// compliance record, and per-profile violation totals, ordered by tick.
std::string render_audit(const RunTranscript& transcript);

}  // namespace guard
