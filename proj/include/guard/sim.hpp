#pragma once

#include <cstdint>
#include <map>

#include "guard/scenario.hpp"
#include "guard/transcript.hpp"

namespace guard {

/// Runtime knobs; defaults come from the scenario file.
struct SimConfig {
    int telemetry_every_n_ticks = 1;
    bool log_all_verdicts = true;
    std::map<Topic, Tick> topic_delays;

    static SimConfig from_scenario(const Scenario& s) {
        SimConfig c;
        c.telemetry_every_n_ticks = s.telemetry_every_n_ticks;
        c.log_all_verdicts = s.log_all_verdicts;
        c.topic_delays = s.topic_delays;
        return c;
    }
};

struct RunOutput {
    RunTranscript transcript;
    SignatureStore signatures;
};

/// One deterministic run. Per-tick stage order: workload, attack mutation,
/// telemetry sampling, inference, detectors, agents, fusion, failover
/// transition and remediation, decision routing, regulatory checks, logging.
/// The returned transcript carries the canonical scenario echo and the final
/// metrics text. `initial_signatures` preloads the attack-pattern store (the
/// cloud-sync import stub).
RunOutput run_full(const Scenario& scenario, const SimConfig& config, std::uint64_t seed,
                   const SignatureStore* initial_signatures = nullptr);

inline RunTranscript run(const Scenario& scenario, const SimConfig& config, std::uint64_t seed) {
    return run_full(scenario, config, seed).transcript;
}

inline RunTranscript run(const Scenario& scenario, std::uint64_t seed) {
    return run(scenario, SimConfig::from_scenario(scenario), seed);
}

}  // namespace guard
