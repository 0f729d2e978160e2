#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "guard/attacks.hpp"
#include "guard/bus.hpp"
#include "guard/detectors.hpp"
#include "guard/failover.hpp"
#include "guard/models.hpp"
#include "guard/regulatory.hpp"
#include "guard/sensors.hpp"
#include "guard/tile_grid.hpp"
#include "guard/workload.hpp"

namespace guard {

struct JurisdictionChange {
    Tick tick = 0;
    std::string profile;
};

struct JurisdictionSchedule {
    std::vector<JurisdictionProfile> profiles;
    std::string initial;
    std::vector<JurisdictionChange> changes;  // sorted by tick
};

/// Everything a run needs, loaded from a versioned scenario file. A Scenario
/// that came out of load_scenario/scenario_from_json has passed full
/// cross-validation (model references resolved, targets on the grid, onsets
/// within the horizon).
struct Scenario {
    int schema_version = 1;
    std::string name = "unnamed";
    Tick horizon = 0;

    TileGrid grid;
    SensorConfig sensors;
    SensorBank initial_bank = SensorBank::A;
    WorkloadProfile workload;
    std::vector<ModelSpec> models;
    std::vector<AttackEvent> attacks;
    JurisdictionSchedule jurisdictions;

    DetectorConfig detection;
    FusionPolicy fusion;
    RoutingTable routing = default_routing();
    FailoverConfig failover;
    std::map<Topic, Tick> topic_delays;
    int telemetry_every_n_ticks = 1;
    bool log_all_verdicts = true;

    std::string metadata_json = "{}";  // echoed untouched

    int primary_index() const;
    std::vector<int> shadow_indices() const;
};

/// A minimal valid scenario: one comm+vision grid, perfect primary, one
/// shadow, no attacks. Tests build on it.
Scenario minimal_scenario(Tick horizon);

Scenario load_scenario(const std::string& path);
Scenario scenario_from_json_text(const std::string& text, const std::string& origin);

/// Fixed-order single-line JSON with every default resolved; embedded in
/// transcripts so `report` can recompute metrics with no scenario file.
std::string canonical_json(const Scenario& s);

/// Full cross-validation; returns every problem found. Also resolves model
/// references (attack targets, shadow priority) and fills defaulted fields.
std::vector<std::string> validate_and_resolve(Scenario& s);

}  // namespace guard
