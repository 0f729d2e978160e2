#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "guard/rng.hpp"
#include "guard/tile_grid.hpp"

namespace guard {

using Tick = std::int64_t;

struct CountDistribution {
    enum class Kind : std::uint8_t { Constant, Poisson };
    Kind kind = Kind::Constant;
    double value = 1.0;  // constant count or Poisson mean

    long sample(Rng& rng) const;
    double mean() const { return value; }
};

struct NetworkBaseline {
    double packets_mean = 100.0;
    double packets_std = 10.0;
    double identities_mean = 5.0;
    double identities_std = 1.0;
};

struct WorkloadProfile {
    CountDistribution count;
    std::map<Modality, double> modality_mix;  // sums to 1
    int label_space = 2;                      // K
    std::vector<double> label_weights;        // size K; empty = uniform
    int meaning_classes = 0;                  // 0 = one meaning class per label
    NetworkBaseline network;
    /// Every n-th tick the device mirrors raw telemetry to the backlink
    /// (a network export the regulatory module can prohibit). 0 = never.
    int telemetry_uplink_every_n = 0;

    int meaning_class_count() const { return meaning_classes > 0 ? meaning_classes : label_space; }
};

struct WorkItem {
    Modality modality = Modality::Vision;
    int truth_label = 0;
};

enum class NetworkStatus : std::uint8_t { Up, Outage, Isolated };

std::string_view to_string(NetworkStatus s);

struct NetworkSample {
    double packets = 0.0;
    double identities = 0.0;
    NetworkStatus status = NetworkStatus::Up;
    bool telemetry_uplink = false;
};

struct InputBatch {
    std::vector<WorkItem> items;
    /// The query the decision path answers this tick. Sampled even when the
    /// batch itself is empty so the system always has one output to route.
    WorkItem decision_item;
    NetworkSample network;

    /// Fraction of batch items carrying the given modality (0 for an empty
    /// batch). Drives per-tile activity.
    double modality_share(Modality m) const;
};

InputBatch generate_workload(const WorkloadProfile& profile, Tick tick, Rng& rng);

}  // namespace guard
