#include "guard/workload.hpp"

#include <cmath>

namespace guard {

long CountDistribution::sample(Rng& rng) const {
    switch (kind) {
        case Kind::Constant: return std::lround(value);
        case Kind::Poisson: return rng.poisson(value);
    }
    return 0;
}

std::string_view to_string(NetworkStatus s) {
    switch (s) {
        case NetworkStatus::Up: return "up";
        case NetworkStatus::Outage: return "outage";
        case NetworkStatus::Isolated: return "isolated";
    }
    return "?";
}

double InputBatch::modality_share(Modality m) const {
    if (items.empty()) return 0.0;
    std::size_t n = 0;
    for (const auto& it : items)
        if (it.modality == m) ++n;
    return static_cast<double>(n) / static_cast<double>(items.size());
}

namespace {

Modality sample_modality(const std::map<Modality, double>& mix, Rng& rng) {
    const double u = rng.uniform01();
    double acc = 0.0;
    Modality last = Modality::Vision;
    for (const auto& [m, p] : mix) {
        acc += p;
        last = m;
        if (u < acc) return m;
    }
    return last;  // u landed in the rounding sliver at the top
}

int sample_label(const WorkloadProfile& profile, Rng& rng) {
    if (profile.label_weights.empty())
        return static_cast<int>(rng.below(static_cast<std::uint64_t>(profile.label_space)));
    const double u = rng.uniform01();
    double acc = 0.0;
    for (std::size_t i = 0; i < profile.label_weights.size(); ++i) {
        acc += profile.label_weights[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(profile.label_weights.size()) - 1;
}

WorkItem sample_item(const WorkloadProfile& profile, Rng& rng) {
    WorkItem item;
    item.modality = sample_modality(profile.modality_mix, rng);
    item.truth_label = sample_label(profile, rng);
    return item;
}

}  // namespace

InputBatch generate_workload(const WorkloadProfile& profile, Tick tick, Rng& rng) {
    InputBatch batch;
    const long n = profile.count.sample(rng);
    batch.items.reserve(static_cast<std::size_t>(n > 0 ? n : 0));
    for (long i = 0; i < n; ++i) batch.items.push_back(sample_item(profile, rng));
    batch.decision_item = sample_item(profile, rng);

    batch.network.packets = rng.normal(profile.network.packets_mean, profile.network.packets_std);
    if (batch.network.packets < 0.0) batch.network.packets = 0.0;
    double ids = rng.normal(profile.network.identities_mean, profile.network.identities_std);
    batch.network.identities = ids < 0.0 ? 0.0 : std::round(ids);
    batch.network.telemetry_uplink =
        profile.telemetry_uplink_every_n > 0 && tick % profile.telemetry_uplink_every_n == 0;
    return batch;
}

}  // namespace guard
