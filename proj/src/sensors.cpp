#include "guard/sensors.hpp"

#include "guard/errors.hpp"

namespace guard {

std::string_view to_string(SensorBank b) {
    return b == SensorBank::A ? "A" : "B";
}

SensorBank bank_from_string(std::string_view s) {
    if (s == "A" || s == "a") return SensorBank::A;
    if (s == "B" || s == "b") return SensorBank::B;
    throw ValidationError("unknown sensor bank: '" + std::string(s) + "'");
}

bool SensorSuite::switch_bank(SensorBank to) {
    if (to == active_) return false;
    active_ = to;
    return true;
}

TelemetryFrame sample_telemetry(const TileGrid& grid, const InputBatch& batch,
                                const TelemetryDeltas& deltas, const SensorSuite& sensors,
                                Tick tick, Rng& rng) {
    const SensorConfig& cfg = sensors.config();
    TelemetryFrame frame;
    frame.tick = tick;
    for (auto& b : frame.banks) b.resize(static_cast<std::size_t>(grid.tile_count()));

    // Cache shares per modality so the per-tile loop stays O(tiles).
    std::array<double, kModalityCount> share{};
    for (int m = 0; m < kModalityCount; ++m)
        share[static_cast<std::size_t>(m)] = batch.modality_share(static_cast<Modality>(m));

    for (int i = 0; i < grid.tile_count(); ++i) {
        const Tile& tile = grid.tile(i);
        const std::size_t ti = static_cast<std::size_t>(i);
        const double activity_true =
            tile.baseline_rate * share[static_cast<std::size_t>(tile.modality)] +
            deltas.activity[ti];
        const double thermal_true = cfg.thermal.base + cfg.thermal.per_activity * activity_true;
        const double power_true =
            cfg.power.base + cfg.power.per_activity * activity_true + deltas.power[ti];

        // Fixed draw order: bank A then B; activity, thermal, power.
        for (std::size_t b = 0; b < 2; ++b) {
            TileReading& r = frame.banks[b][ti];
            r.activity = activity_true + deltas.bank_activity_offset[b][ti] +
                         (cfg.noise.activity > 0.0 ? rng.normal(0.0, cfg.noise.activity) : 0.0);
            r.thermal =
                thermal_true + (cfg.noise.thermal > 0.0 ? rng.normal(0.0, cfg.noise.thermal) : 0.0);
            r.power = power_true + (cfg.noise.power > 0.0 ? rng.normal(0.0, cfg.noise.power) : 0.0);
        }
    }
    return frame;
}

}  // namespace guard
