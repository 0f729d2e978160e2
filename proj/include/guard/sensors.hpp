#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "guard/rng.hpp"
#include "guard/tile_grid.hpp"
#include "guard/workload.hpp"

namespace guard {

enum class SensorBank : std::uint8_t { A = 0, B = 1 };

std::string_view to_string(SensorBank b);
SensorBank bank_from_string(std::string_view s);  // throws ValidationError
inline SensorBank other_bank(SensorBank b) {
    return b == SensorBank::A ? SensorBank::B : SensorBank::A;
}

struct NoiseStd {
    double thermal = 0.5;
    double power = 0.2;
    double activity = 1.0;
};

struct AffineCoeff {
    double base = 0.0;
    double per_activity = 0.0;
};

struct SensorConfig {
    NoiseStd noise;
    AffineCoeff thermal{40.0, 0.02};  // degC
    AffineCoeff power{1.0, 0.01};     // W
};

struct TileReading {
    double activity = 0.0;
    double thermal = 0.0;
    double power = 0.0;
};

/// Per-tick readings from both redundant banks. Both observe the same
/// ground-truth tile state; only a spoofing offset and independent noise
/// make them differ.
struct TelemetryFrame {
    Tick tick = 0;
    std::array<std::vector<TileReading>, 2> banks;  // indexed by SensorBank

    const std::vector<TileReading>& bank(SensorBank b) const {
        return banks[static_cast<std::size_t>(b)];
    }
};

/// Additive attack contributions for one tick, in reading units.
struct TelemetryDeltas {
    std::vector<double> activity;  // per tile, true activity delta
    std::vector<double> power;     // per tile, direct power-rail delta
    std::array<std::vector<double>, 2> bank_activity_offset;  // spoofing, per bank/tile

    explicit TelemetryDeltas(int tiles = 0) { resize(tiles); }
    void resize(int tiles) {
        activity.assign(static_cast<std::size_t>(tiles), 0.0);
        power.assign(static_cast<std::size_t>(tiles), 0.0);
        for (auto& b : bank_activity_offset) b.assign(static_cast<std::size_t>(tiles), 0.0);
    }
};

/// The two redundant banks and which one detection currently trusts. The
/// passive bank keeps being sampled for cross-validation.
class SensorSuite {
public:
    explicit SensorSuite(SensorConfig cfg = {}, SensorBank active = SensorBank::A)
        : cfg_(cfg), active_(active) {}

    const SensorConfig& config() const noexcept { return cfg_; }
    SensorBank active_bank() const noexcept { return active_; }

    /// Returns true if the active bank actually changed (switching to the
    /// current bank is a no-op and publishes nothing).
    bool switch_bank(SensorBank to);

private:
    SensorConfig cfg_;
    SensorBank active_;
};

/// Per-tile activity is baseline_rate x workload share of the tile's
/// modality, plus attack deltas. Thermal and power are affine in that true
/// activity; every channel then gets its own per-bank Gaussian read noise.
TelemetryFrame sample_telemetry(const TileGrid& grid, const InputBatch& batch,
                                const TelemetryDeltas& deltas, const SensorSuite& sensors,
                                Tick tick, Rng& rng);

}  // namespace guard
