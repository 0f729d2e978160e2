#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "guard/models.hpp"
#include "guard/rng.hpp"
#include "guard/sensors.hpp"
#include "guard/tile_grid.hpp"
#include "guard/workload.hpp"

namespace guard {

enum class AttackKind : std::uint8_t {
    AdversarialPerturbation = 0,
    Spoofing,
    PromptInjection,
    MultimodalJailbreak,
    DDoSFlood,
    Sybil,
    DataPoisoning,
    VoltageGlitch,
    TrojanTrigger,
    SideChannelProbe,
    NetworkOutage,
    MalwareOveractivity,
};

constexpr int kAttackKindCount = 12;

std::string_view to_string(AttackKind k);
AttackKind attack_kind_from_string(std::string_view s);  // throws ValidationError

/// Small set of attack classes, used for detector hypotheses and alert
/// fusion.
class AttackClassSet {
public:
    AttackClassSet() = default;
    AttackClassSet(std::initializer_list<AttackKind> kinds) {
        for (auto k : kinds) insert(k);
    }

    void insert(AttackKind k) { bits_ |= bit(k); }
    bool contains(AttackKind k) const { return bits_ & bit(k); }
    bool empty() const { return bits_ == 0; }
    int size() const { return __builtin_popcount(bits_); }

    AttackClassSet intersect(AttackClassSet o) const { return AttackClassSet(bits_ & o.bits_); }
    AttackClassSet unite(AttackClassSet o) const { return AttackClassSet(bits_ | o.bits_); }
    bool intersects(AttackClassSet o) const { return (bits_ & o.bits_) != 0; }
    bool operator==(const AttackClassSet&) const = default;

    /// Kinds in enum order (which is also how serialization lists them).
    std::vector<AttackKind> kinds() const;
    std::string to_string() const;            // comma separated, "-" when empty
    static AttackClassSet from_string(std::string_view csv);

private:
    explicit AttackClassSet(std::uint16_t bits) : bits_(bits) {}
    static std::uint16_t bit(AttackKind k) {
        return static_cast<std::uint16_t>(1u << static_cast<unsigned>(k));
    }
    std::uint16_t bits_ = 0;
};

/// Target of an attack. Which fields are required depends on the kind;
/// validate_attack_target enforces that at scenario load.
struct AttackTarget {
    std::optional<int> tile_row;
    std::optional<int> tile_col;
    std::optional<Modality> modality;
    std::string model_id;  // empty = unset (kinds that take a model default to the primary)
    int model_index = -1;  // resolved at scenario load
    std::optional<SensorBank> bank;
    int trigger_label = -1;  // TrojanTrigger only
    int emit_label = -1;     // TrojanTrigger only
};

struct AttackEvent {
    AttackKind kind = AttackKind::DDoSFlood;
    Tick onset = 0;
    Tick duration = 1;
    double intensity = 0.0;  // kind-specific units, see apply_attacks
    AttackTarget target;

    bool active_at(Tick t) const { return t >= onset && t < onset + duration; }
};

/// Closed-form no-attack standard deviation of each telemetry channel,
/// derived from the scenario. Attack magnitudes are specified in these
/// baseline-sigma units so detector math stays scale-free.
///
/// Activity variance combines the multinomial workload-share term
/// rate^2 * mix(1-mix)/n with sensor read noise; n is the mean batch count
/// (exact for constant counts, a documented approximation for Poisson).
struct SigmaModel {
    std::vector<double> activity;  // per tile
    std::vector<double> power;     // per tile
    double packets = 1.0;
    double identities = 1.0;

    static SigmaModel build(const TileGrid& grid, const WorkloadProfile& profile,
                            const SensorConfig& sensors);
};

/// Everything the active attacks do to one tick: telemetry deltas, per-model
/// effects, and network-side effects. Overlapping attacks compose additively
/// on telemetry and multiplicatively on accuracy scalars.
struct TickEffects {
    TelemetryDeltas telemetry;
    std::vector<ModelAttackEffects> per_model;
    double packets_multiplier = 1.0;
    double extra_identities = 0.0;
    bool outage = false;

    TickEffects(int tiles, int models) : telemetry(tiles), per_model(static_cast<std::size_t>(models)) {}
};

/// Effect signatures, per kind (intensity = i, sigma = the channel's
/// SigmaModel entry):
///   DDoSFlood            comm-tile activity += i*sigma; packets x= (1+i)
///   Sybil                identity count += round(i)
///   DataPoisoning        target model accuracy x= (1-i); every tile activity += 0.5*i*sigma
///   AdversarialPerturbation  target model accuracy x= (1-i); telemetry untouched
///   Spoofing             target bank/tile activity reading += i (absolute units)
///   PromptInjection /    target-modality tiles activity += i*sigma; target model's
///   MultimodalJailbreak  meaning classes re-drawn uniformly w.p. min(i,1)
///   VoltageGlitch        w.p. min(i,1) per tick: target model emits a wrong label
///                        and the power rail dips by i*sigma for that tick
///   TrojanTrigger        from onset: target model emits emit_label whenever
///                        truth == trigger_label; target tile activity += i*sigma
///   SideChannelProbe     square-wave power ripple, amplitude i*sigma, period 8 ticks
///   NetworkOutage        network channel marked down
///   MalwareOveractivity  every tile activity += i*sigma; packets x= (1+i)
TickEffects apply_attacks(Tick tick, const std::vector<const AttackEvent*>& active,
                          const TileGrid& grid, const SigmaModel& sigma,
                          const std::vector<ModelSpec>& models, Rng& rng);

/// Active events per tick. Overlapping NetworkOutage events merge by
/// construction (the network is down while any of them is active).
class AttackTimeline {
public:
    explicit AttackTimeline(const std::vector<AttackEvent>& events) : events_(&events) {}
    std::vector<const AttackEvent*> active_at(Tick t) const;

private:
    const std::vector<AttackEvent>* events_;
};

/// Per-kind target requirements; returns all problems found, prefixed with
/// the event's position so scenario errors name the offending entry.
std::vector<std::string> validate_attack_target(const AttackEvent& ev, std::size_t position,
                                                const TileGrid& grid,
                                                const std::vector<ModelSpec>& models,
                                                int label_space);

}  // namespace guard
