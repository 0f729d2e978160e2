#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "guard/attacks.hpp"
#include "guard/models.hpp"
#include "guard/sensors.hpp"
#include "guard/tile_grid.hpp"
#include "guard/workload.hpp"

namespace guard {

/// Single-pass (Welford) running moments for one monitored channel.
struct ChannelBaseline {
    long count = 0;
    double mean = 0.0;
    double m2 = 0.0;  // sum of squared deviations
    long warmup = 200;

    void update(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    bool has_variance() const { return count >= 2; }
    double variance() const {
        return has_variance() ? m2 / static_cast<double>(count - 1) : 0.0;
    }
    double stddev() const;
    bool warmed_up() const { return count >= warmup; }
};

inline void update_baseline(ChannelBaseline& b, double x) { b.update(x); }

enum class DetectorId : std::uint8_t {
    ZScore = 0,
    SemanticRegion,
    CrossVerify,
    SemanticEntropy,
    SensorCrossValidate,
    NetworkTraffic,
    ShadowEnsemble,
};

constexpr int kDetectorCount = 7;

std::string_view to_string(DetectorId d);
DetectorId detector_from_string(std::string_view s);

/// Identity of a monitored channel, compact enough to sit on every verdict.
struct ChannelId {
    enum class Kind : std::uint8_t {
        TileActivity = 0,
        TileThermal,
        TilePower,
        ModalityShare,
        TileResidual,
        NetPackets,
        NetIdentities,
        Disagreement,
        MeaningEntropy,
        EnsembleDisagreement,
    };

    Kind kind = Kind::TileActivity;
    SensorBank bank = SensorBank::A;  // tile channels only
    std::uint16_t index = 0;          // tile index or modality

    bool operator==(const ChannelId&) const = default;

    std::string to_string() const;
    static ChannelId from_string(std::string_view s);
};

struct DetectorVerdict {
    Tick tick = 0;
    DetectorId detector = DetectorId::ZScore;
    ChannelId channel;
    double score = 0.0;
    double threshold = 0.0;
    bool fired = false;
    bool abstained = false;
    AttackClassSet hypothesis;
    SensorBank suspect_bank = SensorBank::A;  // SensorCrossValidate only
    bool has_suspect_bank = false;
};

/// z-test of a sample against a learned baseline. Before warmup the verdict
/// abstains. A zero-variance baseline fires with an infinite score when the
/// sample deviates at all, and stays quiet when it matches exactly.
DetectorVerdict zscore_alert(const ChannelBaseline& b, double x, double k);

/// Counted meaning classes of recent outputs.
struct MeaningDistribution {
    std::vector<long> counts;
    long total = 0;

    explicit MeaningDistribution(int classes = 0)
        : counts(static_cast<std::size_t>(classes), 0) {}
    void add(int cls) {
        ++counts[static_cast<std::size_t>(cls)];
        ++total;
    }
    void remove(int cls) {
        --counts[static_cast<std::size_t>(cls)];
        --total;
    }
};

/// Shannon entropy in nats: -sum p(c) ln p(c) over nonzero classes.
double semantic_entropy(const MeaningDistribution& d);

/// Fraction of shadow decisions disagreeing with the primary's label.
double cross_verify_rate(const Decision& primary, std::span<const Decision> shadows);

/// Which detectors are expected to fire for each attack kind (the catalog's
/// default detector expectation).
std::vector<DetectorId> expected_detectors(AttackKind k);

/// Default attack-class hypothesis carried by a firing on the given channel.
AttackClassSet channel_hypothesis(const ChannelId& ch, const TileGrid& grid);

struct DetectorConfig {
    double k_sigma = 6.0;
    long warmup = 200;        // W0, samples before any channel may fire
    double entropy_tau = -1;  // <0 resolves to 0.5*ln(meaning classes)
    double tol_k = 6.0;       // residual tolerance multiplier
    int disagreement_window = 100;
    int meaning_window = 50;
    int ensemble_window = 100;
    bool freeze_enabled = true;

    double resolved_tau(int meaning_classes) const;
};

struct DetectorInputs {
    const TelemetryFrame* frame = nullptr;  // null when this tick was not sampled
    const NetworkSample* network = nullptr;
    const Decision* primary = nullptr;
    std::span<const Decision> shadows;
    SensorBank active_bank = SensorBank::A;
    /// Set while the failover machine is away from Normal; baselines stop
    /// absorbing samples so an ongoing attack cannot poison its own
    /// detection baseline. Independently of this flag, a sample that fires
    /// its own channel's test is never absorbed.
    bool freeze_all = false;
};

/// All streaming detector state for one run. Verdict order within a tick is
/// fixed: per-tile z-scores (activity, thermal, power) on the active bank,
/// modality shares, per-tile bank residuals, network, cross-verification,
/// semantic entropy, shadow-ensemble.
class DetectorBank {
public:
    DetectorBank(const TileGrid& grid, const SensorConfig& sensors, const DetectorConfig& cfg,
                 int meaning_classes);

    std::vector<DetectorVerdict> step(Tick tick, const DetectorInputs& in);

    /// Feed the routed system output; the entropy channel monitors this
    /// stream (evaluated on the following tick).
    void observe_routed(const Decision& routed);

    const ChannelBaseline& tile_baseline(ChannelId::Kind kind, SensorBank bank, int tile) const;
    const ChannelBaseline& share_baseline(Modality m) const;
    const ChannelBaseline& packets_baseline() const { return packets_; }
    const ChannelBaseline& identities_baseline() const { return identities_; }
    const ChannelBaseline& disagreement_baseline() const { return disagree_base_; }

    const DetectorConfig& config() const { return cfg_; }

private:
    DetectorVerdict eval_tile(Tick tick, ChannelId::Kind kind, SensorBank bank, int tile, double x,
                              bool emit_verdict, bool freeze_all);
    ChannelBaseline& tile_baseline_mut(ChannelId::Kind kind, SensorBank bank, int tile);

    const TileGrid* grid_;
    DetectorConfig cfg_;
    double noise_activity_;
    int meaning_classes_;

    std::array<std::vector<ChannelBaseline>, 2> activity_, thermal_, power_;
    std::vector<ChannelBaseline> residual_;  // per tile
    std::array<ChannelBaseline, kModalityCount> share_;
    ChannelBaseline packets_, identities_;

    std::deque<double> disagree_window_;
    ChannelBaseline disagree_base_;
    std::deque<double> ensemble_window_;
    ChannelBaseline ensemble_base_;

    std::deque<int> meaning_window_;
    MeaningDistribution meaning_dist_;
    long routed_seen_ = 0;
};

}  // namespace guard
