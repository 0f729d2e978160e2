#include <doctest.h>

#include <cmath>

#include "guard/attacks.hpp"
#include "guard/models.hpp"
#include "guard/rng.hpp"
#include "guard/sensors.hpp"
#include "guard/workload.hpp"

using namespace guard;

namespace {

TileGrid test_grid() {
    return TileGrid(2, 2,
                    {Tile{Modality::Vision, 100.0}, Tile{Modality::Vision, 80.0},
                     Tile{Modality::Audio, 60.0}, Tile{Modality::Comm, 50.0}});
}

WorkloadProfile test_profile() {
    WorkloadProfile p;
    p.count = {CountDistribution::Kind::Constant, 40.0};
    p.modality_mix = {{Modality::Vision, 0.5}, {Modality::Audio, 0.25}, {Modality::Comm, 0.25}};
    p.label_space = 10;
    return p;
}

}  // namespace

TEST_CASE("degenerate modality mix yields items of that modality only") {
    WorkloadProfile p = test_profile();
    p.modality_mix = {{Modality::Vision, 1.0}};
    Rng rng(1);
    const InputBatch batch = generate_workload(p, 0, rng);
    CHECK(batch.items.size() == 40);
    for (const auto& item : batch.items) CHECK(item.modality == Modality::Vision);
}

TEST_CASE("zero count gives an empty batch but network traffic is still sampled") {
    WorkloadProfile p = test_profile();
    p.count = {CountDistribution::Kind::Constant, 0.0};
    Rng rng(2);
    const InputBatch batch = generate_workload(p, 0, rng);
    CHECK(batch.items.empty());
    CHECK(batch.network.packets > 0.0);
    CHECK(batch.modality_share(Modality::Vision) == 0.0);
}

TEST_CASE("half-vision mix concentrates at 0.5 over 10000 items") {
    WorkloadProfile p = test_profile();
    p.modality_mix = {{Modality::Vision, 0.5}, {Modality::Audio, 0.5}};
    p.count = {CountDistribution::Kind::Constant, 10000.0};
    Rng rng(3);
    const InputBatch batch = generate_workload(p, 0, rng);
    // Direct counting; binomial concentration puts the share within 0.02.
    std::size_t vision = 0;
    for (const auto& item : batch.items)
        if (item.modality == Modality::Vision) ++vision;
    const double frac = static_cast<double>(vision) / 10000.0;
    CHECK(std::abs(frac - 0.5) < 0.02);
}

TEST_CASE("perfect model emits the ground truth always") {
    ModelSpec m{"primary", ModelRole::Primary, ModelMode::Active, 1.0, {}, 0.0};
    Rng rng(4);
    for (int i = 0; i < 500; ++i) {
        const WorkItem item{Modality::Vision, i % 10};
        const Decision d = infer(m, 0, item, {}, 10, 10, i, rng);
        CHECK(d.emitted_label == item.truth_label);
        CHECK(d.confidence == 1.0);
    }
}

TEST_CASE("accuracy 0.8 holds empirically over 10000 inferences") {
    ModelSpec m{"primary", ModelRole::Primary, ModelMode::Active, 0.8, {}, 0.05};
    Rng rng(5);
    int correct = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const WorkItem item{Modality::Vision, i % 10};
        const Decision d = infer(m, 0, item, {}, 10, 10, i, rng);
        if (d.emitted_label == item.truth_label) ++correct;
    }
    CHECK(std::abs(static_cast<double>(correct) / n - 0.8) < 0.01);
}

TEST_CASE("poisoning halves the primary accuracy and leaves shadows untouched") {
    ModelSpec primary{"primary", ModelRole::Primary, ModelMode::Active, 1.0, {}, 0.0};
    ModelSpec shadow{"shadow-1", ModelRole::Shadow, ModelMode::Active, 1.0, {}, 0.0};
    ModelAttackEffects poisoned;
    poisoned.accuracy_scale = 0.5;
    Rng rng_p(6), rng_s(7);
    int correct_p = 0, correct_s = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const WorkItem item{Modality::Vision, i % 10};
        if (infer(primary, 0, item, poisoned, 10, 10, i, rng_p).emitted_label == item.truth_label)
            ++correct_p;
        if (infer(shadow, 1, item, {}, 10, 10, i, rng_s).emitted_label == item.truth_label)
            ++correct_s;
    }
    CHECK(std::abs(static_cast<double>(correct_p) / n - 0.5) < 0.02);
    CHECK(correct_s == n);
}

TEST_CASE("wrong labels stay inside the label space and differ from truth") {
    ModelSpec m{"m", ModelRole::Primary, ModelMode::Active, 0.0, {}, 0.0};
    Rng rng(8);
    for (int i = 0; i < 1000; ++i) {
        const WorkItem item{Modality::Vision, i % 7};
        const Decision d = infer(m, 0, item, {}, 7, 7, i, rng);
        CHECK(d.emitted_label != item.truth_label);
        CHECK(d.emitted_label >= 0);
        CHECK(d.emitted_label < 7);
    }
}

TEST_CASE("trojan substitutes the configured label on trigger truths only") {
    ModelSpec m{"primary", ModelRole::Primary, ModelMode::Active, 1.0, {}, 0.0};
    ModelAttackEffects fx;
    fx.trojan_active = true;
    fx.trojan_trigger_label = 3;
    fx.trojan_emit_label = 7;
    Rng rng(21);
    for (int truth = 0; truth < 10; ++truth) {
        const Decision d = infer(m, 0, {Modality::Vision, truth}, fx, 10, 10, 0, rng);
        if (truth == 3)
            CHECK(d.emitted_label == 7);
        else
            CHECK(d.emitted_label == truth);
    }
}

TEST_CASE("zero workload and zero noise produce exactly zero activity") {
    const TileGrid grid = test_grid();
    WorkloadProfile p = test_profile();
    p.count = {CountDistribution::Kind::Constant, 0.0};
    SensorConfig cfg;
    cfg.noise = {0.0, 0.0, 0.0};
    SensorSuite sensors(cfg);
    Rng rng(9);
    const InputBatch batch = generate_workload(p, 0, rng);
    const TelemetryFrame frame =
        sample_telemetry(grid, batch, TelemetryDeltas(grid.tile_count()), sensors, 0, rng);
    for (const auto& bank : frame.banks)
        for (const auto& r : bank) {
            CHECK(r.activity == 0.0);
            CHECK(r.thermal == cfg.thermal.base);
            CHECK(r.power == cfg.power.base);
        }
}

TEST_CASE("noise-free telemetry is a deterministic function of the batch") {
    const TileGrid grid = test_grid();
    SensorConfig cfg;
    cfg.noise = {0.0, 0.0, 0.0};
    SensorSuite sensors(cfg);
    WorkloadProfile p = test_profile();
    Rng wrng(10);
    const InputBatch batch = generate_workload(p, 0, wrng);

    Rng r1(11), r2(99);  // sensor rng must be irrelevant with zero noise
    const TelemetryDeltas none(grid.tile_count());
    const TelemetryFrame f1 = sample_telemetry(grid, batch, none, sensors, 0, r1);
    const TelemetryFrame f2 = sample_telemetry(grid, batch, none, sensors, 0, r2);
    for (int b = 0; b < 2; ++b)
        for (int t = 0; t < grid.tile_count(); ++t) {
            const auto& a = f1.banks[static_cast<std::size_t>(b)][static_cast<std::size_t>(t)];
            const auto& c = f2.banks[static_cast<std::size_t>(b)][static_cast<std::size_t>(t)];
            CHECK(a.activity == c.activity);
            CHECK(a.thermal == c.thermal);
            CHECK(a.power == c.power);
            const Tile& tile = grid.tile(t);
            const double expect = tile.baseline_rate * batch.modality_share(tile.modality);
            CHECK(a.activity == doctest::Approx(expect));
            CHECK(a.thermal == doctest::Approx(cfg.thermal.base + cfg.thermal.per_activity * expect));
        }
}

TEST_CASE("spoofing offsets exactly one bank of one tile") {
    const TileGrid grid = test_grid();
    SensorConfig cfg;
    cfg.noise = {0.0, 0.0, 1.0};
    SensorSuite sensors(cfg);
    WorkloadProfile p = test_profile();
    TelemetryDeltas deltas(grid.tile_count());
    deltas.bank_activity_offset[0][0] = 20.0;  // bank A, tile (0,0)

    Rng wrng(12), srng(13);
    const int n = 100;
    double sum_target = 0.0, sum_other = 0.0;
    for (int i = 0; i < n; ++i) {
        const InputBatch batch = generate_workload(p, i, wrng);
        const TelemetryFrame f = sample_telemetry(grid, batch, deltas, sensors, i, srng);
        sum_target += f.banks[0][0].activity - f.banks[1][0].activity;
        sum_other += f.banks[0][2].activity - f.banks[1][2].activity;
    }
    // Mean-difference oracle: estimator std is sqrt(2/n) = 0.1414; allow 3x.
    CHECK(std::abs(sum_target / n - 20.0) < 3.0 * 0.1414);
    CHECK(std::abs(sum_other / n) < 3.0 * 0.1414);
}

TEST_CASE("bank switching is explicit and idempotent") {
    SensorSuite sensors;
    CHECK(sensors.active_bank() == SensorBank::A);
    CHECK(sensors.switch_bank(SensorBank::B));
    CHECK(sensors.active_bank() == SensorBank::B);
    CHECK_FALSE(sensors.switch_bank(SensorBank::B));  // no-op, no event
    CHECK(sensors.active_bank() == SensorBank::B);
}

TEST_CASE("shadow error indicators are uncorrelated across models") {
    ModelSpec a{"a", ModelRole::Shadow, ModelMode::Active, 0.8, {}, 0.0};
    ModelSpec b{"b", ModelRole::Shadow, ModelMode::Active, 0.8, {}, 0.0};
    RngStream root(77);
    Rng ra = root.substream("model/a");
    Rng rb = root.substream("model/b");
    Rng truth_rng(14);
    const int n = 10000;
    double sa = 0, sb = 0, sab = 0;
    for (int i = 0; i < n; ++i) {
        const WorkItem item{Modality::Vision, static_cast<int>(truth_rng.below(10))};
        const int ea = infer(a, 0, item, {}, 10, 10, i, ra).emitted_label != item.truth_label;
        const int eb = infer(b, 1, item, {}, 10, 10, i, rb).emitted_label != item.truth_label;
        sa += ea;
        sb += eb;
        sab += ea * eb;
    }
    const double ma = sa / n, mb = sb / n;
    const double cov = sab / n - ma * mb;
    const double corr = cov / std::sqrt(ma * (1 - ma) * mb * (1 - mb));
    CHECK(std::abs(corr) < 0.03);
}

TEST_CASE("bank difference variance matches 2 sigma^2 without spoofing") {
    const TileGrid grid = test_grid();
    SensorConfig cfg;
    cfg.noise = {0.0, 0.0, 1.5};
    SensorSuite sensors(cfg);
    WorkloadProfile p = test_profile();
    Rng wrng(15), srng(16);
    const TelemetryDeltas none(grid.tile_count());
    const int n = 10000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
        const InputBatch batch = generate_workload(p, i, wrng);
        const TelemetryFrame f = sample_telemetry(grid, batch, none, sensors, i, srng);
        const double d = f.banks[0][1].activity - f.banks[1][1].activity;
        sum += d;
        sum2 += d * d;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.1);
    CHECK(var == doctest::Approx(2.0 * 1.5 * 1.5).epsilon(0.10));
}
