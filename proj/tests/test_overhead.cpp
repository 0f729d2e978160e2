#include <doctest.h>

#include <cmath>

#include "guard/errors.hpp"
#include "guard/overhead.hpp"

using namespace guard;

namespace {

struct TableRow {
    const char* name;
    double area;
    long long cells[4];  // hundredths of a percent at 10K/20K/50K/100K
};

// The published overhead table, frozen cell by cell.
constexpr TableRow kPublishedTable[] = {
    {"System-1", 5133.0, {0, 0, 1, 1}},
    {"System-2", 3107.0, {0, 0, 1, 2}},
    {"System-4", 400.0, {2, 4, 9, 18}},
    {"System-5", 2025.0, {0, 1, 2, 4}},
    {"System-6", 289.0, {2, 5, 12, 24}},
    {"System-7", 196.0, {4, 7, 18, 36}},
    {"System-8", 800.0, {1, 2, 4, 9}},
    {"System-9", 150.0, {5, 9, 24, 47}},
};

constexpr long long kSweep[4] = {10000, 20000, 50000, 100000};

ChipSpec chip(double area, PackageKind pkg = PackageKind::SCM) {
    ChipSpec c;
    c.name = "test";
    c.package = pkg;
    c.area_mm2 = area;
    return c;
}

}  // namespace

TEST_CASE("all 32 published overhead cells reproduce exactly") {
    const TsvSpec tsv;  // 3um diameter, 10um pitch
    for (const TableRow& row : kPublishedTable) {
        for (int i = 0; i < 4; ++i) {
            const OverheadResult res = tsv_area_overhead(chip(row.area), kSweep[i], tsv);
            INFO(row.name, " at ", kSweep[i], " TSVs: ", res.percent, "% -> ", res.formatted);
            CHECK(res.rounded_centi == row.cells[i]);
        }
    }
}

TEST_CASE("spot cells match their formatted strings") {
    const TsvSpec tsv;
    CHECK(tsv_area_overhead(chip(150.0), 100000, tsv).formatted == "0.47%");
    CHECK(tsv_area_overhead(chip(5133.0), 10000, tsv).formatted == "0.00%");
    CHECK(tsv_area_overhead(chip(400.0), 50000, tsv).formatted == "0.09%");
}

TEST_CASE("zero TSVs cost exactly nothing") {
    const OverheadResult res = tsv_area_overhead(chip(123.0), 0, TsvSpec{});
    CHECK(res.percent == 0.0);
    CHECK(res.formatted == "0.00%");
}

TEST_CASE("invalid die area or count is rejected") {
    CHECK_THROWS_AS(tsv_area_overhead(chip(0.0), 1000, TsvSpec{}), ValidationError);
    CHECK_THROWS_AS(tsv_area_overhead(chip(-5.0), 1000, TsvSpec{}), ValidationError);
    CHECK_THROWS_AS(tsv_area_overhead(chip(100.0), -1, TsvSpec{}), ValidationError);
}

TEST_CASE("overhead is linear in the via count before rounding") {
    const TsvSpec tsv;
    for (long long n1 : {1000LL, 7777LL, 50000LL})
        for (long long n2 : {1LL, 12345LL, 99999LL}) {
            const double lhs = tsv_area_overhead(chip(321.0), n1 + n2, tsv).percent;
            const double rhs = tsv_area_overhead(chip(321.0), n1, tsv).percent +
                               tsv_area_overhead(chip(321.0), n2, tsv).percent;
            CHECK(std::abs(lhs - rhs) <= 1e-12 * lhs);
        }
}

TEST_CASE("overhead decreases in area and increases in count and diameter") {
    const TsvSpec tsv;
    CHECK(tsv_area_overhead(chip(100.0), 10000, tsv).percent >
          tsv_area_overhead(chip(200.0), 10000, tsv).percent);
    CHECK(tsv_area_overhead(chip(100.0), 20000, tsv).percent >
          tsv_area_overhead(chip(100.0), 10000, tsv).percent);
    TsvSpec fat;
    fat.diameter_um = 5.0;
    CHECK(tsv_area_overhead(chip(100.0), 10000, fat).percent >
          tsv_area_overhead(chip(100.0), 10000, tsv).percent);
}

TEST_CASE("exactly one of the four configurations pays TSV area") {
    int with_overhead = 0;
    for (int c = 0; c < kStackConfigCount; ++c)
        if (config_has_tsv_overhead(static_cast<StackConfig>(c))) ++with_overhead;
    CHECK(with_overhead == 1);
    CHECK(config_has_tsv_overhead(StackConfig::F2B_GuardOnTop));
    CHECK_FALSE(config_has_tsv_overhead(StackConfig::Interposer2_5D));
    CHECK_FALSE(config_has_tsv_overhead(StackConfig::FaceToFace));
    CHECK_FALSE(config_has_tsv_overhead(StackConfig::F2B_EdgeOnTop));
}

TEST_CASE("package kind drives the recommended configuration") {
    CHECK(recommend_config(chip(100.0, PackageKind::MCM)).config == StackConfig::Interposer2_5D);
    CHECK(recommend_config(chip(100.0, PackageKind::SCM)).config == StackConfig::FaceToFace);
    const auto rec = recommend_config(chip(100.0, PackageKind::MCM_3D));
    CHECK(rec.config == StackConfig::Interposer2_5D);
    CHECK(rec.note.find("3D stack") != std::string::npos);
    // The recommended configurations are all overhead-free.
    CHECK_FALSE(config_has_tsv_overhead(recommend_config(chip(1.0, PackageKind::SCM)).config));
    CHECK_FALSE(config_has_tsv_overhead(recommend_config(chip(1.0, PackageKind::MCM)).config));
}

TEST_CASE("pitch feasibility hand arithmetic") {
    // 100,000 vias at 10um pitch need 100,000 * (0.01 mm)^2 = 10 mm^2.
    const auto ok = pitch_feasibility(chip(150.0), 100000, TsvSpec{});
    CHECK(ok.required_mm2 == doctest::Approx(10.0));
    CHECK(ok.fraction_of_die == doctest::Approx(10.0 / 150.0));
    CHECK(ok.feasible);

    const auto warn = pitch_feasibility(chip(150.0), 200000, TsvSpec{});
    CHECK(warn.required_mm2 == doctest::Approx(20.0));
    CHECK_FALSE(warn.feasible);
    CHECK(!warn.warning.empty());

    CHECK(pitch_feasibility(chip(150.0), 0, TsvSpec{}).feasible);
}

TEST_CASE("cost overhead endpoints and validation") {
    CHECK(cost_overhead(37.5, 1000.0) == doctest::Approx(3.75));
    CHECK(cost_overhead(30.0, 50.0) == doctest::Approx(60.0));
    CHECK(cost_overhead(0.0, 100.0) == 0.0);
    CHECK_THROWS_AS(cost_overhead(10.0, 0.0), ValidationError);
    CHECK_THROWS_AS(cost_overhead(10.0, -5.0), ValidationError);
    CHECK_THROWS_AS(cost_overhead(-1.0, 10.0), ValidationError);
}

TEST_CASE("cost overhead strictly decreases as the baseline grows") {
    double prev = 1e9;
    for (double base = 50.0; base <= 1000.0; base += 25.0) {
        const double pct = cost_overhead(30.0, base);
        CHECK(pct < prev);
        prev = pct;
    }
}

TEST_CASE("the bundled chip table loads and renders the published cells") {
    const ChipTable table = load_chip_table(std::string(GUARD_SOURCE_DIR) + "/data/table1_chips.json");
    REQUIRE(table.chips.size() == 8);
    REQUIRE(table.sweep.size() == 4);
    CHECK(table.tsv.diameter_um == 3.0);
    CHECK(table.tsv.pitch_um == 10.0);

    const std::string report = render_overhead_report(table);
    CHECK(report.find("0.47%") != std::string::npos);  // System-9 at 100K
    CHECK(report.find("System-5") != std::string::npos);
    CHECK(report.find("f2b_guard_on_top") != std::string::npos);

    std::size_t idx = 0;
    for (const ChipSpec& c : table.chips) {
        for (int i = 0; i < 4; ++i)
            CHECK(tsv_area_overhead(c, table.sweep[static_cast<std::size_t>(i)], table.tsv)
                      .rounded_centi == kPublishedTable[idx].cells[i]);
        ++idx;
    }
}

TEST_CASE("chip table validation reports every bad row") {
    CHECK_THROWS_AS(load_chip_table("/nonexistent/chips.json"), IoError);
}
