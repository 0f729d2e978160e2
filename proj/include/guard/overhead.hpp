#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace guard {

struct TsvSpec {
    double diameter_um = 3.0;
    double pitch_um = 10.0;
};

enum class PackageKind : std::uint8_t { SCM, MCM, MCM_3D };

std::string_view to_string(PackageKind p);
PackageKind package_from_string(std::string_view s);

struct ChipSpec {
    std::string name;
    PackageKind package = PackageKind::SCM;
    std::string architecture;
    double area_mm2 = 0.0;
    std::string tech_node;
};

/// Guard-layer attachment options. Only face-to-back with the guard die on
/// top routes vertical interconnect through the edge die, so only that
/// configuration pays TSV area.
enum class StackConfig : std::uint8_t {
    Interposer2_5D = 0,
    FaceToFace,
    F2B_EdgeOnTop,
    F2B_GuardOnTop,
};

constexpr int kStackConfigCount = 4;

std::string_view to_string(StackConfig c);
StackConfig stack_config_from_string(std::string_view s);

bool config_has_tsv_overhead(StackConfig c);

/// Published-table display rounding: values go through three decimals first
/// and then to two with ties to even. Done in integer space (the result is
/// hundredths of a percent) so it is exact.
long long table_percent_centi(double percent);
std::string format_percent_centi(long long centi);  // 47 -> "0.47%"

struct OverheadResult {
    double percent = 0.0;       // unrounded
    long long rounded_centi = 0;  // hundredths of a percent, display rounding
    std::string formatted;      // e.g. "0.47%"
};

/// TSV area overhead: n vias of circular cross-section pi*(d/2)^2 over the
/// die area. Throws ValidationError when the die area is not positive.
OverheadResult tsv_area_overhead(const ChipSpec& chip, long long n_tsv, const TsvSpec& tsv);

struct ConfigRecommendation {
    StackConfig config = StackConfig::FaceToFace;
    std::string note;
};

/// 2.5D interposer for multi-chip modules, 3D stacking for single-chip
/// modules (face-to-face by default; edge-on-top is the zero-overhead
/// face-to-back alternative).
ConfigRecommendation recommend_config(const ChipSpec& chip);

struct PitchFeasibility {
    double required_mm2 = 0.0;
    double fraction_of_die = 0.0;
    bool feasible = true;
    std::string warning;
};

/// Placement-area sanity check: n vias at the given pitch need n*p^2 of die;
/// warn beyond warn_fraction of the die area.
PitchFeasibility pitch_feasibility(const ChipSpec& chip, long long n_tsv, const TsvSpec& tsv,
                                   double warn_fraction = 0.10);

/// Guard-layer manufacturing cost as a percentage of the baseline system
/// cost. Throws ValidationError unless base_cost > 0 and guard_cost >= 0.
double cost_overhead(double guard_cost, double base_cost);

struct ChipTable {
    TsvSpec tsv;
    std::vector<long long> sweep;  // TSV counts, e.g. 10K..100K
    std::vector<ChipSpec> chips;
};

ChipTable load_chip_table(const std::string& path);

/// Text report mirroring the published table's columns (rounded cells),
/// followed by the unrounded values and per-chip recommendation.
std::string render_overhead_report(const ChipTable& table);

}  // namespace guard
