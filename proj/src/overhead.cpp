#include "guard/overhead.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "guard/errors.hpp"
#include "guard/strutil.hpp"

#include <json.hpp>

namespace guard {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kUmToMm = 1e-3;
}  // namespace

std::string_view to_string(PackageKind p) {
    switch (p) {
        case PackageKind::SCM: return "SCM";
        case PackageKind::MCM: return "MCM";
        case PackageKind::MCM_3D: return "MCM_3D";
    }
    return "?";
}

PackageKind package_from_string(std::string_view s) {
    if (s == "SCM") return PackageKind::SCM;
    if (s == "MCM") return PackageKind::MCM;
    if (s == "MCM_3D") return PackageKind::MCM_3D;
    throw ValidationError("unknown package kind: '" + std::string(s) + "'");
}

std::string_view to_string(StackConfig c) {
    switch (c) {
        case StackConfig::Interposer2_5D: return "interposer_2_5d";
        case StackConfig::FaceToFace: return "face_to_face";
        case StackConfig::F2B_EdgeOnTop: return "f2b_edge_on_top";
        case StackConfig::F2B_GuardOnTop: return "f2b_guard_on_top";
    }
    return "?";
}

StackConfig stack_config_from_string(std::string_view s) {
    if (s == "interposer_2_5d") return StackConfig::Interposer2_5D;
    if (s == "face_to_face") return StackConfig::FaceToFace;
    if (s == "f2b_edge_on_top") return StackConfig::F2B_EdgeOnTop;
    if (s == "f2b_guard_on_top") return StackConfig::F2B_GuardOnTop;
    throw ValidationError("unknown stack config: '" + std::string(s) + "'");
}

bool config_has_tsv_overhead(StackConfig c) { return c == StackConfig::F2B_GuardOnTop; }

long long table_percent_centi(double percent) {
    const long long milli = std::llround(percent * 1000.0);
    const long long q = milli / 10;
    const long long r = milli % 10;
    if (r > 5) return q + 1;
    if (r < 5) return q;
    return (q % 2 == 0) ? q : q + 1;
}

std::string format_percent_centi(long long centi) {
    std::string out = canon_i64(centi / 100) + ".";
    const long long frac = centi % 100;
    out += static_cast<char>('0' + frac / 10);
    out += static_cast<char>('0' + frac % 10);
    out += '%';
    return out;
}

OverheadResult tsv_area_overhead(const ChipSpec& chip, long long n_tsv, const TsvSpec& tsv) {
    if (chip.area_mm2 <= 0.0)
        throw ValidationError("chip '" + chip.name + "': die area must be positive");
    if (n_tsv < 0) throw ValidationError("chip '" + chip.name + "': TSV count must be >= 0");
    const double radius_mm = 0.5 * tsv.diameter_um * kUmToMm;
    const double via_area = kPi * radius_mm * radius_mm;
    OverheadResult res;
    res.percent = 100.0 * static_cast<double>(n_tsv) * via_area / chip.area_mm2;
    res.rounded_centi = table_percent_centi(res.percent);
    res.formatted = format_percent_centi(res.rounded_centi);
    return res;
}

ConfigRecommendation recommend_config(const ChipSpec& chip) {
    ConfigRecommendation rec;
    switch (chip.package) {
        case PackageKind::MCM:
            rec.config = StackConfig::Interposer2_5D;
            rec.note = "guard-layer interposer connecting all chips";
            break;
        case PackageKind::MCM_3D:
            rec.config = StackConfig::Interposer2_5D;
            rec.note = "interposer; guard layer may also join the existing 3D stack";
            break;
        case PackageKind::SCM:
            rec.config = StackConfig::FaceToFace;
            rec.note = "face-to-face stack; f2b_edge_on_top is the zero-overhead alternative";
            break;
    }
    return rec;
}

PitchFeasibility pitch_feasibility(const ChipSpec& chip, long long n_tsv, const TsvSpec& tsv,
                                   double warn_fraction) {
    PitchFeasibility out;
    const double pitch_mm = tsv.pitch_um * kUmToMm;
    out.required_mm2 = static_cast<double>(n_tsv) * pitch_mm * pitch_mm;
    out.fraction_of_die = chip.area_mm2 > 0.0 ? out.required_mm2 / chip.area_mm2 : 0.0;
    out.feasible = out.fraction_of_die <= warn_fraction;
    if (!out.feasible) {
        std::ostringstream msg;
        msg << "TSV placement needs " << out.required_mm2 << " mm2 ("
            << 100.0 * out.fraction_of_die << "% of die) at " << tsv.pitch_um << "um pitch";
        out.warning = msg.str();
    }
    return out;
}

double cost_overhead(double guard_cost, double base_cost) {
    if (base_cost <= 0.0) throw ValidationError("cost_overhead: base cost must be positive");
    if (guard_cost < 0.0) throw ValidationError("cost_overhead: guard cost must be >= 0");
    return 100.0 * guard_cost / base_cost;
}

ChipTable load_chip_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open chip table", path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("chip table ") + path + ": " + e.what());
    }

    ChipTable table;
    std::vector<std::string> issues;
    if (j.value("schema_version", 0) != 1)
        issues.push_back("chip table: schema_version must be 1");
    if (j.contains("tsv")) {
        table.tsv.diameter_um = j["tsv"].value("diameter_um", 3.0);
        table.tsv.pitch_um = j["tsv"].value("pitch_um", 10.0);
        if (table.tsv.diameter_um <= 0.0 || table.tsv.diameter_um > table.tsv.pitch_um)
            issues.push_back("tsv: need 0 < diameter <= pitch");
    }
    for (const auto& n : j.value("sweep", nlohmann::json::array()))
        table.sweep.push_back(n.get<long long>());
    if (table.sweep.empty()) table.sweep = {10000, 20000, 50000, 100000};

    for (const auto& cj : j.value("chips", nlohmann::json::array())) {
        ChipSpec chip;
        chip.name = cj.value("name", "");
        chip.architecture = cj.value("architecture", "");
        chip.tech_node = cj.value("tech_node", "");
        chip.area_mm2 = cj.value("area_mm2", 0.0);
        try {
            chip.package = package_from_string(cj.value("package", ""));
        } catch (const ValidationError& e) {
            issues.push_back("chip '" + chip.name + "': " + e.what());
        }
        if (chip.area_mm2 <= 0.0)
            issues.push_back("chip '" + chip.name + "': die area must be positive");
        table.chips.push_back(std::move(chip));
    }
    if (table.chips.empty()) issues.push_back("chip table: no chips listed");
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return table;
}

namespace {

void pad_to(std::string& line, std::size_t column) {
    while (line.size() < column) line += ' ';
}

}  // namespace

std::string render_overhead_report(const ChipTable& table) {
    std::string out;
    out += "TSV area overhead (f2b_guard_on_top; the other configurations incur none)\n";
    out += "via diameter " + canon_double(table.tsv.diameter_um) + "um, pitch " +
           canon_double(table.tsv.pitch_um) + "um\n\n";

    std::string header = "System";
    pad_to(header, 18);
    header += "Package";
    pad_to(header, 28);
    header += "Area(mm2)";
    pad_to(header, 40);
    std::size_t col = 40;
    for (long long n : table.sweep) {
        header += canon_i64(n / 1000) + "K";
        col += 10;
        pad_to(header, col);
    }
    header += "Node";
    pad_to(header, col + 10);
    header += "Recommended";
    out += header + "\n";

    for (const ChipSpec& chip : table.chips) {
        std::string line = chip.name;
        pad_to(line, 18);
        line += std::string(to_string(chip.package));
        pad_to(line, 28);
        line += canon_double(chip.area_mm2);
        pad_to(line, 40);
        col = 40;
        for (long long n : table.sweep) {
            line += tsv_area_overhead(chip, n, table.tsv).formatted;
            col += 10;
            pad_to(line, col);
        }
        line += chip.tech_node;
        pad_to(line, col + 10);
        line += std::string(to_string(recommend_config(chip).config));
        out += line + "\n";
    }

    out += "\nunrounded percentages\n";
    for (const ChipSpec& chip : table.chips) {
        std::string line = chip.name;
        pad_to(line, 18);
        for (long long n : table.sweep) {
            line += canon_double(tsv_area_overhead(chip, n, table.tsv).percent);
            line += ' ';
        }
        out += line + "\n";
    }

    out += "\npitch feasibility (worst sweep point)\n";
    for (const ChipSpec& chip : table.chips) {
        const long long n_max = *std::max_element(table.sweep.begin(), table.sweep.end());
        const PitchFeasibility pf = pitch_feasibility(chip, n_max, table.tsv);
        std::string line = chip.name;
        pad_to(line, 18);
        line += canon_i64(n_max) + " vias need " + canon_double(pf.required_mm2) + " mm2";
        if (!pf.feasible) line += "  WARNING: " + pf.warning;
        out += line + "\n";
    }
    return out;
}

}  // namespace guard
