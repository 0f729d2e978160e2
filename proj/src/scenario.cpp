#include "guard/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "guard/errors.hpp"
#include "guard/strutil.hpp"

#include <json.hpp>

namespace guard {

using nlohmann::json;
using nlohmann::ordered_json;

int Scenario::primary_index() const {
    for (std::size_t i = 0; i < models.size(); ++i)
        if (models[i].role == ModelRole::Primary) return static_cast<int>(i);
    return -1;
}

std::vector<int> Scenario::shadow_indices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < models.size(); ++i)
        if (models[i].role == ModelRole::Shadow) out.push_back(static_cast<int>(i));
    return out;
}

Scenario minimal_scenario(Tick horizon) {
    Scenario s;
    s.name = "minimal";
    s.horizon = horizon;
    s.grid = TileGrid(1, 2, {Tile{Modality::Vision, 100.0}, Tile{Modality::Comm, 50.0}});
    s.workload.count = {CountDistribution::Kind::Constant, 32.0};
    s.workload.modality_mix = {{Modality::Vision, 0.8}, {Modality::Comm, 0.2}};
    s.workload.label_space = 10;
    s.models.push_back({"primary", ModelRole::Primary, ModelMode::Active, 1.0, {}, 0.05});
    s.models.push_back({"shadow-1", ModelRole::Shadow, ModelMode::Active, 0.9, {}, 0.05});
    s.jurisdictions.profiles.push_back(JurisdictionProfile{"default", 0.5, false, 3});
    s.jurisdictions.initial = "default";
    auto issues = validate_and_resolve(s);
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return s;
}

namespace {

// ---- parsing ---------------------------------------------------------

Scenario parse_scenario(const json& j, std::vector<std::string>& issues) {
    Scenario s;
    s.schema_version = j.value("schema_version", 0);
    if (s.schema_version != 1)
        issues.push_back("schema_version must be 1 (got " +
                         std::to_string(s.schema_version) + ")");
    s.name = j.value("name", "unnamed");
    s.horizon = j.value("horizon", Tick{0});

    if (j.contains("grid")) {
        const auto& g = j["grid"];
        const int rows = g.value("rows", 0);
        const int cols = g.value("cols", 0);
        std::vector<Tile> tiles;
        for (const auto& tj : g.value("tiles", json::array())) {
            Tile t;
            try {
                t.modality = modality_from_string(tj.value("modality", ""));
            } catch (const ValidationError& e) {
                issues.push_back(std::string("grid: ") + e.what());
            }
            t.baseline_rate = tj.value("baseline_rate", 0.0);
            tiles.push_back(t);
        }
        if (rows > 0 && cols > 0 &&
            tiles.size() == static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
            s.grid = TileGrid(rows, cols, std::move(tiles));
        } else {
            issues.push_back("grid: rows*cols must match the tile list");
        }
    } else {
        issues.push_back("grid: missing");
    }

    if (j.contains("sensors")) {
        const auto& sj = j["sensors"];
        if (sj.contains("noise")) {
            s.sensors.noise.thermal = sj["noise"].value("thermal", 0.5);
            s.sensors.noise.power = sj["noise"].value("power", 0.2);
            s.sensors.noise.activity = sj["noise"].value("activity", 1.0);
        }
        if (sj.contains("thermal_coeff")) {
            s.sensors.thermal.base = sj["thermal_coeff"].value("base", 40.0);
            s.sensors.thermal.per_activity = sj["thermal_coeff"].value("per_activity", 0.02);
        }
        if (sj.contains("power_coeff")) {
            s.sensors.power.base = sj["power_coeff"].value("base", 1.0);
            s.sensors.power.per_activity = sj["power_coeff"].value("per_activity", 0.01);
        }
        if (sj.contains("active_bank")) {
            try {
                s.initial_bank = bank_from_string(sj.value("active_bank", "A"));
            } catch (const ValidationError& e) {
                issues.push_back(std::string("sensors: ") + e.what());
            }
        }
    }

    if (j.contains("workload")) {
        const auto& w = j["workload"];
        if (w.contains("count")) {
            const std::string kind = w["count"].value("kind", "constant");
            if (kind == "constant")
                s.workload.count.kind = CountDistribution::Kind::Constant;
            else if (kind == "poisson")
                s.workload.count.kind = CountDistribution::Kind::Poisson;
            else
                issues.push_back("workload.count: unknown kind '" + kind + "'");
            s.workload.count.value = w["count"].value("value", 1.0);
        }
        for (auto it = w.value("modality_mix", json::object()).begin();
             it != w.value("modality_mix", json::object()).end(); ++it) {
            try {
                s.workload.modality_mix[modality_from_string(it.key())] = it.value().get<double>();
            } catch (const ValidationError& e) {
                issues.push_back(std::string("workload.modality_mix: ") + e.what());
            }
        }
        s.workload.label_space = w.value("label_space", 2);
        if (w.contains("label_weights"))
            s.workload.label_weights = w["label_weights"].get<std::vector<double>>();
        s.workload.meaning_classes = w.value("meaning_classes", 0);
        if (w.contains("network")) {
            s.workload.network.packets_mean = w["network"].value("packets_mean", 100.0);
            s.workload.network.packets_std = w["network"].value("packets_std", 10.0);
            s.workload.network.identities_mean = w["network"].value("identities_mean", 5.0);
            s.workload.network.identities_std = w["network"].value("identities_std", 1.0);
        }
        s.workload.telemetry_uplink_every_n = w.value("telemetry_uplink_every_n", 0);
    } else {
        issues.push_back("workload: missing");
    }

    for (const auto& mj : j.value("models", json::array())) {
        ModelSpec m;
        m.id = mj.value("id", "");
        const std::string role = mj.value("role", "shadow");
        if (role == "primary")
            m.role = ModelRole::Primary;
        else if (role == "shadow")
            m.role = ModelRole::Shadow;
        else
            issues.push_back("models: unknown role '" + role + "'");
        const std::string mode = mj.value("mode", "passive");
        if (mode == "active")
            m.mode = ModelMode::Active;
        else if (mode == "passive")
            m.mode = ModelMode::Passive;
        else
            issues.push_back("models: unknown mode '" + mode + "'");
        m.accuracy = mj.value("accuracy", 1.0);
        m.confidence_jitter = mj.value("confidence_jitter", 0.05);
        if (mj.contains("meaning_map"))
            m.meaning_map = mj["meaning_map"].get<std::vector<int>>();
        s.models.push_back(std::move(m));
    }

    for (const auto& aj : j.value("attacks", json::array())) {
        AttackEvent ev;
        try {
            ev.kind = attack_kind_from_string(aj.value("kind", ""));
        } catch (const ValidationError& e) {
            issues.push_back(std::string("attacks: ") + e.what());
            continue;
        }
        ev.onset = aj.value("onset", Tick{0});
        ev.duration = aj.value("duration", Tick{1});
        ev.intensity = aj.value("intensity", 0.0);
        if (aj.contains("target")) {
            const auto& tj = aj["target"];
            if (tj.contains("tile")) {
                const auto tile = tj["tile"].get<std::vector<int>>();
                if (tile.size() == 2) {
                    ev.target.tile_row = tile[0];
                    ev.target.tile_col = tile[1];
                } else {
                    issues.push_back("attacks: target.tile must be [row, col]");
                }
            }
            if (tj.contains("modality")) {
                try {
                    ev.target.modality = modality_from_string(tj.value("modality", ""));
                } catch (const ValidationError& e) {
                    issues.push_back(std::string("attacks: ") + e.what());
                }
            }
            ev.target.model_id = tj.value("model", "");
            if (tj.contains("bank")) {
                try {
                    ev.target.bank = bank_from_string(tj.value("bank", ""));
                } catch (const ValidationError& e) {
                    issues.push_back(std::string("attacks: ") + e.what());
                }
            }
            ev.target.trigger_label = tj.value("trigger_label", -1);
            ev.target.emit_label = tj.value("emit_label", -1);
        }
        s.attacks.push_back(std::move(ev));
    }

    if (j.contains("jurisdictions")) {
        const auto& jj = j["jurisdictions"];
        for (const auto& pj : jj.value("profiles", json::array())) {
            JurisdictionProfile p;
            p.id = pj.value("id", "");
            p.min_confidence = pj.value("min_confidence", 0.5);
            p.export_prohibited = pj.value("export_prohibited", false);
            p.max_low_conf_streak = pj.value("max_low_conf_streak", 3);
            s.jurisdictions.profiles.push_back(std::move(p));
        }
        s.jurisdictions.initial = jj.value("initial", "");
        for (const auto& cj : jj.value("changes", json::array()))
            s.jurisdictions.changes.push_back(
                {cj.value("tick", Tick{0}), cj.value("profile", "")});
    } else {
        s.jurisdictions.profiles.push_back(JurisdictionProfile{"default", 0.5, false, 3});
        s.jurisdictions.initial = "default";
    }

    if (j.contains("detection")) {
        const auto& d = j["detection"];
        s.detection.k_sigma = d.value("k_sigma", 6.0);
        s.detection.warmup = d.value("warmup", 200L);
        s.detection.entropy_tau = d.value("entropy_tau", -1.0);
        s.detection.tol_k = d.value("tol_k", 6.0);
        s.detection.disagreement_window = d.value("disagreement_window", 100);
        s.detection.meaning_window = d.value("meaning_window", 50);
        s.detection.ensemble_window = d.value("ensemble_window", 100);
        s.detection.freeze_enabled = d.value("baseline_freeze", true);
    }

    if (j.contains("fusion")) {
        const auto& fj = j["fusion"];
        s.fusion.corroboration = fj.value("corroboration", 2);
        s.fusion.window = fj.value("window", 5);
        for (auto it = fj.value("escalation_overrides", json::object()).begin();
             it != fj.value("escalation_overrides", json::object()).end(); ++it) {
            try {
                s.fusion.escalation_overrides[attack_kind_from_string(it.key())] =
                    it.value().get<int>();
            } catch (const ValidationError& e) {
                issues.push_back(std::string("fusion: ") + e.what());
            }
        }
    }

    if (j.contains("routing")) {
        for (auto it = j["routing"].begin(); it != j["routing"].end(); ++it) {
            try {
                s.routing[detector_from_string(it.key())] =
                    agent_from_string(it.value().get<std::string>());
            } catch (const ValidationError& e) {
                issues.push_back(std::string("routing: ") + e.what());
            }
        }
    }

    if (j.contains("failover")) {
        const auto& fj = j["failover"];
        s.failover.quiet_period = fj.value("quiet_period", Tick{50});
        if (fj.contains("shadow_priority")) {
            for (const auto& idj : fj["shadow_priority"]) {
                const std::string id = idj.get<std::string>();
                int idx = -1;
                for (std::size_t m = 0; m < s.models.size(); ++m)
                    if (s.models[m].id == id) idx = static_cast<int>(m);
                if (idx < 0)
                    issues.push_back("failover.shadow_priority: unknown model '" + id + "'");
                else
                    s.failover.shadow_priority.push_back(idx);
            }
        }
    }

    if (j.contains("bus")) {
        for (auto it = j["bus"].value("topic_delays", json::object()).begin();
             it != j["bus"].value("topic_delays", json::object()).end(); ++it) {
            try {
                s.topic_delays[topic_from_string(it.key())] = it.value().get<Tick>();
            } catch (const ConfigError& e) {
                issues.push_back(std::string("bus: ") + e.what());
            }
        }
    }

    if (j.contains("sim")) {
        s.telemetry_every_n_ticks = j["sim"].value("telemetry_every_n_ticks", 1);
        s.log_all_verdicts = j["sim"].value("log_all_verdicts", true);
    }

    if (j.contains("metadata")) s.metadata_json = j["metadata"].dump();
    return s;
}

}  // namespace

std::vector<std::string> validate_and_resolve(Scenario& s) {
    std::vector<std::string> issues;

    if (!is_safe_name(s.name)) issues.push_back("name: must be a short [A-Za-z0-9_.-] identifier");
    if (s.horizon < 1) issues.push_back("horizon: empty run (horizon must be >= 1)");

    if (s.grid.tile_count() == 0) {
        issues.push_back("grid: no tiles");
        return issues;  // everything below needs a grid
    }
    for (int i = 0; i < s.grid.tile_count(); ++i)
        if (s.grid.tile(i).baseline_rate < 0.0)
            issues.push_back("grid: tile " + std::to_string(i) + " baseline_rate must be >= 0");
    if (!s.grid.has_modality(Modality::Comm))
        issues.push_back("grid: comm modality required (network attack surface)");

    double mix_sum = 0.0;
    for (const auto& [m, p] : s.workload.modality_mix) {
        mix_sum += p;
        if (p < 0.0) issues.push_back("workload.modality_mix: negative probability");
        if (p > 0.0 && !s.grid.has_modality(m))
            issues.push_back("workload.modality_mix: modality '" + std::string(to_string(m)) +
                             "' not present on the grid");
    }
    if (std::abs(mix_sum - 1.0) > 1e-9)
        issues.push_back("workload.modality_mix: probabilities must sum to 1");
    if (s.workload.label_space < 2) issues.push_back("workload.label_space: K must be >= 2");
    if (!s.workload.label_weights.empty()) {
        if (s.workload.label_weights.size() != static_cast<std::size_t>(s.workload.label_space)) {
            issues.push_back("workload.label_weights: must have label_space entries");
        } else {
            double sum = 0.0;
            for (double w : s.workload.label_weights) {
                sum += w;
                if (w < 0.0) issues.push_back("workload.label_weights: negative weight");
            }
            if (std::abs(sum - 1.0) > 1e-9)
                issues.push_back("workload.label_weights: weights must sum to 1");
        }
    }
    if (s.workload.meaning_classes < 0)
        issues.push_back("workload.meaning_classes: must be >= 0");
    if (s.workload.count.value < 0.0) issues.push_back("workload.count: must be >= 0");
    if (s.workload.network.packets_std < 0.0 || s.workload.network.identities_std < 0.0)
        issues.push_back("workload.network: stds must be >= 0");
    if (s.workload.telemetry_uplink_every_n < 0)
        issues.push_back("workload.telemetry_uplink_every_n: must be >= 0");
    if (s.sensors.noise.thermal < 0.0 || s.sensors.noise.power < 0.0 ||
        s.sensors.noise.activity < 0.0)
        issues.push_back("sensors.noise: stds must be >= 0");

    int primaries = 0;
    for (std::size_t i = 0; i < s.models.size(); ++i) {
        ModelSpec& m = s.models[i];
        if (!is_safe_name(m.id)) issues.push_back("models: id '" + m.id + "' is not a safe name");
        if (m.role == ModelRole::Primary) ++primaries;
        if (m.accuracy < 0.0 || m.accuracy > 1.0)
            issues.push_back("models: '" + m.id + "' accuracy must be in [0,1]");
        for (std::size_t k = i + 1; k < s.models.size(); ++k)
            if (s.models[k].id == m.id) issues.push_back("models: duplicate id '" + m.id + "'");
        if (!m.meaning_map.empty()) {
            if (m.meaning_map.size() != static_cast<std::size_t>(s.workload.label_space))
                issues.push_back("models: '" + m.id + "' meaning_map must have label_space entries");
            for (int cls : m.meaning_map)
                if (cls < 0 || cls >= s.workload.meaning_class_count())
                    issues.push_back("models: '" + m.id + "' meaning_map entry out of range");
        }
    }
    if (primaries != 1) issues.push_back("models: exactly one primary required");

    for (std::size_t i = 0; i < s.attacks.size(); ++i) {
        AttackEvent& ev = s.attacks[i];
        if (!ev.target.model_id.empty()) {
            ev.target.model_index = -1;
            for (std::size_t m = 0; m < s.models.size(); ++m)
                if (s.models[m].id == ev.target.model_id) ev.target.model_index = static_cast<int>(m);
        }
        if (ev.onset < 0)
            issues.push_back("attacks[" + std::to_string(i) + "]: onset must be >= 0");
        if (ev.onset + ev.duration > s.horizon)
            issues.push_back("attacks[" + std::to_string(i) + "] (" +
                             std::string(to_string(ev.kind)) + "): onset " +
                             std::to_string(ev.onset) + " + duration " +
                             std::to_string(ev.duration) + " exceeds horizon " +
                             std::to_string(s.horizon));
        auto target_issues =
            validate_attack_target(ev, i, s.grid, s.models, s.workload.label_space);
        issues.insert(issues.end(), target_issues.begin(), target_issues.end());
    }

    if (s.jurisdictions.profiles.empty()) {
        issues.push_back("jurisdictions: at least one profile required");
    } else {
        bool initial_found = false;
        for (std::size_t i = 0; i < s.jurisdictions.profiles.size(); ++i) {
            const auto& p = s.jurisdictions.profiles[i];
            if (!is_safe_name(p.id))
                issues.push_back("jurisdictions: profile id '" + p.id + "' is not a safe name");
            if (p.min_confidence < 0.0 || p.min_confidence > 1.0)
                issues.push_back("jurisdictions: '" + p.id + "' min_confidence must be in [0,1]");
            if (p.max_low_conf_streak < 1)
                issues.push_back("jurisdictions: '" + p.id + "' max_low_conf_streak must be >= 1");
            if (p.id == s.jurisdictions.initial) initial_found = true;
            for (std::size_t k = i + 1; k < s.jurisdictions.profiles.size(); ++k)
                if (s.jurisdictions.profiles[k].id == p.id)
                    issues.push_back("jurisdictions: duplicate profile '" + p.id + "'");
        }
        if (!initial_found)
            issues.push_back("jurisdictions: initial profile '" + s.jurisdictions.initial +
                             "' not declared");
        for (const auto& c : s.jurisdictions.changes) {
            if (c.tick < 0 || c.tick >= s.horizon)
                issues.push_back("jurisdictions: change at tick " + std::to_string(c.tick) +
                                 " outside the horizon");
            bool found = false;
            for (const auto& p : s.jurisdictions.profiles)
                if (p.id == c.profile) found = true;
            if (!found)
                issues.push_back("jurisdictions: change to unknown profile '" + c.profile + "'");
        }
        std::stable_sort(s.jurisdictions.changes.begin(), s.jurisdictions.changes.end(),
                         [](const auto& a, const auto& b) { return a.tick < b.tick; });
    }

    if (s.detection.k_sigma <= 0.0) issues.push_back("detection.k_sigma: must be > 0");
    if (s.detection.warmup < 1) issues.push_back("detection.warmup: must be >= 1");
    if (s.detection.tol_k <= 0.0) issues.push_back("detection.tol_k: must be > 0");
    if (s.detection.disagreement_window < 1 || s.detection.meaning_window < 1 ||
        s.detection.ensemble_window < 1)
        issues.push_back("detection: windows must be >= 1");
    if (s.fusion.corroboration < 1) issues.push_back("fusion.corroboration: must be >= 1");
    if (s.fusion.window < 1) issues.push_back("fusion.window: must be >= 1");
    if (s.failover.quiet_period < 1) issues.push_back("failover.quiet_period: must be >= 1");
    if (s.telemetry_every_n_ticks < 1)
        issues.push_back("sim.telemetry_every_n_ticks: must be >= 1");

    // Default shadow priority: active shadows in roster order.
    if (s.failover.shadow_priority.empty())
        for (std::size_t i = 0; i < s.models.size(); ++i)
            if (s.models[i].role == ModelRole::Shadow && s.models[i].mode == ModelMode::Active)
                s.failover.shadow_priority.push_back(static_cast<int>(i));

    return issues;
}

Scenario scenario_from_json_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(origin + ": " + e.what());
    }
    std::vector<std::string> issues;
    Scenario s;
    try {
        s = parse_scenario(j, issues);
    } catch (const json::exception& e) {
        issues.push_back(origin + ": " + e.what());
        throw ValidationError(std::move(issues));
    }
    auto more = validate_and_resolve(s);
    issues.insert(issues.end(), more.begin(), more.end());
    if (!issues.empty()) {
        for (auto& issue : issues) issue = origin + ": " + issue;
        throw ValidationError(std::move(issues));
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario", path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return scenario_from_json_text(text, path);
}

std::string canonical_json(const Scenario& s) {
    ordered_json j;
    j["schema_version"] = s.schema_version;
    j["name"] = s.name;
    j["horizon"] = s.horizon;

    ordered_json grid;
    grid["rows"] = s.grid.rows();
    grid["cols"] = s.grid.cols();
    auto& tiles = grid["tiles"] = ordered_json::array();
    for (const Tile& t : s.grid.tiles()) {
        ordered_json tj;
        tj["modality"] = std::string(to_string(t.modality));
        tj["baseline_rate"] = t.baseline_rate;
        tiles.push_back(std::move(tj));
    }
    j["grid"] = std::move(grid);

    ordered_json sensors;
    sensors["noise"] = {{"thermal", s.sensors.noise.thermal},
                        {"power", s.sensors.noise.power},
                        {"activity", s.sensors.noise.activity}};
    sensors["thermal_coeff"] = {{"base", s.sensors.thermal.base},
                                {"per_activity", s.sensors.thermal.per_activity}};
    sensors["power_coeff"] = {{"base", s.sensors.power.base},
                              {"per_activity", s.sensors.power.per_activity}};
    sensors["active_bank"] = std::string(to_string(s.initial_bank));
    j["sensors"] = std::move(sensors);

    ordered_json workload;
    workload["count"] = {
        {"kind", s.workload.count.kind == CountDistribution::Kind::Constant ? "constant" : "poisson"},
        {"value", s.workload.count.value}};
    ordered_json mix;
    for (const auto& [m, p] : s.workload.modality_mix) mix[std::string(to_string(m))] = p;
    workload["modality_mix"] = std::move(mix);
    workload["label_space"] = s.workload.label_space;
    if (!s.workload.label_weights.empty()) workload["label_weights"] = s.workload.label_weights;
    workload["meaning_classes"] = s.workload.meaning_classes;
    workload["network"] = {{"packets_mean", s.workload.network.packets_mean},
                           {"packets_std", s.workload.network.packets_std},
                           {"identities_mean", s.workload.network.identities_mean},
                           {"identities_std", s.workload.network.identities_std}};
    workload["telemetry_uplink_every_n"] = s.workload.telemetry_uplink_every_n;
    j["workload"] = std::move(workload);

    auto& models = j["models"] = ordered_json::array();
    for (const ModelSpec& m : s.models) {
        ordered_json mj;
        mj["id"] = m.id;
        mj["role"] = std::string(to_string(m.role));
        mj["mode"] = std::string(to_string(m.mode));
        mj["accuracy"] = m.accuracy;
        mj["confidence_jitter"] = m.confidence_jitter;
        if (!m.meaning_map.empty()) mj["meaning_map"] = m.meaning_map;
        models.push_back(std::move(mj));
    }

    auto& attacks = j["attacks"] = ordered_json::array();
    for (const AttackEvent& ev : s.attacks) {
        ordered_json aj;
        aj["kind"] = std::string(to_string(ev.kind));
        aj["onset"] = ev.onset;
        aj["duration"] = ev.duration;
        aj["intensity"] = ev.intensity;
        ordered_json tj = ordered_json::object();
        if (ev.target.tile_row) tj["tile"] = {*ev.target.tile_row, *ev.target.tile_col};
        if (ev.target.modality) tj["modality"] = std::string(to_string(*ev.target.modality));
        if (!ev.target.model_id.empty()) tj["model"] = ev.target.model_id;
        if (ev.target.bank) tj["bank"] = std::string(to_string(*ev.target.bank));
        if (ev.target.trigger_label >= 0) tj["trigger_label"] = ev.target.trigger_label;
        if (ev.target.emit_label >= 0) tj["emit_label"] = ev.target.emit_label;
        if (!tj.empty()) aj["target"] = std::move(tj);
        attacks.push_back(std::move(aj));
    }

    ordered_json jur;
    auto& profiles = jur["profiles"] = ordered_json::array();
    for (const auto& p : s.jurisdictions.profiles) {
        ordered_json pj;
        pj["id"] = p.id;
        pj["min_confidence"] = p.min_confidence;
        pj["export_prohibited"] = p.export_prohibited;
        pj["max_low_conf_streak"] = p.max_low_conf_streak;
        profiles.push_back(std::move(pj));
    }
    jur["initial"] = s.jurisdictions.initial;
    auto& changes = jur["changes"] = ordered_json::array();
    for (const auto& c : s.jurisdictions.changes)
        changes.push_back({{"tick", c.tick}, {"profile", c.profile}});
    j["jurisdictions"] = std::move(jur);

    j["detection"] = {{"k_sigma", s.detection.k_sigma},
                      {"warmup", s.detection.warmup},
                      {"entropy_tau", s.detection.entropy_tau},
                      {"tol_k", s.detection.tol_k},
                      {"disagreement_window", s.detection.disagreement_window},
                      {"meaning_window", s.detection.meaning_window},
                      {"ensemble_window", s.detection.ensemble_window},
                      {"baseline_freeze", s.detection.freeze_enabled}};

    ordered_json fusion;
    fusion["corroboration"] = s.fusion.corroboration;
    fusion["window"] = s.fusion.window;
    ordered_json overrides = ordered_json::object();
    for (const auto& [kind, count] : s.fusion.escalation_overrides)
        overrides[std::string(to_string(kind))] = count;
    fusion["escalation_overrides"] = std::move(overrides);
    j["fusion"] = std::move(fusion);

    ordered_json routing = ordered_json::object();
    for (const auto& [det, agent] : s.routing)
        routing[std::string(to_string(det))] = std::string(to_string(agent));
    j["routing"] = std::move(routing);

    ordered_json failover;
    failover["quiet_period"] = s.failover.quiet_period;
    auto& prio = failover["shadow_priority"] = ordered_json::array();
    for (int idx : s.failover.shadow_priority)
        prio.push_back(s.models[static_cast<std::size_t>(idx)].id);
    j["failover"] = std::move(failover);

    ordered_json delays = ordered_json::object();
    for (const auto& [topic, delay] : s.topic_delays)
        delays[std::string(to_string(topic))] = delay;
    j["bus"] = {{"topic_delays", std::move(delays)}};

    j["sim"] = {{"telemetry_every_n_ticks", s.telemetry_every_n_ticks},
                {"log_all_verdicts", s.log_all_verdicts}};

    j["metadata"] = json::parse(s.metadata_json);
    return j.dump();
}

}  // namespace guard
