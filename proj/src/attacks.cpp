#include "guard/attacks.hpp"

#include <algorithm>
#include <cmath>

#include "guard/errors.hpp"
#include "guard/strutil.hpp"

namespace guard {

namespace {

struct KindName {
    AttackKind kind;
    std::string_view name;
};

constexpr KindName kKindNames[] = {
    {AttackKind::AdversarialPerturbation, "adversarial_perturbation"},
    {AttackKind::Spoofing, "spoofing"},
    {AttackKind::PromptInjection, "prompt_injection"},
    {AttackKind::MultimodalJailbreak, "multimodal_jailbreak"},
    {AttackKind::DDoSFlood, "ddos_flood"},
    {AttackKind::Sybil, "sybil"},
    {AttackKind::DataPoisoning, "data_poisoning"},
    {AttackKind::VoltageGlitch, "voltage_glitch"},
    {AttackKind::TrojanTrigger, "trojan_trigger"},
    {AttackKind::SideChannelProbe, "side_channel_probe"},
    {AttackKind::NetworkOutage, "network_outage"},
    {AttackKind::MalwareOveractivity, "malware_overactivity"},
};

}  // namespace

std::string_view to_string(AttackKind k) {
    for (const auto& kn : kKindNames)
        if (kn.kind == k) return kn.name;
    return "?";
}

AttackKind attack_kind_from_string(std::string_view s) {
    for (const auto& kn : kKindNames)
        if (kn.name == s) return kn.kind;
    throw ValidationError("unknown attack kind: '" + std::string(s) + "'");
}

std::vector<AttackKind> AttackClassSet::kinds() const {
    std::vector<AttackKind> out;
    for (int i = 0; i < kAttackKindCount; ++i) {
        const auto k = static_cast<AttackKind>(i);
        if (contains(k)) out.push_back(k);
    }
    return out;
}

std::string AttackClassSet::to_string() const {
    if (empty()) return "-";
    std::string out;
    for (AttackKind k : kinds()) {
        if (!out.empty()) out += ',';
        out += guard::to_string(k);
    }
    return out;
}

AttackClassSet AttackClassSet::from_string(std::string_view csv) {
    AttackClassSet set;
    if (csv == "-" || csv.empty()) return set;
    for (auto part : split(csv, ',')) set.insert(attack_kind_from_string(part));
    return set;
}

SigmaModel SigmaModel::build(const TileGrid& grid, const WorkloadProfile& profile,
                             const SensorConfig& sensors) {
    SigmaModel sm;
    sm.packets = std::max(profile.network.packets_std, 1e-12);
    sm.identities = std::max(profile.network.identities_std, 1e-12);
    const double n = std::max(profile.count.mean(), 1.0);
    sm.activity.reserve(static_cast<std::size_t>(grid.tile_count()));
    sm.power.reserve(static_cast<std::size_t>(grid.tile_count()));
    for (const Tile& tile : grid.tiles()) {
        double mix = 0.0;
        if (auto it = profile.modality_mix.find(tile.modality); it != profile.modality_mix.end())
            mix = it->second;
        const double share_std = std::sqrt(std::max(mix * (1.0 - mix), 0.0) / n);
        const double signal_std = tile.baseline_rate * share_std;
        const double act_var = signal_std * signal_std + sensors.noise.activity * sensors.noise.activity;
        sm.activity.push_back(std::sqrt(std::max(act_var, 1e-24)));
        const double pw_signal = sensors.power.per_activity * signal_std;
        const double pw_var = pw_signal * pw_signal + sensors.noise.power * sensors.noise.power;
        sm.power.push_back(std::sqrt(std::max(pw_var, 1e-24)));
    }
    return sm;
}

namespace {

int resolve_tile(const TileGrid& grid, const AttackTarget& t) {
    return grid.index(*t.tile_row, *t.tile_col);
}

int target_model_or_primary(const AttackTarget& t, const std::vector<ModelSpec>& models) {
    if (t.model_index >= 0) return t.model_index;
    for (std::size_t i = 0; i < models.size(); ++i)
        if (models[i].role == ModelRole::Primary) return static_cast<int>(i);
    return 0;
}

}  // namespace

TickEffects apply_attacks(Tick tick, const std::vector<const AttackEvent*>& active,
                          const TileGrid& grid, const SigmaModel& sigma,
                          const std::vector<ModelSpec>& models, Rng& rng) {
    TickEffects fx(grid.tile_count(), static_cast<int>(models.size()));

    for (const AttackEvent* ev : active) {
        const double i = ev->intensity;
        switch (ev->kind) {
            case AttackKind::DDoSFlood: {
                for (int t : grid.tiles_of(Modality::Comm))
                    fx.telemetry.activity[static_cast<std::size_t>(t)] +=
                        i * sigma.activity[static_cast<std::size_t>(t)];
                fx.packets_multiplier *= 1.0 + i;
                break;
            }
            case AttackKind::MalwareOveractivity: {
                for (int t = 0; t < grid.tile_count(); ++t)
                    fx.telemetry.activity[static_cast<std::size_t>(t)] +=
                        i * sigma.activity[static_cast<std::size_t>(t)];
                fx.packets_multiplier *= 1.0 + i;
                break;
            }
            case AttackKind::Sybil: {
                fx.extra_identities += std::round(i);
                break;
            }
            case AttackKind::DataPoisoning: {
                const int m = target_model_or_primary(ev->target, models);
                auto& mfx = fx.per_model[static_cast<std::size_t>(m)];
                mfx.accuracy_scale *= std::max(0.0, 1.0 - i);
                for (int t = 0; t < grid.tile_count(); ++t)
                    fx.telemetry.activity[static_cast<std::size_t>(t)] +=
                        0.5 * i * sigma.activity[static_cast<std::size_t>(t)];
                break;
            }
            case AttackKind::AdversarialPerturbation: {
                const int m = target_model_or_primary(ev->target, models);
                fx.per_model[static_cast<std::size_t>(m)].accuracy_scale *= std::max(0.0, 1.0 - i);
                break;
            }
            case AttackKind::Spoofing: {
                const int t = resolve_tile(grid, ev->target);
                fx.telemetry.bank_activity_offset[static_cast<std::size_t>(*ev->target.bank)]
                                                 [static_cast<std::size_t>(t)] += i;
                break;
            }
            case AttackKind::PromptInjection:
            case AttackKind::MultimodalJailbreak: {
                for (int t : grid.tiles_of(*ev->target.modality))
                    fx.telemetry.activity[static_cast<std::size_t>(t)] +=
                        i * sigma.activity[static_cast<std::size_t>(t)];
                const int m = target_model_or_primary(ev->target, models);
                auto& mfx = fx.per_model[static_cast<std::size_t>(m)];
                mfx.meaning_flatten = std::min(1.0, mfx.meaning_flatten + i);
                break;
            }
            case AttackKind::VoltageGlitch: {
                const bool hit = rng.uniform01() < std::min(i, 1.0);
                if (hit) {
                    const int m = target_model_or_primary(ev->target, models);
                    fx.per_model[static_cast<std::size_t>(m)].glitch_flip = true;
                    if (ev->target.tile_row) {
                        const int t = resolve_tile(grid, ev->target);
                        fx.telemetry.power[static_cast<std::size_t>(t)] -=
                            i * sigma.power[static_cast<std::size_t>(t)];
                    } else {
                        for (int t = 0; t < grid.tile_count(); ++t)
                            fx.telemetry.power[static_cast<std::size_t>(t)] -=
                                i * sigma.power[static_cast<std::size_t>(t)];
                    }
                }
                break;
            }
            case AttackKind::TrojanTrigger: {
                const int m = target_model_or_primary(ev->target, models);
                auto& mfx = fx.per_model[static_cast<std::size_t>(m)];
                mfx.trojan_active = true;
                mfx.trojan_trigger_label = ev->target.trigger_label;
                mfx.trojan_emit_label = ev->target.emit_label;
                const int t = resolve_tile(grid, ev->target);
                fx.telemetry.activity[static_cast<std::size_t>(t)] +=
                    i * sigma.activity[static_cast<std::size_t>(t)];
                break;
            }
            case AttackKind::SideChannelProbe: {
                // Square wave, period 8: four ticks high, four low.
                const double ripple = ((tick - ev->onset) % 8 < 4) ? 1.0 : -1.0;
                if (ev->target.tile_row) {
                    const int t = resolve_tile(grid, ev->target);
                    fx.telemetry.power[static_cast<std::size_t>(t)] +=
                        ripple * i * sigma.power[static_cast<std::size_t>(t)];
                } else {
                    for (int t = 0; t < grid.tile_count(); ++t)
                        fx.telemetry.power[static_cast<std::size_t>(t)] +=
                            ripple * i * sigma.power[static_cast<std::size_t>(t)];
                }
                break;
            }
            case AttackKind::NetworkOutage: {
                fx.outage = true;
                break;
            }
        }
    }
    return fx;
}

std::vector<const AttackEvent*> AttackTimeline::active_at(Tick t) const {
    std::vector<const AttackEvent*> out;
    for (const auto& ev : *events_)
        if (ev.active_at(t)) out.push_back(&ev);
    return out;
}

std::vector<std::string> validate_attack_target(const AttackEvent& ev, std::size_t position,
                                                const TileGrid& grid,
                                                const std::vector<ModelSpec>& models,
                                                int label_space) {
    std::vector<std::string> issues;
    const std::string where =
        "attacks[" + std::to_string(position) + "] (" + std::string(to_string(ev.kind)) + ")";
    auto complain = [&](const std::string& msg) { issues.push_back(where + ": " + msg); };

    auto check_tile = [&](bool required) {
        if (!ev.target.tile_row && !ev.target.tile_col) {
            if (required) complain("requires a target tile");
            return;
        }
        if (!ev.target.tile_row || !ev.target.tile_col) {
            complain("tile target needs both row and col");
            return;
        }
        if (*ev.target.tile_row < 0 || *ev.target.tile_row >= grid.rows() ||
            *ev.target.tile_col < 0 || *ev.target.tile_col >= grid.cols())
            complain("tile (" + std::to_string(*ev.target.tile_row) + "," +
                     std::to_string(*ev.target.tile_col) + ") outside the grid");
    };
    auto check_model = [&](bool required) {
        if (ev.target.model_id.empty()) {
            if (required) complain("requires a target model");
            return;
        }
        if (ev.target.model_index < 0) complain("unknown model '" + ev.target.model_id + "'");
    };

    if (ev.duration < 1) complain("duration must be >= 1");
    if (ev.intensity < 0.0) complain("intensity must be >= 0");

    switch (ev.kind) {
        case AttackKind::AdversarialPerturbation:
        case AttackKind::DataPoisoning:
            check_model(false);
            break;
        case AttackKind::Spoofing:
            if (!ev.target.bank) complain("requires a target sensor bank");
            check_tile(true);
            break;
        case AttackKind::PromptInjection:
        case AttackKind::MultimodalJailbreak:
            if (!ev.target.modality)
                complain("requires a target modality");
            else if (!grid.has_modality(*ev.target.modality))
                complain("modality '" + std::string(to_string(*ev.target.modality)) +
                         "' not present on the grid");
            check_model(false);
            break;
        case AttackKind::VoltageGlitch:
            check_model(false);
            check_tile(false);
            break;
        case AttackKind::TrojanTrigger: {
            check_model(false);
            check_tile(true);
            if (ev.target.trigger_label < 0 || ev.target.trigger_label >= label_space)
                complain("trigger_label outside the label space");
            if (ev.target.emit_label < 0 || ev.target.emit_label >= label_space)
                complain("emit_label outside the label space");
            else if (ev.target.emit_label == ev.target.trigger_label)
                complain("emit_label must differ from trigger_label");
            break;
        }
        case AttackKind::SideChannelProbe:
            check_tile(false);
            break;
        case AttackKind::DDoSFlood:
            if (!grid.has_modality(Modality::Comm)) complain("grid has no comm tiles to flood");
            break;
        case AttackKind::Sybil:
        case AttackKind::NetworkOutage:
        case AttackKind::MalwareOveractivity:
            break;
    }
    (void)models;
    return issues;
}

}  // namespace guard
