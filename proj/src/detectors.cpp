#include "guard/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "guard/errors.hpp"
#include "guard/strutil.hpp"

namespace guard {

double ChannelBaseline::stddev() const { return std::sqrt(variance()); }

namespace {

struct DetName {
    DetectorId id;
    std::string_view name;
};

constexpr DetName kDetNames[] = {
    {DetectorId::ZScore, "zscore"},        {DetectorId::SemanticRegion, "region"},
    {DetectorId::CrossVerify, "xver"},     {DetectorId::SemanticEntropy, "entropy"},
    {DetectorId::SensorCrossValidate, "xval"}, {DetectorId::NetworkTraffic, "net"},
    {DetectorId::ShadowEnsemble, "ens"},
};

constexpr std::string_view kChannelKindNames[] = {
    "act", "th", "pw", "share", "resid", "packets", "ids", "xver", "meaning", "ens",
};

}  // namespace

std::string_view to_string(DetectorId d) {
    for (const auto& dn : kDetNames)
        if (dn.id == d) return dn.name;
    return "?";
}

DetectorId detector_from_string(std::string_view s) {
    for (const auto& dn : kDetNames)
        if (dn.name == s) return dn.id;
    throw ValidationError("unknown detector: '" + std::string(s) + "'");
}

std::string ChannelId::to_string() const {
    std::string out(kChannelKindNames[static_cast<std::size_t>(kind)]);
    switch (kind) {
        case Kind::TileActivity:
        case Kind::TileThermal:
        case Kind::TilePower:
            out += ':';
            out += guard::to_string(bank);
            out += ':';
            out += canon_i64(index);
            break;
        case Kind::ModalityShare:
            out += ':';
            out += guard::to_string(static_cast<Modality>(index));
            break;
        case Kind::TileResidual:
            out += ':';
            out += canon_i64(index);
            break;
        default:
            break;
    }
    return out;
}

ChannelId ChannelId::from_string(std::string_view s) {
    auto parts = split(s, ':');
    ChannelId ch;
    bool found = false;
    for (std::size_t k = 0; k < std::size(kChannelKindNames); ++k) {
        if (kChannelKindNames[k] == parts[0]) {
            ch.kind = static_cast<Kind>(k);
            found = true;
            break;
        }
    }
    if (!found) throw ValidationError("unknown channel: '" + std::string(s) + "'");
    switch (ch.kind) {
        case Kind::TileActivity:
        case Kind::TileThermal:
        case Kind::TilePower:
            if (parts.size() != 3) throw ValidationError("malformed channel: '" + std::string(s) + "'");
            ch.bank = bank_from_string(parts[1]);
            ch.index = static_cast<std::uint16_t>(parse_i64(parts[2]));
            break;
        case Kind::ModalityShare:
            if (parts.size() != 2) throw ValidationError("malformed channel: '" + std::string(s) + "'");
            ch.index = static_cast<std::uint16_t>(modality_from_string(parts[1]));
            break;
        case Kind::TileResidual:
            if (parts.size() != 2) throw ValidationError("malformed channel: '" + std::string(s) + "'");
            ch.index = static_cast<std::uint16_t>(parse_i64(parts[1]));
            break;
        default:
            if (parts.size() != 1) throw ValidationError("malformed channel: '" + std::string(s) + "'");
            break;
    }
    return ch;
}

DetectorVerdict zscore_alert(const ChannelBaseline& b, double x, double k) {
    DetectorVerdict v;
    v.threshold = k;
    if (!b.warmed_up()) {
        v.abstained = true;
        return v;
    }
    const double sd = b.stddev();
    if (sd == 0.0) {
        if (x == b.mean) {
            v.score = 0.0;
        } else {
            v.score = std::numeric_limits<double>::infinity();
            v.fired = true;
        }
        return v;
    }
    v.score = std::abs(x - b.mean) / sd;
    v.fired = v.score > k;
    return v;
}

double semantic_entropy(const MeaningDistribution& d) {
    if (d.total <= 0) return 0.0;
    const double total = static_cast<double>(d.total);
    double se = 0.0;
    for (long c : d.counts) {
        if (c <= 0) continue;
        const double p = static_cast<double>(c) / total;
        se -= p * std::log(p);
    }
    return se;
}

double cross_verify_rate(const Decision& primary, std::span<const Decision> shadows) {
    if (shadows.empty()) return 0.0;
    std::size_t disagree = 0;
    for (const Decision& s : shadows)
        if (s.emitted_label != primary.emitted_label) ++disagree;
    return static_cast<double>(disagree) / static_cast<double>(shadows.size());
}

std::vector<DetectorId> expected_detectors(AttackKind k) {
    switch (k) {
        case AttackKind::AdversarialPerturbation:
            return {DetectorId::CrossVerify, DetectorId::SemanticEntropy};
        case AttackKind::Spoofing:
            return {DetectorId::SensorCrossValidate};
        case AttackKind::PromptInjection:
        case AttackKind::MultimodalJailbreak:
            return {DetectorId::SemanticRegion, DetectorId::SemanticEntropy, DetectorId::ZScore};
        case AttackKind::DDoSFlood:
            return {DetectorId::ZScore, DetectorId::NetworkTraffic};
        case AttackKind::Sybil:
            return {DetectorId::NetworkTraffic};
        case AttackKind::DataPoisoning:
            return {DetectorId::CrossVerify, DetectorId::ShadowEnsemble};
        case AttackKind::VoltageGlitch:
            return {DetectorId::ZScore, DetectorId::CrossVerify};
        case AttackKind::TrojanTrigger:
            return {DetectorId::ZScore, DetectorId::CrossVerify};
        case AttackKind::SideChannelProbe:
            return {DetectorId::ZScore};
        case AttackKind::NetworkOutage:
            return {DetectorId::NetworkTraffic};
        case AttackKind::MalwareOveractivity:
            return {DetectorId::ZScore, DetectorId::NetworkTraffic};
    }
    return {};
}

AttackClassSet channel_hypothesis(const ChannelId& ch, const TileGrid& grid) {
    using Kind = ChannelId::Kind;
    switch (ch.kind) {
        case Kind::TileActivity:
        case Kind::TileThermal: {
            if (grid.tile(ch.index).modality == Modality::Comm)
                return {AttackKind::DDoSFlood, AttackKind::MalwareOveractivity};
            return {AttackKind::PromptInjection, AttackKind::MultimodalJailbreak,
                    AttackKind::DataPoisoning, AttackKind::TrojanTrigger,
                    AttackKind::MalwareOveractivity};
        }
        case Kind::TilePower:
            return {AttackKind::VoltageGlitch, AttackKind::SideChannelProbe, AttackKind::DDoSFlood,
                    AttackKind::MalwareOveractivity};
        case Kind::ModalityShare:
            return {AttackKind::PromptInjection, AttackKind::MultimodalJailbreak,
                    AttackKind::DataPoisoning};
        case Kind::TileResidual:
            return {AttackKind::Spoofing};
        case Kind::NetPackets:
            return {AttackKind::DDoSFlood, AttackKind::MalwareOveractivity};
        case Kind::NetIdentities:
            return {AttackKind::Sybil};
        case Kind::Disagreement:
            return {AttackKind::AdversarialPerturbation, AttackKind::DataPoisoning,
                    AttackKind::VoltageGlitch, AttackKind::TrojanTrigger};
        case Kind::MeaningEntropy:
            return {AttackKind::PromptInjection, AttackKind::MultimodalJailbreak,
                    AttackKind::AdversarialPerturbation, AttackKind::DataPoisoning,
                    AttackKind::VoltageGlitch, AttackKind::TrojanTrigger};
        case Kind::EnsembleDisagreement:
            return {AttackKind::AdversarialPerturbation, AttackKind::DataPoisoning};
    }
    return {};
}

double DetectorConfig::resolved_tau(int meaning_classes) const {
    if (entropy_tau >= 0.0) return entropy_tau;
    return 0.5 * std::log(static_cast<double>(std::max(meaning_classes, 2)));
}

DetectorBank::DetectorBank(const TileGrid& grid, const SensorConfig& sensors,
                           const DetectorConfig& cfg, int meaning_classes)
    : grid_(&grid),
      cfg_(cfg),
      noise_activity_(sensors.noise.activity),
      meaning_classes_(meaning_classes),
      meaning_dist_(meaning_classes) {
    const std::size_t n = static_cast<std::size_t>(grid.tile_count());
    ChannelBaseline proto;
    proto.warmup = cfg.warmup;
    for (std::size_t b = 0; b < 2; ++b) {
        activity_[b].assign(n, proto);
        thermal_[b].assign(n, proto);
        power_[b].assign(n, proto);
    }
    residual_.assign(n, proto);
    share_.fill(proto);
    packets_ = proto;
    identities_ = proto;
    disagree_base_ = proto;
    ensemble_base_ = proto;
}

ChannelBaseline& DetectorBank::tile_baseline_mut(ChannelId::Kind kind, SensorBank bank, int tile) {
    const std::size_t b = static_cast<std::size_t>(bank);
    const std::size_t t = static_cast<std::size_t>(tile);
    switch (kind) {
        case ChannelId::Kind::TileActivity: return activity_[b][t];
        case ChannelId::Kind::TileThermal: return thermal_[b][t];
        default: return power_[b][t];
    }
}

const ChannelBaseline& DetectorBank::tile_baseline(ChannelId::Kind kind, SensorBank bank,
                                                   int tile) const {
    return const_cast<DetectorBank*>(this)->tile_baseline_mut(kind, bank, tile);
}

const ChannelBaseline& DetectorBank::share_baseline(Modality m) const {
    return share_[static_cast<std::size_t>(m)];
}

DetectorVerdict DetectorBank::eval_tile(Tick tick, ChannelId::Kind kind, SensorBank bank, int tile,
                                        double x, bool emit_verdict, bool freeze_all) {
    ChannelBaseline& base = tile_baseline_mut(kind, bank, tile);
    DetectorVerdict v = zscore_alert(base, x, cfg_.k_sigma);
    v.tick = tick;
    v.detector = DetectorId::ZScore;
    v.channel = ChannelId{kind, bank, static_cast<std::uint16_t>(tile)};
    if (emit_verdict) v.hypothesis = channel_hypothesis(v.channel, *grid_);
    if (!freeze_all && !v.fired) base.update(x);
    return v;
}

std::vector<DetectorVerdict> DetectorBank::step(Tick tick, const DetectorInputs& in) {
    std::vector<DetectorVerdict> out;
    const bool freeze = cfg_.freeze_enabled && in.freeze_all;

    if (in.frame != nullptr) {
        const TelemetryFrame& frame = *in.frame;
        const SensorBank passive = other_bank(in.active_bank);

        // Redundant-bank cross-validation runs first: a firing residual
        // freezes that tile's activity baselines on both banks, so a
        // sub-threshold spoof cannot creep into the per-bank means that
        // identify the deviating bank.
        const double resid_threshold = cfg_.tol_k * std::sqrt(2.0) * noise_activity_;
        std::vector<DetectorVerdict> resid_verdicts;
        std::vector<bool> resid_fired(static_cast<std::size_t>(grid_->tile_count()), false);
        for (int t = 0; t < grid_->tile_count(); ++t) {
            const std::size_t ti = static_cast<std::size_t>(t);
            const double resid =
                frame.bank(SensorBank::A)[ti].activity - frame.bank(SensorBank::B)[ti].activity;
            DetectorVerdict v;
            v.tick = tick;
            v.detector = DetectorId::SensorCrossValidate;
            v.channel = ChannelId{ChannelId::Kind::TileResidual, SensorBank::A,
                                  static_cast<std::uint16_t>(t)};
            v.threshold = resid_threshold;
            v.hypothesis = channel_hypothesis(v.channel, *grid_);
            ChannelBaseline& base = residual_[ti];
            if (!base.warmed_up()) {
                v.abstained = true;
                base.update(resid);
            } else {
                v.score = resid;
                v.fired = std::abs(resid) > resid_threshold;
                if (v.fired) {
                    // Blame the bank whose reading sits further from its own
                    // learned baseline.
                    resid_fired[ti] = true;
                    const auto& ba = activity_[0][ti];
                    const auto& bb = activity_[1][ti];
                    const double za = ba.stddev() > 0.0
                                          ? std::abs(frame.bank(SensorBank::A)[ti].activity - ba.mean) / ba.stddev()
                                          : 0.0;
                    const double zb = bb.stddev() > 0.0
                                          ? std::abs(frame.bank(SensorBank::B)[ti].activity - bb.mean) / bb.stddev()
                                          : 0.0;
                    v.suspect_bank = za >= zb ? SensorBank::A : SensorBank::B;
                    v.has_suspect_bank = true;
                } else if (!freeze) {
                    base.update(resid);
                }
            }
            resid_verdicts.push_back(v);
        }

        // Per-tile z channels. Only the active bank produces verdicts; the
        // passive bank's baselines keep learning (with the same fired-sample
        // rejection) so it is warm the moment a failover switches to it.
        for (int t = 0; t < grid_->tile_count(); ++t) {
            const bool act_freeze = freeze || resid_fired[static_cast<std::size_t>(t)];
            const TileReading& r = frame.bank(in.active_bank)[static_cast<std::size_t>(t)];
            out.push_back(eval_tile(tick, ChannelId::Kind::TileActivity, in.active_bank, t,
                                    r.activity, true, act_freeze));
            out.push_back(
                eval_tile(tick, ChannelId::Kind::TileThermal, in.active_bank, t, r.thermal, true, freeze));
            out.push_back(
                eval_tile(tick, ChannelId::Kind::TilePower, in.active_bank, t, r.power, true, freeze));
            const TileReading& p = frame.bank(passive)[static_cast<std::size_t>(t)];
            eval_tile(tick, ChannelId::Kind::TileActivity, passive, t, p.activity, false,
                      act_freeze);
            eval_tile(tick, ChannelId::Kind::TileThermal, passive, t, p.thermal, false, freeze);
            eval_tile(tick, ChannelId::Kind::TilePower, passive, t, p.power, false, freeze);
        }

        // Modality shares on the active bank, one-sided (spikes upward are
        // the signal; a modality starved by someone else's spike is not an
        // anomaly of its own). Readings are clamped at zero for the share
        // computation so a noisy negative cannot flip signs.
        double total = 0.0;
        std::array<double, kModalityCount> modal_act{};
        for (int t = 0; t < grid_->tile_count(); ++t) {
            const double a =
                std::max(frame.bank(in.active_bank)[static_cast<std::size_t>(t)].activity, 0.0);
            modal_act[static_cast<std::size_t>(grid_->tile(t).modality)] += a;
            total += a;
        }
        std::vector<DetectorVerdict> share_verdicts;
        int fired_shares = 0;
        for (Modality m : grid_->present_modalities()) {
            const std::size_t mi = static_cast<std::size_t>(m);
            DetectorVerdict v;
            v.tick = tick;
            v.detector = DetectorId::SemanticRegion;
            v.channel = ChannelId{ChannelId::Kind::ModalityShare, SensorBank::A,
                                  static_cast<std::uint16_t>(m)};
            v.threshold = cfg_.k_sigma;
            v.hypothesis = channel_hypothesis(v.channel, *grid_);
            if (total <= 1e-12) {
                v.abstained = true;
            } else {
                const double x = modal_act[mi] / total;
                ChannelBaseline& base = share_[mi];
                if (!base.warmed_up()) {
                    v.abstained = true;
                    base.update(x);
                } else {
                    const double sd = base.stddev();
                    if (sd == 0.0) {
                        v.score = x == base.mean ? 0.0 : std::numeric_limits<double>::infinity();
                        v.fired = x > base.mean;
                    } else {
                        v.score = (x - base.mean) / sd;
                        v.fired = v.score > cfg_.k_sigma;
                    }
                    if (!freeze && !v.fired) base.update(x);
                }
            }
            if (v.fired) ++fired_shares;
            share_verdicts.push_back(v);
        }
        // A spike across three or more modalities at once looks like
        // system-wide abnormal demand, not a modal attack.
        if (fired_shares >= 3)
            for (auto& v : share_verdicts)
                if (v.fired) v.hypothesis = AttackClassSet{AttackKind::DataPoisoning};
        out.insert(out.end(), share_verdicts.begin(), share_verdicts.end());
        out.insert(out.end(), resid_verdicts.begin(), resid_verdicts.end());
    }

    if (in.network != nullptr) {
        const NetworkSample& net = *in.network;
        if (net.status == NetworkStatus::Outage) {
            // The channel itself is the observation: report the outage
            // instead of abstaining.
            DetectorVerdict v;
            v.tick = tick;
            v.detector = DetectorId::NetworkTraffic;
            v.channel = ChannelId{ChannelId::Kind::NetPackets, SensorBank::A, 0};
            v.score = 1.0;
            v.threshold = 0.0;
            v.fired = true;
            v.hypothesis = AttackClassSet{AttackKind::NetworkOutage};
            out.push_back(v);
        } else if (net.status == NetworkStatus::Up) {
            DetectorVerdict vp = zscore_alert(packets_, net.packets, cfg_.k_sigma);
            vp.tick = tick;
            vp.detector = DetectorId::NetworkTraffic;
            vp.channel = ChannelId{ChannelId::Kind::NetPackets, SensorBank::A, 0};
            vp.hypothesis = channel_hypothesis(vp.channel, *grid_);
            if (!freeze && !vp.fired) packets_.update(net.packets);
            out.push_back(vp);

            DetectorVerdict vi = zscore_alert(identities_, net.identities, cfg_.k_sigma);
            vi.tick = tick;
            vi.detector = DetectorId::NetworkTraffic;
            vi.channel = ChannelId{ChannelId::Kind::NetIdentities, SensorBank::A, 0};
            vi.hypothesis = channel_hypothesis(vi.channel, *grid_);
            if (!freeze && !vi.fired) identities_.update(net.identities);
            out.push_back(vi);
        }
        // Isolated: the guard layer cut the link itself; nothing to observe.
    }

    if (in.primary != nullptr && !in.shadows.empty()) {
        const double rate = cross_verify_rate(*in.primary, in.shadows);
        disagree_window_.push_back(rate);
        if (static_cast<int>(disagree_window_.size()) > cfg_.disagreement_window)
            disagree_window_.pop_front();
        DetectorVerdict v;
        v.tick = tick;
        v.detector = DetectorId::CrossVerify;
        v.channel = ChannelId{ChannelId::Kind::Disagreement, SensorBank::A, 0};
        v.threshold = cfg_.k_sigma;
        v.hypothesis = channel_hypothesis(v.channel, *grid_);
        if (static_cast<int>(disagree_window_.size()) < cfg_.disagreement_window) {
            v.abstained = true;
        } else {
            double sum = 0.0;
            for (double r : disagree_window_) sum += r;
            const double x = sum / static_cast<double>(disagree_window_.size());
            DetectorVerdict z = zscore_alert(disagree_base_, x, cfg_.k_sigma);
            v.score = z.score;
            v.fired = z.fired;
            v.abstained = z.abstained;
            if (!freeze && !v.fired) disagree_base_.update(x);
        }
        out.push_back(v);
    } else if (in.primary != nullptr) {
        DetectorVerdict v;
        v.tick = tick;
        v.detector = DetectorId::CrossVerify;
        v.channel = ChannelId{ChannelId::Kind::Disagreement, SensorBank::A, 0};
        v.abstained = true;  // no shadows to verify against
        out.push_back(v);
    }

    {
        // Entropy of the meaning classes of recent routed outputs.
        DetectorVerdict v;
        v.tick = tick;
        v.detector = DetectorId::SemanticEntropy;
        v.channel = ChannelId{ChannelId::Kind::MeaningEntropy, SensorBank::A, 0};
        v.threshold = cfg_.resolved_tau(meaning_classes_);
        v.hypothesis = channel_hypothesis(v.channel, *grid_);
        if (static_cast<int>(meaning_window_.size()) < cfg_.meaning_window ||
            routed_seen_ < cfg_.warmup) {
            v.abstained = true;
        } else {
            v.score = semantic_entropy(meaning_dist_);
            v.fired = v.score > v.threshold;
        }
        out.push_back(v);
    }

    if (in.shadows.size() >= 2) {
        // Internal consistency of the shadow ensemble: fraction of shadows
        // disagreeing with the shadow-majority label.
        std::vector<int> labels;
        labels.reserve(in.shadows.size());
        for (const Decision& d : in.shadows) labels.push_back(d.emitted_label);
        int majority = labels[0];
        int best = 0;
        for (int cand : labels) {
            int c = 0;
            for (int l : labels)
                if (l == cand) ++c;
            if (c > best || (c == best && cand < majority)) {
                best = c;
                majority = cand;
            }
        }
        std::size_t disagree = 0;
        for (int l : labels)
            if (l != majority) ++disagree;
        const double rate = static_cast<double>(disagree) / static_cast<double>(labels.size());
        ensemble_window_.push_back(rate);
        if (static_cast<int>(ensemble_window_.size()) > cfg_.ensemble_window)
            ensemble_window_.pop_front();
        DetectorVerdict v;
        v.tick = tick;
        v.detector = DetectorId::ShadowEnsemble;
        v.channel = ChannelId{ChannelId::Kind::EnsembleDisagreement, SensorBank::A, 0};
        v.threshold = cfg_.k_sigma;
        v.hypothesis = channel_hypothesis(v.channel, *grid_);
        if (static_cast<int>(ensemble_window_.size()) < cfg_.ensemble_window) {
            v.abstained = true;
        } else {
            double sum = 0.0;
            for (double r : ensemble_window_) sum += r;
            const double x = sum / static_cast<double>(ensemble_window_.size());
            DetectorVerdict z = zscore_alert(ensemble_base_, x, cfg_.k_sigma);
            v.score = z.score;
            v.fired = z.fired;
            v.abstained = z.abstained;
            if (!freeze && !v.fired) ensemble_base_.update(x);
        }
        out.push_back(v);
    }

    return out;
}

void DetectorBank::observe_routed(const Decision& routed) {
    ++routed_seen_;
    meaning_window_.push_back(routed.meaning_class);
    meaning_dist_.add(routed.meaning_class);
    if (static_cast<int>(meaning_window_.size()) > cfg_.meaning_window) {
        meaning_dist_.remove(meaning_window_.front());
        meaning_window_.pop_front();
    }
}

}  // namespace guard
