#include "guard/agents.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "guard/errors.hpp"

#include <json.hpp>

namespace guard {

std::string_view to_string(AgentId a) {
    switch (a) {
        case AgentId::Behavioral: return "behavioral";
        case AgentId::Hardware: return "hardware";
        case AgentId::ShadowProcessing: return "shadow_processing";
        case AgentId::Failover: return "failover";
        case AgentId::Regulatory: return "regulatory";
    }
    return "?";
}

AgentId agent_from_string(std::string_view s) {
    if (s == "behavioral") return AgentId::Behavioral;
    if (s == "hardware") return AgentId::Hardware;
    if (s == "shadow_processing") return AgentId::ShadowProcessing;
    if (s == "failover") return AgentId::Failover;
    if (s == "regulatory") return AgentId::Regulatory;
    throw ValidationError("unknown agent: '" + std::string(s) + "'");
}

AgentId default_owner(DetectorId d) {
    switch (d) {
        case DetectorId::CrossVerify:
        case DetectorId::SemanticEntropy:
            return AgentId::Behavioral;
        case DetectorId::ZScore:
        case DetectorId::SemanticRegion:
        case DetectorId::SensorCrossValidate:
        case DetectorId::NetworkTraffic:
            return AgentId::Hardware;
        case DetectorId::ShadowEnsemble:
            return AgentId::ShadowProcessing;
    }
    return AgentId::Hardware;
}

RoutingTable default_routing() {
    RoutingTable table;
    for (int i = 0; i < kDetectorCount; ++i) {
        const auto d = static_cast<DetectorId>(i);
        table[d] = default_owner(d);
    }
    return table;
}

std::string_view to_string(Severity s) {
    switch (s) {
        case Severity::Advisory: return "advisory";
        case Severity::Suspected: return "suspected";
        case Severity::Confirmed: return "confirmed";
    }
    return "?";
}

Severity severity_from_string(std::string_view s) {
    if (s == "advisory") return Severity::Advisory;
    if (s == "suspected") return Severity::Suspected;
    if (s == "confirmed") return Severity::Confirmed;
    throw ValidationError("unknown severity: '" + std::string(s) + "'");
}

std::optional<Alert> MonitoringAgent::step(Tick tick,
                                           std::span<const DetectorVerdict> owned_fired) {
    while (!window_.empty() && window_.front().tick <= tick - policy_.window)
        window_.pop_front();

    for (const DetectorVerdict& v : owned_fired) {
        Entry e;
        e.tick = tick;
        e.ref = VerdictRef{v.tick, v.detector, v.channel};
        e.hypothesis = v.hypothesis;
        if (v.has_suspect_bank) e.suspect_bank = v.suspect_bank;
        window_.push_back(e);
    }

    // Alert only on ticks contributing fresh evidence; a quiet tick inside
    // the window does not repeat the previous alert.
    if (owned_fired.empty()) return std::nullopt;

    Alert alert;
    alert.tick = tick;
    alert.agent = id_;
    AttackClassSet inter = window_.front().hypothesis;
    AttackClassSet uni;
    for (const Entry& e : window_) {
        inter = inter.intersect(e.hypothesis);
        uni = uni.unite(e.hypothesis);
        alert.evidence.push_back(e.ref);
        if (e.suspect_bank && !alert.suspect_bank) alert.suspect_bank = e.suspect_bank;
    }
    alert.hypothesis = inter.empty() ? uni : inter;

    int needed = policy_.corroboration;
    for (const auto& [kind, count] : policy_.escalation_overrides)
        if (alert.hypothesis.contains(kind)) needed = std::min(needed, count);
    alert.severity =
        static_cast<int>(window_.size()) >= needed ? Severity::Confirmed : Severity::Suspected;
    return alert;
}

std::string_view to_string(ThreatKind t) {
    switch (t) {
        case ThreatKind::None: return "none";
        case ThreatKind::Suspect: return "suspect";
        case ThreatKind::Confirmed: return "confirmed";
        case ThreatKind::NetworkDown: return "network_down";
    }
    return "?";
}

SystemThreatLevel fuse(std::span<const Alert> alerts, const FusionPolicy& policy) {
    (void)policy;
    SystemThreatLevel level;
    bool network_down = false;
    AttackClassSet confirmed_inter;
    AttackClassSet confirmed_union;
    bool first_confirmed = true;

    for (const Alert& a : alerts) {
        if (a.hypothesis.contains(AttackKind::NetworkOutage)) network_down = true;
        switch (a.severity) {
            case Severity::Confirmed:
                if (first_confirmed) {
                    confirmed_inter = a.hypothesis;
                    first_confirmed = false;
                } else {
                    confirmed_inter = confirmed_inter.intersect(a.hypothesis);
                }
                confirmed_union = confirmed_union.unite(a.hypothesis);
                if (level.kind < ThreatKind::Confirmed) level.kind = ThreatKind::Confirmed;
                break;
            case Severity::Suspected:
                if (level.kind < ThreatKind::Suspect) level.kind = ThreatKind::Suspect;
                break;
            case Severity::Advisory:
                break;  // logged, never escalates on its own
        }
    }

    if (level.kind == ThreatKind::Confirmed)
        level.hypothesis = confirmed_inter.empty() ? confirmed_union : confirmed_inter;
    if (network_down) {
        // Outage observation outranks everything; concurrent hypotheses stay
        // in the set so the transcript retains them.
        level.hypothesis.insert(AttackKind::NetworkOutage);
        level.kind = ThreatKind::NetworkDown;
    }
    return level;
}

std::vector<double> SignatureStore::features_of(std::span<const DetectorVerdict> bundle,
                                                const TileGrid* grid) {
    std::vector<double> f(static_cast<std::size_t>(kFeatureDim), 0.0);
    if (bundle.empty()) return f;
    std::array<double, kDetectorCount> fired{};
    std::array<double, kDetectorCount> score_sum{};
    std::array<double, kDetectorCount> score_n{};
    std::array<double, kModalityCount> modal{};
    double fired_total = 0.0;
    for (const DetectorVerdict& v : bundle) {
        if (!v.fired) continue;
        const std::size_t d = static_cast<std::size_t>(v.detector);
        fired[d] += 1.0;
        fired_total += 1.0;
        if (std::isfinite(v.score)) {
            score_sum[d] += std::abs(v.score);
            score_n[d] += 1.0;
        }
        if (v.channel.kind == ChannelId::Kind::ModalityShare) {
            modal[v.channel.index] += 1.0;
        } else if (grid != nullptr && (v.channel.kind == ChannelId::Kind::TileActivity ||
                                       v.channel.kind == ChannelId::Kind::TileThermal ||
                                       v.channel.kind == ChannelId::Kind::TilePower ||
                                       v.channel.kind == ChannelId::Kind::TileResidual)) {
            const Modality m = grid->tile(v.channel.index).modality;
            modal[static_cast<std::size_t>(m)] += 1.0;
        }
    }
    if (fired_total == 0.0) return f;
    for (int d = 0; d < kDetectorCount; ++d) {
        f[static_cast<std::size_t>(d)] = fired[static_cast<std::size_t>(d)] / fired_total;
        f[static_cast<std::size_t>(kDetectorCount + d)] =
            score_n[static_cast<std::size_t>(d)] > 0.0
                ? score_sum[static_cast<std::size_t>(d)] / score_n[static_cast<std::size_t>(d)]
                : 0.0;
    }
    for (int m = 0; m < kModalityCount; ++m)
        f[static_cast<std::size_t>(2 * kDetectorCount + m)] =
            modal[static_cast<std::size_t>(m)] / fired_total;
    return f;
}

void SignatureStore::learn(AttackKind cls, std::span<const double> features) {
    auto it = classes_.find(cls);
    if (it == classes_.end()) {
        Stored s;
        s.vec.assign(features.begin(), features.end());
        s.incidents = 1;
        classes_.emplace(cls, std::move(s));
        return;
    }
    Stored& s = it->second;
    for (std::size_t i = 0; i < s.vec.size() && i < features.size(); ++i)
        s.vec[i] = (1.0 - decay_) * s.vec[i] + decay_ * features[i];
    ++s.incidents;
}

namespace {

double cosine(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

}  // namespace

std::pair<std::optional<AttackKind>, double> SignatureStore::match(
    std::span<const double> features) const {
    std::optional<AttackKind> best;
    double best_score = 0.0;
    std::string best_name;
    for (const auto& [cls, stored] : classes_) {
        const double score = cosine(stored.vec, features);
        const std::string name{to_string(cls)};
        if (!best || score > best_score || (score == best_score && name < best_name)) {
            best = cls;
            best_score = score;
            best_name = name;
        }
    }
    if (!best) return {std::nullopt, 0.0};
    return {best, best_score};
}

int SignatureStore::incident_count(AttackKind cls) const {
    auto it = classes_.find(cls);
    return it == classes_.end() ? 0 : it->second.incidents;
}

std::string SignatureStore::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["decay"] = decay_;
    auto& arr = j["classes"] = nlohmann::ordered_json::array();
    for (const auto& [cls, stored] : classes_) {
        nlohmann::ordered_json e;
        e["class"] = std::string(to_string(cls));
        e["incidents"] = stored.incidents;
        e["features"] = stored.vec;
        arr.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

SignatureStore SignatureStore::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("signature store: ") + e.what());
    }
    SignatureStore store(j.value("decay", 0.2));
    for (const auto& e : j.value("classes", nlohmann::json::array())) {
        Stored s;
        s.vec = e.at("features").get<std::vector<double>>();
        s.incidents = e.value("incidents", 1);
        store.classes_[attack_kind_from_string(e.at("class").get<std::string>())] = std::move(s);
    }
    return store;
}

void SignatureStore::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open signature store for writing", path);
    out << to_json();
    if (!out) throw IoError("failed writing signature store", path);
}

SignatureStore SignatureStore::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open signature store", path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

}  // namespace guard
