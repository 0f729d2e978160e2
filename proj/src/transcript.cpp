#include "guard/transcript.hpp"

#include <fstream>
#include <map>

#include "guard/errors.hpp"
#include "guard/strutil.hpp"

namespace guard {

namespace {

void append_kv(std::string& line, std::string_view key, std::string_view value) {
    line += ' ';
    line += key;
    line += '=';
    line += value;
}

std::string serialize_bank(const std::vector<TileReading>& tiles) {
    std::string out;
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        if (i) out += ';';
        out += canon_double(tiles[i].activity);
        out += ':';
        out += canon_double(tiles[i].thermal);
        out += ':';
        out += canon_double(tiles[i].power);
    }
    return out.empty() ? "-" : out;
}

std::vector<TileReading> parse_bank(std::string_view s) {
    std::vector<TileReading> out;
    if (s == "-") return out;
    for (auto tile : split(s, ';')) {
        auto parts = split(tile, ':');
        if (parts.size() != 3) throw ValidationError("malformed tile reading: '" + std::string(tile) + "'");
        out.push_back({parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2])});
    }
    return out;
}

std::string serialize_evidence(const std::vector<VerdictRef>& refs) {
    if (refs.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        if (i) out += '|';
        out += canon_i64(refs[i].tick);
        out += '@';
        out += to_string(refs[i].detector);
        out += '@';
        out += refs[i].channel.to_string();
    }
    return out;
}

std::vector<VerdictRef> parse_evidence(std::string_view s) {
    std::vector<VerdictRef> out;
    if (s == "-") return out;
    for (auto ref : split(s, '|')) {
        auto parts = split(ref, '@');
        if (parts.size() != 3) throw ValidationError("malformed evidence ref: '" + std::string(ref) + "'");
        out.push_back({parse_i64(parts[0]), detector_from_string(parts[1]),
                       ChannelId::from_string(parts[2])});
    }
    return out;
}

using Fields = std::map<std::string_view, std::string_view>;

std::string_view need(const Fields& f, std::string_view key) {
    auto it = f.find(key);
    if (it == f.end())
        throw ValidationError("transcript event missing field '" + std::string(key) + "'");
    return it->second;
}

}  // namespace

std::string serialize_event(const BusEvent& ev) {
    std::string line = "e";
    append_kv(line, "t", canon_i64(ev.tick));
    append_kv(line, "top", to_string(ev.topic));
    append_kv(line, "seq", canon_u64(ev.sequence));

    if (const auto* r = std::get_if<TelemetryRec>(&ev.payload)) {
        append_kv(line, "bank", to_string(r->active_bank));
        append_kv(line, "a", serialize_bank(r->frame.bank(SensorBank::A)));
        append_kv(line, "b", serialize_bank(r->frame.bank(SensorBank::B)));
    } else if (const auto* r = std::get_if<NetworkRec>(&ev.payload)) {
        append_kv(line, "packets", canon_double(r->sample.packets));
        append_kv(line, "ids", canon_double(r->sample.identities));
        append_kv(line, "status", to_string(r->sample.status));
        append_kv(line, "uplink", r->sample.telemetry_uplink ? "1" : "0");
    } else if (const auto* r = std::get_if<VerdictRec>(&ev.payload)) {
        const DetectorVerdict& v = r->verdict;
        append_kv(line, "det", to_string(v.detector));
        append_kv(line, "ch", v.channel.to_string());
        append_kv(line, "score", canon_double(v.score));
        append_kv(line, "thr", canon_double(v.threshold));
        append_kv(line, "fired", v.fired ? "1" : "0");
        append_kv(line, "abst", v.abstained ? "1" : "0");
        append_kv(line, "hyp", v.hypothesis.to_string());
        append_kv(line, "suspect", v.has_suspect_bank ? to_string(v.suspect_bank) : "-");
    } else if (const auto* r = std::get_if<AlertRec>(&ev.payload)) {
        const Alert& a = r->alert;
        append_kv(line, "agent", to_string(a.agent));
        append_kv(line, "sev", to_string(a.severity));
        append_kv(line, "hyp", a.hypothesis.to_string());
        append_kv(line, "suspect", a.suspect_bank ? to_string(*a.suspect_bank) : "-");
        append_kv(line, "ev", serialize_evidence(a.evidence));
        append_kv(line, "note", a.note.empty() ? "-" : a.note);
    } else if (const auto* r = std::get_if<StateChangeRec>(&ev.payload)) {
        append_kv(line, "from", to_string(r->change.from));
        append_kv(line, "to", to_string(r->change.to));
        append_kv(line, "reason", r->change.reason.empty() ? "-" : r->change.reason);
        append_kv(line, "bank", to_string(r->active_bank));
        append_kv(line, "route", canon_i64(r->route_model));
    } else if (const auto* r = std::get_if<DecisionRec>(&ev.payload)) {
        append_kv(line, "model", canon_i64(r->source_model));
        append_kv(line, "label", canon_i64(r->decision.emitted_label));
        append_kv(line, "truth", canon_i64(r->decision.truth_label));
        append_kv(line, "conf", canon_double(r->decision.confidence));
        append_kv(line, "meaning", canon_i64(r->decision.meaning_class));
        append_kv(line, "degraded", r->degraded ? "1" : "0");
    } else if (const auto* r = std::get_if<ComplianceRec>(&ev.payload)) {
        append_kv(line, "profile", r->record.profile);
        append_kv(line, "rule", to_string(r->record.rule));
        append_kv(line, "outcome", to_string(r->record.outcome));
        append_kv(line, "subject", r->record.subject.empty() ? "-" : r->record.subject);
    }
    return line;
}

BusEvent parse_event(std::string_view line) {
    auto tokens = split(line, ' ');
    if (tokens.empty() || tokens[0] != "e")
        throw ValidationError("not an event line: '" + std::string(line) + "'");
    Fields f;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        auto [k, v] = split_kv(tokens[i]);
        f[k] = v;
    }

    BusEvent ev;
    ev.tick = parse_i64(need(f, "t"));
    ev.topic = topic_from_string(need(f, "top"));
    ev.sequence = static_cast<std::uint32_t>(parse_i64(need(f, "seq")));

    switch (ev.topic) {
        case Topic::Telemetry: {
            TelemetryRec r;
            r.active_bank = bank_from_string(need(f, "bank"));
            r.frame.tick = ev.tick;
            r.frame.banks[0] = parse_bank(need(f, "a"));
            r.frame.banks[1] = parse_bank(need(f, "b"));
            ev.payload = std::move(r);
            break;
        }
        case Topic::Network: {
            NetworkRec r;
            r.sample.packets = parse_double(need(f, "packets"));
            r.sample.identities = parse_double(need(f, "ids"));
            const auto status = need(f, "status");
            r.sample.status = status == "up"        ? NetworkStatus::Up
                              : status == "outage"  ? NetworkStatus::Outage
                                                    : NetworkStatus::Isolated;
            r.sample.telemetry_uplink = need(f, "uplink") == "1";
            ev.payload = std::move(r);
            break;
        }
        case Topic::Verdict: {
            VerdictRec r;
            DetectorVerdict& v = r.verdict;
            v.tick = ev.tick;
            v.detector = detector_from_string(need(f, "det"));
            v.channel = ChannelId::from_string(need(f, "ch"));
            v.score = parse_double(need(f, "score"));
            v.threshold = parse_double(need(f, "thr"));
            v.fired = need(f, "fired") == "1";
            v.abstained = need(f, "abst") == "1";
            v.hypothesis = AttackClassSet::from_string(need(f, "hyp"));
            if (auto s = need(f, "suspect"); s != "-") {
                v.suspect_bank = bank_from_string(s);
                v.has_suspect_bank = true;
            }
            ev.payload = std::move(r);
            break;
        }
        case Topic::Alert: {
            AlertRec r;
            Alert& a = r.alert;
            a.tick = ev.tick;
            a.agent = agent_from_string(need(f, "agent"));
            a.severity = severity_from_string(need(f, "sev"));
            a.hypothesis = AttackClassSet::from_string(need(f, "hyp"));
            if (auto s = need(f, "suspect"); s != "-") a.suspect_bank = bank_from_string(s);
            a.evidence = parse_evidence(need(f, "ev"));
            if (auto n = need(f, "note"); n != "-") a.note = std::string(n);
            ev.payload = std::move(r);
            break;
        }
        case Topic::StateChange: {
            StateChangeRec r;
            r.change.tick = ev.tick;
            r.change.from = guard_state_from_string(need(f, "from"));
            r.change.to = guard_state_from_string(need(f, "to"));
            if (auto reason = need(f, "reason"); reason != "-") r.change.reason = std::string(reason);
            r.active_bank = bank_from_string(need(f, "bank"));
            r.route_model = static_cast<int>(parse_i64(need(f, "route")));
            ev.payload = std::move(r);
            break;
        }
        case Topic::Decision: {
            DecisionRec r;
            r.source_model = static_cast<int>(parse_i64(need(f, "model")));
            r.decision.tick = ev.tick;
            r.decision.model = r.source_model;
            r.decision.emitted_label = static_cast<int>(parse_i64(need(f, "label")));
            r.decision.truth_label = static_cast<int>(parse_i64(need(f, "truth")));
            r.decision.confidence = parse_double(need(f, "conf"));
            r.decision.meaning_class = static_cast<int>(parse_i64(need(f, "meaning")));
            r.degraded = need(f, "degraded") == "1";
            ev.payload = std::move(r);
            break;
        }
        case Topic::Compliance: {
            ComplianceRec r;
            r.record.tick = ev.tick;
            r.record.profile = std::string(need(f, "profile"));
            r.record.rule = compliance_rule_from_string(need(f, "rule"));
            r.record.outcome = compliance_outcome_from_string(need(f, "outcome"));
            if (auto s = need(f, "subject"); s != "-") r.record.subject = std::string(s);
            ev.payload = std::move(r);
            break;
        }
    }
    return ev;
}

std::string RunTranscript::serialize() const {
    std::string out = "guardsim-transcript v" + std::to_string(header.schema_version) + "\n";
    out += "scenario " + header.scenario_json + "\n";
    out += "run seed=" + canon_u64(header.seed) + " scenario=" + header.scenario_name +
           " horizon=" + canon_i64(header.horizon) + "\n";
    for (const BusEvent& ev : events) {
        out += serialize_event(ev);
        out += '\n';
    }
    out += "metrics\n";
    out += metrics_text;
    if (!metrics_text.empty() && metrics_text.back() != '\n') out += '\n';
    out += "end\n";
    return out;
}

RunTranscript RunTranscript::parse(const std::string& text) {
    RunTranscript t;
    auto lines = split(text, '\n');
    std::size_t i = 0;
    auto next_line = [&]() -> std::string_view {
        if (i >= lines.size()) throw ValidationError("transcript: truncated");
        return lines[i++];
    };

    const auto magic = next_line();
    if (magic != "guardsim-transcript v1")
        throw ValidationError("transcript: unsupported header '" + std::string(magic) + "'");

    const auto scenario_line = next_line();
    if (!scenario_line.starts_with("scenario "))
        throw ValidationError("transcript: missing scenario echo");
    t.header.scenario_json = std::string(scenario_line.substr(9));

    const auto run_line = next_line();
    if (!run_line.starts_with("run "))
        throw ValidationError("transcript: missing run line");
    for (auto token : split(run_line.substr(4), ' ')) {
        auto [k, v] = split_kv(token);
        if (k == "seed") t.header.seed = static_cast<std::uint64_t>(parse_i64(v));
        else if (k == "scenario") t.header.scenario_name = std::string(v);
        else if (k == "horizon") t.header.horizon = parse_i64(v);
    }

    while (true) {
        const auto line = next_line();
        if (line == "metrics") break;
        t.events.push_back(parse_event(line));
    }
    while (true) {
        const auto line = next_line();
        if (line == "end") break;
        t.metrics_text += std::string(line);
        t.metrics_text += '\n';
    }
    return t;
}

RunTranscript RunTranscript::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open transcript", path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse(text);
}

void RunTranscript::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open transcript for writing", path);
    out << serialize();
    if (!out) throw IoError("failed writing transcript", path);
}

std::uint64_t RunTranscript::digest() const { return fnv1a(serialize()); }

}  // namespace guard
