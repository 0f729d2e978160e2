#include <doctest.h>

#include <cmath>
#include <limits>

#include "guard/errors.hpp"
#include "guard/transcript.hpp"

using namespace guard;

namespace {

RunTranscript sample_transcript() {
    RunTranscript t;
    t.header.scenario_name = "sample";
    t.header.seed = 9;
    t.header.horizon = 2;
    t.header.scenario_json = "{\"schema_version\":1}";

    TelemetryRec tel;
    tel.active_bank = SensorBank::B;
    tel.frame.tick = 0;
    tel.frame.banks[0] = {{1.5, 40.25, 1.0125}, {0.0, 39.9, 0.98}};
    tel.frame.banks[1] = {{1.25, 40.5, 1.0}, {-0.125, 40.0, 1.0}};
    t.events.push_back({0, Topic::Telemetry, 0, tel});

    NetworkRec net;
    net.sample.packets = 101.5;
    net.sample.identities = 5;
    net.sample.status = NetworkStatus::Outage;
    t.events.push_back({0, Topic::Network, 1, net});

    VerdictRec v;
    v.verdict.tick = 0;
    v.verdict.detector = DetectorId::SensorCrossValidate;
    v.verdict.channel = ChannelId{ChannelId::Kind::TileResidual, SensorBank::A, 1};
    v.verdict.score = 20.5;
    v.verdict.threshold = 8.485;
    v.verdict.fired = true;
    v.verdict.hypothesis = {AttackKind::Spoofing};
    v.verdict.suspect_bank = SensorBank::A;
    v.verdict.has_suspect_bank = true;
    t.events.push_back({0, Topic::Verdict, 2, v});

    AlertRec a;
    a.alert.tick = 1;
    a.alert.agent = AgentId::Hardware;
    a.alert.severity = Severity::Confirmed;
    a.alert.hypothesis = {AttackKind::Spoofing};
    a.alert.suspect_bank = SensorBank::A;
    a.alert.evidence.push_back({0, DetectorId::SensorCrossValidate,
                                ChannelId{ChannelId::Kind::TileResidual, SensorBank::A, 1}});
    t.events.push_back({1, Topic::Alert, 0, a});

    StateChangeRec sc;
    sc.change = {1, GuardStateKind::Normal, GuardStateKind::FailoverActive, "confirmed:spoofing"};
    sc.active_bank = SensorBank::B;
    sc.route_model = 1;
    t.events.push_back({1, Topic::StateChange, 1, sc});

    DecisionRec d;
    d.decision = {1, 1, 3, 3, 0.9875, 3};
    d.source_model = 1;
    t.events.push_back({1, Topic::Decision, 2, d});

    ComplianceRec c;
    c.record = {1, "default", ComplianceRule::AuditLog, ComplianceOutcome::Pass, "decision@1"};
    t.events.push_back({1, Topic::Compliance, 3, c});

    t.metrics_text = "guardsim-metrics v1\nscenario=sample\n";
    return t;
}

}  // namespace

TEST_CASE("transcript serialization round-trips byte-identically") {
    const RunTranscript original = sample_transcript();
    const std::string text = original.serialize();
    const RunTranscript parsed = RunTranscript::parse(text);
    CHECK(parsed.serialize() == text);
    CHECK(parsed.header.seed == 9);
    CHECK(parsed.header.scenario_name == "sample");
    CHECK(parsed.events.size() == original.events.size());
    CHECK(parsed.metrics_text == original.metrics_text);
}

TEST_CASE("event fields survive the round trip exactly") {
    const RunTranscript original = sample_transcript();
    const RunTranscript parsed = RunTranscript::parse(original.serialize());

    const auto& tel = std::get<TelemetryRec>(parsed.events[0].payload);
    CHECK(tel.active_bank == SensorBank::B);
    CHECK(tel.frame.banks[1][1].activity == -0.125);

    const auto& v = std::get<VerdictRec>(parsed.events[2].payload);
    CHECK(v.verdict.fired);
    CHECK(v.verdict.channel == ChannelId{ChannelId::Kind::TileResidual, SensorBank::A, 1});
    CHECK(v.verdict.hypothesis.contains(AttackKind::Spoofing));
    CHECK(v.verdict.has_suspect_bank);

    const auto& a = std::get<AlertRec>(parsed.events[3].payload);
    REQUIRE(a.alert.evidence.size() == 1);
    CHECK(a.alert.evidence[0].detector == DetectorId::SensorCrossValidate);

    const auto& d = std::get<DecisionRec>(parsed.events[5].payload);
    CHECK(d.decision.confidence == 0.9875);
}

TEST_CASE("infinite verdict scores serialize and parse") {
    RunTranscript t;
    t.header.scenario_json = "{}";
    VerdictRec v;
    v.verdict.score = std::numeric_limits<double>::infinity();
    v.verdict.fired = true;
    t.events.push_back({0, Topic::Verdict, 0, v});
    const RunTranscript parsed = RunTranscript::parse(t.serialize());
    const auto& pv = std::get<VerdictRec>(parsed.events[0].payload);
    CHECK(std::isinf(pv.verdict.score));
}

TEST_CASE("malformed transcripts are rejected with a diagnosis") {
    CHECK_THROWS_AS(RunTranscript::parse("nonsense"), ValidationError);
    CHECK_THROWS_AS(RunTranscript::parse("guardsim-transcript v1\n"), ValidationError);
}
