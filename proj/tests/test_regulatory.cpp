#include <doctest.h>

#include "guard/errors.hpp"
#include "guard/regulatory.hpp"

using namespace guard;

namespace {

std::vector<JurisdictionProfile> two_profiles() {
    return {JurisdictionProfile{"default", 0.5, false, 3},
            JurisdictionProfile{"strict", 0.8, true, 2}};
}

Decision decision_with_confidence(double conf, Tick tick = 0) {
    Decision d;
    d.tick = tick;
    d.confidence = conf;
    return d;
}

int count_outcome(const ComplianceResult& r, ComplianceRule rule, ComplianceOutcome outcome) {
    int n = 0;
    for (const auto& rec : r.records)
        if (rec.rule == rule && rec.outcome == outcome) ++n;
    return n;
}

}  // namespace

TEST_CASE("confident decisions pass the minimum-confidence rule") {
    RegulatoryAgent agent(two_profiles(), "default");
    const auto r = agent.check_decision(decision_with_confidence(0.9), false, false, 0);
    CHECK(count_outcome(r, ComplianceRule::MinConfidence, ComplianceOutcome::Pass) == 1);
    CHECK(count_outcome(r, ComplianceRule::MinConfidence, ComplianceOutcome::Violation) == 0);
    CHECK(count_outcome(r, ComplianceRule::AuditLog, ComplianceOutcome::Pass) == 1);
    CHECK_FALSE(r.intervention);
}

TEST_CASE("telemetry export under a prohibition is a violation") {
    RegulatoryAgent agent(two_profiles(), "strict");
    const auto r = agent.check_decision(decision_with_confidence(0.9), false, true, 0);
    CHECK(count_outcome(r, ComplianceRule::ExportProhibition, ComplianceOutcome::Violation) == 1);

    RegulatoryAgent lax(two_profiles(), "default");
    const auto r2 = lax.check_decision(decision_with_confidence(0.9), false, true, 0);
    CHECK(count_outcome(r2, ComplianceRule::ExportProhibition, ComplianceOutcome::Violation) == 0);
}

TEST_CASE("a low-confidence streak past the limit mandates intervention") {
    RegulatoryAgent agent(two_profiles(), "default");  // limit 3
    for (Tick t = 0; t < 3; ++t) {
        const auto r = agent.check_decision(decision_with_confidence(0.2, t), false, false, t);
        CHECK_FALSE(r.intervention);
    }
    const auto r = agent.check_decision(decision_with_confidence(0.2, 3), false, false, 3);
    CHECK(r.intervention);
    CHECK(count_outcome(r, ComplianceRule::LowConfStreak, ComplianceOutcome::Intervention) == 1);

    // A confident decision resets the streak.
    agent.check_decision(decision_with_confidence(0.9, 4), false, false, 4);
    const auto r2 = agent.check_decision(decision_with_confidence(0.2, 5), false, false, 5);
    CHECK_FALSE(r2.intervention);
}

TEST_CASE("jurisdiction changes apply from their tick and reset counters") {
    RegulatoryAgent agent(two_profiles(), "default");
    // tick 99 under default (0.5): 0.6 passes.
    auto r = agent.check_decision(decision_with_confidence(0.6, 99), false, false, 99);
    CHECK(count_outcome(r, ComplianceRule::MinConfidence, ComplianceOutcome::Violation) == 0);

    const auto rec = agent.handle_jurisdiction_change(100, "strict");
    CHECK(rec.rule == ComplianceRule::JurisdictionChange);
    CHECK(rec.profile == "strict");
    CHECK(agent.active().id == "strict");

    // tick 100 under strict (0.8): the same confidence now violates.
    r = agent.check_decision(decision_with_confidence(0.6, 100), false, false, 100);
    CHECK(count_outcome(r, ComplianceRule::MinConfidence, ComplianceOutcome::Violation) == 1);
}

TEST_CASE("changing to the identical profile still resets the streak") {
    RegulatoryAgent agent(two_profiles(), "default");
    for (Tick t = 0; t < 3; ++t)
        agent.check_decision(decision_with_confidence(0.2, t), false, false, t);
    agent.handle_jurisdiction_change(3, "default");
    // Streak was reset; one more low-confidence tick does not intervene.
    const auto r = agent.check_decision(decision_with_confidence(0.2, 3), false, false, 3);
    CHECK_FALSE(r.intervention);
}

TEST_CASE("unknown profiles are validation errors") {
    CHECK_THROWS_AS(RegulatoryAgent(two_profiles(), "nowhere"), ValidationError);
    RegulatoryAgent agent(two_profiles(), "default");
    CHECK_THROWS_AS(agent.handle_jurisdiction_change(5, "nowhere"), ValidationError);
}

TEST_CASE("violations are monotone in strictness on a replayed stream") {
    // Same decision stream checked under increasing min-confidence.
    std::vector<double> confs{0.3, 0.9, 0.55, 0.7, 0.45, 0.95, 0.6};
    long prev_violations = -1;
    for (double min_conf : {0.2, 0.5, 0.65, 0.9}) {
        RegulatoryAgent agent({JurisdictionProfile{"p", min_conf, false, 100}}, "p");
        long violations = 0;
        for (std::size_t i = 0; i < confs.size(); ++i) {
            const auto r = agent.check_decision(
                decision_with_confidence(confs[i], static_cast<Tick>(i)), false, false,
                static_cast<Tick>(i));
            violations += count_outcome(r, ComplianceRule::MinConfidence,
                                        ComplianceOutcome::Violation);
        }
        CHECK(violations >= prev_violations);
        prev_violations = violations;
    }
}
