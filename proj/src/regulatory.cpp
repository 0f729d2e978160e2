#include "guard/regulatory.hpp"

#include "guard/errors.hpp"
#include "guard/strutil.hpp"

namespace guard {

std::string_view to_string(ComplianceRule r) {
    switch (r) {
        case ComplianceRule::AuditLog: return "audit_log";
        case ComplianceRule::MinConfidence: return "min_confidence";
        case ComplianceRule::ExportProhibition: return "export_prohibition";
        case ComplianceRule::LowConfStreak: return "low_conf_streak";
        case ComplianceRule::JurisdictionChange: return "jurisdiction_change";
    }
    return "?";
}

std::string_view to_string(ComplianceOutcome o) {
    switch (o) {
        case ComplianceOutcome::Pass: return "pass";
        case ComplianceOutcome::Violation: return "violation";
        case ComplianceOutcome::Intervention: return "intervention";
    }
    return "?";
}

ComplianceRule compliance_rule_from_string(std::string_view s) {
    if (s == "audit_log") return ComplianceRule::AuditLog;
    if (s == "min_confidence") return ComplianceRule::MinConfidence;
    if (s == "export_prohibition") return ComplianceRule::ExportProhibition;
    if (s == "low_conf_streak") return ComplianceRule::LowConfStreak;
    if (s == "jurisdiction_change") return ComplianceRule::JurisdictionChange;
    throw ValidationError("unknown compliance rule: '" + std::string(s) + "'");
}

ComplianceOutcome compliance_outcome_from_string(std::string_view s) {
    if (s == "pass") return ComplianceOutcome::Pass;
    if (s == "violation") return ComplianceOutcome::Violation;
    if (s == "intervention") return ComplianceOutcome::Intervention;
    throw ValidationError("unknown compliance outcome: '" + std::string(s) + "'");
}

RegulatoryAgent::RegulatoryAgent(std::vector<JurisdictionProfile> profiles,
                                 const std::string& initial)
    : profiles_(std::move(profiles)) {
    if (profiles_.empty()) throw ValidationError("jurisdictions: at least one profile required");
    bool found = false;
    for (std::size_t i = 0; i < profiles_.size(); ++i) {
        if (profiles_[i].id == initial) {
            active_ = i;
            found = true;
        }
    }
    if (!found) throw ValidationError("jurisdictions: unknown initial profile '" + initial + "'");
}

ComplianceRecord RegulatoryAgent::handle_jurisdiction_change(Tick tick,
                                                             const std::string& profile_id) {
    std::optional<std::size_t> next;
    for (std::size_t i = 0; i < profiles_.size(); ++i)
        if (profiles_[i].id == profile_id) next = i;
    if (!next) throw ValidationError("jurisdiction change to unknown profile '" + profile_id + "'");

    ComplianceRecord rec;
    rec.tick = tick;
    rec.profile = profile_id;
    rec.rule = ComplianceRule::JurisdictionChange;
    rec.outcome = ComplianceOutcome::Pass;
    rec.subject = "from:" + profiles_[active_].id;
    active_ = *next;
    low_conf_streak_ = 0;  // a change resets counters even to the same profile
    return rec;
}

ComplianceResult RegulatoryAgent::check_decision(const Decision& routed, bool degraded,
                                                 bool telemetry_exported, Tick tick) {
    const JurisdictionProfile& p = profiles_[active_];
    ComplianceResult result;
    const std::string subject = "decision@" + canon_i64(routed.tick) +
                                (degraded ? std::string(":degraded") : std::string());

    // Mandatory audit logging: one record per routed decision.
    result.records.push_back(
        {tick, p.id, ComplianceRule::AuditLog, ComplianceOutcome::Pass, subject});

    const bool low_conf = routed.confidence < p.min_confidence;
    result.records.push_back({tick, p.id, ComplianceRule::MinConfidence,
                              low_conf ? ComplianceOutcome::Violation : ComplianceOutcome::Pass,
                              subject});

    if (telemetry_exported && p.export_prohibited)
        result.records.push_back({tick, p.id, ComplianceRule::ExportProhibition,
                                  ComplianceOutcome::Violation,
                                  "telemetry_uplink@" + canon_i64(tick)});

    low_conf_streak_ = low_conf ? low_conf_streak_ + 1 : 0;
    if (low_conf_streak_ > p.max_low_conf_streak) {
        result.records.push_back(
            {tick, p.id, ComplianceRule::LowConfStreak, ComplianceOutcome::Intervention, subject});
        result.intervention = true;
        result.intervention_reason = "low-confidence streak " + std::to_string(low_conf_streak_) +
                                     " exceeds " + std::to_string(p.max_low_conf_streak);
    }
    return result;
}

}  // namespace guard
