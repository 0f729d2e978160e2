#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "guard/models.hpp"
#include "guard/workload.hpp"

namespace guard {

/// Fixed small rule set; the paper-level capability is the check loop, not
/// a policy language.
struct JurisdictionProfile {
    std::string id;
    double min_confidence = 0.5;     // below this a decision is flagged
    bool export_prohibited = false;  // raw telemetry must not cross the network
    int max_low_conf_streak = 3;     // consecutive flags before intervention
};

enum class ComplianceRule : std::uint8_t {
    AuditLog,            // every routed decision is logged
    MinConfidence,
    ExportProhibition,
    LowConfStreak,
    JurisdictionChange,
};

enum class ComplianceOutcome : std::uint8_t { Pass, Violation, Intervention };

std::string_view to_string(ComplianceRule r);
std::string_view to_string(ComplianceOutcome o);
ComplianceRule compliance_rule_from_string(std::string_view s);
ComplianceOutcome compliance_outcome_from_string(std::string_view s);

struct ComplianceRecord {
    Tick tick = 0;
    std::string profile;
    ComplianceRule rule = ComplianceRule::AuditLog;
    ComplianceOutcome outcome = ComplianceOutcome::Pass;
    std::string subject;  // reference to the triggering event
};

struct ComplianceResult {
    std::vector<ComplianceRecord> records;
    /// Set when a rule demanded intervention; the run loop publishes it as
    /// an Advisory alert for the fusion layer.
    bool intervention = false;
    std::string intervention_reason;
};

/// Per-decision compliance checking under the active jurisdiction, with
/// scripted jurisdiction changes.
class RegulatoryAgent {
public:
    RegulatoryAgent(std::vector<JurisdictionProfile> profiles, const std::string& initial);

    const JurisdictionProfile& active() const { return profiles_[active_]; }

    /// Switch profiles; counters reset even when the profile is identical.
    ComplianceRecord handle_jurisdiction_change(Tick tick, const std::string& profile_id);

    /// Evaluate every rule against this tick's routed decision.
    ComplianceResult check_decision(const Decision& routed, bool degraded, bool telemetry_exported,
                                    Tick tick);

private:
    std::vector<JurisdictionProfile> profiles_;
    std::size_t active_ = 0;
    int low_conf_streak_ = 0;
};

}  // namespace guard
