#pragma once

#include <string>
#include <vector>

namespace guard {

/// Command-line entry point (run / sweep / overhead / report). Returns the
/// process exit code: 0 success, 1 validation error, 2 I/O error.
int cli_main(std::vector<std::string> args);

/// Aggregate table for a seed sweep; aggregate TPR is the exact mean of the
/// per-seed TPRs.
struct SweepRow {
    std::uint64_t seed = 0;
    bool has_tpr = false;
    double tpr = 0.0;
    double availability_pct = 0.0;
    long false_positive_confirmed = 0;
    bool has_switchover = false;
    double mean_switchover_ticks = 0.0;
};

std::string render_sweep_table(const std::string& scenario_name, const std::vector<SweepRow>& rows);

}  // namespace guard
