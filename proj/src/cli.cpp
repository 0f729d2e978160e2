#include "guard/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "guard/errors.hpp"
#include "guard/metrics.hpp"
#include "guard/overhead.hpp"
#include "guard/scenario.hpp"
#include "guard/sim.hpp"
#include "guard/strutil.hpp"

#include <CLI11.hpp>

namespace guard {

namespace {

namespace fs = std::filesystem;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing", path);
    out << content;
    if (!out) throw IoError("write failed", path);
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory (" + ec.message() + ")", dir);
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty())
        std::cout << content;
    else
        write_file(out_path, content);
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& spec) {
    const auto pos = spec.find("..");
    if (pos == std::string::npos) {
        const auto s = static_cast<std::uint64_t>(parse_i64(spec));
        return {s, s};
    }
    const auto a = static_cast<std::uint64_t>(parse_i64(spec.substr(0, pos)));
    const auto b = static_cast<std::uint64_t>(parse_i64(spec.substr(pos + 2)));
    if (b < a) throw ValidationError("seed range '" + spec + "': end precedes start");
    return {a, b};
}

int cmd_run(const std::string& scenario_path, std::uint64_t seed, const std::string& out_dir,
            const std::string& signatures_in, const std::string& signatures_out) {
    const Scenario scenario = load_scenario(scenario_path);
    SignatureStore preload;
    const SignatureStore* initial = nullptr;
    if (!signatures_in.empty()) {
        preload = SignatureStore::load(signatures_in);
        initial = &preload;
    }
    RunOutput out = run_full(scenario, SimConfig::from_scenario(scenario), seed, initial);

    ensure_dir(out_dir);
    out.transcript.save(out_dir + "/transcript.log");
    write_file(out_dir + "/metrics.txt", out.transcript.metrics_text);
    write_file(out_dir + "/audit.log", render_audit(out.transcript));
    if (!signatures_out.empty()) out.signatures.save(signatures_out);

    std::cout << "run complete: scenario=" << scenario.name << " seed=" << seed
              << " transcript_digest=" << canon_u64(out.transcript.digest()) << "\n";
    return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& seeds_spec,
              const std::string& out_dir) {
    const Scenario scenario = load_scenario(scenario_path);
    const auto [first, last] = parse_seed_range(seeds_spec);
    ensure_dir(out_dir);

    std::vector<SweepRow> rows;
    for (std::uint64_t seed = first; seed <= last; ++seed) {
        RunTranscript t = run(scenario, seed);
        const MetricsReport m = compute_metrics(t, scenario);
        write_file(out_dir + "/seed_" + canon_u64(seed) + ".metrics.txt", t.metrics_text);
        SweepRow row;
        row.seed = seed;
        row.has_tpr = m.has_tpr;
        row.tpr = m.true_positive_rate;
        row.availability_pct = m.availability_pct;
        row.false_positive_confirmed = m.false_positive_confirmed;
        row.has_switchover = m.has_switchover;
        row.mean_switchover_ticks = m.mean_switchover_ticks;
        rows.push_back(row);
    }
    const std::string table = render_sweep_table(scenario.name, rows);
    write_file(out_dir + "/aggregate.txt", table);
    std::cout << table;
    return 0;
}

int cmd_overhead(const std::string& chips_path, const std::string& out_path) {
    const ChipTable table = load_chip_table(chips_path);
    emit(render_overhead_report(table), out_path);
    return 0;
}

int cmd_report(const std::string& transcript_path, const std::string& out_path) {
    const RunTranscript t = RunTranscript::load(transcript_path);
    const Scenario scenario = scenario_from_json_text(t.header.scenario_json, transcript_path);
    const MetricsReport m = compute_metrics(t, scenario);
    emit(render_metrics(m), out_path);
    return 0;
}

}  // namespace

std::string render_sweep_table(const std::string& scenario_name,
                               const std::vector<SweepRow>& rows) {
    std::string out = "guardsim-sweep v1\n";
    out += "scenario=" + scenario_name + " runs=" + canon_i64(static_cast<long>(rows.size())) + "\n";
    double tpr_sum = 0.0, avail_sum = 0.0, switch_sum = 0.0;
    long tpr_n = 0, switch_n = 0, fp_total = 0;
    for (const SweepRow& r : rows) {
        out += "seed=" + canon_u64(r.seed) + " tpr=" + (r.has_tpr ? canon_double(r.tpr) : "na") +
               " availability_pct=" + canon_double(r.availability_pct) +
               " false_positive_confirmed=" + canon_i64(r.false_positive_confirmed) +
               " mean_switchover_ticks=" +
               (r.has_switchover ? canon_double(r.mean_switchover_ticks) : "na") + "\n";
        if (r.has_tpr) {
            tpr_sum += r.tpr;
            ++tpr_n;
        }
        if (r.has_switchover) {
            switch_sum += r.mean_switchover_ticks;
            ++switch_n;
        }
        avail_sum += r.availability_pct;
        fp_total += r.false_positive_confirmed;
    }
    out += "aggregate mean_tpr=" +
           (tpr_n > 0 ? canon_double(tpr_sum / static_cast<double>(tpr_n)) : std::string("na")) +
           " mean_availability_pct=" +
           (rows.empty() ? std::string("na")
                         : canon_double(avail_sum / static_cast<double>(rows.size()))) +
           " total_false_positive_confirmed=" + canon_i64(fp_total) + " mean_switchover_ticks=" +
           (switch_n > 0 ? canon_double(switch_sum / static_cast<double>(switch_n))
                         : std::string("na")) +
           "\n";
    return out;
}

int cli_main(std::vector<std::string> args) {
    CLI::App app{"3D guard-layer edge AI simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir, seeds_spec, chips_path, transcript_path, out_path;
    std::string signatures_in, signatures_out;
    std::uint64_t seed = 1;

    auto* run_cmd = app.add_subcommand("run", "run one scenario and write its artifacts");
    run_cmd->add_option("--scenario", scenario_path, "scenario file")->required();
    run_cmd->add_option("--seed", seed, "run seed");
    run_cmd->add_option("--out", out_dir, "output directory")->required();
    run_cmd->add_option("--signatures-in", signatures_in, "preload attack-pattern store");
    run_cmd->add_option("--signatures-out", signatures_out, "export attack-pattern store");

    auto* sweep_cmd = app.add_subcommand("sweep", "run a range of seeds and aggregate");
    sweep_cmd->add_option("--scenario", scenario_path, "scenario file")->required();
    sweep_cmd->add_option("--seeds", seeds_spec, "seed range a..b")->required();
    sweep_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* overhead_cmd = app.add_subcommand("overhead", "TSV overhead report for a chip table");
    overhead_cmd->add_option("--chips", chips_path, "chip table file")->required();
    overhead_cmd->add_option("--out", out_path, "write report here instead of stdout");

    auto* report_cmd = app.add_subcommand("report", "recompute metrics from a transcript");
    report_cmd->add_option("--transcript", transcript_path, "transcript file")->required();
    report_cmd->add_option("--out", out_path, "write metrics here instead of stdout");

    std::vector<const char*> argv;
    argv.push_back("guardsim");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (run_cmd->parsed())
            return cmd_run(scenario_path, seed, out_dir, signatures_in, signatures_out);
        if (sweep_cmd->parsed()) return cmd_sweep(scenario_path, seeds_spec, out_dir);
        if (overhead_cmd->parsed()) return cmd_overhead(chips_path, out_path);
        if (report_cmd->parsed()) return cmd_report(transcript_path, out_path);
    } catch (const ValidationError& e) {
        std::cerr << "validation error:\n";
        for (const auto& issue : e.issues()) std::cerr << "  - " << issue << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace guard
