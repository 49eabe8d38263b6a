#include <cstdint>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "levylab/config.hpp"
#include "levylab/io.hpp"
#include "levylab/pipeline.hpp"
#include "levylab/validation.hpp"

namespace {

using namespace levylab;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Accepts the key=value format, a config JSON, or a run manifest (whose
// embedded config echo reproduces the original run).
PipelineConfig load_config(const std::string& path) {
    if (path.empty()) return PipelineConfig{};
    const std::string text = read_text_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        const auto parsed = nlohmann::ordered_json::parse(text);
        if (parsed.contains("config")) return config_from_json(parsed.at("config").dump());
        return config_from_json(text);
    }
    return parse_config_text(text);
}

std::set<std::string> parse_stages(const std::string& csv) {
    std::set<std::string> stages;
    std::stringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        if (!kAllStages.count(item))
            throw CLI::ValidationError("--stages", "unknown stage '" + item + "'");
        stages.insert(item);
    }
    if (stages.empty()) throw CLI::ValidationError("--stages", "no stages given");
    return stages;
}

void print_summary(const PipelineOutcome& outcome) {
    if (outcome.e0_raw)
        std::cout << "raw ground energy " << num(*outcome.e0_raw) << " (shifted to 0)\n";
    if (outcome.report) {
        const Chi2Report& r = *outcome.report;
        auto mark = [](bool converged) { return converged ? "" : "  [not converged]"; };
        std::cout << "chi2 small-window limit  " << num(r.chi2_small)
                  << mark(r.chi2_small_converged) << "\n";
        std::cout << "chi2 large-window limit  " << num(r.chi2_large)
                  << mark(r.chi2_large_converged) << "\n";
        for (const Chi2Point& p : r.curve)
            std::cout << "chi2(T = " << num(p.T) << ")  " << num(p.value) << mark(p.converged)
                      << "\n";
    }
    for (const Chi2Estimate& est : outcome.estimates)
        std::cout << "mc chi2(T = " << num(est.T) << ")  " << num(est.value) << " +- "
                  << num(est.standard_error) << "  (" << est.n_paths << " paths)\n";
    std::cout << "artifacts in " << outcome.out_dir << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ground-state diffusions with infinitely divisible densities"};
    app.require_subcommand(1);

    std::string config_path, out_dir, stages_csv;
    std::uint64_t seed = 0;
    bool quiet = false, eigenfunctions = false;

    auto add_run_options = [&](CLI::App* cmd) {
        cmd->add_option("--config,-c", config_path,
                        "key=value config, config JSON, or run manifest");
        cmd->add_option("--out,-o", out_dir, "output directory override");
        cmd->add_option("--seed", seed, "sampler seed override");
        cmd->add_flag("--quiet,-q", quiet, "suppress progress output");
        cmd->add_flag("--eigenfunctions", eigenfunctions, "also write eigenfunctions.csv");
    };

    CLI::App* cmd_pipeline = app.add_subcommand("pipeline", "run every configured stage");
    cmd_pipeline->add_option("--stages", stages_csv, "comma-separated subset of stages");
    CLI::App* cmd_spectrum =
        app.add_subcommand("spectrum", "reconstruct the potential and solve it");
    CLI::App* cmd_chi2 = app.add_subcommand("chi2", "spectrum plus the window diagnostic");
    CLI::App* cmd_sample = app.add_subcommand("sample", "Monte Carlo window estimates");
    for (CLI::App* cmd : {cmd_pipeline, cmd_spectrum, cmd_chi2, cmd_sample})
        add_run_options(cmd);

    CLI::App* cmd_validate =
        app.add_subcommand("validate", "cross-check closed forms against the numerics");
    ValidationOptions vopts;
    cmd_validate->add_flag("--sampler", vopts.run_sampler, "include Monte Carlo checks");
    cmd_validate->add_option("--paths", vopts.sampler_paths, "paths for Monte Carlo checks");
    cmd_validate->add_flag("--perturb-q", vopts.perturb_q)->group(""); // self-test hook

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_validate->parsed()) {
            int failures = 0;
            for (const CheckResult& r : run_validation(vopts)) {
                const char* tag = r.status == CheckResult::Status::Pass   ? "[PASS]"
                                  : r.status == CheckResult::Status::Fail ? "[FAIL]"
                                                                          : "[SKIP]";
                if (r.status == CheckResult::Status::Fail) ++failures;
                std::printf("%s %-28s %s\n", tag, r.name.c_str(), r.detail.c_str());
            }
            if (failures) std::printf("%d check(s) failed\n", failures);
            return failures ? 1 : 0;
        }

        PipelineConfig cfg = load_config(config_path);
        std::set<std::string> stages = kAllStages;
        if (cmd_spectrum->parsed()) stages = {"density", "spectrum"};
        if (cmd_chi2->parsed()) stages = {"density", "spectrum", "chi2"};
        if (cmd_sample->parsed()) {
            stages = {"density", "sample"};
            cfg.sampler.enabled = true;
        }
        if (!stages_csv.empty()) stages = parse_stages(stages_csv);

        CLI::App* cmd = app.get_subcommands().front();
        if (cmd->count("--out")) cfg.output.directory = out_dir;
        if (cmd->count("--seed")) cfg.seed = seed;
        if (eigenfunctions) cfg.output.eigenfunctions = true;

        const PipelineOutcome outcome = run_pipeline(cfg, stages, quiet);
        if (!quiet) print_summary(outcome);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
