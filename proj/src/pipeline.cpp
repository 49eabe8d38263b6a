#include "levylab/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include "json.hpp"

#include "levylab/io.hpp"
#include "levylab/reconstruct.hpp"
#include "levylab/reference.hpp"
#include "levylab/schrodinger.hpp"

namespace levylab {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct StageClock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

LevyDensity make_sigma(const ModelConfig& model) {
    if (model.family == "cauchy") return LevyDensity::cauchy_tail(model.a);
    if (model.family == "bessel_k1") return LevyDensity::bessel_k1(model.b, model.rho);
    if (model.family == "alpha") return LevyDensity::alpha_family(model.alpha);
    if (model.family == "tabulated") {
        if (model.table.empty())
            throw std::invalid_argument("tabulated family needs a table file path");
        return LevyDensity::tabulated(read_grid_csv(model.table));
    }
    throw std::invalid_argument("family '" + model.family + "' has no jump density");
}

std::vector<std::pair<std::string, double>> model_parameters(const ModelConfig& model) {
    if (model.family == "cauchy") return {{"a", model.a}};
    if (model.family == "bessel_k1") return {{"b", model.b}, {"rho", model.rho}};
    if (model.family == "alpha") return {{"alpha", model.alpha}};
    if (model.family == "harmonic_oscillator") return {{"omega", model.omega}};
    return {};
}

} // namespace

PipelineOutcome run_pipeline(const PipelineConfig& cfg, const std::set<std::string>& stages,
                             bool quiet) {
    for (const auto& stage : stages)
        if (!kAllStages.count(stage))
            throw std::invalid_argument("unknown stage '" + stage + "'");
    if (cfg.spectrum.states < 2) throw std::invalid_argument("spectrum.states must be at least 2");
    if (cfg.spectrum.margin < 0) throw std::invalid_argument("spectrum.margin must be nonnegative");

    const bool ho = cfg.model.family == "harmonic_oscillator";
    const bool analytic = ho && cfg.model.analytic;
    const bool want_chi2 = stages.count("chi2") > 0;
    const bool want_spectrum = stages.count("spectrum") > 0 || want_chi2;
    const bool want_sample = stages.count("sample") > 0 && cfg.sampler.enabled;
    if (stages.count("sample") && !cfg.sampler.enabled && !quiet)
        std::cout << "[sample] skipped: sampler.enabled is false\n";

    PipelineOutcome outcome;
    outcome.out_dir = cfg.output.directory;
    fs::create_directories(cfg.output.directory);
    const std::string failed_marker = cfg.output.directory + "/FAILED";
    std::error_code ignore;
    fs::remove(failed_marker, ignore);

    ordered_json diagnostics;
    std::vector<std::string> executed;
    std::vector<std::string> artifacts;

    auto out_path = [&cfg](const std::string& name) { return cfg.output.directory + "/" + name; };
    auto run_stage = [&](const std::string& name, const std::function<void()>& body) {
        StageClock clock;
        try {
            body();
        } catch (const std::exception& e) {
            write_text_file(failed_marker, "[" + name + "] " + e.what() + "\n");
            throw StageError(name, e.what());
        }
        executed.push_back(name);
        outcome.timings_ms.emplace_back(name, clock.ms());
        if (!quiet)
            std::cout << "[" << name << "] done in " << static_cast<int>(clock.ms()) << " ms\n";
    };

    const int K = cfg.spectrum.states;
    const int margin = cfg.spectrum.margin;

    // Carried between stages.
    GridFunction rho, phi0;
    PotentialResult pot;
    std::optional<LevyDensity> sigma;
    std::optional<MatrixElements> me_full;
    std::optional<Spectrum> spec;

    // ---- density -------------------------------------------------------------
    run_stage("density", [&] {
        if (ho) {
            const ClosedForms cf = closed_forms(RefModel::HarmonicOscillator, cfg.model.omega);
            rho = GridFunction::sampled(cfg.grid.half_width, cfg.grid.points,
                                        [&](double x) { return cf.density(x); });
            phi0 = ground_state(rho, cfg.inversion.clip_fraction);
            pot = potential(phi0);
            diagnostics["density"] = {{"closed_form", true},
                                      {"mass", rho.trapezoid()},
                                      {"retained_points", pot.window.size()}};
        } else {
            sigma = make_sigma(cfg.model);
            const double s_max = choose_s_max(*sigma, cfg.inversion);
            const DensityResult dres =
                density_from_characteristic(*sigma, s_max, cfg.grid, cfg.inversion);
            rho = dres.rho;
            phi0 = ground_state(rho, cfg.inversion.clip_fraction);
            pot = potential(phi0);
            diagnostics["density"] = {{"closed_form", false},
                                      {"s_max", dres.s_max},
                                      {"simpson_nodes", dres.simpson_nodes},
                                      {"mass", dres.mass},
                                      {"mass_within_tolerance", dres.mass_within_tolerance},
                                      {"min_value", dres.min_value},
                                      {"retained_points", pot.window.size()}};
        }
        write_grid_csv(out_path("rho.csv"), rho);
        write_grid_csv(out_path("phi0.csv"), phi0);
        write_grid_csv(out_path("potential.csv"), pot.V);
        artifacts.insert(artifacts.end(), {"rho.csv", "phi0.csv", "potential.csv"});
    });

    // ---- spectrum ------------------------------------------------------------
    if (want_spectrum) run_stage("spectrum", [&] {
        if (analytic) {
            me_full = ho_exact(cfg.model.omega, K + margin);
            outcome.e0_raw = 0.5 * cfg.model.omega;

            std::ofstream out(out_path("spectrum.csv"), std::ios::binary);
            out << "k,E_k,parity\n";
            for (int k = 0; k < K + margin; ++k)
                out << k << ',' << format_full(me_full->energies[k]) << ','
                    << ((k % 2 == 0) ? 1 : -1) << '\n';
            diagnostics["spectrum"] = {{"closed_form", true},
                                       {"states", K + margin},
                                       {"e0_raw", *outcome.e0_raw}};
        } else {
            spec = solve(pot.V, K + margin);
            me_full = matrix_elements(*spec);
            outcome.e0_raw = spec->e0_raw;

            const ConvergenceReport sweep = convergence_sweep(pot.V, K);
            double worst = 0.0;
            for (const auto& level : sweep.levels)
                worst = std::max(worst, level.estimated_rel_error.maxCoeff());
            diagnostics["spectrum"] = {{"closed_form", false},
                                       {"states", K + margin},
                                       {"e0_raw", spec->e0_raw},
                                       {"refined_points", sweep.levels.front().points},
                                       {"max_rel_energy_error", worst},
                                       {"refinement_flagged", sweep.any_flagged()}};

            write_spectrum_csv(out_path("spectrum.csv"), *spec);
            if (cfg.output.eigenfunctions) {
                write_eigenfunctions_csv(out_path("eigenfunctions.csv"), *spec);
                artifacts.push_back("eigenfunctions.csv");
            }
        }
        write_matrix_csv(out_path("qmatrix.csv"), me_full->q);
        artifacts.insert(artifacts.end(), {"spectrum.csv", "qmatrix.csv"});
    });

    // ---- chi2 ------------------------------------------------------------------
    if (want_chi2) {
        run_stage("chi2", [&] {
            outcome.report = build_chi2_report(*me_full, K, margin, cfg.chi2.t_values,
                                               cfg.chi2.convergence_tolerance,
                                               cfg.chi2.energy_scale);
            std::vector<std::pair<std::string, double>> params = model_parameters(cfg.model);
            if (sigma && cfg.model.family == "tabulated") params = sigma->parameters();
            write_text_file(out_path("chi2.json"),
                            chi2_report_to_json(*outcome.report, params, cfg.model.family));
            write_chi2_curve_csv(out_path("chi2_curve.csv"), *outcome.report);
            artifacts.insert(artifacts.end(), {"chi2.json", "chi2_curve.csv"});

            bool all = outcome.report->chi2_small_converged && outcome.report->chi2_large_converged;
            for (const auto& point : outcome.report->curve) all = all && point.converged;
            diagnostics["chi2"] = {{"points", outcome.report->curve.size()},
                                   {"all_converged", all}};
        });
    }

    // ---- sample ------------------------------------------------------------------
    if (want_sample) {
        run_stage("sample", [&] {
            const GridFunction drift = drift_field(restrict_to(phi0, pot.window));

            SimulationPlan plan;
            plan.dt = cfg.sampler.dt;
            plan.n_steps = cfg.sampler.steps;
            plan.n_paths = cfg.sampler.paths;
            plan.seed = cfg.seed;
            plan.windows = cfg.sampler.windows;
            plan.lags = cfg.sampler.lags;

            const PathEnsemble ensemble = simulate(drift, rho, plan);
            for (double T : plan.windows) outcome.estimates.push_back(estimate_chi2(ensemble, T));

            write_text_file(out_path("mc.json"),
                            chi2_estimates_to_json(outcome.estimates, plan.dt, plan.seed));
            artifacts.push_back("mc.json");

            const MomentEstimate mean = mean_position(ensemble);
            diagnostics["sample"] = {{"paths", plan.n_paths},
                                     {"steps", plan.n_steps},
                                     {"mean_position", mean.value},
                                     {"mean_position_se", mean.standard_error}};
        });
    }

    // ---- manifest ------------------------------------------------------------------
    {
        ordered_json manifest;
        manifest["config"] = ordered_json::parse(config_to_json(cfg));
        manifest["stages"] = executed;
        manifest["artifacts"] = artifacts;
        manifest["diagnostics"] = diagnostics;
        ordered_json timings;
        for (const auto& [name, ms] : outcome.timings_ms) timings[name] = ms;
        manifest["timings_ms"] = timings;
        manifest["versions"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                              std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                              std::to_string(EIGEN_MINOR_VERSION)},
                                {"compiler", __VERSION__}};
        write_text_file(out_path("run.json"), manifest.dump(2) + "\n");
    }

    return outcome;
}

} // namespace levylab
