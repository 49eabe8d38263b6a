#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levylab/reconstruct.hpp"

namespace levylab {

// Flat key = value configuration with [section] headers. Unknown sections or
// keys are rejected so that typos cannot silently fall back to defaults.

struct ModelConfig {
    std::string family = "alpha"; // cauchy | bessel_k1 | alpha | tabulated | harmonic_oscillator
    double a = 1.0;
    double b = 1.0;
    double rho = 1.0;
    double alpha = 2.5;
    double omega = 1.0;
    bool analytic = true;         // harmonic_oscillator only: exact spectrum instead of solving
    std::string table = "";       // tabulated only: CSV path with x,value rows
};

struct SpectrumConfig {
    int states = 28;
    int margin = 4; // extra states solved for the truncation diagnostics
};

struct Chi2Config {
    std::vector<double> t_values = {0.01, 0.1, 1.0, 10.0, 100.0};
    double convergence_tolerance = 1e-3;
    std::optional<double> energy_scale; // optional dimension-matched window prefactor
};

struct SamplerConfig {
    bool enabled = false;
    int paths = 100000;
    double dt = 0.01;
    int steps = 400;
    std::vector<double> windows = {1.0};
    std::vector<double> lags = {};
};

struct OutputConfig {
    std::string directory = "out";
    bool eigenfunctions = false;
};

struct PipelineConfig {
    ModelConfig model;
    GridSpec grid;
    InversionSettings inversion;
    SpectrumConfig spectrum;
    Chi2Config chi2;
    SamplerConfig sampler;
    OutputConfig output;
    std::uint64_t seed = 12345;
};

PipelineConfig parse_config_text(const std::string& text);
PipelineConfig parse_config_file(const std::string& path);

// JSON round trip used by the run manifest; re-running from a manifest must
// reproduce the original artifacts byte for byte.
std::string config_to_json(const PipelineConfig& cfg);
PipelineConfig config_from_json(const std::string& json_text);

} // namespace levylab
