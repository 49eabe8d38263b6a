#include "levylab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace levylab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

} // namespace

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void write_grid_csv(const std::string& path, const GridFunction& f) {
    std::ofstream out = open_out(path);
    out << "x,value\n";
    for (int i = 0; i < f.size(); ++i)
        out << format_full(f.x(i)) << ',' << format_full(f[i]) << '\n';
}

GridFunction read_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,value", 0) != 0)
        throw std::runtime_error(path + ": expected header 'x,value'");

    std::vector<double> xs, vs;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected x,value");
        xs.push_back(std::stod(line.substr(0, comma)));
        vs.push_back(std::stod(line.substr(comma + 1)));
    }
    const int n = static_cast<int>(xs.size());
    if (n < 9 || n % 2 == 0)
        throw std::runtime_error(path + ": need an odd number of rows, at least 9");

    const double dx = (xs.back() - xs.front()) / (n - 1);
    if (!(dx > 0.0)) throw std::runtime_error(path + ": abscissa must be increasing");
    for (int i = 0; i < n; ++i)
        if (std::abs(xs[i] - (xs.front() + i * dx)) > 1e-9 * std::max(1.0, std::abs(xs[i])))
            throw std::runtime_error(path + ": abscissa is not uniform");
    if (std::abs(xs.front() + xs.back()) > 1e-9 * std::max(1.0, std::abs(xs.back())))
        throw std::runtime_error(path + ": grid is not symmetric about zero");

    return GridFunction(dx, Eigen::Map<const Eigen::ArrayXd>(vs.data(), n));
}

void write_spectrum_csv(const std::string& path, const Spectrum& spec) {
    std::ofstream out = open_out(path);
    out << "k,E_k,parity\n";
    for (int k = 0; k < spec.n_states(); ++k)
        out << k << ',' << format_full(spec.energies[k]) << ',' << spec.parity[k] << '\n';
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out = open_out(path);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_full(m(r, c));
        }
        out << '\n';
    }
}

void write_eigenfunctions_csv(const std::string& path, const Spectrum& spec) {
    std::ofstream out = open_out(path);
    out << "x";
    for (int k = 0; k < spec.n_states(); ++k) out << ",phi_" << k;
    out << '\n';
    for (int i = 0; i < spec.n_points(); ++i) {
        out << format_full(spec.x(i));
        for (int k = 0; k < spec.n_states(); ++k) out << ',' << format_full(spec.states(i, k));
        out << '\n';
    }
}

std::string chi2_report_to_json(const Chi2Report& report,
                                const std::vector<std::pair<std::string, double>>& model_params,
                                const std::string& family) {
    ordered_json j;
    j["family"] = family;
    ordered_json params;
    for (const auto& [key, value] : model_params) params[key] = value;
    j["model"] = params;
    j["states"] = report.K;
    j["margin"] = report.margin;
    j["convergence_tolerance"] = report.convergence_tolerance;
    if (report.energy_scale) j["energy_scale"] = *report.energy_scale;
    else j["energy_scale"] = nullptr;
    j["two_point_zero"] = report.two_point_zero;
    j["sharp_moment4"] = report.sharp_moment4;
    j["chi2_small"] = {{"value", report.chi2_small},
                       {"truncation_delta", report.chi2_small_delta},
                       {"converged", report.chi2_small_converged}};
    j["chi2_large"] = {{"value", report.chi2_large},
                       {"truncation_delta", report.chi2_large_delta},
                       {"converged", report.chi2_large_converged}};
    ordered_json curve = ordered_json::array();
    for (const auto& point : report.curve)
        curve.push_back({{"T", point.T},
                         {"chi2", point.value},
                         {"truncation_delta", point.truncation_delta},
                         {"converged", point.converged}});
    j["curve"] = curve;
    ordered_json terms = ordered_json::array();
    for (const auto& term : report.leading_terms)
        terms.push_back(
            {{"k", term.k}, {"l", term.l}, {"m", term.m}, {"contribution", term.contribution}});
    j["leading_terms"] = terms;
    return j.dump(2) + "\n";
}

void write_chi2_curve_csv(const std::string& path, const Chi2Report& report) {
    std::ofstream out = open_out(path);
    out << "T,chi2\n";
    for (const auto& point : report.curve)
        out << format_full(point.T) << ',' << format_full(point.value) << '\n';
}

std::string chi2_estimates_to_json(const std::vector<Chi2Estimate>& estimates, double dt,
                                   std::uint64_t seed) {
    ordered_json j;
    j["dt"] = dt;
    j["seed"] = seed;
    ordered_json list = ordered_json::array();
    for (const auto& est : estimates)
        list.push_back({{"T", est.T},
                        {"chi2", est.value},
                        {"standard_error", est.standard_error},
                        {"n_paths", est.n_paths}});
    j["estimates"] = list;
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out = open_out(path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace levylab
