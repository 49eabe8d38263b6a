#pragma once

#include <string>
#include <vector>

#include "levylab/correlators.hpp"
#include "levylab/grid.hpp"
#include "levylab/sampler.hpp"
#include "levylab/schrodinger.hpp"

namespace levylab {

// Every floating-point value is written with 17 significant digits so that
// artifacts round-trip exactly.
std::string format_full(double v);

void write_grid_csv(const std::string& path, const GridFunction& f);      // header "x,value"
GridFunction read_grid_csv(const std::string& path);

void write_spectrum_csv(const std::string& path, const Spectrum& spec);   // header "k,E_k,parity"
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m); // bare rows
void write_eigenfunctions_csv(const std::string& path, const Spectrum& spec);

std::string chi2_report_to_json(const Chi2Report& report,
                                const std::vector<std::pair<std::string, double>>& model_params,
                                const std::string& family);
void write_chi2_curve_csv(const std::string& path, const Chi2Report& report); // header "T,chi2"

std::string chi2_estimates_to_json(const std::vector<Chi2Estimate>& estimates,
                                   double dt, std::uint64_t seed);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace levylab
