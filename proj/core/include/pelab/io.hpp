#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pelab/curvature.hpp"
#include "pelab/family.hpp"
#include "pelab/model.hpp"
#include "pelab/solver.hpp"

namespace pelab {

// Metric family configuration: JSON or key=value lines, with keys
// {model, n, m, beta, r_max, grid_size}.
struct ModelConfig {
    std::string model = "hyperbolic";
    int n = 3;
    double m = 0.0;
    double beta = 0.0;
    double r_max = 20.0;
    std::size_t grid_size = 21; // nodes per panel
};

ModelConfig parse_model_config(const std::string& text);
ModelConfig load_model_config(const std::string& path);
RadialMetric make_metric(const ModelConfig& cfg);

FamilySpec parse_family_spec(const std::string& text);
FamilySpec load_family_spec(const std::string& path);

// Solve output: grid, v, rho_s, phi_s, series coefficients, residual report.
std::string compactification_to_json(const Compactification& c);

void write_profile_csv(std::ostream& os, const RadialProfile& p);
void write_series_csv(std::ostream& os, const BoundarySeries& s);
void write_identity_csv(std::ostream& os, const std::vector<IdentityResidual>& rows);
void write_report_csv(std::ostream& os, const UniformBoundReport& rep);
void write_collar_csv(std::ostream& os, const std::vector<std::pair<double, double>>& table);

} // namespace pelab
