#pragma once

#include <stdexcept>
#include <vector>

#include "pelab/asymptotics.hpp"
#include "pelab/model.hpp"
#include "pelab/profile.hpp"

namespace pelab {

struct SolveOptions {
    double tol = 1e-10;            // defining-equation residual target
    double handover_x = 0.005;     // series / integration handover point
    double ode_tol = 1e-13;
    std::size_t series_terms = 34;
    std::size_t jet_order = 8;
};

class SolverError : public std::runtime_error {
public:
    enum class Kind { MatchingFailure, SpectrumViolation, Normalization };
    SolverError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
    Kind kind;
};

struct SolverReport {
    double defining_residual = 0.0;           // relative, via carried jets
    double defining_residual_spectral = 0.0;  // relative, via panel differentiation
    double matching_residual = 0.0;
    double boundary_admixture = 0.0;          // coefficient of the x^s branch
    bool series_collision = false;            // integer 2s-n obstruction hit
    double min_v = 0.0;
    double min_phi = 0.0;
    double tol = 0.0;
};

struct Compactification {
    double s = 0.0;               // s = n selects the Fefferman-Graham branch
    RadialMetric metric;
    RadialProfile v_or_w;         // v_s for s != n, w for s = n
    RadialProfile rho_s;
    RadialProfile phi_s;          // (rho_s/rho)^{n-s}, resp. w - log rho
    BoundarySeries rho_s_over_x;  // x-expansion of rho_s/x
    double H_s_series = 0.0;      // -n times the x coefficient of rho_s/x
    BoundaryData boundary;
    SolverReport report;

    bool is_fg() const { return s == double(metric.n()); }
};

Compactification solve_vs(const RadialMetric& g, double s, const SolveOptions& opts = {});
Compactification solve_w(const RadialMetric& g, const SolveOptions& opts = {});
// Dispatch on s = n.
Compactification solve_compactification(const RadialMetric& g, double s,
                                        const SolveOptions& opts = {});

struct LimitTable {
    std::vector<double> s_values;
    std::vector<double> sup_diff;      // sup |rho_s - rho_F| per s
    std::vector<double> ratio;         // consecutive quotients, size-1 entries
};

LimitTable s_to_n_limit_check(const RadialMetric& g, const std::vector<double>& s_list,
                              const SolveOptions& opts = {});

struct ProbeResult {
    int diff_order = 0;               // m = ceil(2s-n)
    double measured_exponent = 0.0;   // slope of |D^m phi| / h^{m-1}
    double predicted_exponent = 0.0;  // 2s-n - m + 1
    double smooth_baseline = 1.0;
    bool obstruction_detected = false;
    bool noise_floor_hit = false;
    bool collision_case = false;      // integer 2s-n with nonvanishing source
    double fit_residual = 0.0;
};

// Measures the Hoelder ceiling of phi_s by the scaling of anchored m-th
// finite differences near the boundary.
ProbeResult regularity_threshold_probe(const RadialMetric& g, double s,
                                       const SolveOptions& opts = {});
ProbeResult regularity_threshold_probe(const Compactification& c);

} // namespace pelab
