#pragma once

#include <string>
#include <vector>

#include "pelab/holder.hpp"
#include "pelab/model.hpp"
#include "pelab/solver.hpp"

namespace pelab {

// One-parameter family of model metrics for the compactness-transfer runs.
struct FamilySpec {
    std::string model = "ads_schw";     // "ads_schw" (parameter m) or
                                        // "hyperbolic_rho" (defining-function variants)
    int n = 3;
    std::vector<double> parameters;     // e.g. m in {0, 0.1, ..., 0.5}
    double beta = 0.0;                  // S^1 period; 0 = smooth cap
    std::vector<double> s_values;
    int k = 3;
    double alpha = 0.5;
    double bound_factor = 4.0;          // generic uniformity tolerance
    double phi_bound_factor = 2.0;      // phi_s norms vs the first member
    bool rescale_boundary = false;      // vary the boundary representative scale
    SolveOptions solve;
};

std::vector<RadialMetric> build_family(const FamilySpec& spec);

struct ReportRow {
    std::size_t member = 0;
    std::string quantity;
    double value = 0.0;
    bool bound_ok = true;
};

struct UniformBoundReport {
    std::string direction;
    std::vector<double> s_values;
    std::vector<ReportRow> rows;
    bool all_bounds_hold = true;
    std::vector<std::string> failures;   // quantity names that broke a bound

    double value_of(std::size_t member, const std::string& quantity) const;
};

// Forward transfer: phi_s^{(i)} norms at the trichotomy indices, pinching,
// and the fractional exponent in the obstructed case.
UniformBoundReport run_direction_a(const FamilySpec& spec);

// Backward transfer: sup/norm/pinching/gradient bounds of rho_s^{(i)} plus
// the transfer norms of rho/rho_s^{(i)}; gated to s > n/2 + 1 or s = (n+1)/2.
UniformBoundReport run_direction_b(const FamilySpec& spec);

struct CorollaryReport {
    double s = 0.0, t = 0.0;
    UniformBoundReport forward;   // tables at s
    UniformBoundReport backward;  // tables at t
    bool both_bounded = false;
};

// Roundtrip between two odd-integer offsets s = n/2 + N - 1/2
// and t = n/2 + K - 1/2.
CorollaryReport corollary_roundtrip(const FamilySpec& spec, int N, int K);

// (l, beta) conclusion indices of the forward transfer for given (k, alpha) and s.
std::pair<int, double> direction_a_indices(int n, int k, double alpha, double s);

} // namespace pelab
