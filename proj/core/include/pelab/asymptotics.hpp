#pragma once

#include <utility>
#include <vector>

#include "pelab/boundary_series.hpp"
#include "pelab/model.hpp"
#include "pelab/profile.hpp"

namespace pelab {

// The two exponents mu with mu(mu-n) + s(n-s) = 0, smaller first.
std::pair<double, double> indicial_roots(int n, double s);

// Asymptotic expansion 1 + sum_j phi_{s,j} t^j of phi_s = (rho_s/rho)^{n-s},
// built by cancelling operator residuals order by order.  For 2s-n a
// positive integer the recursion stops at the indicial collision j = 2s-n
// unless the obstruction vanishes; for fractional 2s-n the window ends at
// floor(2s-n).
BoundarySeries build_phi_series(const RadialMetric& g, double s, int order,
                                SeriesVariable variable = SeriesVariable::Rho);

// Expansion sum_{j>=1} phi_j t^j of phi = w - log rho for the s = n branch;
// collision at j = n (stop for n even, obstruction vanishes for n odd).
BoundarySeries build_w_series(const RadialMetric& g, int order,
                              SeriesVariable variable = SeriesVariable::Rho);

struct GeodesicGauge {
    RadialProfile x_profile;                 // x(r) = C e^{-r}
    double coord_scale = 1.0;
    std::vector<double> g2_coefficient;      // x^2 metric coefficient per factor
    std::vector<double> g1_coefficient;      // x^1 coefficient (vanishes, umbilic)
    std::vector<double> minus_schouten;      // -Ahat ghat per factor, the predicted g2
    double dx_norm_error = 0.0;              // sup | |dx|^2_{gtilde} - 1 |
    double x_minus_rho_over_rho2 = 0.0;      // sup |(x - rho)/rho^2|
};

GeodesicGauge geodesic_gauge(const RadialMetric& g);

struct ExtractOptions {
    double x0 = 0.1;          // fit window [x0/4, x0]
    std::size_t samples = 32;
    double max_condition = 1e10;
};

struct ExtractResult {
    BoundarySeries series;
    double residual = 0.0;
    double condition = 0.0;
};

// Least-squares fit of sum_k c_k t^{e_k} to a profile sampled on a geometric
// window near the boundary, t the chosen defining function.
ExtractResult extract_expansion(const RadialMetric& g, const RadialProfile& p,
                                SeriesVariable variable, const std::vector<double>& exponents,
                                const ExtractOptions& opts = {});

// Invert the fixed defining function: the r with rho(r) = value.
double rho_inverse(const RadialMetric& g, double value);

} // namespace pelab
