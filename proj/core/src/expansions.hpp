#pragma once

#include <stdexcept>

#include "pelab/model.hpp"
#include "pelab/series.hpp"

namespace pelab::detail {

// Boundary expansions of the radial coefficient functions in the geodesic
// variable x, derived from a model's BoundaryBundle.
struct CoefficientExpansions {
    Series L;            // (d/dr) log rho as a series in x
    Series lambda_prime; // lambda'(x)
    Series dlap_rho;     // (Delta_+ rho)/rho in x
    Series x_of_rho;     // compositional inverse of rho(x)
    Series rho_of_x;     // rho(x) = x * R(x), stored including the x factor? no: R only
    double coord_scale = 1.0;
    std::size_t order = 0;
};

inline CoefficientExpansions coefficient_expansions(const RadialMetric& g) {
    const BoundaryBundle* bb = g.boundary_bundle();
    if (!bb) throw std::invalid_argument("model carries no boundary expansion");
    CoefficientExpansions ce;
    std::size_t J = bb->order;
    ce.order = J;
    ce.coord_scale = bb->coord_scale;
    const Series& R = bb->rho_over_x;
    Series x = Series::variable(0.0, J);
    // L = -1 - x R'/R
    ce.L = -1.0 - (x * R.derivative()).truncated(J - 1) / R.truncated(J - 1);
    ce.lambda_prime = bb->lambda_prime;
    // Delta_+ rho / rho = -x L_x + L^2 + lambda' L
    ce.dlap_rho = -(x * ce.L.derivative()).truncated(J - 2) +
                  (ce.L * ce.L).truncated(J - 2) +
                  (ce.lambda_prime * ce.L).truncated(J - 2);
    Series rho_x = (x * R).truncated(J);
    ce.x_of_rho = revert(rho_x);
    ce.rho_of_x = R;
    return ce;
}

// r-coefficients of the phi_s equation phi'' + b phi' + c phi = 0 as series
// in x: b = lambda' + 2(n-s) L, c = (n-s)(n-s-1)L^2 + (n-s) Delta rho/rho
// + s(n-s).
inline Series phi_b_series(const CoefficientExpansions& ce, int n, double s) {
    double a = double(n) - s;
    return ce.lambda_prime + 2.0 * a * ce.L;
}

inline Series phi_c_series(const CoefficientExpansions& ce, int n, double s) {
    double a = double(n) - s;
    return a * (a - 1.0) * (ce.L * ce.L) + a * ce.dlap_rho +
           Series::constant(s * (double(n) - s), ce.dlap_rho.order());
}

// Source of the s = n equation: phi'' + lambda' phi' = G,
// G = -n + x L_x - lambda' L.
inline Series w_source_series(const CoefficientExpansions& ce, int n) {
    std::size_t J = ce.L.order();
    Series x = Series::variable(0.0, J);
    return -double(n) + (x * ce.L.derivative()).truncated(J - 1) -
           (ce.lambda_prime * ce.L).truncated(J - 1);
}

// Change of expansion variable x -> rho for a coefficient series.
inline Series in_rho_variable(const CoefficientExpansions& ce, const Series& f) {
    return compose(f, ce.x_of_rho.truncated(f.order()));
}

// Driver series (A, B, C) of t^2 A u'' + t B u' + C u with d/dr expressed in
// t = rho:  A = L^2, B = L(L + t L_t) + b L, C = c (all in the rho variable).
struct RhoDriver {
    Series A, B, C;
};

inline RhoDriver rho_driver(const CoefficientExpansions& ce, const Series& b_x,
                            const Series& c_x) {
    std::size_t J = ce.order - 2;
    Series Lr = in_rho_variable(ce, ce.L).truncated(J);
    Series t = Series::variable(0.0, J);
    Series Lt = (t * Lr.derivative()).truncated(J - 1);
    RhoDriver d;
    d.A = (Lr * Lr).truncated(J - 1);
    d.B = (Lr * (Lr + Lt)).truncated(J - 1) + (in_rho_variable(ce, b_x).truncated(J - 1) * Lr).truncated(J - 1);
    d.C = in_rho_variable(ce, c_x).truncated(J - 1);
    return d;
}

} // namespace pelab::detail
