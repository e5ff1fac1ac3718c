#pragma once

#include <string>
#include <vector>

#include "pelab/model.hpp"
#include "pelab/profile.hpp"
#include "pelab/solver.hpp"

namespace pelab {

// Value-and-jet bundle of a warped metric N(r)^2 dr^2 + sum u_a(r)^2 h_a.
struct WarpedMetric {
    int n = 0; // boundary dimension; interior dimension n+1 = 1 + sum dims
    RadialProfile lapse;
    std::vector<RadialProfile> warps;
    std::vector<CrossSectionFactor> factors;
};

WarpedMetric compactified_metric(const Compactification& c);
WarpedMetric fixed_compactified_metric(const RadialMetric& g, std::size_t order = 8);

struct CurvatureSet {
    RadialProfile ric_radial;              // normalized Ricci eigenvalue, radial
    std::vector<RadialProfile> ric_factor; // per cross-section factor
    RadialProfile scalar;
    RadialProfile J;        // scalar/(2n)
    RadialProfile E_norm2;  // |trace-free Ricci|^2
    RadialProfile A_norm2;  // |Schouten|^2
};

CurvatureSet curvature_of(const WarpedMetric& w);
RadialProfile warped_laplacian(const WarpedMetric& w, const RadialProfile& f);
// <df, dg> with respect to the warped metric.
RadialProfile warped_gradient_inner(const WarpedMetric& w, const RadialProfile& f,
                                    const RadialProfile& g);
RadialProfile q4_of(const WarpedMetric& w);

// Curvature data of gbar_s with both computation routes and boundary traces.
struct InteriorCurvature {
    RadialProfile J;        // direct curvature route, series-backed in the collar
    RadialProfile T;        // (1 - |d rho_s|^2)/rho_s
    RadialProfile E_norm2;
    RadialProfile A_norm2;
    RadialProfile Q2;       // = J
    RadialProfile Q4;
    double H = 0.0;         // boundary mean curvature, extrapolated

    RadialProfile J_rho_route;   // (2s-n-1)/2 (1-|d rho_s|^2)/rho_s^2 route
    double route_discrepancy = 0.0;
    double J_boundary = 0.0;
    double T_boundary = 0.0;
    double H_from_series = 0.0;
    double umbilicity_defect = 0.0;
    double drho_boundary = 0.0;  // |d rho_s| extrapolated to M
};

InteriorCurvature compactified_curvatures(const Compactification& c, const RadialMetric& g);

RadialProfile q4(const Compactification& c, const RadialMetric& g);

struct Q2NReport {
    int N = 0;
    double s = 0.0;
    double relative_residual = 0.0;  // sup residual / largest intermediate
    double largest_intermediate = 0.0;
};

// Solves at s = n/2 + N - 1/2 and applies P+_{2N} to the defining solution
// (through the log-branch potential and the Q+ constant when 2N = n+1).
Q2NReport q2N_vanishing_check(const RadialMetric& g, int N, const SolveOptions& opts = {});
// Same check against an already-solved compactification (negative controls).
Q2NReport q2N_residual(const Compactification& c, int N);

struct PositivityReport {
    std::string branch;              // "J" for s > n/2+1, "T" for s = (n+1)/2
    double min_J = 0.0;
    double J_boundary = 0.0;
    double sup_abs_J = 0.0;
    double min_T = 0.0;
    double T_boundary = 0.0;
    double H_s = 0.0;
    double max_drho = 0.0;           // sup |d rho_s|_{gbar_s}
    double worst_r = 0.0;
    bool positive = false;
    bool drho_bounded = false;       // max_drho <= 1 + 1e-8
};

PositivityReport positivity_audit(const Compactification& c, const RadialMetric& g);

struct IdentityResidual {
    std::string name;
    double sup_residual = 0.0;  // relative to max(local term size, 1), rho > 0.01
    double location = 0.0;
    bool applicable = true;
};

std::vector<IdentityResidual> identity_suite(const Compactification& c, const RadialMetric& g);

} // namespace pelab
