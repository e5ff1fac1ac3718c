#pragma once

#include <cstddef>
#include <utility>

#include "pelab/model.hpp"
#include "pelab/profile.hpp"

namespace pelab {

// Discrete (k, alpha, delta)-indexed Hoelder measurement.  Estimates are
// lower bounds of the true norms; all contracts are phrased as stability or
// divergence under band refinement, never as absolute values.
struct HolderEstimate {
    int k = 0;
    double alpha = 0.0;
    double delta = 0.0;                      // 0 for the classical spaces
    double value = 0.0;                      // sup norm + seminorm
    double seminorm = 0.0;
    double sup_norm = 0.0;
    std::pair<double, double> scale_band{0.0, 0.0};
};

struct HolderOptions {
    // Band of difference scales in the boundary-adapted coordinate x,
    // [4, 64] times the resolution parameter.
    double resolution = 1e-4;
    std::size_t scale_levels = 7;
    double x_interior_hi = 0.5;   // anchors spread up to here
    double x_anchor_lo = 0.0;     // anchors below this are skipped
};

// Classical C^{k,alpha} estimator: sup of (k+1)-th difference quotients
// |D^{k+1}_h p| / h^{k+alpha} over anchors and band scales, in the geodesic
// coordinate x, plus lower-order difference quotients and the sup norm.
HolderEstimate holder_seminorm(const RadialMetric& g, const RadialProfile& p, int k,
                               double alpha, const HolderOptions& opts = {});

struct WeightedOptions {
    double collar_x_hi = 0.25;    // outermost dyadic collar
    double collar_x_lo = 1e-5;    // innermost collar (refinement knob)
    std::size_t tau_levels = 5;   // difference scales per collar, in log x
    std::size_t anchors = 6;
};

// Weighted norm of Definition-3.2 type: the classical estimator applied to
// rho^{-delta} p on each dyadic collar with lengths scaled by the collar
// size (differences in log x), sup over collars; weight applied first so
// the weight-shift identity holds exactly by construction.
HolderEstimate weighted_norm(const RadialMetric& g, const RadialProfile& p, int l, double beta,
                             double delta, const WeightedOptions& opts = {});

// Per-collar local norms, for divergence-rate diagnostics.
std::vector<std::pair<double, double>> weighted_collar_table(const RadialMetric& g,
                                                             const RadialProfile& p, int l,
                                                             double beta, double delta,
                                                             const WeightedOptions& opts = {});

} // namespace pelab
