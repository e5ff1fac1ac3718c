#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace pelab {

// Compactly supported boundary data sampled on a uniform grid over [-1, 1];
// evaluated in between by piecewise-cubic interpolation and by zero outside.
struct BoundaryFunction {
    std::vector<double> y;
    std::vector<double> values;
    int k = 0;
    double alpha = 0.0;

    double eval(double yy) const;
    BoundaryFunction derivative() const;   // centered differences on the grid

    static BoundaryFunction from_function(const std::function<double(double)>& f,
                                          std::size_t samples = 801, int k = 2,
                                          double alpha = 0.5);
};

struct StripFunction {
    std::vector<double> x;        // [0, 1) nodes
    std::vector<double> y;        // [-1, 1] nodes
    std::vector<double> values;   // row-major, one row per x node
    int l = 0;

    double at(std::size_t i, std::size_t j) const { return values[i * y.size() + j]; }
    double eval(double xx, double yy) const;      // bicubic
};

// Normalized even bump exp(-1/(1-z^2)) on |z| < 1.
double mollifier(double z);
// i-th moment of the mollifier, cached quadrature values.
double mollifier_moment(int i);
// Smooth cutoff: 1 on [0, 1/2], 0 beyond 3/4.
double extension_cutoff(double x);

struct ExtendOptions {
    std::size_t nx = 161;
    std::size_t ny = 801;
    std::size_t quad_panels = 256;
};

// F(x, y) = chi(x) x^l (phi_x * f)(y), the x = 0 slice by continuity.
StripFunction mollify_extend(const BoundaryFunction& f, int k, int l,
                             const ExtendOptions& opts = {});

struct ExpansionResult {
    std::vector<std::vector<double>> coefficients; // coefficients[i][j] = f_i(y_j)
    double condition = 0.0;
    double max_residual = 0.0;
};

// Per-y least-squares fit of F ~ x^l sum_i f_i(y) x^i through order k.
ExpansionResult extension_expansion(const StripFunction& F, int k, int l);

struct StripNormOptions {
    double resolution = 2.5e-3;  // difference scales 4..64 times this
    std::size_t levels = 5;
    double x_lo = 0.02, x_hi = 0.7;
    double y_margin = 0.05;
};

// Directional C^{m,alpha} lower-bound estimators.
double strip_holder_norm(const StripFunction& F, int m, double alpha,
                         const StripNormOptions& opts = {});
double line_holder_norm(const BoundaryFunction& f, int k, double alpha,
                        const StripNormOptions& opts = {});
// Norm of x^j (d/dx)^j F at the same (m, alpha) level.
double strip_weighted_xderiv_norm(const StripFunction& F, int j, int m, double alpha,
                                  const StripNormOptions& opts = {});

// ||F||_{C^{k+l,alpha}} / ||f||_{C^{k,alpha}} with both sides estimated.
double extension_norm_ratio(const BoundaryFunction& f, int k, int l, double alpha,
                            const ExtendOptions& eopts = {},
                            const StripNormOptions& nopts = {});

// F/x for F with vanishing trace; the x = 0 column is the one-sided
// extrapolation of the x-derivative.
StripFunction quotient_by_rho(const StripFunction& F);

} // namespace pelab
