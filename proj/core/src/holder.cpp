#include "pelab/holder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pelab {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
    return r;
}

// m-th forward difference of f at x0 with step h.
template <typename F>
double fdiff(const F& f, int m, double x0, double h) {
    double acc = 0.0;
    for (int i = 0; i <= m; ++i)
        acc += (((m - i) % 2 == 0) ? 1.0 : -1.0) * binom(m, i) * f(x0 + h * double(i));
    return acc;
}

} // namespace

HolderEstimate holder_seminorm(const RadialMetric& g, const RadialProfile& p, int k,
                               double alpha, const HolderOptions& opts) {
    if (k < 0 || !(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("holder_seminorm: need k >= 0, alpha in (0,1)");
    const BoundaryBundle* bb = g.boundary_bundle();
    double C = bb ? bb->coord_scale : 1.0;
    double h_min = 4.0 * opts.resolution, h_max = 64.0 * opts.resolution;
    if (!(h_max < opts.x_interior_hi))
        throw std::invalid_argument("holder_seminorm: empty band");

    auto f = [&](double x) { return p.eval(std::log(C / x)); };

    double sup = 0.0, semi = 0.0;
    std::vector<double> low(std::size_t(k) + 1, 0.0);
    for (std::size_t lev = 0; lev < opts.scale_levels; ++lev) {
        double h = h_max * std::pow(h_min / h_max, double(lev) / double(opts.scale_levels - 1));
        std::vector<double> anchors;
        for (double a : {1.0, 1.5, 2.0, 3.0, 5.0, 8.0}) anchors.push_back(a * h);
        for (double xi = 0.05; xi < opts.x_interior_hi; xi *= 2.0) anchors.push_back(xi);
        for (double x0 : anchors) {
            if (x0 < opts.x_anchor_lo || x0 + h * (k + 1) >= C) continue;
            sup = std::max(sup, std::abs(f(x0)));
            for (int j = 1; j <= k; ++j)
                low[std::size_t(j)] =
                    std::max(low[std::size_t(j)], std::abs(fdiff(f, j, x0, h)) / std::pow(h, j));
            semi = std::max(semi,
                            std::abs(fdiff(f, k + 1, x0, h)) / std::pow(h, double(k) + alpha));
        }
    }
    HolderEstimate est;
    est.k = k;
    est.alpha = alpha;
    est.scale_band = {h_min, h_max};
    est.sup_norm = sup;
    est.seminorm = semi;
    est.value = sup + semi;
    for (int j = 1; j <= k; ++j) est.value += low[std::size_t(j)];
    return est;
}

namespace {

struct CollarMeasure {
    double x_mid;
    double local_norm;
};

// Classical holder measurement of u = rho^{-delta} p on one dyadic collar
// with all lengths in t = log(1/x) units (the Moebius rescaling of the
// radial reduction).
CollarMeasure measure_collar(const RadialMetric& g, const RadialProfile& p, int l, double beta,
                             double delta, double x_hi, const WeightedOptions& opts) {
    const BoundaryBundle* bb = g.boundary_bundle();
    double C = bb ? bb->coord_scale : 1.0;
    auto u = [&](double t) {
        double x = std::exp(-t);
        double r = std::log(C / x);
        double w = (delta == 0.0) ? 1.0 : std::pow(g.rho(r), -delta);
        return w * p.eval(r);
    };
    double t_lo = std::log(1.0 / x_hi); // collar [x_hi/2, x_hi]
    double sup = 0.0, semi = 0.0;
    std::vector<double> low(std::size_t(l) + 1, 0.0);
    for (std::size_t lev = 0; lev < opts.tau_levels; ++lev) {
        // Moebius charts live at unit scale; shrinking tau much below it
        // only amplifies evaluation noise by tau^{-(l+beta)}.
        double tau_max = std::log(2.0) / double(l + 2);
        double tau = tau_max * std::pow(0.7, double(lev));
        for (std::size_t a = 0; a < opts.anchors; ++a) {
            double t0 = t_lo + (std::log(2.0) - tau * double(l + 1)) * double(a) /
                                   double(opts.anchors);
            sup = std::max(sup, std::abs(u(t0)));
            for (int j = 1; j <= l; ++j)
                low[std::size_t(j)] =
                    std::max(low[std::size_t(j)], std::abs(fdiff(u, j, t0, tau)) / std::pow(tau, j));
            semi = std::max(semi,
                            std::abs(fdiff(u, l + 1, t0, tau)) / std::pow(tau, double(l) + beta));
        }
    }
    double total = sup + semi;
    for (int j = 1; j <= l; ++j) total += low[std::size_t(j)];
    return {x_hi * 0.75, total};
}

} // namespace

std::vector<std::pair<double, double>> weighted_collar_table(const RadialMetric& g,
                                                             const RadialProfile& p, int l,
                                                             double beta, double delta,
                                                             const WeightedOptions& opts) {
    if (l < 0 || !(beta > 0.0) || !(beta < 1.0))
        throw std::invalid_argument("weighted_norm: need l >= 0, beta in (0,1)");
    if (!(opts.collar_x_lo < opts.collar_x_hi))
        throw std::invalid_argument("weighted_norm: empty collar set");
    std::vector<std::pair<double, double>> table;
    for (double xh = opts.collar_x_hi; xh > opts.collar_x_lo; xh *= 0.5) {
        auto m = measure_collar(g, p, l, beta, delta, xh, opts);
        table.push_back({m.x_mid, m.local_norm});
    }
    return table;
}

HolderEstimate weighted_norm(const RadialMetric& g, const RadialProfile& p, int l, double beta,
                             double delta, const WeightedOptions& opts) {
    auto table = weighted_collar_table(g, p, l, beta, delta, opts);
    HolderEstimate est;
    est.k = l;
    est.alpha = beta;
    est.delta = delta;
    est.scale_band = {opts.collar_x_lo, opts.collar_x_hi};
    for (const auto& [x, v] : table) {
        est.seminorm = std::max(est.seminorm, v);
        est.sup_norm = std::max(est.sup_norm, v);
    }
    // Interior contribution: the plain estimator of rho^{-delta} p with
    // anchors kept outside the collar region.
    RadialProfile u = p;
    if (delta != 0.0) {
        std::size_t K = std::size_t(p.derivative_order());
        RadialProfile w = RadialProfile::from_function(
            p.grid(), [&](double r, std::size_t ord) { return pow(g.rho_jet(r, ord), -delta); },
            K);
        u = p * w;
    }
    HolderOptions ho;
    ho.resolution = opts.collar_x_hi / 32.0;
    ho.x_interior_hi = 0.9;
    ho.x_anchor_lo = opts.collar_x_hi;
    HolderEstimate interior = holder_seminorm(g, u, l, beta, ho);
    est.value = std::max(est.seminorm, interior.value);
    return est;
}

} // namespace pelab
