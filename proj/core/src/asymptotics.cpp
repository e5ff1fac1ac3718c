#include "pelab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "expansions.hpp"
#include "frobenius.hpp"
#include "leastsq.hpp"

namespace pelab {

std::pair<double, double> indicial_roots(int n, double s) {
    if (!(s > 0.5 * n)) throw std::invalid_argument("indicial_roots: s > n/2 required");
    return {double(n) - s, s};
}

namespace {

bool is_integer(double v) { return std::abs(v - std::round(v)) < 1e-12; }

BoundarySeries from_frobenius(const detail::FrobeniusResult& f, SeriesVariable var,
                              double coord_scale, bool drop_zero_lead) {
    BoundarySeries out;
    out.mu = f.mu;
    out.variable = var;
    out.coord_scale = coord_scale;
    out.truncation_order = double(f.valid_terms);
    out.stopped_at_collision = f.collided;
    out.collision_source = f.collision_source;
    for (std::size_t j = 0; j < f.valid_terms; ++j) {
        if (drop_zero_lead && j == 0 && f.coeff[j] == 0.0 && f.valid_terms > 1) continue;
        out.add_term({double(j), f.coeff[j], TermProvenance::Recursion, double(j)});
    }
    return out;
}

} // namespace

BoundarySeries build_phi_series(const RadialMetric& g, double s, int order,
                                SeriesVariable variable) {
    int n = g.n();
    if (!(s > 0.5 * n) || s == double(n))
        throw std::invalid_argument("build_phi_series: need s > n/2, s != n");
    if (order < 0) throw std::invalid_argument("build_phi_series: order >= 0");
    double two_gamma = 2.0 * s - double(n);
    if (!is_integer(two_gamma) && double(order) > std::floor(two_gamma))
        throw std::domain_error(
            "build_phi_series: stop condition, order exceeds the fractional window 2s-n");

    auto ce = detail::coefficient_expansions(g);
    Series b = detail::phi_b_series(ce, n, s);
    Series c = detail::phi_c_series(ce, n, s);

    detail::FrobeniusResult f;
    if (variable == SeriesVariable::X) {
        Series A = Series::constant(1.0, b.order());
        f = detail::frobenius_solve(A, 1.0 - b, c, 0.0, 1.0, Series(), std::size_t(order) + 1);
    } else {
        auto d = detail::rho_driver(ce, b, c);
        f = detail::frobenius_solve(d.A, d.B, d.C, 0.0, 1.0, Series(), std::size_t(order) + 1);
    }
    return from_frobenius(f, variable, (variable == SeriesVariable::X) ? ce.coord_scale : 1.0,
                          false);
}

BoundarySeries build_w_series(const RadialMetric& g, int order, SeriesVariable variable) {
    int n = g.n();
    if (order < 0) throw std::invalid_argument("build_w_series: order >= 0");
    auto ce = detail::coefficient_expansions(g);
    Series G = detail::w_source_series(ce, n);

    detail::FrobeniusResult f;
    if (variable == SeriesVariable::X) {
        Series A = Series::constant(1.0, ce.lambda_prime.order());
        f = detail::frobenius_solve(A, 1.0 - ce.lambda_prime, Series::constant(0.0, A.order()),
                                    0.0, 0.0, G, std::size_t(order) + 1);
    } else {
        Series zero_c = Series::constant(0.0, ce.order - 2);
        auto d = detail::rho_driver(ce, ce.lambda_prime, zero_c);
        Series Gr = detail::in_rho_variable(ce, G);
        f = detail::frobenius_solve(d.A, d.B, d.C, 0.0, 0.0, Gr, std::size_t(order) + 1);
    }
    return from_frobenius(f, variable, (variable == SeriesVariable::X) ? ce.coord_scale : 1.0,
                          false);
}

GeodesicGauge geodesic_gauge(const RadialMetric& g) {
    const BoundaryBundle* bb = g.boundary_bundle();
    if (!bb) throw std::invalid_argument("geodesic_gauge: model carries no boundary expansion");

    double rm = g.r_max();
    double a = g.rho(rm) * std::exp(rm);
    double b = g.rho(rm - 1.0) * std::exp(rm - 1.0);
    if (std::abs(a - b) > 1e-5 * std::abs(a))
        throw std::runtime_error("geodesic_gauge: rho e^r does not converge");

    GeodesicGauge out;
    out.coord_scale = bb->coord_scale;
    double C = bb->coord_scale;
    out.x_profile = RadialProfile::from_function(
        g.grid(), [C](double r, std::size_t K) { return C * exp(-Series::variable(r, K)); }, 8);

    double Rhat = 0.0;
    std::vector<double> ric_eig;
    for (std::size_t i = 0; i < bb->warp_times_x.size(); ++i) {
        const auto& fct = g.cross_section()[i];
        Series G2 = bb->warp_times_x[i] * bb->warp_times_x[i];
        out.g1_coefficient.push_back(G2[1]);
        out.g2_coefficient.push_back(G2[2]);
        double r_a = (fct.dim >= 2) ? fct.kappa * double(fct.dim - 1) / G2[0] : 0.0;
        ric_eig.push_back(r_a);
        Rhat += double(fct.dim) * r_a;
    }
    double Jhat = Rhat / (2.0 * double(g.n() - 1));
    for (std::size_t i = 0; i < ric_eig.size(); ++i) {
        Series G2 = bb->warp_times_x[i] * bb->warp_times_x[i];
        out.minus_schouten.push_back(-(ric_eig[i] - Jhat) / double(g.n() - 2) * G2[0]);
    }

    // |dx|^2 for gtilde = x^2 g+ is (x'/x)^2; exact for x = C e^{-r}.
    double dxerr = 0.0, ratio = 0.0;
    for (std::size_t i = 0; i < g.grid()->size(); ++i) {
        double r = g.grid()->node(i);
        double x = out.x_profile.value(i);
        double xp = out.x_profile.deriv(i, 1);
        dxerr = std::max(dxerr, std::abs(xp * xp / (x * x) - 1.0));
        double rho = g.rho(r);
        if (rho < 0.5) ratio = std::max(ratio, std::abs((x - rho) / (rho * rho)));
    }
    out.dx_norm_error = dxerr;
    out.x_minus_rho_over_rho2 = ratio;
    return out;
}

double rho_inverse(const RadialMetric& g, double value) {
    if (!(value > 0.0) || value >= g.rho(1e-6))
        throw std::invalid_argument("rho_inverse: value outside range");
    double lo = 1e-6, hi = g.r_max() + 5.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (g.rho(mid) > value ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ExtractResult extract_expansion(const RadialMetric& g, const RadialProfile& p,
                                SeriesVariable variable, const std::vector<double>& exponents,
                                const ExtractOptions& opts) {
    if (exponents.empty() || !std::is_sorted(exponents.begin(), exponents.end()))
        throw std::invalid_argument("extract_expansion: exponents must be sorted");
    const BoundaryBundle* bb = g.boundary_bundle();
    double C = bb ? bb->coord_scale : 1.0;

    std::vector<std::vector<double>> A;
    std::vector<double> rhs;
    for (std::size_t i = 0; i < opts.samples; ++i) {
        double t = opts.x0 * std::pow(0.25, double(i) / double(opts.samples - 1));
        double r = (variable == SeriesVariable::X) ? std::log(C / t) : rho_inverse(g, t);
        std::vector<double> row;
        row.reserve(exponents.size());
        for (double e : exponents) row.push_back(std::pow(t, e));
        A.push_back(std::move(row));
        rhs.push_back(p.eval(r));
    }
    auto ls = detail::solve_least_squares(std::move(A), std::move(rhs));
    if (ls.condition > opts.max_condition)
        throw std::runtime_error("extract_expansion: ill-conditioned fit, condition " +
                                 std::to_string(ls.condition));
    ExtractResult out;
    out.residual = ls.residual;
    out.condition = ls.condition;
    out.series.mu = 0.0;
    out.series.variable = variable;
    out.series.coord_scale = (variable == SeriesVariable::X) ? C : 1.0;
    out.series.truncation_order = exponents.back() + 1.0;
    for (std::size_t k = 0; k < exponents.size(); ++k)
        out.series.add_term({exponents[k], ls.coeff[k], TermProvenance::Fitted, ls.residual});
    return out;
}

} // namespace pelab
