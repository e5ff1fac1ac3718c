#include "pelab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pelab/asymptotics.hpp"
#include "pelab/operators.hpp"

namespace pelab {

namespace {

Series dt(const Series& X, const Series& N) {
    Series d = X.derivative();
    return d / N.truncated(d.order());
}

// Stable boundary-series evaluator for rho_s-based quantities.  All terms of
// delta = 1 + (log rho_s)' are explicitly small near the boundary, so no
// cancellation against 1 occurs.
struct CollarSeries {
    std::vector<std::pair<double, double>> terms; // (exponent e, coeff) of rho_s/x
    double coord_scale = 1.0;

    static CollarSeries from(const BoundarySeries& bs) {
        CollarSeries cs;
        cs.coord_scale = bs.coord_scale;
        for (const auto& t : bs.terms) cs.terms.push_back({bs.mu + t.offset, t.coeff});
        return cs;
    }

    // r-jet of sum c x^{e} at the point with x = x0.
    Series omega_jet(double x0, std::size_t K, bool x_weighted) const {
        Series acc(K);
        for (const auto& [e, c] : terms) {
            double w = (x_weighted ? e : 1.0) * c * std::pow(x0, e);
            Series ex = exp(-e * Series::variable(0.0, K));
            acc += w * ex;
        }
        return acc;
    }

    // Jets of J and T at a collar point from the series alone.
    void jt_jets(double x0, double s, int n, std::size_t K, Series& J, Series& T) const {
        Series Om = omega_jet(x0, K, false);
        Series xOp = omega_jet(x0, K, true);   // x d/dx of rho_s/x
        Series delta = -xOp / Om;              // 1 + (log rho_s)'
        Series one_minus = 2.0 * delta - delta * delta; // 1 - |d rho_s|^2
        Series xj = x0 * exp(-Series::variable(0.0, K));
        Series rs = xj * Om;
        T = (one_minus / rs.truncated(one_minus.order())).truncated(one_minus.order());
        double pref = 0.5 * (2.0 * s - double(n) - 1.0);
        J = pref * (T / rs.truncated(T.order()));
    }
};

struct NodeJets {
    Series N;
    std::vector<Series> u;
};

NodeJets node_jets(const WarpedMetric& w, std::size_t i) {
    NodeJets nj;
    nj.N = w.lapse.jet(i);
    for (const auto& up : w.warps) nj.u.push_back(up.jet(i));
    return nj;
}

} // namespace

WarpedMetric compactified_metric(const Compactification& c) {
    WarpedMetric w;
    w.n = c.metric.n();
    w.lapse = c.rho_s;
    w.factors = c.metric.cross_section();
    std::size_t K = std::size_t(c.rho_s.derivative_order());
    for (std::size_t a = 0; a < w.factors.size(); ++a) {
        RadialProfile fa = RadialProfile::from_function(
            c.rho_s.grid(),
            [&, a](double r, std::size_t ord) { return c.metric.warp_jet(a, r, ord); }, K);
        w.warps.push_back(c.rho_s * fa);
    }
    return w;
}

WarpedMetric fixed_compactified_metric(const RadialMetric& g, std::size_t order) {
    WarpedMetric w;
    w.n = g.n();
    w.lapse = g.rho_profile(order);
    w.factors = g.cross_section();
    for (std::size_t a = 0; a < w.factors.size(); ++a) {
        RadialProfile fa = RadialProfile::from_function(
            g.grid(), [&, a](double r, std::size_t ord) { return g.warp_jet(a, r, ord); },
            order);
        w.warps.push_back(w.lapse * fa);
    }
    return w;
}

CurvatureSet curvature_of(const WarpedMetric& w) {
    std::size_t K = std::size_t(w.lapse.derivative_order());
    if (K < 2) throw std::invalid_argument("curvature_of: jets of order >= 2 required");
    std::size_t n_nodes = w.lapse.size();
    int n = w.n;
    std::size_t nf = w.factors.size();

    std::vector<Series> jric_t(n_nodes), jscalar(n_nodes), jE(n_nodes), jA(n_nodes);
    std::vector<std::vector<Series>> jric_f(nf, std::vector<Series>(n_nodes));

    for (std::size_t i = 0; i < n_nodes; ++i) {
        NodeJets nj = node_jets(w, i);
        std::size_t Ko = K - 2;
        std::vector<Series> v(nf), f2(nf), dlog(nf);
        for (std::size_t a = 0; a < nf; ++a) {
            v[a] = dt(nj.u[a], nj.N);
            f2[a] = dt(v[a], nj.N);
            dlog[a] = (v[a].truncated(Ko) / nj.u[a].truncated(Ko));
        }
        Series ric_t = Series::constant(0.0, Ko);
        for (std::size_t a = 0; a < nf; ++a)
            ric_t -= double(w.factors[a].dim) * (f2[a] / nj.u[a].truncated(Ko));
        Series scalar = ric_t;
        std::vector<Series> ric_a(nf);
        for (std::size_t a = 0; a < nf; ++a) {
            Series acc = -(f2[a] / nj.u[a].truncated(Ko));
            if (w.factors[a].dim >= 2) {
                Series num = v[a].truncated(Ko) * v[a].truncated(Ko) -
                             Series::constant(w.factors[a].kappa, Ko);
                acc -= double(w.factors[a].dim - 1) *
                       (num.truncated(Ko) / (nj.u[a] * nj.u[a]).truncated(Ko));
            }
            Series cross = Series::constant(0.0, Ko);
            for (std::size_t b = 0; b < nf; ++b)
                if (b != a) cross += double(w.factors[b].dim) * dlog[b].truncated(Ko);
            acc -= dlog[a].truncated(Ko) * cross;
            ric_a[a] = acc.truncated(Ko);
            scalar += double(w.factors[a].dim) * ric_a[a];
            jric_f[a][i] = ric_a[a];
        }
        jric_t[i] = ric_t.truncated(Ko);
        jscalar[i] = scalar.truncated(Ko);

        Series third = scalar / double(n + 1);
        Series e_t = ric_t - third;
        Series E2 = e_t * e_t;
        Series Jloc = scalar / (2.0 * double(n));
        Series a_t = (ric_t - Jloc) / double(n - 1);
        Series A2 = a_t * a_t;
        for (std::size_t a = 0; a < nf; ++a) {
            Series ea = ric_a[a] - third;
            E2 += double(w.factors[a].dim) * (ea * ea);
            Series aa = (ric_a[a] - Jloc) / double(n - 1);
            A2 += double(w.factors[a].dim) * (aa * aa);
        }
        jE[i] = E2.truncated(Ko);
        jA[i] = A2.truncated(Ko);
    }

    CurvatureSet out{RadialProfile(w.lapse.grid(), std::move(jric_t)), {},
                     RadialProfile(w.lapse.grid(), std::move(jscalar)), {}, {}, {}};
    for (std::size_t a = 0; a < nf; ++a)
        out.ric_factor.push_back(RadialProfile(w.lapse.grid(), std::move(jric_f[a])));
    out.J = out.scalar * (1.0 / (2.0 * double(n)));
    out.E_norm2 = RadialProfile(w.lapse.grid(), std::move(jE));
    out.A_norm2 = RadialProfile(w.lapse.grid(), std::move(jA));
    return out;
}

RadialProfile warped_laplacian(const WarpedMetric& w, const RadialProfile& f) {
    if (f.derivative_order() < 2)
        throw std::invalid_argument("warped_laplacian: derivative_order >= 2 required");
    std::vector<Series> jets(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        NodeJets nj = node_jets(w, i);
        Series P = Series::constant(1.0, nj.N.order());
        for (std::size_t a = 0; a < nj.u.size(); ++a)
            P = P * pow_int(nj.u[a], unsigned(w.factors[a].dim));
        Series df = f.jet(i).derivative();
        Series flux = (P.truncated(df.order()) * df) / nj.N.truncated(df.order());
        Series dflux = flux.derivative();
        jets[i] = dflux / (nj.N * P).truncated(dflux.order());
    }
    return RadialProfile(f.grid(), std::move(jets));
}

RadialProfile warped_gradient_inner(const WarpedMetric& w, const RadialProfile& f,
                                    const RadialProfile& g) {
    std::vector<Series> jets(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        Series df = f.jet(i).derivative();
        Series dg = g.jet(i).derivative();
        Series N2 = w.lapse.jet(i) * w.lapse.jet(i);
        Series prod = df * dg;
        jets[i] = prod / N2.truncated(prod.order());
    }
    return RadialProfile(f.grid(), std::move(jets));
}

RadialProfile q4_of(const WarpedMetric& w) {
    CurvatureSet cur = curvature_of(w);
    RadialProfile lapJ = warped_laplacian(w, cur.J);
    return lapJ * -1.0 + cur.J * cur.J * (0.5 * double(w.n + 1)) + cur.A_norm2 * -2.0;
}

namespace {

// T = (1 - (rho_s'/rho_s)^2)/rho_s from profile jets.
RadialProfile t_profile_of(const RadialProfile& rho_s) {
    std::vector<Series> jets(rho_s.size());
    for (std::size_t i = 0; i < rho_s.size(); ++i) {
        const Series& r = rho_s.jet(i);
        Series dlr = r.derivative() / r.truncated(r.order() - 1);
        Series one_minus = 1.0 - dlr * dlr;
        jets[i] = one_minus / r.truncated(one_minus.order());
    }
    return RadialProfile(rho_s.grid(), std::move(jets));
}

double richardson_at_rho(const RadialMetric& g, const RadialProfile& p, double h = 0.005) {
    // Four dyadic levels h..8h, eliminating the h, h^2 and h^3 terms.
    double v1 = p.eval(rho_inverse(g, h));
    double v2 = p.eval(rho_inverse(g, 2.0 * h));
    double v3 = p.eval(rho_inverse(g, 4.0 * h));
    double v4 = p.eval(rho_inverse(g, 8.0 * h));
    return (64.0 * v1 - 56.0 * v2 + 14.0 * v3 - v4) / 21.0;
}

} // namespace

InteriorCurvature compactified_curvatures(const Compactification& c, const RadialMetric& g) {
    int n = g.n();
    double s = c.s;
    double pref = 0.5 * (2.0 * s - double(n) - 1.0);

    WarpedMetric Ws = compactified_metric(c);
    CurvatureSet cur = curvature_of(Ws);
    std::size_t K = std::size_t(cur.J.derivative_order());

    RadialProfile T = t_profile_of(c.rho_s);
    RadialProfile J_rho = c.rho_s.map([&](const Series& r) {
        Series dlr = r.derivative() / r.truncated(r.order() - 1);
        Series one_minus = 1.0 - dlr * dlr;
        return pref * (one_minus / (r * r).truncated(one_minus.order()));
    });

    // Collar fill from the boundary expansion of rho_s/x; the jet route loses
    // all significance there to the 1 - |d rho_s|^2 cancellation.
    CollarSeries cs = CollarSeries::from(c.rho_s_over_x);
    const auto& grid = *c.rho_s.grid();
    std::vector<Series> jJ(grid.size()), jT(grid.size()), jJr(grid.size());
    double cut = 0.015;
    double disc = 0.0, disc_r = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double r = grid.node(i);
        double rho = g.rho(r);
        if (rho < cut) {
            double x0 = cs.coord_scale * std::exp(-r);
            Series Jser, Tser;
            cs.jt_jets(x0, s, n, K, Jser, Tser);
            jJ[i] = Jser;
            jT[i] = Tser;
            jJr[i] = Jser;
        } else {
            jJ[i] = cur.J.jet(i);
            jT[i] = T.jet(i).truncated(K);
            jJr[i] = J_rho.jet(i).truncated(K);
            double d = std::abs(cur.J.value(i) - J_rho.value(i)) /
                       std::max(1.0, std::abs(J_rho.value(i)));
            if (d > disc) {
                disc = d;
                disc_r = r;
            }
        }
    }
    (void)disc_r;

    InteriorCurvature out{RadialProfile(c.rho_s.grid(), std::move(jJ)),
                          RadialProfile(c.rho_s.grid(), std::move(jT)),
                          cur.E_norm2,
                          cur.A_norm2,
                          {},
                          q4_of(Ws),
                          0.0,
                          RadialProfile(c.rho_s.grid(), std::move(jJr)),
                          disc,
                          0.0,
                          0.0,
                          0.0,
                          0.0,
                          0.0};
    out.Q2 = out.J;

    if (disc > 100.0 * std::max(c.report.tol, 1e-12))
        throw std::runtime_error("compactified_curvatures: curvature routes disagree beyond "
                                 "100 tol, solver or formula bug");

    // Boundary traces by Richardson extrapolation on fixed-rho levels.
    out.J_boundary = richardson_at_rho(g, out.J);
    out.T_boundary = richardson_at_rho(g, out.T);
    out.H_from_series = c.H_s_series;

    // Mean curvature of the rho_s level sets extrapolated to M, and the
    // trace-free defect of the second fundamental form (umbilicity).
    {
        std::vector<Series> jH(grid.size());
        double defect = 0.0;
        std::vector<RadialProfile> II;
        for (std::size_t a = 0; a < Ws.factors.size(); ++a) {
            II.push_back(RadialProfile(c.rho_s.grid(), [&] {
                std::vector<Series> js(grid.size());
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    Series va = dt(Ws.warps[a].jet(i), Ws.lapse.jet(i));
                    js[i] = va / Ws.warps[a].jet(i).truncated(va.order());
                }
                return js;
            }()));
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            Series acc = Series::constant(0.0, II[0].jet(i).order());
            for (std::size_t a = 0; a < II.size(); ++a)
                acc += double(Ws.factors[a].dim) * II[a].jet(i);
            jH[i] = acc;
        }
        RadialProfile Hprof(c.rho_s.grid(), std::move(jH));
        out.H = richardson_at_rho(g, Hprof);
        if (II.size() > 1) {
            std::vector<double> vals;
            for (const auto& p : II) vals.push_back(richardson_at_rho(g, p));
            defect = *std::max_element(vals.begin(), vals.end()) -
                     *std::min_element(vals.begin(), vals.end());
        }
        out.umbilicity_defect = defect;
    }

    {
        RadialProfile drho = c.rho_s.map([](const Series& r) {
            Series dlr = r.derivative() / r.truncated(r.order() - 1);
            return dlr * -1.0;
        });
        out.drho_boundary = richardson_at_rho(g, drho);
    }
    return out;
}

RadialProfile q4(const Compactification& c, const RadialMetric& g) {
    (void)g;
    if (c.rho_s.derivative_order() < 4)
        throw std::invalid_argument("q4: insufficient smoothness carried by rho_s");
    return q4_of(compactified_metric(c));
}

namespace {

Q2NReport gjms_chain_report(const RadialMetric& g, const RadialProfile& u, int N,
                            double q_shift) {
    Q2NReport rep;
    rep.N = N;
    RadialProfile acc = u;
    double largest = u.max_abs();
    for (int j = 1; j <= N; ++j) {
        double cj = gjms_factor_constant(g.n(), N, j);
        acc = apply_laplacian_plus(g, acc) * -1.0 - acc * cj;
        largest = std::max(largest, acc.max_abs());
    }
    double sup = 0.0;
    for (std::size_t i = 0; i < acc.size(); ++i) sup = std::max(sup, std::abs(acc.value(i) + q_shift));
    rep.largest_intermediate = largest;
    rep.relative_residual = sup / std::max(largest, 1e-300);
    return rep;
}

} // namespace

Q2NReport q2N_vanishing_check(const RadialMetric& g, int N, const SolveOptions& opts) {
    if (N < 1 || N > 2)
        throw std::invalid_argument("q2N_vanishing_check: acceptance scope is 1 <= N <= 2");
    int n = g.n();
    double s = 0.5 * double(n) + double(N) - 0.5;
    Compactification c = solve_compactification(g, s, opts);
    Q2NReport rep = q2N_residual(c, N);
    return rep;
}

Q2NReport q2N_residual(const Compactification& c, int N) {
    const RadialMetric& g = c.metric;
    int n = g.n();
    Q2NReport rep;
    if (c.is_fg()) {
        if (2 * N != n + 1)
            throw std::invalid_argument("q2N_residual: FG branch applies only when 2N = n+1");
        rep = gjms_chain_report(g, c.v_or_w, N, gjms_q_constant(n));
    } else {
        rep = gjms_chain_report(g, c.v_or_w, N, 0.0);
    }
    rep.s = c.s;
    return rep;
}

PositivityReport positivity_audit(const Compactification& c, const RadialMetric& g) {
    int n = g.n();
    double s = c.s;
    bool t_branch = std::abs(s - 0.5 * double(n + 1)) < 1e-12;
    if (!t_branch && !(s > 0.5 * double(n) + 1.0))
        throw std::invalid_argument(
            "positivity_audit: range is s > n/2 + 1 or s = (n+1)/2");
    if (!g.boundary().positive_scalar)
        throw std::invalid_argument("positivity_audit: requires boundary R-hat > 0");

    InteriorCurvature cur = compactified_curvatures(c, g);
    PositivityReport rep;
    rep.branch = t_branch ? "T" : "J";
    rep.H_s = cur.H;

    const auto& grid = *c.rho_s.grid();
    double minJ = 1e300, minT = 1e300, supJ = 0.0, maxd = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double r = grid.node(i);
        double J = cur.J_rho_route.value(i);
        double T = cur.T.value(i);
        if (J < minJ) {
            minJ = J;
            if (!t_branch) worst = r;
        }
        if (T < minT) {
            minT = T;
            if (t_branch) worst = r;
        }
        supJ = std::max(supJ, std::abs(J));
        const Series& rj = c.rho_s.jet(i);
        double dlr = rj.deriv(1) / rj.value();
        maxd = std::max(maxd, std::abs(dlr));
    }
    rep.min_J = std::min(minJ, cur.J_boundary);
    rep.J_boundary = cur.J_boundary;
    rep.sup_abs_J = supJ;
    rep.min_T = std::min(minT, cur.T_boundary);
    rep.T_boundary = cur.T_boundary;
    rep.max_drho = maxd;
    rep.worst_r = worst;
    rep.drho_bounded = maxd <= 1.0 + 1e-8;
    rep.positive = t_branch ? (rep.min_T > 0.0 && rep.sup_abs_J < 1e-8)
                            : (rep.min_J > 0.0);
    return rep;
}

std::vector<IdentityResidual> identity_suite(const Compactification& c, const RadialMetric& g) {
    int n = g.n();
    double s = c.s;
    const auto& grid = *c.rho_s.grid();

    WarpedMetric Ws = compactified_metric(c);
    CurvatureSet cur_s = curvature_of(Ws);
    WarpedMetric Wf = fixed_compactified_metric(g, std::size_t(c.rho_s.derivative_order()));
    CurvatureSet cur_f = curvature_of(Wf);
    RadialProfile rho = g.rho_profile(std::size_t(c.rho_s.derivative_order()));
    RadialProfile T = t_profile_of(c.rho_s);

    auto restricted_sup = [&](const std::vector<RadialProfile>& terms) {
        IdentityResidual out;
        double sup = 0.0, loc = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (g.rho(grid.node(i)) <= 0.01) continue;
            double acc = 0.0, scale = 1.0;
            for (const auto& t : terms) {
                acc += t.value(i);
                scale = std::max(scale, std::abs(t.value(i)));
            }
            double rel = std::abs(acc) / scale;
            if (rel > sup) {
                sup = rel;
                loc = grid.node(i);
            }
        }
        out.sup_residual = sup;
        out.location = loc;
        return out;
    };

    std::vector<IdentityResidual> out;

    { // J-bar of the fixed compactification from rho derivatives
        RadialProfile lap_rho = warped_laplacian(Wf, rho);
        RadialProfile inv_rho = rho.map([](const Series& f) { return 1.0 / f; });
        RadialProfile one_minus = rho.map([](const Series& f) {
            Series dlr = f.derivative() / f.truncated(f.order() - 1);
            return 1.0 - dlr * dlr;
        });
        auto res = restricted_sup({cur_f.J, lap_rho * inv_rho,
                                   one_minus * inv_rho * inv_rho * (0.5 * double(n + 1))});
        res.name = "scalar_from_rho";
        out.push_back(res);
    }
    { // laplacian of rho_s against -s T
        RadialProfile lap = warped_laplacian(Ws, c.rho_s);
        auto res = restricted_sup({lap, T * s});
        res.name = "rho_s_laplacian";
        out.push_back(res);
    }
    { // J-bar_s against the gradient defect of rho_s
        double pref = 0.5 * (2.0 * s - double(n) - 1.0);
        RadialProfile inv = c.rho_s.map([](const Series& f) { return 1.0 / f; });
        auto res = restricted_sup({cur_s.J, T * inv * -pref});
        res.name = "j_from_drho";
        out.push_back(res);
    }
    { // elliptic equation of T-bar_s, valid for s > n/2 + 1
        IdentityResidual res;
        if (s > 0.5 * double(n) + 1.0) {
            RadialProfile lapT = warped_laplacian(Ws, T);
            RadialProfile inner = warped_gradient_inner(Ws, c.rho_s, cur_s.J);
            res = restricted_sup(
                {lapT, cur_s.J * T, cur_s.A_norm2 * c.rho_s * 2.0, inner * -2.0});
        } else {
            res.applicable = false;
        }
        res.name = "t_elliptic";
        out.push_back(res);
    }
    { // T-bar_s against the trace-free Ricci source, only at s = (n+1)/2
        IdentityResidual res;
        if (std::abs(s - 0.5 * double(n + 1)) < 1e-12) {
            RadialProfile lapT = warped_laplacian(Ws, T);
            res = restricted_sup(
                {lapT, cur_s.E_norm2 * c.rho_s * (2.0 / double((n - 1) * (n - 1)))});
        } else {
            res.applicable = false;
        }
        res.name = "t_traceless_source";
        out.push_back(res);
    }
    { // conformal scalar relation for gbar_s = phi^{2/(n-s)} gbar (s != n).
        // Gradient coefficient n(n+1-2s)/(n-s)^2 from the standard conformal
        // change in dimension n+1; cross-checked against the closed-form
        // s = n+1 case where gbar_s is the round sphere.
        IdentityResidual res;
        if (s != double(n)) {
            double a = double(n) - s;
            RadialProfile lap_phi = warped_laplacian(Wf, c.phi_s);
            RadialProfile inv_phi = c.phi_s.map([](const Series& f) { return 1.0 / f; });
            RadialProfile dphi2 = warped_gradient_inner(Wf, c.phi_s, c.phi_s);
            RadialProfile conf = c.phi_s.map([&](const Series& f) { return pow(f, 2.0 / a); });
            double grad_coeff = double(n) * (double(n) + 1.0 - 2.0 * s) / (a * a);
            res = restricted_sup({lap_phi * inv_phi * (-2.0 * double(n) / a),
                                  dphi2 * inv_phi * inv_phi * grad_coeff,
                                  cur_f.scalar, conf * cur_s.scalar * -1.0});
        } else {
            res.applicable = false;
        }
        res.name = "conformal_scalar";
        out.push_back(res);
    }
    { // elliptic equation of J-bar_s, s > n/2 + 1
        IdentityResidual res;
        if (s > 0.5 * double(n) + 1.0) {
            double k = 2.0 * s - double(n) - 1.0;
            RadialProfile lapJ = warped_laplacian(Ws, cur_s.J);
            RadialProfile inner = warped_gradient_inner(Ws, c.rho_s, cur_s.J);
            RadialProfile inv = c.rho_s.map([](const Series& f) { return 1.0 / f; });
            res = restricted_sup({lapJ * (1.0 / k),
                                  inner * inv * ((3.0 + double(n) - 2.0 * s) / k),
                                  cur_s.A_norm2,
                                  cur_s.J * cur_s.J * (-double(n + 1) / (k * k))});
        } else {
            res.applicable = false;
        }
        res.name = "j_elliptic";
        out.push_back(res);
    }
    return out;
}

} // namespace pelab
