#include "pelab/family.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "pelab/curvature.hpp"

namespace pelab {

namespace {

bool near_integer(double v) { return std::abs(v - std::round(v)) < 1e-12; }

bool odd_integer(double v) {
    return near_integer(v) && (std::llround(v) % 2 != 0) && v > 0.0;
}

double metric_norm_estimate(const RadialMetric& g, int k, double alpha) {
    // Classical estimate on the warp components of gbar = rho^2 g+.
    HolderOptions ho;
    ho.resolution = 4e-4;
    double worst = 0.0;
    std::size_t K = std::size_t(k) + 2;
    for (std::size_t a = 0; a < g.cross_section().size(); ++a) {
        RadialProfile comp = RadialProfile::from_function(
            g.grid(),
            [&](double r, std::size_t ord) {
                Series w = g.warp_jet(a, r, ord);
                Series rho = g.rho_jet(r, ord);
                return (rho * w) * (rho * w);
            },
            K);
        worst = std::max(worst, holder_seminorm(g, comp, k, alpha, ho).value);
    }
    RadialProfile lapse2 = RadialProfile::from_function(
        g.grid(),
        [&](double r, std::size_t ord) {
            Series rho = g.rho_jet(r, ord);
            return rho * rho;
        },
        K);
    worst = std::max(worst, holder_seminorm(g, lapse2, k, alpha, ho).value);
    return worst;
}

struct MemberData {
    Compactification comp;
    InteriorCurvature cur;
};

MemberData solve_member(const RadialMetric& g, double s, const SolveOptions& opts) {
    MemberData md{solve_compactification(g, s, opts), {}};
    md.cur = compactified_curvatures(md.comp, g);
    return md;
}

} // namespace

std::vector<RadialMetric> build_family(const FamilySpec& spec) {
    if (spec.parameters.empty())
        throw std::invalid_argument("build_family: empty parameter list");
    std::vector<RadialMetric> fam;
    for (std::size_t i = 0; i < spec.parameters.size(); ++i) {
        double p = spec.parameters[i];
        if (spec.model == "ads_schw") {
            fam.push_back(make_ads_schwarzschild(spec.n, p, spec.beta));
        } else if (spec.model == "hyperbolic_rho") {
            auto base = make_hyperbolic(spec.n);
            fam.push_back(p == 0.0 ? base : base.with_defining_function({1.0, p, 0.5 * p * p}));
        } else {
            throw std::invalid_argument("build_family: unknown model " + spec.model);
        }
        if (spec.rescale_boundary && i > 0) {
            // Vary the boundary representative scale within the conformal
            // class; exploratory option, no acceptance contract attached.
            fam.back() = fam.back().with_defining_function(
                {1.0 + 0.05 * double(i)}, /*allow_rescale=*/true);
        }
    }
    return fam;
}

double UniformBoundReport::value_of(std::size_t member, const std::string& quantity) const {
    for (const auto& r : rows)
        if (r.member == member && r.quantity == quantity) return r.value;
    throw std::out_of_range("UniformBoundReport: no row " + quantity);
}

std::pair<int, double> direction_a_indices(int n, int k, double alpha, double s) {
    double tg = 2.0 * s - double(n);
    if (s == double(n)) {
        // FG branch: full regularity for odd n, cap at n otherwise.
        if (n % 2 != 0) return {k, alpha / 2.0};
        int l = std::min(k, n - 1);
        return {l, std::min(alpha / 2.0, 0.5 * (double(n) - double(l)))};
    }
    if (double(k) + alpha < tg) return {k, alpha / 2.0};      // (a.1)
    if (odd_integer(tg)) return {k, alpha / 2.0};             // (a.2)
    int l = std::min(k, int(std::ceil(tg)) - 1);              // (a.3): l + beta < 2s-n
    double beta = std::min(alpha / 2.0, 0.5 * (tg - double(l)));
    return {l, beta};
}

namespace {

std::vector<MemberData> solve_all(const std::vector<RadialMetric>& fam, double s,
                                  const SolveOptions& opts) {
    std::vector<std::future<MemberData>> futs;
    for (const auto& g : fam)
        futs.push_back(std::async(std::launch::async,
                                  [&g, s, &opts] { return solve_member(g, s, opts); }));
    std::vector<MemberData> out;
    out.reserve(fam.size());
    for (std::size_t i = 0; i < futs.size(); ++i) {
        try {
            out.push_back(futs[i].get());
        } catch (const std::exception& e) {
            throw std::runtime_error("family member " + std::to_string(i) +
                                     " failed: " + e.what());
        }
    }
    return out;
}

void push_bounded_block(UniformBoundReport& rep, const std::vector<double>& vals,
                        const std::string& quantity, double factor, double baseline) {
    for (std::size_t i = 0; i < vals.size(); ++i) {
        bool ok = vals[i] <= factor * baseline + 1e-12;
        rep.rows.push_back({i, quantity, vals[i], ok});
        if (!ok) {
            rep.all_bounds_hold = false;
            rep.failures.push_back(quantity);
        }
    }
}

void push_positive_block(UniformBoundReport& rep, const std::vector<double>& vals,
                         const std::string& quantity, double floor = 0.0) {
    for (std::size_t i = 0; i < vals.size(); ++i) {
        bool ok = vals[i] > floor;
        rep.rows.push_back({i, quantity, vals[i], ok});
        if (!ok) {
            rep.all_bounds_hold = false;
            rep.failures.push_back(quantity);
        }
    }
}

} // namespace

UniformBoundReport run_direction_a(const FamilySpec& spec) {
    auto fam = build_family(spec);
    UniformBoundReport rep;
    rep.direction = "a";
    rep.s_values = spec.s_values;

    // Precondition: the fixed compactifications have bounded norms.
    std::vector<double> gnorms;
    for (const auto& g : fam) gnorms.push_back(metric_norm_estimate(g, spec.k, spec.alpha));
    push_bounded_block(rep, gnorms, "gbar_norm", spec.bound_factor, gnorms.front());

    for (double s : spec.s_values) {
        auto members = solve_all(fam, s, spec.solve);
        auto [l, beta] = direction_a_indices(spec.n, spec.k, spec.alpha, s);
        std::string tag = "_s" + std::to_string(s);

        HolderOptions ho;
        ho.resolution = 4e-4;
        std::vector<double> norms, mins, maxs;
        for (auto& md : members) {
            norms.push_back(holder_seminorm(md.comp.metric, md.comp.phi_s, l, beta, ho).value);
            mins.push_back(md.comp.phi_s.min_value());
            maxs.push_back(md.comp.phi_s.max_abs());
        }
        push_bounded_block(rep, norms, "phi_norm" + tag, spec.phi_bound_factor, norms.front());
        if (s == double(spec.n)) {
            // FG branch: phi = w - log rho is pinched as |phi| < C.
            push_bounded_block(rep, maxs, "phi_absbound" + tag, spec.bound_factor,
                               std::max(maxs.front(), 1.0));
        } else {
            push_positive_block(rep, mins, "phi_min" + tag);
            push_bounded_block(rep, maxs, "phi_max" + tag, spec.bound_factor, maxs.front());
        }

        double tg = 2.0 * s - double(spec.n);
        bool a3 = (double(spec.k) + spec.alpha >= tg) && !odd_integer(tg) && s != double(spec.n);
        if (a3) {
            std::vector<double> exps;
            for (const auto& md : members) {
                auto pr = regularity_threshold_probe(md.comp);
                exps.push_back(pr.measured_exponent);
            }
            for (std::size_t i = 0; i < exps.size(); ++i) {
                int m = std::max(1, int(std::ceil(tg - 1e-12)));
                bool ok = std::abs(exps[i] - (tg - double(m) + 1.0)) < 0.1;
                rep.rows.push_back({i, "fractional_exponent" + tag, exps[i], ok});
                if (!ok) {
                    rep.all_bounds_hold = false;
                    rep.failures.push_back("fractional_exponent" + tag);
                }
            }
        }
    }
    return rep;
}

UniformBoundReport run_direction_b(const FamilySpec& spec) {
    double half_n = 0.5 * double(spec.n);
    for (double s : spec.s_values) {
        bool t_branch = std::abs(s - (half_n + 0.5)) < 1e-12;
        if (!t_branch && !(s > half_n + 1.0))
            throw std::invalid_argument(
                "run_direction_b: s in (n/2, n/2+1) other than (n+1)/2 is excluded; the "
                "fractional Q-curvature obstruction forbids C^{k,alpha} regularity there");
    }
    auto fam = build_family(spec);
    for (const auto& g : fam)
        if (!g.boundary().positive_scalar)
            throw std::invalid_argument("run_direction_b: requires R-hat > 0 for all members");

    UniformBoundReport rep;
    rep.direction = "b";
    rep.s_values = spec.s_values;

    for (double s : spec.s_values) {
        auto members = solve_all(fam, s, spec.solve);
        std::string tag = "_s" + std::to_string(s);

        std::vector<double> sup_rho, rho_norm, ratio_min, ratio_max, collar_drho, max_drho,
            jt_min, ratio_norm;
        HolderOptions ho;
        ho.resolution = 4e-4;
        for (auto& md : members) {
            const auto& g = md.comp.metric;
            sup_rho.push_back(md.comp.rho_s.max_abs());
            int kk = std::min(spec.k + 1, 4);
            rho_norm.push_back(
                holder_seminorm(g, md.comp.rho_s, kk, spec.alpha / 2.0, ho).value);

            double rmin = 1e300, rmax = 0.0, cmin = 1e300, dmax = 0.0;
            for (std::size_t i = 0; i < md.comp.rho_s.size(); ++i) {
                double r = g.grid()->node(i);
                double ratio = md.comp.rho_s.value(i) / g.rho(r);
                rmin = std::min(rmin, ratio);
                rmax = std::max(rmax, ratio);
                const Series& rj = md.comp.rho_s.jet(i);
                double dn = std::abs(rj.deriv(1) / rj.value());
                dmax = std::max(dmax, dn);
                if (g.rho(r) < 0.25) cmin = std::min(cmin, dn);
            }
            ratio_min.push_back(rmin);
            ratio_max.push_back(rmax);
            collar_drho.push_back(cmin);
            max_drho.push_back(dmax);

            auto audit = positivity_audit(md.comp, g);
            jt_min.push_back(audit.branch == "T" ? audit.min_T : audit.min_J);

            RadialProfile ratio_prof = g.rho_profile(std::size_t(spec.k) + 2) / md.comp.rho_s;
            ratio_norm.push_back(
                holder_seminorm(g, ratio_prof, spec.k, spec.alpha / 2.0, ho).value);
        }

        push_bounded_block(rep, sup_rho, "sup_rho_s" + tag, spec.bound_factor, sup_rho.front());
        push_bounded_block(rep, rho_norm, "rho_s_norm" + tag, spec.bound_factor,
                           rho_norm.front());
        push_positive_block(rep, ratio_min, "ratio_min" + tag);
        push_bounded_block(rep, ratio_max, "ratio_max" + tag, spec.bound_factor,
                           ratio_max.front());
        push_positive_block(rep, collar_drho, "collar_drho_min" + tag, 0.05);
        for (std::size_t i = 0; i < max_drho.size(); ++i) {
            bool ok = max_drho[i] <= 1.0 + 1e-8;
            rep.rows.push_back({i, "max_drho" + tag, max_drho[i], ok});
            if (!ok) {
                rep.all_bounds_hold = false;
                rep.failures.push_back("max_drho" + tag);
            }
        }
        push_positive_block(rep, jt_min, "jt_min" + tag);
        push_bounded_block(rep, ratio_norm, "transfer_norm" + tag, spec.bound_factor,
                           ratio_norm.front());
    }
    return rep;
}

CorollaryReport corollary_roundtrip(const FamilySpec& spec, int N, int K) {
    if (N < 1 || K < 1)
        throw std::invalid_argument("corollary_roundtrip: N, K >= 1 required");
    CorollaryReport rep;
    rep.s = 0.5 * double(spec.n) + double(N) - 0.5;
    rep.t = 0.5 * double(spec.n) + double(K) - 0.5;
    FamilySpec fwd = spec;
    fwd.s_values = {rep.s};
    FamilySpec bwd = spec;
    bwd.s_values = {rep.t};
    rep.forward = run_direction_b(fwd);
    rep.backward = run_direction_b(bwd);
    rep.both_bounded = rep.forward.all_bounds_hold && rep.backward.all_bounds_hold;
    return rep;
}

} // namespace pelab
