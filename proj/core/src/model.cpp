#include "pelab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ode_util.hpp"

namespace pelab {

namespace detail {

class ModelBackend {
public:
    virtual ~ModelBackend() = default;

    int n = 0;
    double r_max_v = 20.0;
    std::shared_ptr<const RadialGrid> grid;
    std::vector<CrossSectionFactor> factors;
    BoundaryData boundary;
    std::size_t center_dim = 0;
    std::string name;
    bool cap_mismatch = false;
    double cap_period = 0.0;
    std::optional<BoundaryBundle> bundle;

    virtual Series lambda_jet(double r, std::size_t K) const = 0;
    virtual Series lambda_prime_jet(double r, std::size_t K) const = 0;
    virtual Series rho_jet(double r, std::size_t K) const = 0;
    virtual Series warp_jet(std::size_t a, double r, std::size_t K) const = 0;
};

namespace {

void finish_boundary_data(ModelBackend& b) {
    auto& bd = b.boundary;
    bd.ghat_scale.clear();
    double Rhat = 0.0;
    for (const auto& f : b.factors) {
        bd.ghat_scale.push_back(f.boundary_scale);
        if (f.dim >= 2)
            Rhat += f.kappa * double(f.dim) * double(f.dim - 1) / (f.boundary_scale * f.boundary_scale);
    }
    bd.Rhat = Rhat;
    bd.Jhat = Rhat / (2.0 * double(b.n - 1));
    bd.positive_scalar = Rhat > 0.0;
}

// lambda = sum d_a log f_a from the factor jets.
Series lambda_from_warps(const ModelBackend& b, double r, std::size_t K) {
    Series acc = Series::constant(0.0, K);
    for (std::size_t a = 0; a < b.factors.size(); ++a)
        acc += double(b.factors[a].dim) * log(b.warp_jet(a, r, K));
    return acc;
}

class HyperbolicBackend final : public ModelBackend {
public:
    Series lambda_jet(double r, std::size_t K) const override {
        return double(n) * log(sinh(Series::variable(r, K)));
    }
    Series lambda_prime_jet(double r, std::size_t K) const override {
        Series rr = Series::variable(r, K);
        return double(n) * cosh(rr) / sinh(rr);
    }
    Series rho_jet(double r, std::size_t K) const override {
        return 1.0 / (1.0 + cosh(Series::variable(r, K)));
    }
    Series warp_jet(std::size_t, double r, std::size_t K) const override {
        return sinh(Series::variable(r, K));
    }
};

class AdsSchwBackend final : public ModelBackend {
public:
    double m = 0.0;
    double q_h = 0.0;     // largest root of V (0 when m = 0)
    double Cm = 0.0;      // lim (r - log q)
    double aux_r0 = 0.0, aux_h = 0.0;
    std::vector<double> aux_q;

    Series V_of(const Series& q) const {
        Series v = 1.0 + q * q;
        if (m > 0.0) v -= 2.0 * m * pow(q, 2.0 - double(n));
        return v;
    }

    double q_value(double r) const {
        if (r <= aux_r0) return q_center(r);
        std::size_t i = std::min(std::size_t((r - aux_r0) / aux_h + 0.5), aux_q.size() - 1);
        double ri = aux_r0 + double(i) * aux_h;
        Series q = q_jet_from_value(ri, aux_q[i], 10);
        return q.eval(r - ri);
    }

    // ODE jet for q about r from its value there: q' = sqrt(V(q)).
    Series q_jet_from_value(double, double qv, std::size_t K) const {
        Series q(K);
        q.at(0) = qv;
        for (std::size_t k = 0; k + 1 <= K; ++k) {
            Series s = sqrt(V_of(q.truncated(k)));
            q.at(k + 1) = s[k] / double(k + 1);
        }
        return q;
    }

    Series q_jet(double r, std::size_t K) const { return q_jet_from_value(r, q_value(r), K); }

    double q_center(double r) const {
        if (m == 0.0) return std::sinh(r);
        double Vp = 2.0 * q_h + 2.0 * m * double(n - 2) * std::pow(q_h, 1.0 - double(n));
        double Vpp = 2.0 - 2.0 * m * double(n - 2) * double(n - 1) * std::pow(q_h, -double(n));
        return q_h + Vp * r * r / 4.0 + Vpp * Vp * std::pow(r, 4) / 96.0;
    }

    Series lambda_jet(double r, std::size_t K) const override {
        Series q = q_jet(r, K);
        return 0.5 * log(V_of(q)) + double(n - 1) * log(q);
    }
    Series lambda_prime_jet(double r, std::size_t K) const override {
        Series q = q_jet(r, K + 1);
        Series f1 = sqrt(V_of(q));
        Series lp = f1.derivative() / f1.truncated(K) +
                    double(n - 1) * q.derivative() / q.truncated(K);
        return lp;
    }
    Series rho_jet(double r, std::size_t K) const override {
        // rho = x = e^{Cm} e^{-r}: geodesic normal by construction.
        Series e = exp(-Series::variable(r, K));
        return std::exp(Cm) * e;
    }
    Series warp_jet(std::size_t a, double r, std::size_t K) const override {
        Series q = q_jet(r, K);
        return a == 0 ? sqrt(V_of(q)) : q;
    }
};

class CustomWarpBackend final : public ModelBackend {
public:
    std::function<Series(double, std::size_t)> warp;

    Series lambda_jet(double r, std::size_t K) const override {
        return lambda_from_warps(*this, r, K);
    }
    Series lambda_prime_jet(double r, std::size_t K) const override {
        Series f = warp(r, K + 1);
        return double(n) * f.derivative() / f.truncated(K);
    }
    Series rho_jet(double r, std::size_t K) const override {
        return 1.0 / (1.0 + cosh(Series::variable(r, K)));
    }
    Series warp_jet(std::size_t, double r, std::size_t K) const override { return warp(r, K); }
};

// Wraps a base model, multiplying its defining function by p(x(r)).
class ModifiedRhoBackend final : public ModelBackend {
public:
    std::shared_ptr<const ModelBackend> base;
    std::vector<double> poly;   // p coefficients in x, p[0] = 1

    Series factor_jet(double r, std::size_t K) const {
        double C = base->bundle ? base->bundle->coord_scale : 1.0;
        Series x = C * exp(-Series::variable(r, K));
        Series acc = Series::constant(poly.back(), K);
        for (std::size_t k = poly.size() - 1; k-- > 0;) acc = acc * x + poly[k];
        return acc;
    }

    Series lambda_jet(double r, std::size_t K) const override { return base->lambda_jet(r, K); }
    Series lambda_prime_jet(double r, std::size_t K) const override {
        return base->lambda_prime_jet(r, K);
    }
    Series rho_jet(double r, std::size_t K) const override {
        return base->rho_jet(r, K) * factor_jet(r, K);
    }
    Series warp_jet(std::size_t a, double r, std::size_t K) const override {
        return base->warp_jet(a, r, K);
    }
};

} // namespace

} // namespace detail

using detail::ModelBackend;

RadialMetric::RadialMetric(std::shared_ptr<const ModelBackend> impl) : impl_(std::move(impl)) {}

int RadialMetric::n() const { return impl_->n; }
double RadialMetric::r_max() const { return impl_->r_max_v; }
const std::shared_ptr<const RadialGrid>& RadialMetric::grid() const { return impl_->grid; }
const std::vector<CrossSectionFactor>& RadialMetric::cross_section() const { return impl_->factors; }
const BoundaryData& RadialMetric::boundary() const { return impl_->boundary; }
std::size_t RadialMetric::center_dim() const { return impl_->center_dim; }
const std::string& RadialMetric::name() const { return impl_->name; }
bool RadialMetric::cap_regularity_mismatch() const { return impl_->cap_mismatch; }
double RadialMetric::cap_regular_period() const { return impl_->cap_period; }

double RadialMetric::lambda(double r) const { return impl_->lambda_jet(r, 0).value(); }
double RadialMetric::lambda_prime(double r) const { return impl_->lambda_prime_jet(r, 0).value(); }
double RadialMetric::rho(double r) const { return impl_->rho_jet(r, 0).value(); }
double RadialMetric::dlog_rho(double r) const {
    Series rho = impl_->rho_jet(r, 1);
    return rho.deriv(1) / rho.value();
}

Series RadialMetric::lambda_jet(double r, std::size_t K) const { return impl_->lambda_jet(r, K); }
Series RadialMetric::lambda_prime_jet(double r, std::size_t K) const {
    return impl_->lambda_prime_jet(r, K);
}
Series RadialMetric::rho_jet(double r, std::size_t K) const { return impl_->rho_jet(r, K); }
Series RadialMetric::warp_jet(std::size_t a, double r, std::size_t K) const {
    return impl_->warp_jet(a, r, K);
}

const BoundaryBundle* RadialMetric::boundary_bundle() const {
    return impl_->bundle ? &*impl_->bundle : nullptr;
}

RadialProfile RadialMetric::rho_profile(std::size_t order) const {
    return RadialProfile::from_function(
        impl_->grid, [this](double r, std::size_t K) { return rho_jet(r, K); }, order);
}

RadialProfile RadialMetric::lambda_prime_profile(std::size_t order) const {
    return RadialProfile::from_function(
        impl_->grid, [this](double r, std::size_t K) { return lambda_prime_jet(r, K); }, order);
}

RadialMetric RadialMetric::with_defining_function(const std::vector<double>& poly_in_x,
                                                  bool allow_rescale) const {
    if (poly_in_x.empty() || poly_in_x[0] <= 0.0 ||
        (!allow_rescale && std::abs(poly_in_x[0] - 1.0) > 1e-14))
        throw std::invalid_argument("with_defining_function: factor must satisfy p(0) = 1");
    auto b = std::make_shared<detail::ModifiedRhoBackend>();
    *static_cast<ModelBackend*>(b.get()) = *impl_;
    b->base = impl_;
    b->poly = poly_in_x;
    b->name = impl_->name + "+rho_variant";
    if (impl_->bundle) {
        BoundaryBundle bb = *impl_->bundle;
        Series p(bb.order);
        for (std::size_t k = 0; k < poly_in_x.size() && k <= bb.order; ++k) p.at(k) = poly_in_x[k];
        bb.rho_over_x = bb.rho_over_x * p;
        b->bundle = bb;
    }
    return RadialMetric(b);
}

RadialMetric make_hyperbolic(int n, const ModelOptions& opts) {
    if (n < 3) throw std::invalid_argument("make_hyperbolic: n >= 3 required");
    auto b = std::make_shared<detail::HyperbolicBackend>();
    b->n = n;
    b->r_max_v = opts.r_max;
    b->grid = RadialGrid::make_default(0.01, opts.r_max, opts.nodes_per_panel);
    b->factors = {CrossSectionFactor{std::size_t(n), 1.0, 1.0}};
    b->center_dim = std::size_t(n);
    b->name = "hyperbolic";
    finish_boundary_data(*b);

    BoundaryBundle bb;
    std::size_t J = opts.boundary_order;
    bb.order = J;
    bb.coord_scale = 2.0;
    Series x = Series::variable(0.0, J);
    x.at(0) = 0.0;
    bb.rho_over_x = 1.0 / ((1.0 + 0.5 * x) * (1.0 + 0.5 * x));
    Series x2 = x * x;
    bb.lambda_prime = double(n) * (1.0 + 0.25 * x2) / (1.0 - 0.25 * x2);
    bb.warp_times_x = {1.0 - 0.25 * x2};
    b->bundle = std::move(bb);
    return RadialMetric(b);
}

RadialMetric make_ads_schwarzschild(int n, double m, double beta, const ModelOptions& opts) {
    if (n < 3) throw std::invalid_argument("make_ads_schwarzschild: n >= 3 required");
    if (m < 0.0) throw std::invalid_argument("make_ads_schwarzschild: m >= 0 required");
    auto b = std::make_shared<detail::AdsSchwBackend>();
    b->n = n;
    b->m = m;
    b->r_max_v = opts.r_max;
    b->grid = RadialGrid::make_default(0.01, opts.r_max, opts.nodes_per_panel);
    b->name = "ads_schw";
    b->center_dim = (m > 0.0) ? 1 : std::size_t(n - 1);

    if (m > 0.0) {
        // Unique positive root of V (V is increasing for q > 0 when m > 0).
        double lo = 1e-8, hi = 1.0 + std::sqrt(2.0 * m) + 1.0;
        auto V = [&](double q) { return 1.0 + q * q - 2.0 * m * std::pow(q, 2.0 - double(n)); };
        while (V(lo) > 0.0) lo *= 0.5;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (V(mid) < 0.0 ? lo : hi) = mid;
        }
        b->q_h = 0.5 * (lo + hi);
        double Vp = 2.0 * b->q_h + 2.0 * m * double(n - 2) * std::pow(b->q_h, 1.0 - double(n));
        b->cap_period = 4.0 * std::numbers::pi / Vp;
    } else {
        b->q_h = 0.0;
        b->cap_period = 2.0 * std::numbers::pi;
    }
    double used_beta = (beta > 0.0) ? beta : b->cap_period;
    b->cap_mismatch = std::abs(used_beta - b->cap_period) > 1e-12 * b->cap_period;

    // Dense q cache: q' = sqrt(V(q)) seeded just off the cap.
    b->aux_h = 0.01;
    b->aux_r0 = (m > 0.0) ? 1e-3 : 0.0;
    std::vector<double> times;
    for (double r = b->aux_r0; r <= opts.r_max + 0.5; r += b->aux_h) times.push_back(r);
    detail::OdeState y0{(m > 0.0) ? b->q_center(b->aux_r0) : 0.0};
    auto rhs = [&b](const detail::OdeState& y, detail::OdeState& dy, double) {
        double V = 1.0 + y[0] * y[0] -
                   2.0 * b->m * ((b->m == 0.0) ? 0.0 : std::pow(y[0], 2.0 - double(b->n)));
        dy[0] = std::sqrt(std::max(V, 0.0));
    };
    auto states = detail::integrate_at(rhs, y0, times);
    b->aux_q.resize(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) b->aux_q[i] = states[i][0];

    // Boundary expansions in u = 1/q, then converted to x via reversion.
    std::size_t J = opts.boundary_order;
    std::size_t Jw = J + 4;   // working order; products eat a few top terms
    Series u = Series::variable(0.0, Jw);
    u.at(0) = 0.0;
    Series S = sqrt(1.0 + u * u - 2.0 * m * pow_int(u, unsigned(n)));
    Series h = 1.0 / S - 1.0;
    Series hu(Jw);
    for (std::size_t k = 0; k + 1 <= Jw; ++k) hu.at(k) = h[k + 1];
    Series H = hu.antiderivative().truncated(Jw);
    Series x_of_u = (u * exp(H)).truncated(Jw);
    Series u_of_x = revert(x_of_u);

    double r_far = opts.r_max;
    double q_far = b->q_value(r_far);
    b->Cm = r_far + std::log(1.0 / q_far) + H.eval(1.0 / q_far);

    BoundaryBundle bb;
    bb.order = J;
    bb.coord_scale = std::exp(b->Cm);
    bb.rho_over_x = Series::constant(1.0, J);
    bb.lambda_prime =
        compose(double(n) * S - (u * S.derivative()).truncated(Jw - 1), u_of_x).truncated(J);
    bb.warp_times_x = {compose((exp(H) * S).truncated(Jw), u_of_x).truncated(J),  // x sqrt(V)
                       compose(exp(H), u_of_x).truncated(J)};                     // x q
    b->bundle = std::move(bb);

    b->factors = {CrossSectionFactor{1, 0.0, used_beta / (2.0 * std::numbers::pi)},
                  CrossSectionFactor{std::size_t(n - 1), 1.0, 1.0}};
    finish_boundary_data(*b);
    return RadialMetric(b);
}

RadialMetric make_custom_warped(int n, const std::function<Series(double, std::size_t)>& warp,
                                const ModelOptions& opts) {
    if (n < 3) throw std::invalid_argument("make_custom_warped: n >= 3 required");
    auto b = std::make_shared<detail::CustomWarpBackend>();
    b->n = n;
    b->r_max_v = opts.r_max;
    b->grid = RadialGrid::make_default(0.01, opts.r_max, opts.nodes_per_panel);
    b->factors = {CrossSectionFactor{std::size_t(n), 1.0, 1.0}};
    b->center_dim = std::size_t(n);
    b->name = "custom_warped";
    b->warp = warp;
    finish_boundary_data(*b);
    return RadialMetric(b);
}

RadialProfile einstein_residual(const RadialMetric& g) {
    const auto& factors = g.cross_section();
    int n = g.n();
    auto f = [&](double r, std::size_t K) {
        std::vector<Series> fa, dloga;
        for (std::size_t a = 0; a < factors.size(); ++a) {
            Series w = g.warp_jet(a, r, K + 2);
            fa.push_back(w);
            dloga.push_back(w.derivative() / w.truncated(K + 1));
        }
        // Normalized eigenvalues of Ric + n g.
        Series worst = Series::constant(0.0, K);
        Series e_r = Series::constant(double(n), K);
        for (std::size_t a = 0; a < factors.size(); ++a) {
            Series fpp_over_f = fa[a].derivative().derivative() / fa[a].truncated(K);
            e_r -= double(factors[a].dim) * fpp_over_f.truncated(K);
        }
        // Sup over components: track the max of |e| values (value-level max;
        // jets of the residual are not needed).
        double m = std::abs(e_r.value());
        for (std::size_t a = 0; a < factors.size(); ++a) {
            Series fp = fa[a].derivative();
            Series e_a = -(fa[a].derivative().derivative() / fa[a].truncated(K)).truncated(K) +
                         Series::constant(double(n), K);
            if (factors[a].dim >= 2) {
                Series num = fp * fp - Series::constant(factors[a].kappa, K + 1);
                e_a -= double(factors[a].dim - 1) * (num / (fa[a] * fa[a]).truncated(K)).truncated(K);
            }
            Series cross = Series::constant(0.0, K);
            for (std::size_t c = 0; c < factors.size(); ++c)
                if (c != a) cross += double(factors[c].dim) * dloga[c].truncated(K);
            e_a -= (dloga[a].truncated(K) * cross).truncated(K);
            m = std::max(m, std::abs(e_a.value()));
        }
        worst.at(0) = m;
        return worst;
    };
    return RadialProfile::from_function(g.grid(), f, 0);
}

} // namespace pelab
