#include "pelab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace pelab {

void OperatorSpec::validate(int n, int regularity_k) const {
    switch (kind) {
    case OperatorKind::P0:
    case OperatorKind::PLambda:
        if (!(s > 0.5 * n)) throw std::invalid_argument("OperatorSpec: s > n/2 required");
        break;
    case OperatorKind::GjmsProduct:
        if (N < 1 || 2 * N > regularity_k + 1)
            throw std::invalid_argument("OperatorSpec: need 1 <= N <= (k+1)/2");
        break;
    case OperatorKind::LaplacianPlus:
        break;
    }
}

namespace {

RadialProfile laplacian_jets(const RadialMetric& g, const RadialProfile& u, double shift) {
    if (u.derivative_order() < 2)
        throw std::invalid_argument("apply_laplacian_plus: derivative_order >= 2 required");
    if (!u.all_finite())
        throw std::invalid_argument("apply_laplacian_plus: non-finite profile data");
    std::size_t K = std::size_t(u.derivative_order());
    std::vector<Series> jets;
    jets.reserve(u.size());
    const auto& grid = *u.grid();
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Series& uj = u.jet(i);
        Series du = uj.derivative();
        Series ddu = du.derivative();
        Series lp = g.lambda_prime_jet(grid.node(i), K - 2);
        Series out = ddu + (lp * du.truncated(K - 2)).truncated(K - 2);
        if (shift != 0.0) out += shift * uj.truncated(K - 2);
        jets.push_back(out);
    }
    return RadialProfile(u.grid(), std::move(jets));
}

} // namespace

RadialProfile apply_laplacian_plus(const RadialMetric& g, const RadialProfile& u) {
    RadialProfile out = laplacian_jets(g, u, 0.0);
    if (u.boundary_series() && u.boundary_series()->variable == SeriesVariable::X) {
        out.set_boundary_series(transform_series_p0(g, 0.0, *u.boundary_series()),
                                u.r_series_start());
    }
    return out;
}

RadialProfile apply_P0(const RadialMetric& g, double s, const RadialProfile& u) {
    if (!(s > 0.5 * g.n())) throw std::invalid_argument("apply_P0: s > n/2 required");
    double shift = s * (double(g.n()) - s);
    RadialProfile out = laplacian_jets(g, u, shift);
    if (u.boundary_series() && u.boundary_series()->variable == SeriesVariable::X) {
        out.set_boundary_series(transform_series_p0(g, shift, *u.boundary_series()),
                                u.r_series_start());
    }
    return out;
}

RadialProfile apply_P_lambda(const RadialMetric& g, double s, double lambda,
                             const RadialProfile& u) {
    if (!(s > 0.5 * g.n())) throw std::invalid_argument("apply_P_lambda: s > n/2 required");
    std::size_t K = std::size_t(u.derivative_order());
    auto rho_pow = [&](double e) {
        return RadialProfile::from_function(
            u.grid(), [&](double r, std::size_t ord) { return pow(g.rho_jet(r, ord), e); }, K);
    };
    RadialProfile inner = rho_pow(lambda) * u;
    RadialProfile out = apply_P0(g, s, inner);
    return rho_pow(-lambda) * out;
}

double gjms_factor_constant(int n, int N, int j) {
    return (n + 2.0 * N - 4.0 * j + 3.0) * (n - 2.0 * N + 4.0 * j - 3.0) / 4.0;
}

double gjms_q_constant(int n) {
    if (n % 2 == 0) throw std::invalid_argument("gjms_q_constant: n must be odd");
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= double(i);
    return (((n + 1) / 2) % 2 == 0 ? 1.0 : -1.0) * fact;
}

RadialProfile apply_gjms_plus(const RadialMetric& g, int N, const RadialProfile& u) {
    if (N < 1) throw std::invalid_argument("apply_gjms_plus: N >= 1 required");
    if (u.derivative_order() < 2 * N)
        throw std::invalid_argument("apply_gjms_plus: derivative_order >= 2N required");
    RadialProfile acc = u;
    for (int j = 1; j <= N; ++j) {
        double c = gjms_factor_constant(g.n(), N, j);
        acc = laplacian_jets(g, acc, c) * -1.0;
    }
    return acc;
}

RadialProfile apply_operator(const RadialMetric& g, const OperatorSpec& spec,
                             const RadialProfile& u) {
    spec.validate(g.n());
    switch (spec.kind) {
    case OperatorKind::LaplacianPlus: return apply_laplacian_plus(g, u);
    case OperatorKind::P0: return apply_P0(g, spec.s, u);
    case OperatorKind::PLambda: return apply_P_lambda(g, spec.s, spec.lambda, u);
    case OperatorKind::GjmsProduct: return apply_gjms_plus(g, spec.N, u);
    }
    throw std::logic_error("apply_operator: unknown kind");
}

RadialProfile conformal_laplacian_check(const RadialMetric& g, const RadialProfile& u) {
    if (u.derivative_order() < 2)
        throw std::invalid_argument("conformal_laplacian_check: derivative_order >= 2 required");
    RadialProfile lhs = laplacian_jets(g, u, 0.0);
    // gbar = rho^2 g+, so Delta-bar u = rho^{-2} [u'' + (lambda' + (n-1) rho'/rho) u']
    // and <d rho, du>_gbar = rho' u' / rho^2.  The rho^2 and rho factors of the
    // conformal relation cancel against those inverse powers.
    std::size_t K = std::size_t(u.derivative_order());
    std::vector<Series> jets;
    const auto& grid = *u.grid();
    double n1 = double(g.n() - 1);
    for (std::size_t i = 0; i < u.size(); ++i) {
        double r = grid.node(i);
        const Series& uj = u.jet(i);
        Series du = uj.derivative().truncated(K - 2);
        Series ddu = uj.derivative().derivative();
        Series lp = g.lambda_prime_jet(r, K - 2);
        Series rho = g.rho_jet(r, K - 1);
        Series dlr = (rho.derivative() / rho.truncated(K - 2)).truncated(K - 2);
        Series lap_bar_scaled = ddu + ((lp + n1 * dlr) * du).truncated(K - 2);
        Series rhs = lap_bar_scaled - n1 * (dlr * du).truncated(K - 2);
        jets.push_back(lhs.jet(i) - rhs);
    }
    return RadialProfile(u.grid(), std::move(jets));
}

double indicial_p0_coefficient(int n, double s, double mu) {
    return mu * (mu - double(n)) + s * (double(n) - s);
}

BoundarySeries transform_series_p0(const RadialMetric& g, double shift,
                                   const BoundarySeries& in) {
    const BoundaryBundle* bb = g.boundary_bundle();
    if (!bb) throw std::invalid_argument("transform_series_p0: model has no boundary expansion");
    if (in.variable != SeriesVariable::X)
        throw std::invalid_argument("transform_series_p0: series must be in the geodesic variable");

    // Delta_+ (c x^e) = c e(e-n) x^e - c e sum_k l_k x^{e+k} with
    // lambda' = n + sum_{k>=1} l_k x^k.
    const Series& lp = bb->lambda_prime;
    double order_cap = in.truncation_order;
    std::map<double, double> acc;
    for (const auto& t : in.terms) {
        double e = in.mu + t.offset;
        acc[t.offset] += t.coeff * (e * (e - double(g.n())) + shift);
        for (std::size_t k = 1; k <= lp.order(); ++k) {
            double off = t.offset + double(k);
            if (off >= order_cap) break;
            acc[off] -= t.coeff * e * lp[k];
        }
    }
    BoundarySeries out;
    out.mu = in.mu;
    out.variable = in.variable;
    out.coord_scale = in.coord_scale;
    out.truncation_order = in.truncation_order;
    auto is_int = [](double v) { return std::abs(v - std::round(v)) < 1e-12; };
    bool have_frac = false;
    for (const auto& [off, c] : acc) {
        if (!is_int(off)) {
            if (have_frac) {
                // The type carries at most one fractional offset; truncate there.
                out.truncation_order = std::min(out.truncation_order, off);
                break;
            }
            have_frac = true;
        }
        if (std::abs(c) < 1e-300) continue;
        out.add_term({off, c, TermProvenance::Recursion, 0.0});
    }
    return out;
}

} // namespace pelab
