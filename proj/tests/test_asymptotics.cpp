#include <doctest.h>

#include <cmath>
#include <vector>

#include "pelab/asymptotics.hpp"
#include "pelab/model.hpp"
#include "pelab/operators.hpp"

using namespace pelab;

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

} // namespace

TEST_CASE("indicial roots") {
    auto [a, b] = indicial_roots(3, 2.5);
    CHECK(a == doctest::Approx(0.5));
    CHECK(b == doctest::Approx(2.5));
    auto [c, d] = indicial_roots(3, 3.0);
    CHECK(c == doctest::Approx(0.0));
    CHECK(d == doctest::Approx(3.0));
    auto [e, f] = indicial_roots(4, 3.5);
    CHECK(e == doctest::Approx(0.5));
    CHECK(f == doctest::Approx(3.5));
}

TEST_CASE("phi series is trivial when rho_s = rho") {
    // Hyperbolic s = 2: v_s = rho exactly, so phi_s == 1 and every
    // correction coefficient vanishes.
    auto g = make_hyperbolic(3);
    auto s = build_phi_series(g, 2.0, 6, SeriesVariable::Rho);
    for (const auto& t : s.terms) {
        if (t.offset == 0.0)
            CHECK(t.coeff == doctest::Approx(1.0));
        else
            CHECK(std::abs(t.coeff) < 1e-12);
    }
    CHECK_FALSE(s.stopped_at_collision);
}

TEST_CASE("phi series against the closed form at s = 4") {
    // Hyperbolic n=3, s=4: v_s = 1/rho - 1, so phi_s = (rho_s/rho)^{n-s}
    //  = v_s rho = 1 - rho.
    auto g = make_hyperbolic(3);
    auto s = build_phi_series(g, 4.0, 4, SeriesVariable::Rho);
    REQUIRE(s.terms.size() >= 3);
    CHECK(s.terms[0].coeff == doctest::Approx(1.0));
    CHECK(s.terms[1].coeff == doctest::Approx(-1.0).epsilon(1e-12));
    for (std::size_t j = 2; j < s.terms.size(); ++j) CHECK(std::abs(s.terms[j].coeff) < 1e-11);
}

TEST_CASE("fractional window stop condition") {
    auto g = make_hyperbolic(3);
    // 2s-n = 2.5: legal through j = 2, j = 3 exceeds the window.
    auto s = build_phi_series(g, 2.75, 2, SeriesVariable::Rho);
    CHECK(s.terms.size() == 3);
    CHECK_THROWS_AS(build_phi_series(g, 2.75, 3, SeriesVariable::Rho), std::domain_error);
}

TEST_CASE("phi series kills operator residual order by order") {
    auto g = make_hyperbolic(3);
    double s = 3.5;
    auto ser = build_phi_series(g, s, 3, SeriesVariable::Rho);
    // u(r) = sum phi_j rho^j, v = rho^{n-s} u; P0 v should vanish to
    // O(rho^{2s-n}) relative to rho^{n-s}.
    auto u = RadialProfile::from_function(g.grid(), [&](double r, std::size_t K) {
        Series rho = g.rho_jet(r, K);
        Series acc = Series::constant(0.0, K);
        for (const auto& t : ser.terms) acc += t.coeff * pow(rho, t.offset);
        return acc;
    }, 8);
    auto v = RadialProfile::from_function(g.grid(), [&](double r, std::size_t K) {
        return pow(g.rho_jet(r, K), 3.0 - s);
    }, 8) * u;
    auto res = apply_P0(g, s, v);
    std::vector<double> xs, ys;
    for (double rho0 : {0.04, 0.02, 0.01, 0.005, 0.0025}) {
        double r = rho_inverse(g, rho0);
        xs.push_back(rho0);
        ys.push_back(std::abs(res.eval(r)) * std::pow(g.rho(r), s - 3.0));
    }
    // Residual O(rho^{2s-n}) after the series annihilates orders 1..3.
    CHECK(fit_slope(xs, ys) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("w series: gauge term for the non-geodesic rho, none for the geodesic one") {
    // For rho = 1/(1+cosh r) the closed form gives w - log rho
    //  = rho + O(rho^4); the linear coefficient is the gauge mismatch.
    auto hyp = make_hyperbolic(3);
    auto s = build_w_series(hyp, 3, SeriesVariable::Rho);
    REQUIRE(s.terms.size() >= 4);
    CHECK(s.terms[0].coeff == doctest::Approx(0.0));
    CHECK(s.terms[1].coeff == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(std::abs(s.terms[2].coeff) < 1e-11);
    CHECK(std::abs(s.terms[3].coeff) < 1e-9);

    // The AdS-Schwarzschild fixed rho is geodesic; odd terms vanish.
    auto ads = make_ads_schwarzschild(3, 0.3);
    auto sw = build_w_series(ads, 2, SeriesVariable::Rho);
    REQUIRE(sw.terms.size() >= 3);
    CHECK(std::abs(sw.terms[1].coeff) < 1e-12);
    CHECK(sw.terms[2].coeff != doctest::Approx(0.0));
}

TEST_CASE("w series truncates at the even-n collision") {
    auto g = make_hyperbolic(4);
    auto s = build_w_series(g, 4, SeriesVariable::Rho);
    CHECK(s.stopped_at_collision);
    CHECK(s.terms.size() == 4); // j = 0..3, truncated at the j = n = 4 collision
    CHECK(std::abs(s.collision_source) > 1e-10);
}

TEST_CASE("geodesic gauge of hyperbolic space") {
    auto g = make_hyperbolic(3);
    auto gg = geodesic_gauge(g);
    CHECK(gg.coord_scale == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(gg.x_profile.eval(1.0) == doctest::Approx(0.7357589).epsilon(1e-6));
    CHECK(gg.dx_norm_error < 1e-9);
    REQUIRE(gg.g2_coefficient.size() == 1);
    CHECK(gg.g2_coefficient[0] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(gg.g1_coefficient[0] == doctest::Approx(0.0));
    CHECK(gg.minus_schouten[0] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(gg.x_minus_rho_over_rho2 < 10.0);
}

TEST_CASE("geodesic gauge of ads-schwarzschild matches -A-hat per factor") {
    auto g = make_ads_schwarzschild(3, 0.35);
    auto gg = geodesic_gauge(g);
    REQUIRE(gg.g2_coefficient.size() == 2);
    CHECK(gg.g2_coefficient[0] == doctest::Approx(0.5).epsilon(1e-10));   // circle
    CHECK(gg.g2_coefficient[1] == doctest::Approx(-0.5).epsilon(1e-10));  // sphere
    CHECK(gg.g2_coefficient[0] == doctest::Approx(gg.minus_schouten[0]).epsilon(1e-10));
    CHECK(gg.g2_coefficient[1] == doctest::Approx(gg.minus_schouten[1]).epsilon(1e-10));
    CHECK(gg.g1_coefficient[0] == doctest::Approx(0.0));
    CHECK(gg.dx_norm_error < 1e-9);
}

TEST_CASE("extract_expansion recovers synthetic coefficients") {
    auto g = make_hyperbolic(3);
    auto p = RadialProfile::from_function(g.grid(), [&](double r, std::size_t K) {
        Series x = 2.0 * exp(-Series::variable(r, K));
        return 2.0 * x - 0.7 * x * x + 0.3 * x * x * x;
    }, 8);
    auto res = extract_expansion(g, p, SeriesVariable::X, {1.0, 2.0, 3.0});
    CHECK(res.series.terms[0].coeff == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(res.series.terms[1].coeff == doctest::Approx(-0.7).epsilon(1e-7));
    CHECK(res.series.terms[2].coeff == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(res.residual < 1e-10);

    // x itself fits as (1, 0, 0).
    auto px = RadialProfile::from_function(g.grid(), [&](double r, std::size_t K) {
        return 2.0 * exp(-Series::variable(r, K));
    }, 8);
    auto rx = extract_expansion(g, px, SeriesVariable::X, {1.0, 2.0, 3.0});
    CHECK(rx.series.terms[0].coeff == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(rx.series.terms[1].coeff) < 1e-8);
    CHECK(std::abs(rx.series.terms[2].coeff) < 1e-7);

    CHECK_THROWS(extract_expansion(g, p, SeriesVariable::X, {1.0, 1.0 + 1e-12, 2.0}));
}

TEST_CASE("x = rho + O(rho^2) and rho-gauge extraction") {
    auto g = make_hyperbolic(3);
    auto p = g.rho_profile(8);
    auto res = extract_expansion(g, p, SeriesVariable::Rho, {1.0, 2.0});
    CHECK(res.series.terms[0].coeff == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rho_inverse(g, g.rho(3.7)) == doctest::Approx(3.7).epsilon(1e-10));
}
