#include <doctest.h>

#include <cmath>

#include "pelab/curvature.hpp"
#include "pelab/model.hpp"
#include "pelab/solver.hpp"

using namespace pelab;

namespace {
bool in_band(const RadialMetric& g, double r) { return g.rho(r) > 0.01; }
} // namespace

TEST_CASE("flat compactification: curvature vanishes identically") {
    // gbar = rho^2 g+ with rho = 1/(1+cosh r) is the flat unit ball.
    auto g = make_hyperbolic(3);
    auto Wf = fixed_compactified_metric(g);
    auto cur = curvature_of(Wf);
    CHECK(cur.J.max_abs_where([&](double r) { return in_band(g, r); }) < 1e-10);
    CHECK(cur.E_norm2.max_abs_where([&](double r) { return in_band(g, r); }) < 1e-10);
    auto q = q4_of(Wf);
    // The t-derivative noise scales like eps/rho^4; 1e-6 at the band edge,
    // far tighter inside.
    CHECK(q.max_abs_where([&](double r) { return in_band(g, r); }) < 1e-6);
    CHECK(q.max_abs_where([&](double r) { return g.rho(r) > 0.05; }) < 1e-9);
}

TEST_CASE("flat adapted compactification at s = 2") {
    auto g = make_hyperbolic(3);
    auto c = solve_vs(g, 2.0);
    auto cur = compactified_curvatures(c, g);

    CHECK(cur.T.max_abs_where([&](double r) { return in_band(g, r); }) ==
          doctest::Approx(2.0).epsilon(1e-8));
    double supJ = 0.0, supT_dev = 0.0;
    for (std::size_t i = 0; i < cur.J.size(); ++i) {
        supJ = std::max(supJ, std::abs(cur.J.value(i)));
        supT_dev = std::max(supT_dev, std::abs(cur.T.value(i) - 2.0));
    }
    CHECK(supJ < 1e-8);
    CHECK(supT_dev < 1e-7);

    // The gbar_s laplacian of rho_s is -s T = -4, the flat
    // 4-dimensional laplacian of (1-|y|^2)/2.
    auto Ws = compactified_metric(c);
    auto lap = warped_laplacian(Ws, c.rho_s);
    CHECK(lap.max_abs_where([&](double r) { return in_band(g, r); }) ==
          doctest::Approx(4.0).epsilon(1e-8));

    CHECK(cur.H == doctest::Approx(3.0).epsilon(1e-5));
    CHECK(cur.T_boundary == doctest::Approx(2.0 / 3.0 * cur.H).epsilon(1e-5));
    CHECK(cur.H_from_series == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("boundary curvature trace of the adapted family") {
    auto g = make_hyperbolic(3);
    for (double s : {3.0, 3.5, 4.0}) {
        auto c = solve_compactification(g, s);
        auto cur = compactified_curvatures(c, g);
        double expected = (2.0 * s - 4.0) / (2.0 * s - 5.0) * 1.5;
        CHECK(cur.J_boundary == doctest::Approx(expected).epsilon(1e-3));
        CHECK(cur.route_discrepancy < 100.0 * c.report.tol);
        CHECK(cur.drho_boundary == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("q4 of the FG compactification vanishes") {
    auto g = make_hyperbolic(3);
    auto c = solve_w(g);
    auto q = q4(c, g);
    CHECK(q.max_abs_where([&](double r) { return in_band(g, r); }) < 1e-6);
}

TEST_CASE("q4 of product cylinders against hand values") {
    auto g = make_hyperbolic(3); // only for the grid
    auto const_one = RadialProfile::from_function(
        g.grid(), [](double, std::size_t K) { return Series::constant(1.0, K); }, 8);

    // dr^2 + g_{S^3}: R = 6, J = 1, A eigenvalues (-1/2, 1/2 x3),
    // Q4 = 2 J^2 - 2|A|^2 = 0 (conformally flat).
    WarpedMetric cyl{3, const_one, {const_one}, {CrossSectionFactor{3, 1.0, 1.0}}};
    auto q = q4_of(cyl);
    for (std::size_t i = 0; i < q.size(); i += 50)
        CHECK(std::abs(q.value(i)) < 1e-10);

    // dr^2 + dtau^2 + g_{S^2}: R = 2, J = 1/3,
    // A = (-1/6, -1/6, 1/3, 1/3), |A|^2 = 5/18, Q4 = 2/9 - 5/9 = -1/3.
    WarpedMetric cyl2{3, const_one, {const_one, const_one},
                      {CrossSectionFactor{1, 0.0, 1.0}, CrossSectionFactor{2, 1.0, 1.0}}};
    auto q2 = q4_of(cyl2);
    for (std::size_t i = 0; i < q2.size(); i += 50)
        CHECK(q2.value(i) == doctest::Approx(-1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("q-curvature vanishing checks") {
    auto g = make_hyperbolic(3);
    auto r1 = q2N_vanishing_check(g, 1);
    CHECK(r1.s == doctest::Approx(2.0));
    CHECK(r1.relative_residual < 1e-8);

    auto r2 = q2N_vanishing_check(g, 2);
    CHECK(r2.s == doctest::Approx(3.0));
    CHECK(r2.relative_residual < 1e-6);

    // Negative control: the wrong-s compactification does not annihilate P+_4.
    auto bad = solve_vs(g, 2.6);
    auto rb = q2N_residual(bad, 2);
    CHECK(rb.relative_residual > 1e-2);
}

TEST_CASE("positivity audit across the branches") {
    auto g = make_hyperbolic(3);
    {
        auto c = solve_compactification(g, 3.0);
        auto rep = positivity_audit(c, g);
        CHECK(rep.branch == "J");
        CHECK(rep.positive);
        CHECK(rep.min_J > 0.0);
        CHECK(rep.drho_bounded);
    }
    {
        auto c = solve_vs(g, 2.0);
        auto rep = positivity_audit(c, g);
        CHECK(rep.branch == "T");
        CHECK(rep.positive);
        CHECK(rep.min_T > 0.0);
        CHECK(rep.sup_abs_J < 1e-8);
        CHECK(rep.H_s == doctest::Approx(3.0).epsilon(1e-4));
        CHECK(std::abs(rep.T_boundary - 2.0 / 3.0 * rep.H_s) < 1e-4);
    }
    {
        auto ads = make_ads_schwarzschild(3, 0.3);
        auto c = solve_vs(ads, 3.5);
        auto rep = positivity_audit(c, ads);
        CHECK(rep.positive);
        CHECK(rep.min_J > 0.0);
        CHECK(rep.drho_bounded);
    }
    // 2.3 lies in (n/2, n/2+1) away from (n+1)/2: outside the audit range.
    auto c23 = solve_vs(g, 2.3);
    CHECK_THROWS_AS(positivity_audit(c23, g), std::invalid_argument);
}

TEST_CASE("identity suite residuals") {
    auto g = make_hyperbolic(3);
    {
        // Flat case: the T-equation with both sides vanishing.
        auto c = solve_vs(g, 2.0);
        auto ids = identity_suite(c, g);
        for (const auto& id : ids) {
            if (!id.applicable) continue;
            CAPTURE(id.name);
            CHECK(id.sup_residual < 1e-8);
        }
    }
    {
        auto c = solve_compactification(g, 3.0);
        for (const auto& id : identity_suite(c, g)) {
            if (!id.applicable) continue;
            CAPTURE(id.name);
            CHECK(id.sup_residual < 1e-6);
        }
    }
    {
        auto c = solve_vs(g, 3.5);
        for (const auto& id : identity_suite(c, g)) {
            if (!id.applicable) continue;
            CAPTURE(id.name);
            CHECK(id.sup_residual < 1e-6);
        }
    }
    {
        auto ads = make_ads_schwarzschild(3, 0.2);
        for (double s : {2.0, 3.0, 3.5}) {
            auto c = solve_compactification(ads, s);
            for (const auto& id : identity_suite(c, ads)) {
                if (!id.applicable) continue;
                CAPTURE(id.name);
                CAPTURE(s);
                CHECK(id.sup_residual < 1e-6);
            }
        }
    }
}

TEST_CASE("umbilicity of the product cross-section") {
    auto ads = make_ads_schwarzschild(3, 0.25);
    auto c = solve_vs(ads, 3.5);
    auto cur = compactified_curvatures(c, ads);
    CHECK(std::abs(cur.umbilicity_defect) < 1e-5);
}
