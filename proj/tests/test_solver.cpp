#include <doctest.h>

#include <cmath>
#include <functional>

#include "fd_oracle.hpp"
#include "pelab/model.hpp"
#include "pelab/operators.hpp"
#include "pelab/solver.hpp"

using namespace pelab;

TEST_CASE("exact flat-case compactification at s = 2") {
    auto g = make_hyperbolic(3);
    auto c = solve_vs(g, 2.0);
    double sup = 0.0;
    for (std::size_t i = 0; i < c.rho_s.size(); ++i) {
        double r = g.grid()->node(i);
        double exact = 1.0 / (1.0 + std::cosh(r));
        sup = std::max(sup, std::abs(c.rho_s.value(i) - exact) / exact);
    }
    CHECK(sup < 1e-8);
    CHECK(c.rho_s.eval(1.0) == doctest::Approx(0.3932238).epsilon(1e-6));
    CHECK(c.report.min_v > 0.0);
    CHECK(c.report.defining_residual < 1e-12);
    CHECK(c.report.matching_residual < 1e-9);
    // expansion coefficients: rho_s/x = 1 - x + 3/4 x^2 - ...
    CHECK(c.H_s_series == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(c.boundary.Jhat == doctest::Approx(1.5));
}

TEST_CASE("defining residual by spectral differentiation stays at tolerance") {
    auto g = make_hyperbolic(3);
    for (double s : {2.0, 2.75, 3.5}) {
        auto c = solve_vs(g, s);
        CHECK(c.report.defining_residual_spectral < 10.0 * c.report.tol);
    }
    auto w = solve_w(g);
    CHECK(w.report.defining_residual_spectral < 10.0 * w.report.tol);
}

TEST_CASE("solve_vs matches an independent finite-difference oracle at s = 3.5") {
    auto g = make_hyperbolic(3);
    auto c = solve_vs(g, 3.5);
    auto grid = fd_oracle::make_grid(1e-3, 20.0, 16000);
    auto phi = fd_oracle::phi_extrapolated(3.5, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i <= grid.N; i += 7) {
        double r = grid.r[i];
        if (r < 0.5 || r > 10.0) continue;
        worst = std::max(worst, std::abs(c.phi_s.eval(r) - phi[i]) / std::abs(phi[i]));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("solve_vs matches the oracle at a fractional s") {
    auto g = make_hyperbolic(3);
    auto c = solve_vs(g, 2.75);
    auto grid = fd_oracle::make_grid(1e-3, 20.0, 16000);
    auto phi = fd_oracle::phi_extrapolated(2.75, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i <= grid.N; i += 11) {
        double r = grid.r[i];
        if (r < 0.5 || r > 10.0) continue;
        worst = std::max(worst, std::abs(c.phi_s.eval(r) - phi[i]) / std::abs(phi[i]));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("fg potential against the closed-form first integral") {
    auto g = make_hyperbolic(3);
    auto c = solve_w(g);
    auto wp_exact = [](double r) {
        double ch = std::cosh(r);
        return -std::sqrt(ch - 1.0) * (ch + 2.0) / std::pow(ch + 1.0, 1.5);
    };
    for (double r : {0.5, 1.0, 2.0, 5.0, 12.0})
        CHECK(c.v_or_w.eval_deriv(r, 1) == doctest::Approx(wp_exact(r)).epsilon(1e-10));

    // w - log rho by independent quadrature of the closed form.
    auto integrand = [&](double t) { return wp_exact(t) + std::tanh(0.5 * t); };
    for (double r : {1.0, 3.0}) {
        double phi = -fd_oracle::simpson(integrand, r, 45.0, 200000);
        CHECK(c.phi_s.eval(r) == doctest::Approx(phi).epsilon(1e-9));
    }

    // Defining equation -Delta_+ w = n through the operator module.
    auto res = apply_laplacian_plus(g, c.v_or_w);
    double worst = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i) worst = std::max(worst, std::abs(res.value(i) + 3.0));
    CHECK(worst < 1e-8);

    // boundary expansion at s = n: rho_F = x (1 - 0.75 x^2 + (2/3) x^3 + ...).
    REQUIRE(c.rho_s_over_x.terms.size() >= 4);
    CHECK(c.rho_s_over_x.terms[1].coeff == doctest::Approx(0.0));
    CHECK(c.rho_s_over_x.terms[2].coeff == doctest::Approx(-0.75).epsilon(1e-10));
    CHECK(c.rho_s_over_x.terms[3].coeff == doctest::Approx(2.0 / 3.0).epsilon(1e-5));
}

TEST_CASE("ads-schwarzschild solves satisfy the defining equations") {
    auto g = make_ads_schwarzschild(3, 0.3);
    for (double s : {2.0, 3.5}) {
        auto c = solve_vs(g, s);
        CHECK(c.report.defining_residual_spectral < 1e-8);
        CHECK(c.report.min_phi > 0.0);
        CHECK(c.report.matching_residual < 1e-8);
    }
    auto w = solve_w(g);
    auto res = apply_laplacian_plus(g, w.v_or_w);
    double worst = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i) worst = std::max(worst, std::abs(res.value(i) + 3.0));
    CHECK(worst < 1e-8);
}

TEST_CASE("boundary expansion coefficients of rho_s") {
    auto g = make_hyperbolic(3);
    // s = 4 closed form: rho_s = rho/(1-rho) = x - x^3/4 + ...
    auto c4 = solve_vs(g, 4.0);
    CHECK(c4.rho_s_over_x.terms[1].coeff == doctest::Approx(0.0));
    CHECK(c4.rho_s_over_x.terms[2].coeff == doctest::Approx(-0.25).epsilon(1e-11));
    double sup = 0.0;
    for (std::size_t i = 0; i < c4.rho_s.size(); ++i) {
        double rho = g.rho(g.grid()->node(i));
        sup = std::max(sup, std::abs(c4.rho_s.value(i) - rho / (1.0 - rho)));
    }
    CHECK(sup < 1e-9);

    // Generic s: coefficient -Jhat/(2(2s-n-2)) at x^2 of rho_s/x.
    auto c35 = solve_vs(g, 3.5);
    CHECK(c35.rho_s_over_x.terms[1].coeff == doctest::Approx(0.0));
    CHECK(c35.rho_s_over_x.terms[2].coeff == doctest::Approx(-1.5 / 4.0).epsilon(1e-10));
    CHECK(std::abs(c35.H_s_series) < 1e-9);
}

TEST_CASE("continuity of rho_s in s toward the FG branch") {
    auto g = make_hyperbolic(3);
    auto t = s_to_n_limit_check(g, {2.8, 2.9, 2.95, 3.0});
    CHECK(t.sup_diff[0] > t.sup_diff[1]);
    CHECK(t.sup_diff[1] > t.sup_diff[2]);
    CHECK(t.sup_diff[3] == 0.0);
    CHECK(t.ratio[0] == doctest::Approx(2.0).epsilon(0.15));
    CHECK(t.ratio[1] == doctest::Approx(2.0).epsilon(0.15));

    auto ads = make_ads_schwarzschild(3, 0.2);
    auto ta = s_to_n_limit_check(ads, {2.8, 2.9, 2.95});
    CHECK(ta.ratio[0] == doctest::Approx(2.0).epsilon(0.15));
    CHECK(ta.ratio[1] == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("regularity threshold probe") {
    auto g = make_hyperbolic(3);
    auto frac = regularity_threshold_probe(g, 2.75);
    CHECK(frac.diff_order == 3);
    CHECK(frac.predicted_exponent == doctest::Approx(0.5));
    CHECK(frac.measured_exponent == doctest::Approx(0.5).epsilon(0.1));
    CHECK(std::abs(frac.measured_exponent - frac.predicted_exponent) < 0.05);
    CHECK(frac.obstruction_detected);

    // 2s-n = 1: odd integer, no obstruction (phi_s == 1 here).
    auto odd = regularity_threshold_probe(g, 2.0);
    CHECK_FALSE(odd.obstruction_detected);

    // Odd-integer case on a metric where phi_s is not constant.
    auto ads = make_ads_schwarzschild(3, 0.3);
    auto odd2 = regularity_threshold_probe(ads, 2.0);
    CHECK_FALSE(odd2.obstruction_detected);

    // 2s-n = 4: integer collision; the fourth-difference amplitude is
    // log-modulated and fails a clean power-law fit.
    auto col = regularity_threshold_probe(g, 3.5);
    CHECK(col.collision_case);
    CHECK(col.diff_order == 4);
    CHECK(col.obstruction_detected);
    CHECK(col.fit_residual > 0.15);
    CHECK(frac.fit_residual < 0.1);
    CHECK(odd2.fit_residual < 0.05);
}

TEST_CASE("uniqueness surrogate: admissible defining functions agree") {
    auto g = make_hyperbolic(3);
    auto g2 = g.with_defining_function({1.0, 0.4, 0.15});
    for (double s : {2.5, 3.5}) {
        auto a = solve_vs(g, s);
        auto b = solve_vs(g2, s);
        double sup = 0.0;
        for (std::size_t i = 0; i < a.rho_s.size(); ++i)
            sup = std::max(sup, std::abs(a.rho_s.value(i) - b.rho_s.value(i)) /
                                    (std::abs(a.rho_s.value(i)) + 1e-30));
        CHECK(sup < 10.0 * a.report.tol);
    }
}

TEST_CASE("phi_s approaches 1 at rate O(rho)") {
    auto g = make_hyperbolic(3);
    for (double s : {2.75, 3.5}) {
        auto c = solve_vs(g, s);
        double bound = 0.0;
        for (double r : {4.0, 6.0, 9.0, 13.0})
            bound = std::max(bound, std::abs(c.phi_s.eval(r) - 1.0) / g.rho(r));
        CHECK(bound < 50.0);
        CHECK(c.phi_s.series_consistency() < 1e-8);
    }
}

TEST_CASE("solver precondition gates") {
    auto g = make_hyperbolic(3);
    CHECK_THROWS_AS(solve_vs(g, 1.5, {}), std::invalid_argument);
    CHECK_THROWS_AS(solve_vs(g, 3.0, {}), std::invalid_argument);
    SolveOptions bad;
    bad.tol = -1.0;
    CHECK_THROWS_AS(solve_vs(g, 2.5, bad), std::invalid_argument);
}
