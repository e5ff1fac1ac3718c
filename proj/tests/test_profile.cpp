#include <doctest.h>

#include <cmath>

#include "pelab/grid.hpp"
#include "pelab/profile.hpp"

using namespace pelab;

namespace {
RadialProfile exp_profile(std::shared_ptr<const RadialGrid> g, double a, std::size_t order) {
    return RadialProfile::from_function(
        g, [a](double r, std::size_t K) { return pelab::exp(a * Series::variable(r, K)); }, order);
}
} // namespace

TEST_CASE("grid quadrature and differentiation are spectrally accurate") {
    auto g = RadialGrid::make_default(0.01, 20.0);
    std::vector<double> v(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) v[i] = std::exp(-g->node(i));
    double I = g->integrate(v);
    CHECK(I == doctest::Approx(std::exp(-0.01) - std::exp(-20.0)).epsilon(1e-12));

    auto d = g->differentiate(v);
    double err = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) err = std::max(err, std::abs(d[i] + v[i]));
    CHECK(err < 1e-9);
}

TEST_CASE("profile jets evaluate off-node to near machine precision") {
    auto g = RadialGrid::make_default(0.01, 20.0);
    auto p = exp_profile(g, -3.5, 8);
    for (double r : {0.37, 1.234, 5.5551, 14.99}) {
        CHECK(p.eval(r) == doctest::Approx(std::exp(-3.5 * r)).epsilon(1e-12));
        CHECK(p.eval_deriv(r, 2) == doctest::Approx(12.25 * std::exp(-3.5 * r)).epsilon(1e-9));
    }
}

TEST_CASE("differentiation reduces derivative_order by one") {
    auto g = RadialGrid::make_default(0.01, 10.0);
    auto p = exp_profile(g, -1.0, 3);
    CHECK(p.derivative_order() == 3);
    auto d1 = p.differentiate();
    CHECK(d1.derivative_order() == 2);
    auto d3 = d1.differentiate().differentiate();
    CHECK(d3.derivative_order() == 0);
    CHECK_THROWS(d3.differentiate());
}

TEST_CASE("profile algebra propagates jets") {
    auto g = RadialGrid::make_default(0.01, 10.0);
    auto a = exp_profile(g, -1.0, 6);
    auto b = exp_profile(g, -2.0, 6);
    auto q = a * a / b; // == 1
    for (std::size_t i = 0; i < q.size(); i += 37) {
        CHECK(q.value(i) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(q.deriv(i, 1)) < 1e-12);
    }
}

TEST_CASE("series consistency check over the handover region") {
    auto g = RadialGrid::make_default(0.01, 20.0);
    auto p = exp_profile(g, -2.0, 4);
    BoundarySeries s;
    s.mu = 2.0; // e^{-2r} = (x/C)^2 with C = 1
    s.variable = SeriesVariable::X;
    s.coord_scale = 1.0;
    s.add_term({0.0, 1.0, TermProvenance::Recursion, 0.0});
    p.set_boundary_series(s, 10.0);
    CHECK(p.series_consistency() < 1e-14);
    CHECK(p.eval(21.5) == doctest::Approx(std::exp(-43.0)).epsilon(1e-10));
}
