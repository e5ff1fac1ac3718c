#include <doctest.h>

#include <cmath>

#include "pelab/series.hpp"

using namespace pelab;

TEST_CASE("jet arithmetic matches closed-form derivatives") {
    double r = 1.3;
    Series rr = Series::variable(r, 8);
    Series f = sinh(rr) * cosh(rr) + exp(-2.0 * rr);

    // f = sinh cosh + e^{-2r} = sinh(2r)/2 + e^{-2r}
    auto fk = [&](int k) {
        double s = std::pow(2.0, k - 1) * ((k % 2 == 0) ? std::sinh(2 * r) : std::cosh(2 * r));
        return s + std::pow(-2.0, k) * std::exp(-2 * r);
    };
    for (int k = 0; k <= 8; ++k) CHECK(f.deriv(k) == doctest::Approx(fk(k)).epsilon(1e-12));
}

TEST_CASE("division and log/pow recurrences") {
    Series rr = Series::variable(0.7, 10);
    Series g = pow(1.0 + rr * rr, -1.5);
    double v = std::pow(1.0 + 0.7 * 0.7, -1.5);
    CHECK(g.value() == doctest::Approx(v).epsilon(1e-14));
    // d/dr (1+r^2)^{-3/2} = -3r (1+r^2)^{-5/2}
    CHECK(g.deriv(1) == doctest::Approx(-3.0 * 0.7 * std::pow(1.49, -2.5)).epsilon(1e-13));

    Series l = log(cosh(rr));
    CHECK(l.deriv(1) == doctest::Approx(std::tanh(0.7)).epsilon(1e-13));
    CHECK(l.deriv(2) == doctest::Approx(1.0 / std::pow(std::cosh(0.7), 2)).epsilon(1e-12));
}

TEST_CASE("compose and revert") {
    Series t = Series::variable(0.0, 20);
    t.at(0) = 0.0;
    Series f = t * exp(t);           // x = t e^t
    Series h = revert(f);            // Lambert-W style inverse
    Series check = compose(f, h);
    CHECK(check[1] == doctest::Approx(1.0));
    // Coefficient roundoff grows with the order; compare against the scale
    // of the inverse's own coefficients.
    for (std::size_t k = 2; k <= 18; ++k) CHECK(std::abs(check[k]) < 1e-12 * std::abs(h[k]) + 1e-13);

    // W(x) = sum (-k)^{k-1} x^k / k!
    double fact = 1.0;
    for (std::size_t k = 1; k <= 8; ++k) {
        fact *= double(k);
        double wk = std::pow(-double(k), double(k - 1)) / fact;
        CHECK(h[k] == doctest::Approx(wk).epsilon(1e-10));
    }
}

TEST_CASE("eval and antiderivative") {
    Series rr = Series::variable(2.0, 12);
    Series f = exp(-rr);
    CHECK(f.eval(0.05) == doctest::Approx(std::exp(-2.05)).epsilon(1e-14));
    CHECK(f.eval_deriv(0.05, 2) == doctest::Approx(std::exp(-2.05)).epsilon(1e-10));

    Series p = pow_int(Series::variable(0.0, 6), 2); // t^2
    Series ap = p.antiderivative();
    CHECK(ap[3] == doctest::Approx(1.0 / 3.0));
}
