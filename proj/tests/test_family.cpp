#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pelab/family.hpp"
#include "pelab/holder.hpp"

using namespace pelab;

namespace {

FamilySpec small_ads_family() {
    FamilySpec spec;
    spec.model = "ads_schw";
    spec.n = 3;
    spec.parameters = {0.0, 0.25, 0.5};
    spec.s_values = {3.5};
    return spec;
}

} // namespace

TEST_CASE("direction-a trichotomy indices") {
    // k = 3, alpha = 0.5.
    auto [l1, b1] = direction_a_indices(3, 3, 0.5, 3.8); // 2s-n = 4.6 > 3.5: (a.1)
    CHECK(l1 == 3);
    CHECK(b1 == doctest::Approx(0.25));
    auto [l2, b2] = direction_a_indices(3, 3, 0.5, 2.0); // 2s-n = 1, odd: (a.2)
    CHECK(l2 == 3);
    CHECK(b2 == doctest::Approx(0.25));
    auto [l3, b3] = direction_a_indices(3, 3, 0.5, 2.75); // 2s-n = 2.5: (a.3)
    CHECK(l3 == 2);
    CHECK(double(l3) + b3 < 2.5);
    auto [l4, b4] = direction_a_indices(3, 3, 0.5, 3.5); // 2s-n = 4, even: (a.3)
    CHECK(l4 == 3);
    CHECK(double(l4) + b4 < 4.0);
}

TEST_CASE("direction-b range gate") {
    auto spec = small_ads_family();
    spec.s_values = {2.3};
    CHECK_THROWS_AS(run_direction_b(spec), std::invalid_argument);
    spec.s_values = {2.0}; // (n+1)/2 allowed
    auto rep = run_direction_b(spec);
    CHECK(rep.all_bounds_hold);
}

TEST_CASE("singleton family is trivially bounded") {
    FamilySpec spec;
    spec.model = "hyperbolic_rho";
    spec.parameters = {0.0};
    spec.s_values = {3.5};
    auto rep = run_direction_a(spec);
    CHECK(rep.all_bounds_hold);
    CHECK(rep.value_of(0, "phi_min_s" + std::to_string(3.5)) > 0.0);
}

TEST_CASE("small ads family passes both directions") {
    auto spec = small_ads_family();
    auto a = run_direction_a(spec);
    CHECK(a.all_bounds_hold);

    auto b = run_direction_b(spec);
    CHECK(b.all_bounds_hold);
    // Collar gradient floor is positive; take c as half
    // the family minimum.
    double c = 1e300;
    for (const auto& row : b.rows)
        if (row.quantity.rfind("collar_drho_min", 0) == 0) c = std::min(c, row.value);
    CHECK(c / 2.0 > 0.0);
    CHECK(c <= 1.0 + 1e-8);
}

TEST_CASE("defining-function variants form a legal family") {
    FamilySpec spec;
    spec.model = "hyperbolic_rho";
    spec.parameters = {0.0, 0.2, 0.4};
    spec.s_values = {2.0};
    auto rep = run_direction_b(spec);
    CHECK(rep.all_bounds_hold);
}

TEST_CASE("corollary roundtrip") {
    auto spec = small_ads_family();
    spec.parameters = {0.0, 0.3};
    auto rep = corollary_roundtrip(spec, 1, 2);
    CHECK(rep.s == doctest::Approx(2.0));
    CHECK(rep.t == doctest::Approx(3.0));
    CHECK(rep.both_bounded);

    // s = t: identical tables.
    auto same = corollary_roundtrip(spec, 2, 2);
    REQUIRE(same.forward.rows.size() == same.backward.rows.size());
    for (std::size_t i = 0; i < same.forward.rows.size(); ++i)
        CHECK(same.forward.rows[i].value == doctest::Approx(same.backward.rows[i].value));

    // Reversed direction gives the same verdict.
    auto rev = corollary_roundtrip(spec, 2, 1);
    CHECK(rev.both_bounded == rep.both_bounded);
}

TEST_CASE("harness numbers are stable under grid-resolution doubling") {
    // Self-consistency of the reported norms: one member, one s.
    auto coarse = make_ads_schwarzschild(3, 0.3);
    ModelOptions fine_opts;
    fine_opts.nodes_per_panel = 41;
    auto fine = make_ads_schwarzschild(3, 0.3, 0.0, fine_opts);
    HolderOptions ho;
    ho.resolution = 4e-4;
    for (double s : {2.0, 3.5}) {
        auto cc = solve_compactification(coarse, s);
        auto cf = solve_compactification(fine, s);
        auto [l, beta] = direction_a_indices(3, 3, 0.5, s);
        double nc = holder_seminorm(coarse, cc.phi_s, l, beta, ho).value;
        double nf = holder_seminorm(fine, cf.phi_s, l, beta, ho).value;
        CHECK(std::abs(nf - nc) / nc < 0.05);
        double rc = cc.rho_s.max_abs(), rf = cf.rho_s.max_abs();
        CHECK(std::abs(rf - rc) / rc < 0.05);
    }
}
