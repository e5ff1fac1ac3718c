#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pelab/grid.hpp"
#include "pelab/profile.hpp"
#include "pelab/series.hpp"

namespace pelab {

// One factor of the cross-section: g+ = dr^2 + sum_a f_a(r)^2 h_a with
// (h_a, dim_a) a space form of unit sectional curvature kappa_a (1 for a
// round sphere, 0 for a circle or flat factor).
struct CrossSectionFactor {
    std::size_t dim = 0;
    double kappa = 1.0;
    double boundary_scale = 1.0; // ghat radius of this factor at infinity
};

struct BoundaryData {
    std::vector<double> ghat_scale;
    double Rhat = 0.0;
    double Jhat = 0.0;            // Rhat / (2(n-1))
    bool positive_scalar = false;
};

// Boundary expansions of the model in the geodesic variable x = C e^{-r},
// normalized so that x / rho -> 1 at infinity.
struct BoundaryBundle {
    double coord_scale = 1.0;            // C: x = C e^{-r}
    Series rho_over_x;                   // rho(x)/x, constant term 1
    Series lambda_prime;                 // lambda'(x), constant term n
    std::vector<Series> warp_times_x;    // F_a(x) = x f_a
    std::size_t order = 0;
};

struct ModelOptions {
    double r_max = 20.0;
    std::size_t nodes_per_panel = 17;
    std::size_t boundary_order = 40;
};

namespace detail {
class ModelBackend;
}

// Radially symmetric Poincare-Einstein model with a fixed smooth defining
// function.  Immutable after construction; all evaluators are pure.
class RadialMetric {
public:
    int n() const;
    double r_max() const;
    const std::shared_ptr<const RadialGrid>& grid() const;
    const std::vector<CrossSectionFactor>& cross_section() const;
    const BoundaryData& boundary() const;
    std::size_t center_dim() const;       // dimension of the collapsing factor
    const std::string& name() const;
    bool cap_regularity_mismatch() const;
    double cap_regular_period() const;    // 0 when not applicable

    double lambda(double r) const;
    double lambda_prime(double r) const;
    double rho(double r) const;
    double dlog_rho(double r) const;      // rho'/rho

    Series lambda_jet(double r, std::size_t order) const;
    Series lambda_prime_jet(double r, std::size_t order) const;
    Series rho_jet(double r, std::size_t order) const;
    Series warp_jet(std::size_t factor, double r, std::size_t order) const;

    // Boundary expansions; absent for unchecked custom warps.
    const BoundaryBundle* boundary_bundle() const;

    RadialProfile rho_profile(std::size_t order = 8) const;
    RadialProfile lambda_prime_profile(std::size_t order = 8) const;

    // Same geometry with the fixed defining function multiplied by the
    // polynomial factor p(x) = poly_in_x[0] + poly_in_x[1] x + ...; p(0)
    // must be 1 so the boundary representative is unchanged, unless
    // allow_rescale explicitly opts into changing the representative scale.
    RadialMetric with_defining_function(const std::vector<double>& poly_in_x,
                                        bool allow_rescale = false) const;

    explicit RadialMetric(std::shared_ptr<const detail::ModelBackend> impl);
    const detail::ModelBackend& backend() const { return *impl_; }

private:
    std::shared_ptr<const detail::ModelBackend> impl_;
};

// g+ = dr^2 + sinh(r)^2 g_{S^n}; rho = 1/(1+cosh r); round conformal infinity.
RadialMetric make_hyperbolic(int n, const ModelOptions& opts = {});

// Riemannian AdS-Schwarzschild: V^{-1} dq^2 + V dtau^2 + q^2 g_{S^{n-1}},
// V = 1 + q^2 - 2 m q^{2-n}, in proper distance from the cap.  beta = 0
// selects the smooth-cap period when m > 0 (and 2*pi when m = 0).
RadialMetric make_ads_schwarzschild(int n, double m, double beta = 0.0,
                                    const ModelOptions& opts = {});

// Test hook: single-factor warped metric with a caller-supplied warp jet.
// No Einstein check, no boundary bundle.
RadialMetric make_custom_warped(int n,
                                const std::function<Series(double, std::size_t)>& warp,
                                const ModelOptions& opts = {});

// Pointwise sup over tensor components of |Ric_{g+} + n g+|_{g+}.
RadialProfile einstein_residual(const RadialMetric& g);

} // namespace pelab
