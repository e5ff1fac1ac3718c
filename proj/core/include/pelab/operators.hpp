#pragma once

#include "pelab/model.hpp"
#include "pelab/profile.hpp"

namespace pelab {

enum class OperatorKind { LaplacianPlus, P0, PLambda, GjmsProduct };

struct OperatorSpec {
    OperatorKind kind = OperatorKind::LaplacianPlus;
    double s = 0.0;       // spectral parameter, s > n/2 where required
    double lambda = 0.0;  // weight shift for PLambda
    int N = 1;            // GJMS half-order

    void validate(int n, int regularity_k = 8) const;
};

// Delta_+ u = u'' + lambda' u' for radial u.
RadialProfile apply_laplacian_plus(const RadialMetric& g, const RadialProfile& u);

// P0 u = Delta_+ u + s(n-s) u.
RadialProfile apply_P0(const RadialMetric& g, double s, const RadialProfile& u);

// P_lambda u = rho^{-lambda} (Delta_+ + s(n-s)) (rho^lambda u).
RadialProfile apply_P_lambda(const RadialMetric& g, double s, double lambda,
                             const RadialProfile& u);

// j-th factor constant of P+_{2N}: (n+2N-4j+3)(n-2N+4j-3)/4.
double gjms_factor_constant(int n, int N, int j);

// Q+_{n+1} = (-1)^{(n+1)/2} n!  (n odd).
double gjms_q_constant(int n);

// P+_{2N} = prod_{j=1..N} (-Delta_+ - c_j), factors applied in increasing j.
RadialProfile apply_gjms_plus(const RadialMetric& g, int N, const RadialProfile& u);

RadialProfile apply_operator(const RadialMetric& g, const OperatorSpec& spec,
                             const RadialProfile& u);

// Delta_+ u - [rho^2 Delta-bar u - (n-1) rho <d rho, du>_gbar]; the two sides
// are computed through independent code paths and the residual must vanish.
RadialProfile conformal_laplacian_check(const RadialMetric& g, const RadialProfile& u);

// Exact indicial action of P0 on a pure power x^mu: mu(mu-n) + s(n-s).
double indicial_p0_coefficient(int n, double s, double mu);

// Term-by-term action of Delta_+ (plus an optional zeroth-order shift) on a
// boundary series in the geodesic variable, using the model's boundary
// expansion of lambda'.
BoundarySeries transform_series_p0(const RadialMetric& g, double shift,
                                   const BoundarySeries& in);

} // namespace pelab
