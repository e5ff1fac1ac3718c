#pragma once

// Test-only relaxation oracle: second-order finite differences plus Thomas
// elimination for the phi_s boundary value problem on hyperbolic space,
// written against the closed-form coefficient functions (no pelab solver
// machinery) so it is an independent check of solve_vs.

#include <cmath>
#include <cstddef>
#include <vector>

namespace fd_oracle {

struct Grid {
    double r0, R;
    std::size_t N;
    double h;
    std::vector<double> r;
};

inline Grid make_grid(double r0, double R, std::size_t N) {
    Grid g{r0, R, N, (R - r0) / double(N), {}};
    g.r.resize(N + 1);
    for (std::size_t i = 0; i <= N; ++i) g.r[i] = r0 + g.h * double(i);
    return g;
}

// phi'' + b phi' + c phi = 0, phi'(r0) = 0, phi(R) = 1, for hyperbolic
// space with rho = 1/(1+cosh r) and n = 3.
inline std::vector<double> solve_phi_hyperbolic(double s, const Grid& g) {
    const int n = 3;
    auto bfun = [&](double r) {
        double dlr = -std::sinh(r) / (1.0 + std::cosh(r));
        return double(n) / std::tanh(r) + 2.0 * (double(n) - s) * dlr;
    };
    auto cfun = [&](double r) {
        double dlr = -std::sinh(r) / (1.0 + std::cosh(r));
        double a = double(n) - s;
        return a * (a - 1.0) * dlr * dlr + a * (-2.0) + s * (double(n) - s);
    };
    std::size_t N = g.N;
    std::vector<double> lo(N + 1, 0.0), di(N + 1, 0.0), up(N + 1, 0.0), rhs(N + 1, 0.0);
    double h = g.h;
    for (std::size_t i = 1; i < N; ++i) {
        double b = bfun(g.r[i]), c = cfun(g.r[i]);
        lo[i] = 1.0 / (h * h) - b / (2.0 * h);
        di[i] = -2.0 / (h * h) + c;
        up[i] = 1.0 / (h * h) + b / (2.0 * h);
    }
    // Neumann at r0 via a ghost node: phi_{-1} = phi_1.
    {
        double b = bfun(g.r[0]), c = cfun(g.r[0]);
        (void)b;
        di[0] = -2.0 / (h * h) + c;
        up[0] = 2.0 / (h * h);
    }
    di[N] = 1.0;
    rhs[N] = 1.0;

    for (std::size_t i = 1; i <= N; ++i) {
        double m = lo[i] / di[i - 1];
        di[i] -= m * up[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    std::vector<double> phi(N + 1);
    phi[N] = rhs[N] / di[N];
    for (std::size_t i = N; i-- > 0;) phi[i] = (rhs[i] - up[i] * phi[i + 1]) / di[i];
    return phi;
}

// Richardson-extrapolated oracle values at the coarse nodes.
inline std::vector<double> phi_extrapolated(double s, const Grid& coarse) {
    auto fine = make_grid(coarse.r0, coarse.R, coarse.N * 2);
    auto pc = solve_phi_hyperbolic(s, coarse);
    auto pf = solve_phi_hyperbolic(s, fine);
    std::vector<double> out(coarse.N + 1);
    for (std::size_t i = 0; i <= coarse.N; ++i)
        out[i] = (4.0 * pf[2 * i] - pc[i]) / 3.0;
    return out;
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int N) {
    double h = (b - a) / N;
    double acc = f(a) + f(b);
    for (int i = 1; i < N; ++i) acc += f(a + h * i) * ((i % 2) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace fd_oracle
