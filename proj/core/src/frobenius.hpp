#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "pelab/series.hpp"

namespace pelab::detail {

// Generic Frobenius recursion for A(t) t^2 u'' + B(t) t u' + C(t) u = rhs
// about the regular singular point t = 0, with u = sum_j u_j t^{mu+j}
// and rhs = sum_j rhs_j t^{mu+j}.  Writing p_k(e) = A_k e(e-1) + B_k e + C_k,
// the order-(mu+j) balance reads
//     u_j p_0(mu+j) = rhs_j - sum_{k=1..j} p_k(mu+j-k) u_{j-k}.
// A collision is p_0(mu+j) ~ 0: if the source vanishes the free coefficient
// is set to zero and the recursion continues (the omitted admixture belongs
// to the other indicial branch); otherwise the expansion is truncated there.
struct FrobeniusResult {
    double mu = 0.0;
    std::vector<double> coeff;      // u_0 .. u_{valid_terms-1}
    std::size_t valid_terms = 0;
    bool collided = false;          // nonvanishing source at a collision
    int collision_j = -1;
    double collision_source = 0.0;
};

inline FrobeniusResult frobenius_solve(const Series& A, const Series& B, const Series& C,
                                       double mu, double u0, const Series& rhs,
                                       std::size_t terms) {
    FrobeniusResult out;
    out.mu = mu;
    out.coeff.assign(terms, 0.0);
    out.coeff[0] = u0;
    out.valid_terms = 1;
    auto p = [&](std::size_t k, double e) { return A[k] * e * (e - 1.0) + B[k] * e + C[k]; };
    double scale = std::abs(u0) + 1.0;
    for (std::size_t j = 1; j < terms; ++j) {
        double src = rhs[j];
        for (std::size_t k = 1; k <= j; ++k) src -= p(k, mu + double(j - k)) * out.coeff[j - k];
        double D = p(0, mu + double(j));
        if (std::abs(D) < 1e-9 * (1.0 + (mu + double(j)) * (mu + double(j)))) {
            if (std::abs(src) < 1e-9 * scale) {
                out.coeff[j] = 0.0;
                out.valid_terms = j + 1;
                continue;
            }
            out.collided = true;
            out.collision_j = int(j);
            out.collision_source = src;
            out.coeff.resize(j);
            out.valid_terms = j;
            return out;
        }
        out.coeff[j] = src / D;
        out.valid_terms = j + 1;
        scale = std::max(scale, std::abs(out.coeff[j]));
    }
    return out;
}

// Evaluate sum_j coeff[j] t^{mu+j} and its first t-derivative.
inline void frobenius_eval(const FrobeniusResult& f, double t, double& val, double& dval) {
    val = 0.0;
    dval = 0.0;
    for (std::size_t j = f.valid_terms; j-- > 0;) {
        double e = f.mu + double(j);
        double p = std::pow(t, e);
        val += f.coeff[j] * p;
        dval += f.coeff[j] * e * p / t;
    }
}

} // namespace pelab::detail
