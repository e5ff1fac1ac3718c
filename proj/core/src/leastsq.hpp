#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pelab::detail {

struct LsqResult {
    std::vector<double> coeff;
    double residual = 0.0;    // rms of the residual vector
    double condition = 0.0;   // of the column-normalized system
};

// Dense least squares by Householder QR; rows >= cols, cols small.
inline LsqResult solve_least_squares(std::vector<std::vector<double>> A, std::vector<double> b) {
    std::size_t m = A.size();
    if (m == 0) throw std::invalid_argument("solve_least_squares: empty system");
    std::size_t n = A[0].size();
    if (m < n) throw std::invalid_argument("solve_least_squares: underdetermined");

    std::vector<double> colnorm(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) colnorm[j] += A[i][j] * A[i][j];
        colnorm[j] = std::sqrt(colnorm[j]);
        if (colnorm[j] == 0.0) throw std::invalid_argument("solve_least_squares: zero column");
        for (std::size_t i = 0; i < m; ++i) A[i][j] /= colnorm[j];
    }

    for (std::size_t k = 0; k < n; ++k) {
        double alpha = 0.0;
        for (std::size_t i = k; i < m; ++i) alpha += A[i][k] * A[i][k];
        alpha = std::sqrt(alpha);
        if (A[k][k] > 0) alpha = -alpha;
        std::vector<double> v(m, 0.0);
        for (std::size_t i = k; i < m; ++i) v[i] = A[i][k];
        v[k] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < m; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 < 1e-300) continue;
        for (std::size_t j = k; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += v[i] * A[i][j];
            double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < m; ++i) A[i][j] -= f * v[i];
        }
        double dot = 0.0;
        for (std::size_t i = k; i < m; ++i) dot += v[i] * b[i];
        double f = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < m; ++i) b[i] -= f * v[i];
    }

    double rmax = 0.0, rmin = 1e300;
    for (std::size_t k = 0; k < n; ++k) {
        rmax = std::max(rmax, std::abs(A[k][k]));
        rmin = std::min(rmin, std::abs(A[k][k]));
    }
    LsqResult out;
    out.condition = (rmin > 0.0) ? rmax / rmin : 1e300;
    out.coeff.assign(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double acc = b[k];
        for (std::size_t j = k + 1; j < n; ++j) acc -= A[k][j] * out.coeff[j];
        if (std::abs(A[k][k]) < 1e-300)
            throw std::runtime_error("solve_least_squares: rank deficient");
        out.coeff[k] = acc / A[k][k];
    }
    double res2 = 0.0;
    for (std::size_t i = n; i < m; ++i) res2 += b[i] * b[i];
    out.residual = std::sqrt(res2 / double(m));
    for (std::size_t j = 0; j < n; ++j) out.coeff[j] /= colnorm[j];
    return out;
}

} // namespace pelab::detail
