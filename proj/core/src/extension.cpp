#include "pelab/extension.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "leastsq.hpp"

namespace pelab {

namespace {

double bump_raw(double z) {
    double w = 1.0 - z * z;
    return (w > 0.0) ? std::exp(-1.0 / w) : 0.0;
}

// Trapezoid over [-1, 1]; the bump vanishes to all orders at the endpoints,
// so the rule converges super-algebraically.
double bump_integral(const std::function<double(double)>& f, std::size_t panels) {
    double h = 2.0 / double(panels);
    double acc = 0.5 * (f(-1.0) + f(1.0));
    for (std::size_t i = 1; i < panels; ++i) acc += f(-1.0 + h * double(i));
    return acc * h;
}

double cubic_interp(const std::vector<double>& xs, const std::vector<double>& vs, double x) {
    std::size_t n = xs.size();
    double h = xs[1] - xs[0];
    double t = (x - xs[0]) / h;
    if (t <= 0.0 || t >= double(n - 1)) return 0.0;
    std::size_t i1 = std::min<std::size_t>(std::size_t(t), n - 2);
    std::size_t i0 = (i1 == 0) ? 0 : i1 - 1;
    std::size_t i2 = i1 + 1;
    std::size_t i3 = std::min(i2 + 1, n - 1);
    double u = t - double(i1);
    // Catmull-Rom weights (falls back to linear near the edges).
    if (i0 == i1 || i3 == i2) {
        return vs[i1] * (1.0 - u) + vs[i2] * u;
    }
    double w0 = 0.5 * (-u + 2.0 * u * u - u * u * u);
    double w1 = 0.5 * (2.0 - 5.0 * u * u + 3.0 * u * u * u);
    double w2 = 0.5 * (u + 4.0 * u * u - 3.0 * u * u * u);
    double w3 = 0.5 * (-u * u + u * u * u);
    return w0 * vs[i0] + w1 * vs[i1] + w2 * vs[i2] + w3 * vs[i3];
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
    return r;
}

template <typename F>
double fdiff(const F& f, int m, double x0, double h) {
    double acc = 0.0;
    for (int i = 0; i <= m; ++i)
        acc += (((m - i) % 2 == 0) ? 1.0 : -1.0) * binom(m, i) * f(x0 + h * double(i));
    return acc;
}

double smooth_step(double t) {
    // 0 for t <= 0, 1 for t >= 1, C-infinity in between.
    auto b = [](double u) { return (u > 0.0) ? std::exp(-1.0 / u) : 0.0; };
    double num = b(t);
    return num / (num + b(1.0 - t));
}

} // namespace

double mollifier(double z) {
    static const double I0 = bump_integral([](double t) { return bump_raw(t); }, 4096);
    return bump_raw(z) / I0;
}

double mollifier_moment(int i) {
    static std::map<int, double> cache;
    auto it = cache.find(i);
    if (it != cache.end()) return it->second;
    double v = bump_integral([i](double t) { return mollifier(t) * std::pow(t, i); }, 4096);
    cache[i] = v;
    return v;
}

double extension_cutoff(double x) {
    return smooth_step((0.75 - x) / 0.25);
}

double BoundaryFunction::eval(double yy) const {
    return cubic_interp(y, values, yy);
}

BoundaryFunction BoundaryFunction::derivative() const {
    BoundaryFunction d = *this;
    double h = y[1] - y[0];
    for (std::size_t j = 0; j < y.size(); ++j) {
        double up = (j + 1 < y.size()) ? values[j + 1] : 0.0;
        double dn = (j > 0) ? values[j - 1] : 0.0;
        d.values[j] = (up - dn) / (2.0 * h);
    }
    if (k > 0) d.k -= 1;
    return d;
}

BoundaryFunction BoundaryFunction::from_function(const std::function<double(double)>& f,
                                                 std::size_t samples, int k, double alpha) {
    BoundaryFunction out;
    out.k = k;
    out.alpha = alpha;
    out.y.resize(samples);
    out.values.resize(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        out.y[j] = -1.0 + 2.0 * double(j) / double(samples - 1);
        out.values[j] = f(out.y[j]);
    }
    for (std::size_t j = 0; j < samples; ++j)
        if (std::abs(out.y[j]) > 0.9 && std::abs(out.values[j]) > 1e-14)
            throw std::invalid_argument(
                "BoundaryFunction: support must lie strictly inside [-0.9, 0.9]");
    return out;
}

namespace {

// Catmull-Rom in y on one row of the flat value array, allocation free.
double row_interp(const std::vector<double>& ygrid, const double* row, double yy) {
    std::size_t n = ygrid.size();
    double h = ygrid[1] - ygrid[0];
    double t = (yy - ygrid[0]) / h;
    if (t <= 0.0 || t >= double(n - 1)) return 0.0;
    std::size_t i1 = std::min<std::size_t>(std::size_t(t), n - 2);
    double u = t - double(i1);
    if (i1 == 0 || i1 + 2 >= n) return row[i1] * (1.0 - u) + row[i1 + 1] * u;
    double w0 = 0.5 * (-u + 2.0 * u * u - u * u * u);
    double w1 = 0.5 * (2.0 - 5.0 * u * u + 3.0 * u * u * u);
    double w2 = 0.5 * (u + 4.0 * u * u - 3.0 * u * u * u);
    double w3 = 0.5 * (-u * u + u * u * u);
    return w0 * row[i1 - 1] + w1 * row[i1] + w2 * row[i1 + 1] + w3 * row[i1 + 2];
}

} // namespace

double StripFunction::eval(double xx, double yy) const {
    // Separable cubic interpolation: first in y along four x rows.
    std::size_t nx = x.size();
    double hx = x[1] - x[0];
    double t = xx / hx;
    if (t < 0.0) return 0.0;
    std::size_t i1 = std::min<std::size_t>(std::size_t(t), nx - 2);
    std::size_t i0 = (i1 == 0) ? 0 : i1 - 1;
    std::size_t i3 = std::min(i1 + 2, nx - 1);
    double acc = 0.0;
    for (std::size_t a = i0; a <= i3; ++a) {
        double va = row_interp(y, values.data() + a * y.size(), yy);
        double w = 1.0;
        for (std::size_t b = i0; b <= i3; ++b)
            if (b != a) w *= (xx - x[b]) / (x[a] - x[b]);
        acc += w * va;
    }
    return acc;
}

StripFunction mollify_extend(const BoundaryFunction& f, int k, int l,
                             const ExtendOptions& opts) {
    if (l < 0 || k < 0) throw std::invalid_argument("mollify_extend: k, l >= 0");
    for (std::size_t j = 0; j < f.y.size(); ++j)
        if (std::abs(f.y[j]) > 0.9 && std::abs(f.values[j]) > 1e-14)
            throw std::invalid_argument("mollify_extend: support violation");

    StripFunction F;
    F.l = l;
    F.x.resize(opts.nx);
    for (std::size_t i = 0; i < opts.nx; ++i) F.x[i] = double(i) / double(opts.nx);
    F.y = f.y;
    F.values.assign(opts.nx * f.y.size(), 0.0);

    // Kernel weights at the z quadrature nodes, shared across slices.
    std::size_t M = opts.quad_panels;
    double hz = 2.0 / double(M);
    std::vector<double> znodes(M + 1), wq(M + 1);
    for (std::size_t q = 0; q <= M; ++q) {
        znodes[q] = -1.0 + hz * double(q);
        wq[q] = mollifier(znodes[q]) * hz * ((q == 0 || q == M) ? 0.5 : 1.0);
    }

    for (std::size_t i = 0; i < opts.nx; ++i) {
        double x = F.x[i];
        double chi = extension_cutoff(x);
        if (chi == 0.0) continue;
        double xl = (l == 0) ? 1.0 : std::pow(x, l);
        for (std::size_t j = 0; j < f.y.size(); ++j) {
            double conv = 0.0;
            if (x == 0.0) {
                conv = f.values[j];
            } else {
                double yj = f.y[j];
                for (std::size_t q = 0; q <= M; ++q)
                    if (wq[q] != 0.0) conv += wq[q] * f.eval(yj - x * znodes[q]);
            }
            F.values[i * f.y.size() + j] = chi * xl * conv;
        }
    }
    return F;
}

ExpansionResult extension_expansion(const StripFunction& F, int k, int l) {
    // Sample rows in the chi = 1 region at small x.
    std::vector<std::size_t> rows;
    for (std::size_t i = 1; i < F.x.size() && rows.size() < std::size_t(3 * (k + 1) + 6); ++i)
        if (F.x[i] < 0.25) rows.push_back(i);
    if (rows.size() < std::size_t(k + 2))
        throw std::invalid_argument("extension_expansion: too few x rows");

    ExpansionResult out;
    out.coefficients.assign(std::size_t(k) + 1, std::vector<double>(F.y.size(), 0.0));
    for (std::size_t j = 0; j < F.y.size(); ++j) {
        std::vector<std::vector<double>> A;
        std::vector<double> b;
        for (std::size_t r : rows) {
            std::vector<double> row;
            for (int i = 0; i <= k; ++i) row.push_back(std::pow(F.x[r], l + i));
            A.push_back(std::move(row));
            b.push_back(F.at(r, j));
        }
        auto ls = detail::solve_least_squares(std::move(A), std::move(b));
        for (int i = 0; i <= k; ++i) out.coefficients[std::size_t(i)][j] = ls.coeff[std::size_t(i)];
        out.condition = std::max(out.condition, ls.condition);
        out.max_residual = std::max(out.max_residual, ls.residual);
    }
    if (out.condition > 1e12)
        throw std::runtime_error("extension_expansion: ill-conditioned fit");
    return out;
}

double strip_holder_norm(const StripFunction& F, int m, double alpha,
                         const StripNormOptions& opts) {
    double sup = 0.0, semi = 0.0;
    std::vector<double> low(std::size_t(m) + 1, 0.0);
    double h_min = 4.0 * opts.resolution, h_max = 64.0 * opts.resolution;
    for (std::size_t lev = 0; lev < opts.levels; ++lev) {
        double h = h_max * std::pow(h_min / h_max, double(lev) / double(opts.levels - 1));
        for (double x0 = opts.x_lo; x0 < opts.x_hi - h * (m + 1); x0 += (opts.x_hi - opts.x_lo) / 9.0) {
            for (double y0 = -0.9; y0 < 0.9 - h * (m + 1); y0 += 0.2) {
                sup = std::max(sup, std::abs(F.eval(x0, y0)));
                auto fx = [&](double t) { return F.eval(t, y0); };
                auto fy = [&](double t) { return F.eval(x0, t); };
                for (int j = 1; j <= m; ++j) {
                    double q = std::max(std::abs(fdiff(fx, j, x0, h)),
                                        std::abs(fdiff(fy, j, y0, h))) /
                               std::pow(h, j);
                    low[std::size_t(j)] = std::max(low[std::size_t(j)], q);
                }
                double q = std::max(std::abs(fdiff(fx, m + 1, x0, h)),
                                    std::abs(fdiff(fy, m + 1, y0, h))) /
                           std::pow(h, double(m) + alpha);
                semi = std::max(semi, q);
            }
        }
    }
    double total = sup + semi;
    for (int j = 1; j <= m; ++j) total += low[std::size_t(j)];
    return total;
}

double line_holder_norm(const BoundaryFunction& f, int k, double alpha,
                        const StripNormOptions& opts) {
    double sup = 0.0, semi = 0.0;
    std::vector<double> low(std::size_t(k) + 1, 0.0);
    double h_min = 4.0 * opts.resolution, h_max = 64.0 * opts.resolution;
    for (std::size_t lev = 0; lev < opts.levels; ++lev) {
        double h = h_max * std::pow(h_min / h_max, double(lev) / double(opts.levels - 1));
        for (double y0 = -0.95; y0 < 0.95 - h * (k + 1); y0 += 0.05) {
            auto fy = [&](double t) { return f.eval(t); };
            sup = std::max(sup, std::abs(f.eval(y0)));
            for (int j = 1; j <= k; ++j)
                low[std::size_t(j)] = std::max(
                    low[std::size_t(j)], std::abs(fdiff(fy, j, y0, h)) / std::pow(h, j));
            semi = std::max(semi,
                            std::abs(fdiff(fy, k + 1, y0, h)) / std::pow(h, double(k) + alpha));
        }
    }
    double total = sup + semi;
    for (int j = 1; j <= k; ++j) total += low[std::size_t(j)];
    return total;
}

double strip_weighted_xderiv_norm(const StripFunction& F, int j, int m, double alpha,
                                  const StripNormOptions& opts) {
    // Build x^j d_x^j F on the strip grid by centered differences, then
    // measure it like any strip function.
    StripFunction G = F;
    double h = F.x[1] - F.x[0];
    std::size_t ny = F.y.size();
    for (std::size_t i = 0; i < F.x.size(); ++i) {
        for (std::size_t jj = 0; jj < ny; ++jj) {
            auto fx = [&](double t) { return F.eval(t, F.y[jj]); };
            double x0 = F.x[i];
            double d = fdiff(fx, j, std::max(0.0, x0 - 0.5 * j * h), h) / std::pow(h, j);
            G.values[i * ny + jj] = std::pow(x0, j) * d;
        }
    }
    return strip_holder_norm(G, m, alpha, opts);
}

double extension_norm_ratio(const BoundaryFunction& f, int k, int l, double alpha,
                            const ExtendOptions& eopts, const StripNormOptions& nopts) {
    StripFunction F = mollify_extend(f, k, l, eopts);
    double nf = line_holder_norm(f, k, alpha, nopts);
    double nF = strip_holder_norm(F, k + l, alpha, nopts);
    if (nf == 0.0) throw std::invalid_argument("extension_norm_ratio: zero input norm");
    return nF / nf;
}

StripFunction quotient_by_rho(const StripFunction& F) {
    std::size_t ny = F.y.size();
    double x1 = F.x[1], x2 = F.x[2];
    double scale = 0.0;
    for (std::size_t j = 0; j < ny; ++j)
        scale = std::max(scale, std::abs(F.at(2, j) - F.at(1, j)) / (x2 - x1));
    for (std::size_t j = 0; j < ny; ++j)
        if (std::abs(F.at(1, j)) > 20.0 * (scale + 1e-12) * x1)
            throw std::invalid_argument("quotient_by_rho: trace at x = 0 does not vanish");

    StripFunction G = F;
    if (G.l > 0) G.l -= 1;
    for (std::size_t i = 1; i < F.x.size(); ++i)
        for (std::size_t j = 0; j < ny; ++j) G.values[i * ny + j] = F.at(i, j) / F.x[i];
    // x = 0 column: one-sided cubic-killing extrapolation of the derivative.
    for (std::size_t j = 0; j < ny; ++j)
        G.values[j] = (48.0 * F.at(1, j) - 36.0 * F.at(2, j) + 16.0 * F.at(3, j) -
                       3.0 * F.at(4, j)) /
                      (12.0 * x1);
    return G;
}

} // namespace pelab
