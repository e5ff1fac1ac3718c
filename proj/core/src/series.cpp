#include "pelab/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pelab {

namespace {
std::size_t joint_order(const Series& a, const Series& b) {
    return std::min(a.order(), b.order());
}
} // namespace

Series Series::constant(double v, std::size_t order) {
    Series s(order);
    s.at(0) = v;
    return s;
}

Series Series::variable(double v, std::size_t order) {
    Series s(order);
    s.at(0) = v;
    if (order >= 1) s.at(1) = 1.0;
    return s;
}

double Series::deriv(std::size_t k) const {
    double fact = 1.0;
    for (std::size_t i = 2; i <= k; ++i) fact *= double(i);
    return (*this)[k] * fact;
}

Series Series::truncated(std::size_t order) const {
    Series s(order);
    for (std::size_t k = 0; k <= order; ++k) s.at(k) = (*this)[k];
    return s;
}

Series Series::derivative() const {
    if (order() == 0) return Series::constant(0.0, 0);
    Series s(order() - 1);
    for (std::size_t k = 0; k + 1 <= order(); ++k) s.at(k) = double(k + 1) * c_[k + 1];
    return s;
}

Series Series::antiderivative() const {
    Series s(order() + 1);
    for (std::size_t k = 0; k < c_.size(); ++k) s.at(k + 1) = c_[k] / double(k + 1);
    return s;
}

double Series::eval(double t) const {
    double acc = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * t + c_[k];
    return acc;
}

double Series::eval_deriv(double t, int k) const {
    Series d = *this;
    for (int i = 0; i < k; ++i) d = d.derivative();
    return d.eval(t);
}

Series& Series::operator+=(const Series& o) {
    if (o.size() > c_.size()) c_.resize(o.size(), 0.0);
    for (std::size_t k = 0; k < o.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

Series& Series::operator-=(const Series& o) {
    if (o.size() > c_.size()) c_.resize(o.size(), 0.0);
    for (std::size_t k = 0; k < o.size(); ++k) c_[k] -= o.c_[k];
    return *this;
}

Series& Series::operator*=(double a) {
    for (double& x : c_) x *= a;
    return *this;
}

Series& Series::operator+=(double a) {
    if (c_.empty()) c_.push_back(0.0);
    c_[0] += a;
    return *this;
}

Series operator*(const Series& a, const Series& b) {
    std::size_t n = joint_order(a, b);
    Series r(n);
    for (std::size_t k = 0; k <= n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i <= k; ++i) acc += a[i] * b[k - i];
        r.at(k) = acc;
    }
    return r;
}

Series operator/(const Series& a, const Series& b) {
    if (b.value() == 0.0) throw std::domain_error("Series division by series with zero constant term");
    std::size_t n = joint_order(a, b);
    Series q(n);
    for (std::size_t k = 0; k <= n; ++k) {
        double acc = a[k];
        for (std::size_t i = 0; i < k; ++i) acc -= q[i] * b[k - i];
        q.at(k) = acc / b.value();
    }
    return q;
}

Series operator-(Series a) {
    return a *= -1.0;
}

Series operator-(double s, const Series& a) {
    Series r = -a;
    return r += s;
}

Series operator/(const Series& a, double s) {
    Series r = a;
    return r *= 1.0 / s;
}

Series operator/(double s, const Series& a) {
    return Series::constant(s, a.order()) / a;
}

Series exp(const Series& f) {
    std::size_t n = f.order();
    Series g(n);
    g.at(0) = std::exp(f.value());
    for (std::size_t k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) acc += double(j) * f[j] * g[k - j];
        g.at(k) = acc / double(k);
    }
    return g;
}

Series log(const Series& f) {
    if (f.value() <= 0.0) throw std::domain_error("Series log requires positive constant term");
    std::size_t n = f.order();
    Series g(n);
    g.at(0) = std::log(f.value());
    // g' = f'/f
    Series q = f.derivative() / f.truncated(n == 0 ? 0 : n - 1);
    for (std::size_t k = 1; k <= n; ++k) g.at(k) = q[k - 1] / double(k);
    return g;
}

Series pow_int(const Series& f, unsigned k) {
    Series r = Series::constant(1.0, f.order());
    for (unsigned i = 0; i < k; ++i) r = r * f;
    return r;
}

Series pow(const Series& f, double a) {
    if (f.value() <= 0.0) throw std::domain_error("Series pow requires positive constant term");
    std::size_t n = f.order();
    Series g(n);
    g.at(0) = std::pow(f.value(), a);
    for (std::size_t k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j)
            acc += ((a + 1.0) * double(j) - double(k)) * f[j] * g[k - j];
        g.at(k) = acc / (double(k) * f.value());
    }
    return g;
}

Series sqrt(const Series& f) {
    return pow(f, 0.5);
}

Series sinh(const Series& f) {
    Series e = exp(f), em = exp(-f);
    return (e - em) * 0.5;
}

Series cosh(const Series& f) {
    Series e = exp(f), em = exp(-f);
    return (e + em) * 0.5;
}

Series tanh(const Series& f) {
    return sinh(f) / cosh(f);
}

Series compose(const Series& f, const Series& g) {
    if (g.value() != 0.0) throw std::domain_error("Series compose requires g(0) = 0");
    std::size_t n = std::min(f.order(), g.order());
    Series gt = g.truncated(n);
    Series r = Series::constant(f[n], n);
    for (std::size_t k = n; k-- > 0;) {
        r = r * gt;
        r += f[k];
    }
    return r;
}

Series revert(const Series& f) {
    if (f.value() != 0.0 || f[1] == 0.0)
        throw std::domain_error("Series revert requires f(0) = 0, f'(0) != 0");
    std::size_t n = f.order();
    // Newton iteration h <- h - (f(h) - t)/f'(h) in the TPS ring.
    Series t = Series::variable(0.0, n);
    t.at(0) = 0.0;
    Series h = t / f[1];
    Series fp = f.derivative().truncated(n);
    for (std::size_t it = 0; it < n + 2; ++it) {
        Series res = compose(f.truncated(n), h) - t;
        bool clean = true;
        for (std::size_t k = 0; k <= n; ++k)
            if (std::abs(res[k]) > 1e-300) { clean = false; break; }
        if (clean) break;
        h -= res / compose(fp, h);
    }
    return h;
}

} // namespace pelab
