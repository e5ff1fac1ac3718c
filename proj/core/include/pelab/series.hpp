#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace pelab {

// Truncated power series in one formal variable t.  c[k] is the coefficient
// of t^k.  Used both as a formal boundary expansion and as a Taylor jet about
// a grid node r0, in which case c[k] = f^(k)(r0)/k! and t = r - r0.
class Series {
public:
    Series() = default;
    explicit Series(std::size_t order) : c_(order + 1, 0.0) {}
    Series(std::initializer_list<double> coeffs) : c_(coeffs) {}
    explicit Series(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

    static Series constant(double v, std::size_t order);
    // v + t, i.e. the identity jet about v.
    static Series variable(double v, std::size_t order);

    std::size_t order() const { return c_.empty() ? 0 : c_.size() - 1; }
    std::size_t size() const { return c_.size(); }
    bool empty() const { return c_.empty(); }

    double operator[](std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
    double& at(std::size_t k) { return c_.at(k); }

    double value() const { return c_.empty() ? 0.0 : c_[0]; }
    // k-th derivative at the expansion point: c[k]*k!.
    double deriv(std::size_t k) const;

    const std::vector<double>& coefficients() const { return c_; }

    Series truncated(std::size_t order) const;
    Series derivative() const;
    Series antiderivative() const;

    double eval(double t) const;
    // Value of the k-th derivative of the truncated polynomial at t.
    double eval_deriv(double t, int k) const;

    Series& operator+=(const Series& o);
    Series& operator-=(const Series& o);
    Series& operator*=(double a);
    Series& operator+=(double a);

    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(const Series& a, const Series& b);
    friend Series operator/(const Series& a, const Series& b);
    friend Series operator*(Series a, double s) { return a *= s; }
    friend Series operator*(double s, Series a) { return a *= s; }
    friend Series operator+(Series a, double s) { return a += s; }
    friend Series operator+(double s, Series a) { return a += s; }
    friend Series operator-(Series a, double s) { return a += -s; }
    friend Series operator-(double s, const Series& a);
    friend Series operator-(Series a);
    friend Series operator/(const Series& a, double s);
    friend Series operator/(double s, const Series& a);

private:
    std::vector<double> c_;
};

Series exp(const Series& f);
Series log(const Series& f);          // f[0] > 0
Series pow_int(const Series& f, unsigned k); // repeated product, any f
Series pow(const Series& f, double a); // f[0] > 0
Series sqrt(const Series& f);
Series sinh(const Series& f);
Series cosh(const Series& f);
Series tanh(const Series& f);

// f(g(t)) truncated to min(order f, order g); requires g[0] == 0.
Series compose(const Series& f, const Series& g);
// Compositional inverse: h with f(h(t)) = t + O(t^{n+1}); f[0] = 0, f[1] != 0.
Series revert(const Series& f);

} // namespace pelab
