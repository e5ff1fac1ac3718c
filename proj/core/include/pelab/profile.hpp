#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "pelab/boundary_series.hpp"
#include "pelab/grid.hpp"
#include "pelab/series.hpp"

namespace pelab {

// Scalar radial function represented by a Taylor jet at every grid node plus
// an optional boundary expansion used beyond r_series_start.  derivative_order
// counts how many derivatives the jets carry trustworthily; pointwise algebra
// propagates jets, differentiation shifts them down by one.
class RadialProfile {
public:
    RadialProfile() = default;
    RadialProfile(std::shared_ptr<const RadialGrid> grid, std::vector<Series> jets);

    // Sample a jet-valued closure f(r, order) on all nodes.
    static RadialProfile from_function(std::shared_ptr<const RadialGrid> grid,
                                       const std::function<Series(double, std::size_t)>& f,
                                       std::size_t order);
    static RadialProfile from_values(std::shared_ptr<const RadialGrid> grid,
                                     std::vector<double> values);

    const std::shared_ptr<const RadialGrid>& grid() const { return grid_; }
    std::size_t size() const { return jets_.size(); }
    int derivative_order() const { return derivative_order_; }

    double value(std::size_t i) const { return jets_[i].value(); }
    double deriv(std::size_t i, std::size_t k) const { return jets_[i].deriv(k); }
    const Series& jet(std::size_t i) const { return jets_[i]; }
    std::vector<double> values() const;

    const std::optional<BoundarySeries>& boundary_series() const { return series_; }
    void set_boundary_series(BoundarySeries s, double r_series_start);
    double r_series_start() const { return r_series_start_; }

    // Evaluate anywhere: boundary series beyond r_series_start, nearest-node
    // Taylor otherwise.
    double eval(double r) const;
    double eval_deriv(double r, int k) const;

    RadialProfile differentiate() const;

    RadialProfile& operator+=(const RadialProfile& o);
    RadialProfile& operator-=(const RadialProfile& o);
    friend RadialProfile operator+(RadialProfile a, const RadialProfile& b) { return a += b; }
    friend RadialProfile operator-(RadialProfile a, const RadialProfile& b) { return a -= b; }
    friend RadialProfile operator*(const RadialProfile& a, const RadialProfile& b);
    friend RadialProfile operator/(const RadialProfile& a, const RadialProfile& b);
    friend RadialProfile operator*(RadialProfile a, double s);

    RadialProfile map(const std::function<Series(const Series&)>& f) const;

    double max_abs() const;
    double min_value() const;
    // Sup of |values| restricted to nodes with pred(r) true.
    double max_abs_where(const std::function<bool(double)>& pred) const;

    bool all_finite() const;
    // Max |grid value - series value| over nodes past r_series_start.
    double series_consistency() const;

private:
    std::shared_ptr<const RadialGrid> grid_;
    std::vector<Series> jets_;
    int derivative_order_ = 0;
    std::optional<BoundarySeries> series_;
    double r_series_start_ = 1e300;
};

} // namespace pelab
