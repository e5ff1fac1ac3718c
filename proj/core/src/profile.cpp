#include "pelab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pelab {

RadialProfile::RadialProfile(std::shared_ptr<const RadialGrid> grid, std::vector<Series> jets)
    : grid_(std::move(grid)), jets_(std::move(jets)) {
    if (!grid_ || jets_.size() != grid_->size())
        throw std::invalid_argument("RadialProfile: jets/grid size mismatch");
    std::size_t o = jets_.empty() ? 0 : jets_.front().order();
    for (const auto& j : jets_) o = std::min(o, j.order());
    derivative_order_ = int(o);
}

RadialProfile RadialProfile::from_function(std::shared_ptr<const RadialGrid> grid,
                                           const std::function<Series(double, std::size_t)>& f,
                                           std::size_t order) {
    std::vector<Series> jets;
    jets.reserve(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) jets.push_back(f(grid->node(i), order));
    return RadialProfile(std::move(grid), std::move(jets));
}

RadialProfile RadialProfile::from_values(std::shared_ptr<const RadialGrid> grid,
                                         std::vector<double> values) {
    if (values.size() != grid->size())
        throw std::invalid_argument("RadialProfile::from_values: size mismatch");
    std::vector<Series> jets;
    jets.reserve(values.size());
    for (double v : values) jets.push_back(Series::constant(v, 0));
    return RadialProfile(std::move(grid), std::move(jets));
}

std::vector<double> RadialProfile::values() const {
    std::vector<double> v(jets_.size());
    for (std::size_t i = 0; i < jets_.size(); ++i) v[i] = jets_[i].value();
    return v;
}

void RadialProfile::set_boundary_series(BoundarySeries s, double r_series_start) {
    series_ = std::move(s);
    r_series_start_ = r_series_start;
}

double RadialProfile::eval(double r) const {
    if (series_ && r >= r_series_start_) return series_->eval_at_r(r);
    std::size_t i = grid_->nearest_node(r);
    return jets_[i].eval(r - grid_->node(i));
}

double RadialProfile::eval_deriv(double r, int k) const {
    if (series_ && r >= r_series_start_) return series_->eval_deriv_at_r(r, k);
    std::size_t i = grid_->nearest_node(r);
    return jets_[i].eval_deriv(r - grid_->node(i), k);
}

RadialProfile RadialProfile::differentiate() const {
    if (derivative_order_ < 1)
        throw std::invalid_argument("RadialProfile::differentiate: derivative_order exhausted");
    std::vector<Series> jets;
    jets.reserve(jets_.size());
    for (const auto& j : jets_) jets.push_back(j.derivative());
    RadialProfile out(grid_, std::move(jets));
    return out;
}

RadialProfile& RadialProfile::operator+=(const RadialProfile& o) {
    for (std::size_t i = 0; i < jets_.size(); ++i) jets_[i] += o.jets_[i];
    derivative_order_ = std::min(derivative_order_, o.derivative_order_);
    series_.reset();
    return *this;
}

RadialProfile& RadialProfile::operator-=(const RadialProfile& o) {
    for (std::size_t i = 0; i < jets_.size(); ++i) jets_[i] -= o.jets_[i];
    derivative_order_ = std::min(derivative_order_, o.derivative_order_);
    series_.reset();
    return *this;
}

RadialProfile operator*(const RadialProfile& a, const RadialProfile& b) {
    std::vector<Series> jets;
    jets.reserve(a.jets_.size());
    for (std::size_t i = 0; i < a.jets_.size(); ++i) jets.push_back(a.jets_[i] * b.jets_[i]);
    return RadialProfile(a.grid_, std::move(jets));
}

RadialProfile operator/(const RadialProfile& a, const RadialProfile& b) {
    std::vector<Series> jets;
    jets.reserve(a.jets_.size());
    for (std::size_t i = 0; i < a.jets_.size(); ++i) jets.push_back(a.jets_[i] / b.jets_[i]);
    return RadialProfile(a.grid_, std::move(jets));
}

RadialProfile operator*(RadialProfile a, double s) {
    for (auto& j : a.jets_) j *= s;
    return a;
}

RadialProfile RadialProfile::map(const std::function<Series(const Series&)>& f) const {
    std::vector<Series> jets;
    jets.reserve(jets_.size());
    for (const auto& j : jets_) jets.push_back(f(j));
    return RadialProfile(grid_, std::move(jets));
}

double RadialProfile::max_abs() const {
    double m = 0.0;
    for (const auto& j : jets_) m = std::max(m, std::abs(j.value()));
    return m;
}

double RadialProfile::min_value() const {
    double m = jets_.empty() ? 0.0 : jets_.front().value();
    for (const auto& j : jets_) m = std::min(m, j.value());
    return m;
}

double RadialProfile::max_abs_where(const std::function<bool(double)>& pred) const {
    double m = 0.0;
    for (std::size_t i = 0; i < jets_.size(); ++i)
        if (pred(grid_->node(i))) m = std::max(m, std::abs(jets_[i].value()));
    return m;
}

bool RadialProfile::all_finite() const {
    for (const auto& j : jets_)
        for (std::size_t k = 0; k <= j.order(); ++k)
            if (!std::isfinite(j[k])) return false;
    return true;
}

double RadialProfile::series_consistency() const {
    if (!series_) return 0.0;
    double m = 0.0;
    for (std::size_t i = 0; i < jets_.size(); ++i) {
        double r = grid_->node(i);
        if (r < r_series_start_) continue;
        m = std::max(m, std::abs(jets_[i].value() - series_->eval_at_r(r)));
    }
    return m;
}

} // namespace pelab
