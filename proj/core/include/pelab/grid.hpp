#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace pelab {

// Radial grid on [r_min, r_max]: Chebyshev-Lobatto nodes on contiguous
// panels, shared panel endpoints.  Node spacing stays small enough that a
// degree-8 Taylor jet at the nearest node evaluates anywhere to near machine
// precision for the exponential-type profiles this project works with.
class RadialGrid {
public:
    RadialGrid(double r_min, double r_max, std::size_t panels, std::size_t nodes_per_panel);
    RadialGrid(std::vector<double> panel_edges, std::size_t nodes_per_panel);

    static std::shared_ptr<const RadialGrid> make_default(double r_min = 0.01, double r_max = 20.0,
                                                          std::size_t nodes_per_panel = 21);

    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }
    std::size_t size() const { return nodes_.size(); }
    double node(std::size_t i) const { return nodes_[i]; }
    const std::vector<double>& nodes() const { return nodes_; }

    std::size_t panels() const { return panel_edges_.size() - 1; }
    std::size_t nodes_per_panel() const { return per_panel_; }
    // Global index of the j-th node of panel p (endpoints shared).
    std::size_t panel_node_index(std::size_t p, std::size_t j) const;
    std::size_t panel_of(double r) const;

    std::size_t nearest_node(double r) const;

    // Clenshaw-Curtis weights; integrates grid data over [r_min, r_max].
    double integrate(const std::vector<double>& values) const;

    // Spectral differentiation of nodal values, panel by panel.
    std::vector<double> differentiate(const std::vector<double>& values) const;

private:
    double r_min_, r_max_;
    std::size_t per_panel_;
    std::vector<double> panel_edges_;
    std::vector<double> nodes_;
    std::vector<double> quad_weights_;
    // Lobatto differentiation matrix for the reference panel [-1, 1].
    std::vector<double> ref_diff_;
    std::vector<double> ref_nodes_;
};

} // namespace pelab
