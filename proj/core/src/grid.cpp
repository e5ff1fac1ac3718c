#include "pelab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pelab {

namespace {

// Clenshaw-Curtis weights on [-1,1] for Lobatto nodes x_j = -cos(j pi / N).
std::vector<double> cc_weights(std::size_t n_nodes) {
    std::size_t N = n_nodes - 1;
    std::vector<double> w(n_nodes, 0.0);
    for (std::size_t j = 0; j <= N; ++j) {
        double acc = 1.0;
        for (std::size_t k = 1; k <= N / 2; ++k) {
            double b = (2 * k == N) ? 1.0 : 2.0;
            acc -= b * std::cos(2.0 * k * j * std::numbers::pi / N) / (4.0 * k * k - 1.0);
        }
        double cj = (j == 0 || j == N) ? 1.0 : 2.0;
        w[j] = cj * acc / double(N);
    }
    return w;
}

} // namespace

RadialGrid::RadialGrid(double r_min, double r_max, std::size_t panels, std::size_t nodes_per_panel)
    : RadialGrid([&] {
          if (!(r_max > r_min) || panels == 0)
              throw std::invalid_argument("RadialGrid: bad construction parameters");
          std::vector<double> edges(panels + 1);
          for (std::size_t p = 0; p <= panels; ++p)
              edges[p] = r_min + (r_max - r_min) * double(p) / double(panels);
          return edges;
      }(),
      nodes_per_panel) {}

RadialGrid::RadialGrid(std::vector<double> edges, std::size_t nodes_per_panel)
    : per_panel_(nodes_per_panel), panel_edges_(std::move(edges)) {
    if (panel_edges_.size() < 2 || nodes_per_panel < 4)
        throw std::invalid_argument("RadialGrid: bad construction parameters");
    r_min_ = panel_edges_.front();
    r_max_ = panel_edges_.back();
    std::size_t panels = panel_edges_.size() - 1;

    std::size_t N = nodes_per_panel - 1;
    ref_nodes_.resize(nodes_per_panel);
    for (std::size_t j = 0; j <= N; ++j)
        ref_nodes_[j] = -std::cos(double(j) * std::numbers::pi / double(N));

    nodes_.reserve(panels * N + 1);
    std::vector<double> ccw = cc_weights(nodes_per_panel);
    quad_weights_.assign(panels * N + 1, 0.0);
    for (std::size_t p = 0; p < panels; ++p) {
        double a = panel_edges_[p], b = panel_edges_[p + 1];
        double half = 0.5 * (b - a);
        for (std::size_t j = 0; j <= N; ++j) {
            double r = a + half * (ref_nodes_[j] + 1.0);
            std::size_t gi = p * N + j;
            if (j == 0 && p > 0) {
                quad_weights_[gi] += half * ccw[j];
                continue;
            }
            nodes_.push_back(r);
            quad_weights_[gi] += half * ccw[j];
        }
    }

    // Lobatto differentiation matrix on the reference panel.
    std::vector<double> c(nodes_per_panel, 1.0);
    c[0] = 2.0;
    c[N] = 2.0;
    ref_diff_.assign(nodes_per_panel * nodes_per_panel, 0.0);
    for (std::size_t i = 0; i <= N; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j <= N; ++j) {
            if (i == j) continue;
            double sij = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            double v = (c[i] / c[j]) * sij / (ref_nodes_[i] - ref_nodes_[j]);
            ref_diff_[i * nodes_per_panel + j] = v;
            row_sum += v;
        }
        // Negative-sum trick for the diagonal.
        ref_diff_[i * nodes_per_panel + i] = -row_sum;
    }
}

std::shared_ptr<const RadialGrid> RadialGrid::make_default(double r_min, double r_max,
                                                            std::size_t nodes_per_panel) {
    // The Lobatto endpoint clustering already grades node spacing toward the
    // center; panels narrower than ~0.5 would only inflate the
    // differentiation-matrix norm and with it the rounding floor.
    std::vector<double> edges{r_min, 0.5, 1.0};
    for (double v = 2.0; v < r_max - 0.5; v += 1.0) edges.push_back(v);
    edges.push_back(r_max);
    return std::make_shared<RadialGrid>(std::move(edges), nodes_per_panel);
}

std::size_t RadialGrid::panel_node_index(std::size_t p, std::size_t j) const {
    return p * (per_panel_ - 1) + j;
}

std::size_t RadialGrid::panel_of(double r) const {
    if (r <= panel_edges_.front()) return 0;
    if (r >= panel_edges_.back()) return panels() - 1;
    auto it = std::upper_bound(panel_edges_.begin(), panel_edges_.end(), r);
    return std::size_t(it - panel_edges_.begin()) - 1;
}

std::size_t RadialGrid::nearest_node(double r) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), r);
    if (it == nodes_.end()) return nodes_.size() - 1;
    if (it == nodes_.begin()) return 0;
    std::size_t hi = std::size_t(it - nodes_.begin());
    return (nodes_[hi] - r < r - nodes_[hi - 1]) ? hi : hi - 1;
}

double RadialGrid::integrate(const std::vector<double>& values) const {
    if (values.size() != nodes_.size())
        throw std::invalid_argument("RadialGrid::integrate: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += quad_weights_[i] * values[i];
    return acc;
}

std::vector<double> RadialGrid::differentiate(const std::vector<double>& values) const {
    if (values.size() != nodes_.size())
        throw std::invalid_argument("RadialGrid::differentiate: size mismatch");
    std::size_t N = per_panel_ - 1;
    std::vector<double> out(values.size(), 0.0);
    std::vector<std::size_t> hits(values.size(), 0);
    for (std::size_t p = 0; p < panels(); ++p) {
        double half = 0.5 * (panel_edges_[p + 1] - panel_edges_[p]);
        for (std::size_t i = 0; i <= N; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j <= N; ++j)
                acc += ref_diff_[i * per_panel_ + j] * values[panel_node_index(p, j)];
            std::size_t gi = panel_node_index(p, i);
            out[gi] += acc / half;
            hits[gi] += 1;
        }
    }
    // Shared panel endpoints get the average of the two one-sided derivatives.
    for (std::size_t i = 0; i < out.size(); ++i)
        if (hits[i] > 1) out[i] /= double(hits[i]);
    return out;
}

} // namespace pelab
