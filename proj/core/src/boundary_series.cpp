#include "pelab/boundary_series.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pelab {

namespace {
bool is_integer(double v) {
    return std::abs(v - std::round(v)) < 1e-12;
}
} // namespace

double BoundarySeries::fractional_offset() const {
    for (const auto& t : terms)
        if (!is_integer(t.offset)) return t.offset;
    return std::numeric_limits<double>::quiet_NaN();
}

bool BoundarySeries::has_fractional_term() const {
    return !std::isnan(fractional_offset());
}

void BoundarySeries::add_term(SeriesTerm t) {
    if (!terms.empty() && t.offset <= terms.back().offset + 1e-15)
        throw std::invalid_argument("BoundarySeries: offsets must be strictly increasing");
    if (!is_integer(t.offset) && has_fractional_term())
        throw std::invalid_argument("BoundarySeries: at most one fractional offset");
    terms.push_back(t);
}

double BoundarySeries::eval(double t) const {
    double acc = 0.0;
    for (const auto& term : terms) acc += term.coeff * std::pow(t, mu + term.offset);
    return acc;
}

double BoundarySeries::eval_deriv(double t, int k) const {
    double acc = 0.0;
    for (const auto& term : terms) {
        double e = mu + term.offset;
        double f = term.coeff;
        for (int i = 0; i < k; ++i) f *= (e - i);
        acc += f * std::pow(t, e - k);
    }
    return acc;
}

double BoundarySeries::eval_at_r(double r) const {
    return eval(coord_scale * std::exp(-r));
}

double BoundarySeries::eval_deriv_at_r(double r, int k) const {
    // d/dr = -t d/dt with t = coord_scale e^{-r}; for a power t^e the r-jet
    // is just (-e)^k t^e, summed term by term.
    double t = coord_scale * std::exp(-r);
    double acc = 0.0;
    for (const auto& term : terms) {
        double e = mu + term.offset;
        acc += term.coeff * std::pow(-e, k) * std::pow(t, e);
    }
    return acc;
}

std::string BoundarySeries::table() const {
    std::ostringstream os;
    const char* var = (variable == SeriesVariable::Rho) ? "rho" : "x";
    for (const auto& t : terms)
        os << t.coeff << " @ " << var << "^" << (mu + t.offset) << "\n";
    return os.str();
}

} // namespace pelab
