#pragma once

#include <functional>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace pelab::detail {

using OdeState = std::vector<double>;
using OdeRhs = std::function<void(const OdeState&, OdeState&, double)>;

// Integrate dy/dt = rhs with an adaptive RKF78 controlled stepper, recording
// the state at each requested time.  `times` must be strictly monotone
// (increasing or decreasing) and start at the initial time.
inline std::vector<OdeState> integrate_at(const OdeRhs& rhs, OdeState y0,
                                          const std::vector<double>& times,
                                          double tol = 1e-13) {
    namespace odeint = boost::numeric::odeint;
    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<OdeState>>(tol, tol);
    std::vector<OdeState> out;
    out.reserve(times.size());
    odeint::integrate_times(
        stepper, [&](const OdeState& y, OdeState& dydt, double t) { rhs(y, dydt, t); },
        y0, times.begin(), times.end(),
        (times.size() > 1 && times[1] < times[0]) ? -1e-4 : 1e-4,
        [&](const OdeState& y, double) { out.push_back(y); });
    return out;
}

} // namespace pelab::detail
