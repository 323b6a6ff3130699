/**
 * @file ode.hpp
 * @brief Numerical integration of the time-independent spatial equation
 *
 *   -1/2 sigma^2 S^2 phi'' - r S phi' + r phi = lambda phi
 *
 * solved as a first-order system with an adaptive Dormand-Prince 5(4)
 * stepper that lands exactly on every requested grid price.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "tunnelgate/error.hpp"
#include "tunnelgate/model.hpp"

namespace tunnelgate::verify {

struct OdeOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_steps = 100000; ///< between consecutive grid points
};

struct SpatialSolution {
    std::vector<double> grid;
    std::vector<double> phi;
    std::vector<double> dphi;
};

inline SpatialSolution solve_spatial_ode(const MarketParams& params, Lambda lambda, double s0,
                                         double phi0, double dphi0, std::span<const double> grid,
                                         const OdeOptions& opts = {}) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 2>;

    if (!(s0 > 0.0)) throw DomainError("initial price S0 must be > 0");
    if (grid.empty()) throw InvalidParameter("solve_spatial_ode needs a non-empty grid");
    if (!(grid.front() >= s0)) throw DomainError("grid must start at or after S0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("grid must be strictly increasing");

    const double half_var = 0.5 * params.sigma() * params.sigma();
    const double r = params.r();
    const double shift = r - lambda.value;
    auto rhs = [=](const State& x, State& dxds, double s) {
        dxds[0] = x[1];
        dxds[1] = (shift * x[0] - r * s * x[1]) / (half_var * s * s);
    };

    std::vector<double> times;
    times.reserve(grid.size() + 1);
    const bool prepend = grid.front() > s0;
    if (prepend) times.push_back(s0);
    times.insert(times.end(), grid.begin(), grid.end());

    SpatialSolution out;
    out.grid.assign(grid.begin(), grid.end());
    out.phi.reserve(grid.size());
    out.dphi.reserve(grid.size());
    bool skip_first = prepend;
    auto observer = [&](const State& x, double) {
        if (skip_first) {
            skip_first = false;
            return;
        }
        out.phi.push_back(x[0]);
        out.dphi.push_back(x[1]);
    };

    State x{phi0, dphi0};
    const double dt0 = (times.size() > 1 ? times[1] - times[0] : 1.0) * 1e-3;
    try {
        odeint::integrate_times(
            odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State>()),
            rhs, x, times.begin(), times.end(), dt0, observer,
            odeint::max_step_checker(opts.max_steps));
    } catch (const odeint::odeint_error& e) {
        throw StepFailure(std::string("spatial ODE integration failed: ") + e.what());
    }
    for (double v : out.phi)
        if (!std::isfinite(v)) throw StepFailure("spatial ODE solution became non-finite");
    return out;
}

} // namespace tunnelgate::verify
