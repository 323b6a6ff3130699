/**
 * @file residual.hpp
 * @brief Finite-difference residual of separated products in the Black-Scholes PDE
 *
 * A product w(S,t) = phi(S) e^(mu t) is plugged into
 *
 *   dw/dt + 1/2 sigma^2 S^2 d2w/dS2 + r S dw/dS - r w = 0
 *
 * using centered differences in S and a second-order one-sided difference
 * in t. When phi solves the spatial equation with the same constant mu the
 * residual is pure truncation error and shrinks as h^2.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tunnelgate/error.hpp"
#include "tunnelgate/model.hpp"
#include "tunnelgate/verify/ode.hpp"

namespace tunnelgate::verify {

/// One entry per grid level. convergence_order is set only for >= 3 levels.
struct ResidualReport {
    std::vector<double> spacings;
    std::vector<double> max_abs_residual;
    std::vector<double> l2_residual; ///< root mean square over the interior nodes
    std::optional<double> convergence_order;
};

namespace detail {

inline bool uniformly_spaced(std::span<const double> x, double step) {
    for (std::size_t i = 1; i < x.size(); ++i)
        if (std::abs((x[i] - x[i - 1]) - step) > 1e-9 * std::abs(step)) return false;
    return true;
}

} // namespace detail

/// Residual of phi(S) e^(time_rate t) on the solution grid (spacing h) and t_grid.
inline ResidualReport pde_residual(const MarketParams& params, Lambda time_rate,
                                   const SpatialSolution& phi, std::span<const double> t_grid,
                                   double h) {
    const std::size_t ns = phi.grid.size();
    const std::size_t nt = t_grid.size();
    if (phi.phi.size() != ns) throw GridMismatch("phi values do not match the price grid");
    if (ns < 3) throw GridMismatch("need at least 3 price nodes");
    if (nt < 3) throw GridMismatch("need at least 3 time nodes");
    if (!(h > 0.0) || !detail::uniformly_spaced(phi.grid, h))
        throw GridMismatch("price grid is not uniformly spaced with step h");
    const double dt = t_grid[1] - t_grid[0];
    if (!(dt > 0.0) || !detail::uniformly_spaced(t_grid, dt))
        throw GridMismatch("time grid is not uniformly increasing");

    const double half_var = 0.5 * params.sigma() * params.sigma();
    const double r = params.r();
    std::vector<double> growth(nt);
    for (std::size_t j = 0; j < nt; ++j) growth[j] = std::exp(time_rate.value * t_grid[j]);

    double max_abs = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < nt; ++j) {
        double dgrowth;
        if (j + 2 < nt)
            dgrowth = (-3.0 * growth[j] + 4.0 * growth[j + 1] - growth[j + 2]) / (2.0 * dt);
        else if (j >= 2)
            dgrowth = (3.0 * growth[j] - 4.0 * growth[j - 1] + growth[j - 2]) / (2.0 * dt);
        else
            dgrowth = (growth[j + 1] - growth[j - 1]) / (2.0 * dt);
        for (std::size_t i = 1; i + 1 < ns; ++i) {
            const double s = phi.grid[i];
            const double w = phi.phi[i] * growth[j];
            const double w_t = phi.phi[i] * dgrowth;
            const double w_s = (phi.phi[i + 1] - phi.phi[i - 1]) / (2.0 * h) * growth[j];
            const double w_ss =
                (phi.phi[i + 1] - 2.0 * phi.phi[i] + phi.phi[i - 1]) / (h * h) * growth[j];
            const double res = w_t + half_var * s * s * w_ss + r * s * w_s - r * w;
            max_abs = std::max(max_abs, std::abs(res));
            sum_sq += res * res;
            ++count;
        }
    }
    return {{h}, {max_abs}, {std::sqrt(sum_sq / static_cast<double>(count))}, std::nullopt};
}

struct ConvergenceStudy {
    double s0 = 1.0;
    double width = 2.4;            ///< price interval [s0, s0 + width]
    std::vector<int> divisions{64, 128, 256};
    double phi0 = 1.0;
    double dphi0 = 0.0;
    OdeOptions ode{1e-12, 1e-14, 1000000};
};

/// Least-squares slope of log(error) against log(h).
inline double observed_order(std::span<const double> spacings, std::span<const double> errors) {
    const std::size_t n = spacings.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(spacings[i]);
        my += std::log(errors[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(spacings[i]) - mx;
        sxy += dx * (std::log(errors[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

/// Solves the spatial equation with `space_rate`, multiplies by e^(time_rate t)
/// and measures the PDE residual on successively halved grids. The time step
/// equals h so both discretizations refine together.
inline ResidualReport residual_convergence_study(const MarketParams& params, Lambda space_rate,
                                                 Lambda time_rate,
                                                 const ConvergenceStudy& study = {}) {
    ResidualReport report;
    for (int n : study.divisions) {
        const double h = study.width / n;
        std::vector<double> grid(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) grid[static_cast<std::size_t>(i)] = study.s0 + i * h;
        const SpatialSolution phi = solve_spatial_ode(params, space_rate, study.s0, study.phi0,
                                                      study.dphi0, grid, study.ode);
        const std::vector<double> t_grid{0.0, h, 2.0 * h};
        const ResidualReport level = pde_residual(params, time_rate, phi, t_grid, h);
        report.spacings.push_back(h);
        report.max_abs_residual.push_back(level.max_abs_residual.front());
        report.l2_residual.push_back(level.l2_residual.front());
    }
    if (report.spacings.size() >= 3)
        report.convergence_order = observed_order(report.spacings, report.max_abs_residual);
    return report;
}

} // namespace tunnelgate::verify
