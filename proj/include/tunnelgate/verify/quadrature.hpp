/**
 * @file quadrature.hpp
 * @brief Globally adaptive Gauss-Kronrod (7/15) quadrature
 *
 * Only interior nodes are evaluated, so integrands with an integrable
 * endpoint singularity in a derivative (sqrt(b - x) behaviour) are handled
 * by subdivision alone. The interval with the largest error estimate is
 * bisected until the summed estimate meets the tolerance.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "tunnelgate/error.hpp"

namespace tunnelgate::verify {

struct QuadratureResult {
    double value;
    double abs_error_estimate;
    std::size_t evaluations;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 0.0; ///< accept when error <= max(abs_tol, rel_tol * |value|)
    std::size_t max_intervals = 4000;
};

namespace detail {

// Kronrod abscissae (positive half, descending) and weights; Gauss weights on
// the odd-indexed Kronrod nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename F>
Panel gauss_kronrod_15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    double abs_sum = std::abs(fc) * kWgk[7];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += kWgk[j] * (f1 + f2);
        abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    kronrod *= half;
    gauss *= half;
    abs_sum *= std::abs(half);
    // Round-off floor keeps unattainable tolerances from being reported as met.
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
    return {a, b, kronrod, std::max(std::abs(kronrod - gauss), roundoff)};
}

} // namespace detail

/// Integrates f over [a, b]. Throws ToleranceNotMet when the interval budget
/// runs out before the error estimate falls below the tolerance.
template <typename F>
    requires std::regular_invocable<F&, double>
QuadratureResult integrate_adaptive(F f, double a, double b, const QuadratureOptions& opts = {}) {
    if (!(opts.abs_tol > 0.0) && !(opts.rel_tol > 0.0))
        throw InvalidParameter("quadrature tolerance must be > 0");
    if (a == b) return {0.0, 0.0, 0};

    std::priority_queue<detail::Panel> panels;
    panels.push(detail::gauss_kronrod_15(f, a, b));
    std::size_t evaluations = 15;
    double value = panels.top().value;
    double error = panels.top().error;

    auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(value)); };

    while (error > tolerance()) {
        if (panels.size() >= opts.max_intervals) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "quadrature error estimate %.3g above tolerance %.3g after %zu subintervals",
                          error, tolerance(), panels.size());
            throw ToleranceNotMet(msg);
        }
        const detail::Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const detail::Panel left = detail::gauss_kronrod_15(f, worst.a, mid);
        const detail::Panel right = detail::gauss_kronrod_15(f, mid, worst.b);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    // Re-sum to shed the drift from incremental updates.
    value = 0.0;
    error = 0.0;
    while (!panels.empty()) {
        value += panels.top().value;
        error += panels.top().error;
        panels.pop();
    }
    return {value, error, evaluations};
}

} // namespace tunnelgate::verify
