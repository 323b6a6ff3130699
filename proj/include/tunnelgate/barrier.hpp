/**
 * @file barrier.hpp
 * @brief Transmission through the resistance wall: exact rectangular barrier,
 *        thick-barrier limit and the WKB closed form
 *
 * Inside the box psi oscillates with wavenumber k, inside the wall it decays
 * with rate q:
 *
 *   k = sqrt(c * lambda),  q = sqrt(c * (V - lambda)),  c = r (sigma^2 + r) / sigma^4
 *
 * The rectangular wall has height V0 = 1/K^2 and width d = S_r - K. The WKB
 * exponent integrates the local decay rate from the strike to the exit price:
 *
 *   2 sqrt(c) * int_K^{S_r} sqrt(1/S^2 - lambda) dS = 2 sqrt(c) * (artanh(u) - u),
 *   u = sqrt(1 - lambda K^2).
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tunnelgate/error.hpp"
#include "tunnelgate/model.hpp"

namespace tunnelgate {

struct WaveNumbers {
    double k; ///< oscillatory wavenumber inside the box
    double q; ///< decay rate inside the wall
    double c; ///< shared prefactor r (sigma^2 + r) / sigma^4
};

struct TransmissionResult {
    double t_exact;      ///< rectangular barrier, amplitude matching
    double t_wkb;        ///< e^(-wkb_exponent)
    double t_thick;      ///< e^(-2 q d)
    double wkb_exponent; ///< 2 * int q dS
};

inline double barrier_prefactor(const MarketParams& params) {
    const double s2 = params.sigma() * params.sigma();
    return params.r() * (s2 + params.r()) / (s2 * s2);
}

inline WaveNumbers wave_numbers(const MarketParams& params, Lambda lambda, double v) {
    if (!(v > lambda.value))
        throw AboveBarrier("potential " + std::to_string(v) + " does not exceed lambda " +
                           std::to_string(lambda.value) + "; no forbidden region");
    const double c = barrier_prefactor(params);
    return {std::sqrt(c * lambda.value), std::sqrt(c * (v - lambda.value)), c};
}

/// |A|^2 / |F|^2 from continuity of psi and psi' at both faces of the wall.
inline double amplitude_ratio(double k, double q, double d) {
    if (!(k > 0.0) || !(q > 0.0)) throw InvalidParameter("amplitude_ratio requires k, q > 0");
    if (!(d >= 0.0)) throw InvalidParameter("amplitude_ratio requires d >= 0");
    const double sum = k * k + q * q;
    const double sh = std::sinh(q * d);
    return sum * sum / (4.0 * k * k * q * q) * sh * sh + 1.0;
}

namespace detail {

inline void require_below_barrier(Lambda lambda, double width) {
    if (!(lambda.value * width * width < 1.0))
        throw AboveBarrier("lambda*K^2 = " + std::to_string(lambda.value * width * width) +
                           " >= 1: price is above the barrier (trending regime)");
}

/// artanh(u) - u without cancellation for small u.
inline double artanh_minus_identity(double u) {
    if (u >= 0.1) return std::atanh(u) - u;
    const double u2 = u * u;
    double term = u * u2;
    double sum = 0.0;
    for (int odd = 3; odd < 200; odd += 2) {
        const double add = term / odd;
        sum += add;
        if (add <= std::numeric_limits<double>::epsilon() * sum) break;
        term *= u2;
    }
    return sum;
}

} // namespace detail

/// T = (V0^2 / (4 lambda (V0 - lambda)) * sinh^2(q d) + 1)^-1.
inline double transmission_exact(const MarketParams& params, const RangeBound& range) {
    const Lambda lambda = compute_lambda(params);
    detail::require_below_barrier(lambda, range.width());
    const BarrierGeometry geo = barrier_geometry(params, range);
    const WaveNumbers wn = wave_numbers(params, lambda, geo.v0);
    const double sh = std::sinh(wn.q * std::max(geo.d, 0.0));
    const double gap = geo.v0 - lambda.value;
    return 1.0 / (geo.v0 * geo.v0 / (4.0 * lambda.value * gap) * sh * sh + 1.0);
}

inline double transmission_thick(double q, double d) {
    if (!(q >= 0.0) || !(d >= 0.0)) throw InvalidParameter("transmission_thick requires q, d >= 0");
    return std::exp(-2.0 * q * d);
}

/// Closed-form WKB exponent 2 sqrt(c) (artanh(u) - u).
inline double wkb_exponent(const MarketParams& params, const RangeBound& range) {
    const Lambda lambda = compute_lambda(params);
    const double width = range.width();
    detail::require_below_barrier(lambda, width);
    const double u = std::sqrt(1.0 - lambda.value * width * width);
    return 2.0 * std::sqrt(barrier_prefactor(params)) * detail::artanh_minus_identity(u);
}

inline TransmissionResult transmission_wkb(const MarketParams& params, const RangeBound& range) {
    const double exponent = wkb_exponent(params, range);
    const Lambda lambda = compute_lambda(params);
    const BarrierGeometry geo = barrier_geometry(params, range);
    const WaveNumbers wn = wave_numbers(params, lambda, geo.v0);
    return {transmission_exact(params, range), std::exp(-exponent),
            transmission_thick(wn.q, std::max(geo.d, 0.0)), exponent};
}

} // namespace tunnelgate
