/**
 * @file wkb.hpp
 * @brief Quadrature of the WKB action, independent of the closed form
 */

#pragma once

#include <cmath>

#include "tunnelgate/barrier.hpp"
#include "tunnelgate/model.hpp"
#include "tunnelgate/verify/quadrature.hpp"

namespace tunnelgate::verify {

/// 2 sqrt(c) * int_K^{S_r} sqrt(1/S^2 - lambda) dS by adaptive quadrature.
/// `tol` bounds the absolute error of the returned exponent; `rel_tol`
/// optionally relaxes it to rel_tol * |exponent|.
inline QuadratureResult wkb_exponent_quadrature(const MarketParams& params,
                                                const RangeBound& range, double tol = 1e-10,
                                                double rel_tol = 0.0,
                                                std::size_t max_intervals = 4000) {
    if (!(tol > 0.0)) throw InvalidParameter("quadrature tolerance must be > 0");
    const double lambda = compute_lambda(params).value;
    const double k = range.width();
    if (!(lambda * k * k < 1.0))
        throw AboveBarrier("lambda*K^2 >= 1: no forbidden region to integrate over");

    const double root_lambda = std::sqrt(lambda);
    const double exit_price = 1.0 / root_lambda;
    const double scale = 2.0 * std::sqrt(barrier_prefactor(params));
    // (1/S - sqrt(lambda)) (1/S + sqrt(lambda)) keeps precision near the exit price.
    auto integrand = [root_lambda](double s) {
        const double inv = 1.0 / s;
        const double gap = inv - root_lambda;
        return gap > 0.0 ? std::sqrt(gap * (inv + root_lambda)) : 0.0;
    };

    const QuadratureResult raw = integrate_adaptive(
        integrand, k, exit_price, {tol / scale, rel_tol, max_intervals});
    return {scale * raw.value, scale * raw.abs_error_estimate, raw.evaluations};
}

} // namespace tunnelgate::verify
