/**
 * @file model.hpp
 * @brief Market parameters and the closed-form scalars of the range-bound model
 *
 * Separating w(S,t) = phi(S) * g(t) in the Black-Scholes equation leaves one
 * separation constant, modelled as lambda = r / sigma. Everything here is a
 * direct function of (r, sigma) and the width K of the support/resistance box:
 *
 *   time decay     e^(-lambda t)
 *   potential      V(S) = 1 / S^2,  V0 = 1 / K^2
 *   exit price     S_r = sqrt(1 / lambda)
 *   penetration    d = S_r - K
 *
 * Prices are in the shifted frame where support sits at zero, so the strike
 * placed on resistance equals the box width K.
 */

#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "tunnelgate/error.hpp"

namespace tunnelgate {

/// Annualized risk-free rate and volatility, both decimal fractions.
class MarketParams {
public:
    MarketParams(double r, double sigma) : r_(r), sigma_(sigma) {
        if (!std::isfinite(r) || r <= 0.0)
            throw InvalidParameter("rate r must be finite and > 0, got " + std::to_string(r));
        if (!std::isfinite(sigma) || sigma <= 0.0)
            throw InvalidParameter("volatility sigma must be finite and > 0, got " +
                                   std::to_string(sigma));
    }

    double r() const noexcept { return r_; }
    double sigma() const noexcept { return sigma_; }

private:
    double r_;
    double sigma_;
};

/// Separation constant. Always positive.
struct Lambda {
    explicit Lambda(double v) : value(v) {
        if (!std::isfinite(v) || v <= 0.0)
            throw InvalidParameter("lambda must be finite and > 0, got " + std::to_string(v));
    }
    double value;
};

/// Support/resistance pair. The width is the strike K in the shifted frame.
class RangeBound {
public:
    RangeBound(double support, double resistance) : support_(support), resistance_(resistance) {
        if (!std::isfinite(support) || !std::isfinite(resistance))
            throw InvalidParameter("support and resistance must be finite");
        if (!(resistance > support))
            throw InvalidParameter("resistance must exceed support");
    }

    /// Box of width K with support at the origin.
    static RangeBound from_width(double width) { return RangeBound(0.0, width); }

    double support() const noexcept { return support_; }
    double resistance() const noexcept { return resistance_; }
    double width() const noexcept { return resistance_ - support_; }

private:
    double support_;
    double resistance_;
};

struct BarrierGeometry {
    double v0;  ///< potential at the strike, 1/K^2
    double s_r; ///< exit price where V(S) = lambda
    double d;   ///< penetration distance s_r - K; non-positive outside the range-bound regime
};

enum class Regime { RangeBound, Critical, Trending };

inline std::string_view to_string(Regime regime) {
    switch (regime) {
    case Regime::RangeBound: return "range_bound";
    case Regime::Critical: return "critical";
    case Regime::Trending: return "trending";
    }
    return "unknown";
}

inline constexpr double kDefaultCriticalTolerance = 1e-9;

inline Lambda compute_lambda(const MarketParams& params) {
    return Lambda(params.r() / params.sigma());
}

/// Option value decay factor e^(-(r/sigma) t) for t in years.
inline double time_decay(const MarketParams& params, double t) {
    if (!std::isfinite(t) || t < 0.0)
        throw InvalidParameter("time t must be finite and >= 0, got " + std::to_string(t));
    return std::exp(-compute_lambda(params).value * t);
}

/// V(S) = 1/S^2.
inline double potential(double s) {
    if (!(s > 0.0)) throw DomainError("potential is defined for S > 0 only");
    return 1.0 / (s * s);
}

inline BarrierGeometry barrier_geometry(const MarketParams& params, const RangeBound& range) {
    const double k = range.width();
    const double s_r = std::sqrt(params.sigma() / params.r());
    return {1.0 / (k * k), s_r, s_r - k};
}

inline Regime classify_regime(Lambda lambda, const BarrierGeometry& geometry,
                              double tolerance = kDefaultCriticalTolerance) {
    if (!(tolerance >= 0.0)) throw InvalidParameter("regime tolerance must be >= 0");
    if (lambda.value > geometry.v0 * (1.0 + tolerance)) return Regime::Trending;
    if (lambda.value < geometry.v0 * (1.0 - tolerance)) return Regime::RangeBound;
    return Regime::Critical;
}

/// Largest strike (box width) that keeps lambda below V0.
inline double strike_bound(Lambda lambda) { return std::sqrt(1.0 / lambda.value); }

} // namespace tunnelgate
