/**
 * @file spectral.hpp
 * @brief phi <-> psi change of variables and the stationary box modes
 *
 * The homogeneous spatial equation is brought to standard (no first
 * derivative) form by phi(S) = psi(S) * S^(-r/sigma^2). Inside the box the
 * stationary solutions are the zero-potential modes
 *
 *   psi_n(S) = sqrt(2/K) * sin(n pi S / K),   0 <= S <= K,
 *
 * which vanish on support (S = 0) and resistance (S = K).
 */

#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "tunnelgate/error.hpp"
#include "tunnelgate/model.hpp"

namespace tunnelgate {

struct TransformExponent {
    double exponent; ///< r / sigma^2, applied as S^(-exponent)
};

inline TransformExponent transform_exponent(const MarketParams& params) {
    return {params.r() / (params.sigma() * params.sigma())};
}

inline double phi_from_psi(const MarketParams& params, double psi_value, double s) {
    if (!(s > 0.0)) throw DomainError("phi_from_psi requires S > 0");
    return psi_value * std::pow(s, -transform_exponent(params).exponent);
}

inline double psi_from_phi(const MarketParams& params, double phi_value, double s) {
    if (!(s > 0.0)) throw DomainError("psi_from_phi requires S > 0");
    return phi_value * std::pow(s, transform_exponent(params).exponent);
}

/// n-th stationary mode of a box of width K.
class StationaryMode {
public:
    StationaryMode(int n, double width) : n_(n), width_(width) {
        if (n < 1) throw InvalidParameter("mode index must be >= 1, got " + std::to_string(n));
        if (!std::isfinite(width) || width <= 0.0)
            throw InvalidParameter("box width must be finite and > 0");
    }

    int n() const noexcept { return n_; }
    double width() const noexcept { return width_; }
    double amplitude() const { return std::sqrt(2.0 / width_); }
    /// n pi / K
    double wavenumber() const { return n_ * std::numbers::pi / width_; }

private:
    int n_;
    double width_;
};

inline double mode_value(const StationaryMode& mode, double s) {
    if (!(s >= 0.0 && s <= mode.width()))
        throw DomainError("mode_value requires 0 <= S <= K");
    return mode.amplitude() * std::sin(mode.wavenumber() * s);
}

/// Kinetic coefficient sigma^4 / (r (sigma^2 + r)) multiplying -psi''.
inline double kinetic_coefficient(const MarketParams& params) {
    const double s2 = params.sigma() * params.sigma();
    return s2 * s2 / (params.r() * (s2 + params.r()));
}

/// Eigenvalue of -kinetic * d^2/dS^2 on [0, K] with Dirichlet walls for mode n.
/// The 1/S^2 potential is not included: the printed modes solve the empty box.
inline double mode_eigenvalue(const MarketParams& params, const StationaryMode& mode) {
    const double kn = mode.wavenumber();
    return kinetic_coefficient(params) * kn * kn;
}

} // namespace tunnelgate
