#pragma once

// Per-step latent scales of the Gaussian-Chain filters. Both are profiled out of
// the likelihood by maximization, which leaves a polynomial equation in the
// squared scale. Writing the unknown as a multiple of sigma2_hat reduces each
// equation to one in the dimensionless ratio k = residual^2 / sigma2_hat.

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gchain {

struct LatentScales {
    double u2 = 0.0;
    double v2 = 0.0;
};

// Nonnegative root w of w^2 + w = k, written to avoid cancellation for small k.
inline double unit_quadratic_root(double k) {
    return 2.0 * k / (1.0 + std::sqrt(1.0 + 4.0 * k));
}

// Nonnegative root y of y (y + 1) (y + 2) = k, k >= 0.
//
// g(y) = y^3 + 3y^2 + 2y is increasing and convex on y >= 0 with g(0) = 0, so
// the root is unique. Newton started from any point with g >= k decreases
// monotonically onto the root without overshoot; min(k/2, cbrt(k)) is such a
// point since g(y) >= 2y and g(y) >= y^3.
inline double unit_cubic_root(double k) {
    if (!(k > 0.0)) return 0.0;
    if (std::isinf(k)) return k;
    double y = std::min(0.5 * k, std::cbrt(k));
    for (int iter = 0; iter < 200; ++iter) {
        const double g = y * (y * (y + 3.0) + 2.0) - k;
        const double dg = y * (3.0 * y + 6.0) + 2.0;
        const double next = y - g / dg;
        if (!(next < y)) break;  // converged: rounding stops the monotone descent
        y = next;
    }
    return y;
}

// v^2 solving v^4 / sigma2_hat + v^2 - residual^2 = 0, v^2 >= 0. Equivalent to
// (sqrt(s^2 + 4 s residual^2) - s) / 2 with s = sigma2_hat.
inline double gc2_latent_scale(double sigma2_hat, double residual) {
    if (!(sigma2_hat > 0.0)) throw std::domain_error("gc2_latent_scale: sigma2_hat must be positive");
    return sigma2_hat * unit_quadratic_root(residual * residual / sigma2_hat);
}

// (u^2, v^2) for the third-order chain: u^2 is the nonnegative root of
//   (u^2)^3 + 3 s (u^2)^2 + 2 s^2 u^2 - s^2 residual^2 = 0,
// and v^2 = (u^4 + s u^2) / s, with s = sigma2_hat.
//
// The closed-form Cardano radicals for this cubic hit the three-real-root case
// for small residuals, so the root is found numerically instead.
inline LatentScales gc3_latent_scales(double sigma2_hat, double residual) {
    if (!(sigma2_hat > 0.0)) throw std::domain_error("gc3_latent_scales: sigma2_hat must be positive");
    const double y = unit_cubic_root(residual * residual / sigma2_hat);
    return LatentScales{.u2 = sigma2_hat * y, .v2 = sigma2_hat * y * (y + 1.0)};
}

// Left-hand sides of the two latent-scale equations, for diagnostics and tests.
inline double gc2_equation(double sigma2_hat, double v2, double residual) {
    return v2 * v2 / sigma2_hat + v2 - residual * residual;
}

inline double gc3_cubic(double sigma2_hat, double u2, double residual) {
    const double s = sigma2_hat;
    return u2 * u2 * u2 + 3.0 * s * u2 * u2 + 2.0 * s * s * u2 - s * s * residual * residual;
}

}  // namespace gchain
