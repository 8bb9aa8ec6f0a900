#pragma once

#include <cmath>
#include <stdexcept>

namespace acfront {

/// Trajectory of u' = u - u^3 pinned at -infinity: lim_{t->-inf} e^{-t} phi = u.
/// For t beyond ~354 the e^{-2t} term underflows to 0 and phi saturates to
/// sign(u), which is the correct limit.
inline double phi(double t, double u) {
    return u / std::sqrt(std::exp(-2.0 * t) + u * u);
}

/// Flow of u' = u - u^3 with phi_bar(0, u) = u. Defined for t >= 0 and any u;
/// for t < 0 requires 1 + (e^{2t}-1) u^2 > 0.
inline double phi_bar(double t, double u) {
    const double em1 = std::expm1(2.0 * t);
    const double denom = 1.0 + em1 * u * u;
    if (!(denom > 0.0))
        throw std::domain_error("phi_bar: outside the backward-flow domain");
    return std::exp(t) * u / std::sqrt(denom);
}

struct PhiBarDerivs {
    double d1;  // d/du phi_bar
    double d2;  // d^2/du^2 phi_bar
};

/// First and second u-derivatives of phi_bar, closed form.
inline PhiBarDerivs phi_bar_derivs(double t, double u) {
    if (t < 0.0) throw std::invalid_argument("phi_bar_derivs: t must be >= 0");
    const double em1 = std::expm1(2.0 * t);
    const double denom = 1.0 + em1 * u * u;
    const double d1 = std::exp(t) * std::pow(denom, -1.5);
    const double d2 = d1 * 3.0 * u * em1 / denom;
    return {d1, -d2};
}

/// Universal envelope e^t / sqrt(e^{2t} - 1), valid for any initial datum.
/// Decreasing in t, diverges at 0+, tends to 1.
inline double apriori_bound(double t) {
    if (!(t > 0.0)) throw std::invalid_argument("apriori_bound: t must be > 0");
    return std::exp(t) / std::sqrt(std::expm1(2.0 * t));
}

}  // namespace acfront
