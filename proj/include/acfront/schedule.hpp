#pragma once

#include <cmath>
#include <stdexcept>

namespace acfront {

/// All epsilon-dependent times and lengths of the three-regime picture,
/// computed in closed form from (epsilon, alpha, alpha_bar, kappa, d).
struct Schedule {
    double epsilon = 0.0;
    double alpha = 0.0;
    double alpha_bar = 0.0;
    double kappa = 0.0;
    int d = 2;

    double T_eps = 0.0;       // (d/2 - alpha) ln(1/eps)
    double L_eps = 0.0;       // sqrt(T_eps)
    double c_const = 0.0;     // (d/4) ln(4 pi (d - 2 alpha))
    double tau_star = 0.0;    // (d/4) ln ln(1/eps) + c_const
    double t_star = 0.0;      // T_eps + tau_star
    double t1 = 0.0;          // (alpha_bar - alpha) ln(1/eps)
    double t2 = 0.0;          // (d/2 - alpha) ln(1/eps) - (1/2) ln ln(1/eps)
    double t2_kappa = 0.0;    // ... - (kappa + 1/2) ln ln(1/eps)
    double t_star_kappa = 0.0;  // t_star + kappa ln ln(1/eps)
};

inline Schedule make_schedule(double epsilon, double alpha, double alpha_bar,
                              double kappa, int d) {
    constexpr double inv_e = 0.36787944117144233;  // e^{-1}
    if (!(epsilon > 0.0 && epsilon < inv_e))
        throw std::invalid_argument("make_schedule: require 0 < epsilon < 1/e");
    if (!(alpha > 0.0 && alpha < alpha_bar && alpha_bar < 1.0))
        throw std::invalid_argument("make_schedule: require 0 < alpha < alpha_bar < 1");
    if (kappa < 0.0) throw std::invalid_argument("make_schedule: kappa must be >= 0");
    if (d < 2) throw std::invalid_argument("make_schedule: d must be >= 2");
    if (!(static_cast<double>(d) - 2.0 * alpha > 0.0))
        throw std::invalid_argument("make_schedule: require d - 2 alpha > 0");

    const double le = std::log(1.0 / epsilon);  // > 1 by the epsilon range
    const double ll = std::log(le);             // > 0
    Schedule s;
    s.epsilon = epsilon;
    s.alpha = alpha;
    s.alpha_bar = alpha_bar;
    s.kappa = kappa;
    s.d = d;
    const double dh = static_cast<double>(d);
    s.T_eps = (dh / 2.0 - alpha) * le;
    s.L_eps = std::sqrt(s.T_eps);
    s.c_const = (dh / 4.0) * std::log(4.0 * M_PI * (dh - 2.0 * alpha));
    s.tau_star = (dh / 4.0) * ll + s.c_const;
    s.t_star = s.T_eps + s.tau_star;
    s.t1 = (alpha_bar - alpha) * le;
    s.t2 = (dh / 2.0 - alpha) * le - 0.5 * ll;
    s.t2_kappa = (dh / 2.0 - alpha) * le - (kappa + 0.5) * ll;
    s.t_star_kappa = s.t_star + kappa * ll;

    if (!(s.t1 > 0.0 && s.t2 > s.t1))
        throw std::invalid_argument("make_schedule: epsilon too large, need 0 < t1 < t2");
    return s;
}

}  // namespace acfront
