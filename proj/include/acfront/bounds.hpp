#pragma once

#include <cmath>
#include <stdexcept>

#include "acfront/trees.hpp"

namespace acfront {

/// Gamma_a(t) = int_0^t (s v 1)^{-a} ds, closed form.
inline double gamma_a(double a, double t) {
    if (!(a > 0.0)) throw std::invalid_argument("gamma_a: a must be > 0");
    if (t < 0.0) throw std::invalid_argument("gamma_a: t must be >= 0");
    if (t <= 1.0) return t;
    if (a == 1.0) return 1.0 + std::log(t);
    return 1.0 + (std::pow(t, 1.0 - a) - 1.0) / (1.0 - a);
}

/// s_eps(t) = c^2 (e^t eps^{d/2-alpha})^2 (t v eps^2)^{-d/2}.
inline double s_eps(double epsilon, double alpha, int d, double t, double c) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("s_eps: epsilon in (0,1)");
    if (!(c > 0.0)) throw std::invalid_argument("s_eps: c must be > 0");
    if (t < 0.0) throw std::invalid_argument("s_eps: t must be >= 0");
    const double dh = static_cast<double>(d);
    const double base = std::exp(t) * std::pow(epsilon, dh / 2.0 - alpha);
    return c * c * base * base * std::pow(std::max(t, epsilon * epsilon), -dh / 2.0);
}

struct BoundInputs {
    double epsilon = 0.0;
    double alpha = 0.0;
    int d = 2;
    double t = 0.0;
    TernaryTree tree;
};

inline void validate(const BoundInputs& in) {
    if (!(in.epsilon > 0.0 && in.epsilon < 1.0))
        throw std::invalid_argument("BoundInputs: epsilon in (0,1)");
    if (in.t < 0.0) throw std::invalid_argument("BoundInputs: t must be >= 0");
    if (in.d < 1) throw std::invalid_argument("BoundInputs: d must be >= 1");
}

/// Moment bound on X^tau with implementation constant 1:
/// (t v eps^2)^{-d/4} e^t eps^{d/2-alpha} (e^t eps^{1-alpha} Gamma_{d/2}^{1/2}(t eps^{-2}))^{l-1}.
inline double moment_bound(const BoundInputs& in) {
    validate(in);
    const double dh = static_cast<double>(in.d);
    const double eps = in.epsilon;
    const double et = std::exp(in.t);
    const double head = std::pow(std::max(in.t, eps * eps), -dh / 4.0) * et *
                        std::pow(eps, dh / 2.0 - in.alpha);
    const double geom = et * std::pow(eps, 1.0 - in.alpha) *
                        std::sqrt(gamma_a(dh / 2.0, in.t / (eps * eps)));
    return head * std::pow(geom, in.tree.leaf_count() - 1);
}

/// Gradient variant: the same bound with an extra (t v eps^2)^{-1/2} factor.
inline double gradient_moment_bound(const BoundInputs& in) {
    validate(in);
    return moment_bound(in) / std::sqrt(std::max(in.t, in.epsilon * in.epsilon));
}

/// B_eps(t) = (t v eps^2)^{-d/2} (c e^t eps^{d/2-alpha})^6 (eps^{2-d} Gamma_{d/2}(t eps^{-2}))^2,
/// the per-pairing size in the second-moment estimate of X^{[.,.,.]}.
inline double b_eps(double epsilon, double alpha, int d, double t, double c) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("b_eps: epsilon in (0,1)");
    if (!(c > 0.0)) throw std::invalid_argument("b_eps: c must be > 0");
    if (t < 0.0) throw std::invalid_argument("b_eps: t must be >= 0");
    const double dh = static_cast<double>(d);
    const double eps = epsilon;
    const double front = std::pow(std::max(t, eps * eps), -dh / 2.0);
    const double mid = std::pow(c * std::exp(t) * std::pow(eps, dh / 2.0 - alpha), 6.0);
    const double tail = std::pow(eps, 2.0 - dh) * gamma_a(dh / 2.0, t / (eps * eps));
    return front * mid * tail * tail;
}

}  // namespace acfront
