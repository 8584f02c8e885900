#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace isotm::fd {

// Central-difference step policy: h = scale * max(1, |coordinate|).
// First derivatives use 1e-5; quantities that are themselves produced by a
// first-difference pass (second derivatives) use the coarser 1e-4 scale.
// The two scales can be overridden process-wide (scenario fd_step_overrides);
// the kStep constants act as markers for "the configured default".
inline constexpr double kStep1 = 1e-5;
inline constexpr double kStep2 = 1e-4;

double step1_scale();
double step2_scale();
void set_step_scales(double s1, double s2);

inline double resolve_scale(double scale) {
    if (scale == kStep1) return step1_scale();
    if (scale == kStep2) return step2_scale();
    return scale;
}

inline double step(double coord, double scale = kStep1) {
    return resolve_scale(scale) * std::max(1.0, std::abs(coord));
}

// d/dx_i of a scalar-valued function.
template <class F>
double partial(F&& f, Eigen::VectorXd x, int i, double scale = kStep1) {
    const double h = step(x[i], scale);
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fm = f(x);
    x[i] = xi;
    return (fp - fm) / (2.0 * h);
}

// d/dx_i of a vector-valued function.
template <class F>
Eigen::VectorXd partial_vec(F&& f, Eigen::VectorXd x, int i, double scale = kStep1) {
    const double h = step(x[i], scale);
    const double xi = x[i];
    x[i] = xi + h;
    const Eigen::VectorXd fp = f(x);
    x[i] = xi - h;
    const Eigen::VectorXd fm = f(x);
    x[i] = xi;
    return (fp - fm) / (2.0 * h);
}

// Directional derivative of a scalar-valued function along dir.
template <class F>
double directional(F&& f, const Eigen::VectorXd& x, const Eigen::VectorXd& dir,
                   double scale = kStep1) {
    const double dmax = std::max(1.0, dir.template lpNorm<Eigen::Infinity>());
    const double xmax = x.size() ? x.template lpNorm<Eigen::Infinity>() : 0.0;
    const double h = resolve_scale(scale) * std::max(1.0, xmax) / dmax;
    return (f(x + h * dir) - f(x - h * dir)) / (2.0 * h);
}

template <class F>
Eigen::VectorXd directional_vec(F&& f, const Eigen::VectorXd& x, const Eigen::VectorXd& dir,
                                double scale = kStep1) {
    const double dmax = std::max(1.0, dir.template lpNorm<Eigen::Infinity>());
    const double xmax = x.size() ? x.template lpNorm<Eigen::Infinity>() : 0.0;
    const double h = resolve_scale(scale) * std::max(1.0, xmax) / dmax;
    return (f(x + h * dir) - f(x - h * dir)) / (2.0 * h);
}

}  // namespace isotm::fd
