#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "isotm/errors.hpp"

namespace isotm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Third-order coefficient array, indexed T[k](i,j).
using Tensor3 = std::vector<Mat>;

// Conformally flat data: g = lambda^2 * (dx^1 (x) dx^1 + ... + dx^n (x) dx^n).
struct ConformalProfile {
    std::function<double(const Vec&)> lambda;
    std::function<Vec(const Vec&)> dlambda;   // optional
    std::function<Mat(const Vec&)> d2lambda;  // optional
};

// A single coordinate chart carrying the metric of the base manifold. The
// valid region is an axis-aligned box, optionally clipped to |x| <= ball_radius
// (used by the stereographic charts to stay away from the missing pole).
struct RiemannianChart {
    int dim = 0;
    std::function<Mat(const Vec&)> metric;

    // Optional analytic jets. metric_d1(x)[k](i,j) = d g_ij / d x^k,
    // metric_d2(x)[l][k](i,j) = d^2 g_ij / d x^l d x^k.
    std::function<Tensor3(const Vec&)> metric_d1;
    std::function<std::vector<Tensor3>(const Vec&)> metric_d2;

    Vec box_lo, box_hi;
    double ball_radius = std::numeric_limits<double>::infinity();

    std::optional<ConformalProfile> conformal;
    std::optional<double> constant_curvature;

    bool has_metric_jet() const { return static_cast<bool>(metric_d1); }
    bool contains(const Vec& x) const;
    void require_inside(const Vec& x) const;

    // Metric evaluated inside the domain; SingularMetricError if not SPD.
    Mat metric_checked(const Vec& x) const;
};

RiemannianChart euclidean(int n);

// Unit round sphere S^n in the stereographic chart, lambda = 2/(1+|x|^2),
// sectional curvature 1, domain |x| <= 4.
RiemannianChart sphere_stereographic(int n);

// lambda(x) = c / (1 + s|x|^2); space form of curvature 4s/c^2. c=2, s=1
// recovers the unit sphere chart, s=0 a rescaled flat metric.
RiemannianChart conformal_family(int n, double c, double s);

// Arbitrary positive conformal factor; jets optional (finite differences
// otherwise). Curvature is left unset unless supplied by the caller.
RiemannianChart conformal_chart(int n, std::function<double(const Vec&)> lambda,
                                std::function<Vec(const Vec&)> dlambda = nullptr,
                                std::function<Mat(const Vec&)> d2lambda = nullptr);

// A vector field on M in chart components, with optional analytic Jacobian.
struct VectorFieldOnM {
    std::function<Vec(const Vec&)> value;
    std::function<Mat(const Vec&)> jacobian;  // optional: J(i,j) = d X^i / d x^j

    bool has_jet() const { return static_cast<bool>(jacobian); }

    // Jacobian from the jet when present, else central differences with the
    // given step scale.
    Mat jacobian_at(const RiemannianChart& chart, const Vec& x, double fd_scale) const;
    Mat jacobian_at(const RiemannianChart& chart, const Vec& x) const;
};

VectorFieldOnM constant_field(const Vec& v);

// X(x) = c + B x, with analytic Jacobian.
VectorFieldOnM affine_field(const Vec& c, const Mat& B);

// The i-th coordinate field scaled to unit g-norm. Analytic Jacobian on
// conformal charts with analytic dlambda, finite differences otherwise.
VectorFieldOnM normalized_coordinate_field(const RiemannianChart& chart, int i);

}  // namespace isotm
