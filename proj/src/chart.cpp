#include "isotm/chart.hpp"

#include <cmath>
#include <sstream>

#include "isotm/fd.hpp"

namespace isotm {

namespace {

std::string point_str(const Vec& x) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ")";
    return os.str();
}

}  // namespace

bool RiemannianChart::contains(const Vec& x) const {
    if (x.size() != dim) return false;
    for (int i = 0; i < dim; ++i) {
        if (!(x[i] >= box_lo[i] && x[i] <= box_hi[i])) return false;
    }
    if (std::isfinite(ball_radius) && x.norm() > ball_radius) return false;
    return true;
}

void RiemannianChart::require_inside(const Vec& x) const {
    if (!contains(x)) {
        throw DomainError("point " + point_str(x) + " outside chart domain");
    }
}

Mat RiemannianChart::metric_checked(const Vec& x) const {
    require_inside(x);
    Mat g = metric(x);
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success) {
        throw SingularMetricError("metric not positive definite at " + point_str(x));
    }
    return g;
}

RiemannianChart euclidean(int n) {
    RiemannianChart c;
    c.dim = n;
    c.metric = [n](const Vec&) { return Mat::Identity(n, n); };
    c.metric_d1 = [n](const Vec&) { return Tensor3(n, Mat::Zero(n, n)); };
    c.metric_d2 = [n](const Vec&) {
        return std::vector<Tensor3>(n, Tensor3(n, Mat::Zero(n, n)));
    };
    c.box_lo = Vec::Constant(n, -8.0);
    c.box_hi = Vec::Constant(n, 8.0);
    c.constant_curvature = 0.0;
    ConformalProfile prof;
    prof.lambda = [](const Vec&) { return 1.0; };
    prof.dlambda = [n](const Vec&) { return Vec::Zero(n); };
    prof.d2lambda = [n](const Vec&) { return Mat::Zero(n, n); };
    c.conformal = prof;
    return c;
}

RiemannianChart conformal_family(int n, double cc, double s) {
    if (cc <= 0.0) throw ParameterError("conformal factor scale must be positive");
    RiemannianChart c;
    c.dim = n;

    auto lambda = [cc, s](const Vec& x) { return cc / (1.0 + s * x.squaredNorm()); };
    auto dlambda = [cc, s](const Vec& x) -> Vec {
        const double q = 1.0 + s * x.squaredNorm();
        return (-2.0 * cc * s / (q * q)) * x;
    };
    auto d2lambda = [cc, s, n](const Vec& x) -> Mat {
        const double q = 1.0 + s * x.squaredNorm();
        Mat h = (-2.0 * cc * s / (q * q)) * Mat::Identity(n, n);
        h += (8.0 * cc * s * s / (q * q * q)) * (x * x.transpose());
        return h;
    };

    c.metric = [lambda, n](const Vec& x) {
        const double l = lambda(x);
        return (l * l) * Mat::Identity(n, n);
    };
    c.metric_d1 = [lambda, dlambda, n](const Vec& x) {
        const double l = lambda(x);
        const Vec dl = dlambda(x);
        Tensor3 t(n);
        for (int k = 0; k < n; ++k) t[k] = (2.0 * l * dl[k]) * Mat::Identity(n, n);
        return t;
    };
    c.metric_d2 = [lambda, dlambda, d2lambda, n](const Vec& x) {
        const double l = lambda(x);
        const Vec dl = dlambda(x);
        const Mat hl = d2lambda(x);
        std::vector<Tensor3> t(n, Tensor3(n));
        for (int el = 0; el < n; ++el)
            for (int k = 0; k < n; ++k)
                t[el][k] = 2.0 * (dl[el] * dl[k] + l * hl(el, k)) * Mat::Identity(n, n);
        return t;
    };

    c.box_lo = Vec::Constant(n, -4.0);
    c.box_hi = Vec::Constant(n, 4.0);
    if (s != 0.0) c.ball_radius = 4.0;
    c.constant_curvature = 4.0 * s / (cc * cc);
    c.conformal = ConformalProfile{lambda, dlambda, d2lambda};
    return c;
}

RiemannianChart sphere_stereographic(int n) { return conformal_family(n, 2.0, 1.0); }

RiemannianChart conformal_chart(int n, std::function<double(const Vec&)> lambda,
                                std::function<Vec(const Vec&)> dlambda,
                                std::function<Mat(const Vec&)> d2lambda) {
    RiemannianChart c;
    c.dim = n;
    c.metric = [lambda, n](const Vec& x) {
        const double l = lambda(x);
        if (!(l > 0.0)) throw SingularMetricError("conformal factor not positive");
        return (l * l) * Mat::Identity(n, n);
    };
    if (dlambda) {
        c.metric_d1 = [lambda, dlambda, n](const Vec& x) {
            const double l = lambda(x);
            const Vec dl = dlambda(x);
            Tensor3 t(n);
            for (int k = 0; k < n; ++k) t[k] = (2.0 * l * dl[k]) * Mat::Identity(n, n);
            return t;
        };
    }
    if (dlambda && d2lambda) {
        c.metric_d2 = [lambda, dlambda, d2lambda, n](const Vec& x) {
            const double l = lambda(x);
            const Vec dl = dlambda(x);
            const Mat hl = d2lambda(x);
            std::vector<Tensor3> t(n, Tensor3(n));
            for (int el = 0; el < n; ++el)
                for (int k = 0; k < n; ++k)
                    t[el][k] = 2.0 * (dl[el] * dl[k] + l * hl(el, k)) * Mat::Identity(n, n);
            return t;
        };
    }
    c.box_lo = Vec::Constant(n, -4.0);
    c.box_hi = Vec::Constant(n, 4.0);
    c.conformal = ConformalProfile{std::move(lambda), std::move(dlambda), std::move(d2lambda)};
    return c;
}

Mat VectorFieldOnM::jacobian_at(const RiemannianChart& chart, const Vec& x,
                                double fd_scale) const {
    if (jacobian) return jacobian(x);
    const int n = chart.dim;
    Mat j(n, n);
    for (int col = 0; col < n; ++col) {
        const double h = fd::step(x[col], fd_scale);
        Vec xp = x, xm = x;
        xp[col] += h;
        xm[col] -= h;
        chart.require_inside(xp);
        chart.require_inside(xm);
        j.col(col) = (value(xp) - value(xm)) / (2.0 * h);
    }
    return j;
}

Mat VectorFieldOnM::jacobian_at(const RiemannianChart& chart, const Vec& x) const {
    return jacobian_at(chart, x, fd::kStep1);
}

VectorFieldOnM constant_field(const Vec& v) {
    const int n = static_cast<int>(v.size());
    VectorFieldOnM f;
    f.value = [v](const Vec&) { return v; };
    f.jacobian = [n](const Vec&) { return Mat::Zero(n, n); };
    return f;
}

VectorFieldOnM affine_field(const Vec& c, const Mat& B) {
    VectorFieldOnM f;
    f.value = [c, B](const Vec& x) -> Vec { return c + B * x; };
    f.jacobian = [B](const Vec&) { return B; };
    return f;
}

VectorFieldOnM normalized_coordinate_field(const RiemannianChart& chart, int i) {
    if (i < 0 || i >= chart.dim) throw ParameterError("coordinate index out of range");
    const int n = chart.dim;
    VectorFieldOnM f;
    if (chart.conformal && chart.conformal->dlambda) {
        auto lambda = chart.conformal->lambda;
        auto dlambda = chart.conformal->dlambda;
        f.value = [lambda, i, n](const Vec& x) -> Vec {
            Vec v = Vec::Zero(n);
            v[i] = 1.0 / lambda(x);
            return v;
        };
        f.jacobian = [lambda, dlambda, i, n](const Vec& x) -> Mat {
            const double l = lambda(x);
            const Vec dl = dlambda(x);
            Mat j = Mat::Zero(n, n);
            j.row(i) = (-1.0 / (l * l)) * dl.transpose();
            return j;
        };
    } else {
        auto metric = chart.metric;
        f.value = [metric, i, n](const Vec& x) -> Vec {
            Vec v = Vec::Zero(n);
            v[i] = 1.0 / std::sqrt(metric(x)(i, i));
            return v;
        };
    }
    return f;
}

}  // namespace isotm
