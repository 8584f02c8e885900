#include "isotm/calculus.hpp"

#include <cmath>

#include "isotm/fd.hpp"

namespace isotm {

namespace {

Tensor3 metric_d1_at(const RiemannianChart& chart, const Vec& p, double scale) {
    if (chart.metric_d1) return chart.metric_d1(p);
    const int n = chart.dim;
    Tensor3 dg(n);
    for (int k = 0; k < n; ++k) {
        const double h = fd::step(p[k], scale);
        Vec xp = p, xm = p;
        xp[k] += h;
        xm[k] -= h;
        chart.require_inside(xp);
        chart.require_inside(xm);
        dg[k] = (chart.metric(xp) - chart.metric(xm)) / (2.0 * h);
    }
    return dg;
}

Tensor3 christoffel_from(const Mat& ginv, const Tensor3& dg) {
    const int n = static_cast<int>(dg.size());
    Tensor3 gamma(n, Mat::Zero(n, n));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l)
                    acc += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                gamma[k](i, j) = 0.5 * acc;
            }
    return gamma;
}

}  // namespace

Tensor3 christoffel(const RiemannianChart& chart, const Vec& p) {
    const Mat g = chart.metric_checked(p);
    const Mat ginv = g.inverse();
    return christoffel_from(ginv, metric_d1_at(chart, p, fd::kStep1));
}

Tensor3 christoffel_fd(const RiemannianChart& chart, const Vec& p) {
    const Mat g = chart.metric_checked(p);
    const Mat ginv = g.inverse();
    const int n = chart.dim;
    Tensor3 dg(n);
    for (int k = 0; k < n; ++k) {
        const double h = fd::step(p[k], fd::kStep1);
        Vec xp = p, xm = p;
        xp[k] += h;
        xm[k] -= h;
        chart.require_inside(xp);
        chart.require_inside(xm);
        dg[k] = (chart.metric(xp) - chart.metric(xm)) / (2.0 * h);
    }
    return christoffel_from(ginv, dg);
}

Tensor3 christoffel_conformal(const Vec& mu) {
    const int n = static_cast<int>(mu.size());
    Tensor3 gamma(n, Mat::Zero(n, n));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v = 0.0;
                if (k == i) v += mu[j];
                if (k == j) v += mu[i];
                if (i == j) v -= mu[k];
                gamma[k](i, j) = v;
            }
    return gamma;
}

std::vector<Tensor3> christoffel_d1(const RiemannianChart& chart, const Vec& p) {
    const int n = chart.dim;
    if (chart.metric_d1 && chart.metric_d2) {
        // d Gamma = d(ginv) * (...) + ginv * d(...), all analytic.
        const Mat g = chart.metric_checked(p);
        const Mat ginv = g.inverse();
        const Tensor3 dg = chart.metric_d1(p);
        const std::vector<Tensor3> d2g = chart.metric_d2(p);
        std::vector<Tensor3> out(n, Tensor3(n, Mat::Zero(n, n)));
        for (int el = 0; el < n; ++el) {
            const Mat dginv = -ginv * dg[el] * ginv;
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        double acc = 0.0;
                        for (int m = 0; m < n; ++m) {
                            acc += dginv(k, m) * (dg[i](j, m) + dg[j](i, m) - dg[m](i, j));
                            acc += ginv(k, m) * (d2g[el][i](j, m) + d2g[el][j](i, m) -
                                                 d2g[el][m](i, j));
                        }
                        out[el][k](i, j) = 0.5 * acc;
                    }
        }
        return out;
    }
    // FD of the Christoffel evaluation; coarser step since the inner value may
    // itself come from differences.
    const double scale = chart.metric_d1 ? fd::kStep1 : fd::kStep2;
    std::vector<Tensor3> out(n);
    for (int el = 0; el < n; ++el) {
        const double h = fd::step(p[el], scale);
        Vec xp = p, xm = p;
        xp[el] += h;
        xm[el] -= h;
        const Tensor3 gp = christoffel(chart, xp);
        const Tensor3 gm = christoffel(chart, xm);
        Tensor3 d(n);
        for (int k = 0; k < n; ++k) d[k] = (gp[k] - gm[k]) / (2.0 * h);
        out[el] = d;
    }
    return out;
}

std::vector<Tensor3> riemann(const RiemannianChart& chart, const Vec& p) {
    const int n = chart.dim;
    const Tensor3 gamma = christoffel(chart, p);
    const std::vector<Tensor3> dgamma = christoffel_d1(chart, p);
    // (R(e_i,e_j)e_k)^l = d_i Gamma^l_jk - d_j Gamma^l_ik
    //                     + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik
    std::vector<Tensor3> R(n, Tensor3(n, Mat::Zero(n, n)));
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double v = dgamma[i][l](j, k) - dgamma[j][l](i, k);
                    for (int m = 0; m < n; ++m)
                        v += gamma[l](i, m) * gamma[m](j, k) - gamma[l](j, m) * gamma[m](i, k);
                    R[l][i](j, k) = v;
                }
    return R;
}

Vec riemann_apply(const std::vector<Tensor3>& R, const Vec& X, const Vec& Y, const Vec& Z) {
    const int n = static_cast<int>(R.size());
    Vec out = Vec::Zero(n);
    for (int l = 0; l < n; ++l) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) acc += R[l][i](j, k) * X[i] * Y[j] * Z[k];
        out[l] = acc;
    }
    return out;
}

Vec riemann_apply(const RiemannianChart& chart, const Vec& p, const Vec& X, const Vec& Y,
                  const Vec& Z) {
    return riemann_apply(riemann(chart, p), X, Y, Z);
}

Mat ricci(const RiemannianChart& chart, const Vec& p) {
    const int n = chart.dim;
    const std::vector<Tensor3> R = riemann(chart, p);
    Mat ric = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += R[i][i](j, k);
            ric(j, k) = acc;
        }
    return ric;
}

double sectional(const RiemannianChart& chart, const Vec& p, const Vec& X, const Vec& Y) {
    const Mat g = chart.metric_checked(p);
    const double gxx = X.dot(g * X);
    const double gyy = Y.dot(g * Y);
    const double gxy = X.dot(g * Y);
    const double denom = gxx * gyy - gxy * gxy;
    if (denom <= 1e-12 * std::max(1.0, gxx * gyy)) {
        throw DegeneratePlaneError("plane vectors are (numerically) linearly dependent");
    }
    const Vec rxyy = riemann_apply(chart, p, X, Y, Y);
    return rxyy.dot(g * X) / denom;
}

Vec covariant_derivative(const RiemannianChart& chart, const VectorFieldOnM& X, const Vec& V,
                         const Vec& p, double fd_scale) {
    chart.require_inside(p);
    const int n = chart.dim;
    const Mat jac = X.jacobian_at(chart, p, fd_scale);
    const Tensor3 gamma = christoffel(chart, p);
    const Vec xv = X.value(p);
    Vec out = jac * V;
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc += gamma[k](i, j) * V[i] * xv[j];
        out[k] += acc;
    }
    return out;
}

Vec covariant_derivative(const RiemannianChart& chart, const VectorFieldOnM& X, const Vec& V,
                         const Vec& p) {
    return covariant_derivative(chart, X, V, p, fd::kStep1);
}

Mat orthonormal_frame(const RiemannianChart& chart, const Vec& p,
                      const std::vector<int>& order) {
    const Mat g = chart.metric_checked(p);
    const int n = chart.dim;
    Mat frame(n, n);
    for (int i = 0; i < n; ++i) {
        const int seed = order.empty() ? i : order[i];
        Vec v = Vec::Unit(n, seed);
        for (int j = 0; j < i; ++j) {
            const Vec ej = frame.col(j);
            v -= ej.dot(g * v) * ej;
        }
        const double nrm = std::sqrt(v.dot(g * v));
        if (!(nrm > 0.0)) throw SingularMetricError("Gram-Schmidt collapsed");
        frame.col(i) = v / nrm;
    }
    return frame;
}

VectorFieldOnM frame_field(const RiemannianChart& chart, int i, const std::vector<int>& order) {
    if (i < 0 || i >= chart.dim) throw ParameterError("frame index out of range");
    VectorFieldOnM f;
    f.value = [chart, i, order](const Vec& x) -> Vec {
        return orthonormal_frame(chart, x, order).col(i);
    };
    return f;
}

Vec rough_laplacian(const RiemannianChart& chart, const VectorFieldOnM& X, const Vec& p,
                    const std::vector<int>& frame_order) {
    chart.require_inside(p);
    const int n = chart.dim;
    const Mat frame = orthonormal_frame(chart, p, frame_order);
    Vec acc = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
        const VectorFieldOnM Vi = frame_field(chart, i, frame_order);
        // L_i(q) = nabla_{V_i(q)} X (q), differentiated once more at p.
        VectorFieldOnM Li;
        Li.value = [&chart, &X, Vi](const Vec& q) -> Vec {
            return covariant_derivative(chart, X, Vi.value(q), q);
        };
        const Vec vi = frame.col(i);
        const Vec first = covariant_derivative(chart, Li, vi, p, fd::kStep2);
        const Vec dvv = covariant_derivative(chart, Vi, vi, p);
        const Vec second = covariant_derivative(chart, X, dvv, p);
        acc += first - second;
    }
    return -acc;
}

double divergence(const RiemannianChart& chart, const VectorFieldOnM& X, const Vec& p,
                  const std::vector<int>& frame_order) {
    const Mat g = chart.metric_checked(p);
    const Mat frame = orthonormal_frame(chart, p, frame_order);
    double acc = 0.0;
    for (int i = 0; i < chart.dim; ++i) {
        const Vec vi = frame.col(i);
        acc += covariant_derivative(chart, X, vi, p).dot(g * vi);
    }
    return acc;
}

double grad_norm_sq(const RiemannianChart& chart, const VectorFieldOnM& X, const Vec& p,
                    const std::vector<int>& frame_order) {
    const Mat g = chart.metric_checked(p);
    const Mat frame = orthonormal_frame(chart, p, frame_order);
    double acc = 0.0;
    for (int i = 0; i < chart.dim; ++i) {
        const Vec d = covariant_derivative(chart, X, frame.col(i), p);
        acc += d.dot(g * d);
    }
    return acc;
}

}  // namespace isotm
