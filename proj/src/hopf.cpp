#include "isotm/hopf.hpp"

#include <cmath>

namespace isotm {

Vec sphere_embed(const Vec& x) {
    const int n = static_cast<int>(x.size());
    const double s = 1.0 + x.squaredNorm();
    Vec q(n + 1);
    q.head(n) = (2.0 / s) * x;
    q[n] = (1.0 - x.squaredNorm()) / s;
    return q;
}

Mat sphere_embed_jacobian(const Vec& x) {
    const int n = static_cast<int>(x.size());
    const double s = 1.0 + x.squaredNorm();
    Mat j(n + 1, n);
    for (int a = 0; a < n; ++a)
        for (int k = 0; k < n; ++k)
            j(a, k) = 2.0 * (a == k ? 1.0 : 0.0) / s - 4.0 * x[a] * x[k] / (s * s);
    for (int k = 0; k < n; ++k) j(n, k) = -4.0 * x[k] / (s * s);
    return j;
}

namespace {

// Second partials of the embedding, H[a](k,j) = d^2 Q_a / dx^k dx^j.
std::vector<Mat> sphere_embed_hessian(const Vec& x) {
    const int n = static_cast<int>(x.size());
    const double s = 1.0 + x.squaredNorm();
    const double s2 = s * s, s3 = s2 * s;
    std::vector<Mat> h(n + 1, Mat::Zero(n, n));
    for (int a = 0; a < n; ++a)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) {
                double v = 16.0 * x[a] * x[k] * x[j] / s3;
                if (a == k) v -= 4.0 * x[j] / s2;
                if (a == j) v -= 4.0 * x[k] / s2;
                if (k == j) v -= 4.0 * x[a] / s2;
                h[a](k, j) = v;
            }
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            h[n](k, j) = -4.0 * (k == j ? 1.0 : 0.0) / s2 + 16.0 * x[k] * x[j] / s3;
    return h;
}

Mat quaternion_J_matrix(int i) {
    Mat j = Mat::Zero(4, 4);
    switch (i) {
        case 1:
            // (v1,v2,v3,v4) -> (-v2, v1, -v4, v3)
            j(0, 1) = -1;
            j(1, 0) = 1;
            j(2, 3) = -1;
            j(3, 2) = 1;
            break;
        case 2:
            // (v1,v2,v3,v4) -> (v3, -v4, -v1, v2)
            j(0, 2) = 1;
            j(1, 3) = -1;
            j(2, 0) = -1;
            j(3, 1) = 1;
            break;
        case 3:
            // (v1,v2,v3,v4) -> (v4, v3, -v2, -v1)
            j(0, 3) = 1;
            j(1, 2) = 1;
            j(2, 1) = -1;
            j(3, 0) = -1;
            break;
        default:
            throw ParameterError("quaternion structure index must be 1, 2 or 3");
    }
    return j;
}

}  // namespace

Vec quaternion_J(int i, const Vec& v) {
    if (v.size() != 4) throw ParameterError("quaternion_J expects a 4-vector");
    return quaternion_J_matrix(i) * v;
}

VectorFieldOnM hopf_field(const RiemannianChart& chart, int i) {
    if (chart.dim != 3 || !chart.constant_curvature ||
        std::abs(*chart.constant_curvature - 1.0) > 1e-12) {
        throw ParameterError("Hopf fields live on the unit-sphere chart in dimension 3");
    }
    const Mat J = quaternion_J_matrix(i);

    // dQ^T dQ = lambda^2 I, so the chart components of J_i Q are
    // w = (1/lambda^2) dQ^T (J_i Q), with 1/lambda^2 = s^2/4.
    VectorFieldOnM f;
    f.value = [J](const Vec& x) -> Vec {
        const double s = 1.0 + x.squaredNorm();
        const Vec q = sphere_embed(x);
        const Mat dq = sphere_embed_jacobian(x);
        return (s * s / 4.0) * (dq.transpose() * (J * q));
    };
    f.jacobian = [J](const Vec& x) -> Mat {
        const int n = 3;
        const double s = 1.0 + x.squaredNorm();
        const Vec q = sphere_embed(x);
        const Mat dq = sphere_embed_jacobian(x);
        const std::vector<Mat> hess = sphere_embed_hessian(x);
        const Vec jq = J * q;
        const Vec t = dq.transpose() * jq;
        Mat out(n, n);
        for (int col = 0; col < n; ++col) {
            Vec dt = Vec::Zero(n);
            // d/dx_col of dQ^T: rows are hess[a].col(col)
            for (int k = 0; k < n; ++k) {
                double acc = 0.0;
                for (int a = 0; a < 4; ++a) acc += hess[a](k, col) * jq[a];
                dt[k] = acc;
            }
            dt += dq.transpose() * (J * dq.col(col));
            out.col(col) = s * x[col] * t + (s * s / 4.0) * dt;
        }
        return out;
    };
    return f;
}

}  // namespace isotm
