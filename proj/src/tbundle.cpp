#include "isotm/tbundle.hpp"

#include "isotm/fd.hpp"

namespace isotm {

Vec TMPoint::coords() const {
    Vec xy(x.size() + y.size());
    xy << x, y;
    return xy;
}

TMPoint TMPoint::from_coords(const Vec& xy) {
    const int n = static_cast<int>(xy.size()) / 2;
    TMPoint p;
    p.x = xy.head(n);
    p.y = xy.tail(n);
    return p;
}

Vec TMVector::components() const {
    Vec c(dx.size() + dy.size());
    c << dx, dy;
    return c;
}

bool same_point(const TMPoint& a, const TMPoint& b, double tol) {
    if (a.x.size() != b.x.size() || a.y.size() != b.y.size()) return false;
    return (a.x - b.x).lpNorm<Eigen::Infinity>() <= tol &&
           (a.y - b.y).lpNorm<Eigen::Infinity>() <= tol;
}

TMVector horizontal_lift(const RiemannianChart& chart, const Vec& X, const TMPoint& at) {
    chart.require_inside(at.x);
    const int n = chart.dim;
    const Tensor3 gamma = christoffel(chart, at.x);
    TMVector a;
    a.at = at;
    a.dx = X;
    a.dy = Vec::Zero(n);
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc += gamma[k](i, j) * at.y[i] * X[j];
        a.dy[k] = -acc;
    }
    return a;
}

TMVector vertical_lift(const RiemannianChart& chart, const Vec& X, const TMPoint& at) {
    chart.require_inside(at.x);
    TMVector a;
    a.at = at;
    a.dx = Vec::Zero(chart.dim);
    a.dy = X;
    return a;
}

Vec connection_map(const RiemannianChart& chart, const TMVector& A) {
    chart.require_inside(A.at.x);
    const int n = chart.dim;
    const Tensor3 gamma = christoffel(chart, A.at.x);
    Vec k = A.dy;
    for (int c = 0; c < n; ++c) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc += gamma[c](i, j) * A.at.y[i] * A.dx[j];
        k[c] += acc;
    }
    return k;
}

Vec projection(const TMVector& A) { return A.dx; }

TMVectorField horizontal_lift_field(const RiemannianChart& chart, const VectorFieldOnM& X) {
    return [chart, X](const TMPoint& w) { return horizontal_lift(chart, X.value(w.x), w); };
}

TMVectorField vertical_lift_field(const RiemannianChart& chart, const VectorFieldOnM& X) {
    return [chart, X](const TMPoint& w) { return vertical_lift(chart, X.value(w.x), w); };
}

TMVectorField constant_extension(const TMVector& A) {
    const Vec dx = A.dx, dy = A.dy;
    return [dx, dy](const TMPoint& w) {
        TMVector v;
        v.at = w;
        v.dx = dx;
        v.dy = dy;
        return v;
    };
}

TMVector bracket_fd(const RiemannianChart& chart, const TMVectorField& F, const TMVectorField& G,
                    const TMPoint& at) {
    chart.require_inside(at.x);
    const int n = chart.dim;
    const int m = 2 * n;
    const Vec c0 = at.coords();

    auto eval = [&](const Vec& xy) -> Vec {
        TMPoint w = TMPoint::from_coords(xy);
        chart.require_inside(w.x);  // stencil must stay inside the chart
        return Vec(F(w).components());
    };
    auto evalG = [&](const Vec& xy) -> Vec {
        TMPoint w = TMPoint::from_coords(xy);
        chart.require_inside(w.x);
        return Vec(G(w).components());
    };

    const Vec f0 = eval(c0);
    const Vec g0 = evalG(c0);

    Vec out = Vec::Zero(m);
    for (int b = 0; b < m; ++b) {
        const Vec dGb = fd::partial_vec(evalG, c0, b);
        const Vec dFb = fd::partial_vec(eval, c0, b);
        out += f0[b] * dGb - g0[b] * dFb;
    }

    TMVector r;
    r.at = at;
    r.dx = out.head(n);
    r.dy = out.tail(n);
    return r;
}

double liouville_form(const RiemannianChart& chart, const TMVector& A) {
    const Mat g = chart.metric_checked(A.at.x);
    return A.dx.dot(g * A.at.y);
}

}  // namespace isotm
