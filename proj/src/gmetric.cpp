#include "isotm/gmetric.hpp"

#include <cmath>

#include "isotm/calculus.hpp"
#include "isotm/fd.hpp"

namespace isotm {

TangentMetric make_tangent_metric(RiemannianChart chart, IsotropicStructure structure) {
    return TangentMetric{std::move(chart), std::move(structure)};
}

ScalarOnTM alpha_scalar(const TangentMetric& m) {
    const IsotropicStructure s = m.structure;
    const RiemannianChart chart = m.chart;
    ScalarOnTM f;
    f.value = [s](const TMPoint& at) { return s.alpha_at(at); };
    f.grad = [s, chart](const TMPoint& at) { return s.alpha_grad(chart, at); };
    return f;
}

ScalarOnTM delta_scalar(const TangentMetric& m) {
    const IsotropicStructure s = m.structure;
    const RiemannianChart chart = m.chart;
    ScalarOnTM f;
    f.value = [s](const TMPoint& at) { return s.delta_at(at); };
    f.grad = [s, chart](const TMPoint& at) { return s.delta_grad(chart, at); };
    return f;
}

ScalarOnTM sigma_scalar(const TangentMetric& m) {
    const IsotropicStructure s = m.structure;
    const RiemannianChart chart = m.chart;
    ScalarOnTM f;
    f.value = [s](const TMPoint& at) { return s.sigma_at(at); };
    f.grad = [s, chart](const TMPoint& at) { return s.sigma_grad(chart, at); };
    return f;
}

double metric_eval(const TangentMetric& m, const TMVector& A, const TMVector& B) {
    if (!same_point(A.at, B.at)) throw PointMismatchError("metric_eval: vectors at different points");
    const Mat g = m.chart.metric_checked(A.at.x);
    const double a = m.structure.alpha_at(A.at);
    const double d = m.structure.delta_at(A.at);
    const double s = m.structure.sigma_at(A.at);
    const Vec ha = projection(A), va = connection_map(m.chart, A);
    const Vec hb = projection(B), vb = connection_map(m.chart, B);
    return a * ha.dot(g * hb) - s * (ha.dot(g * vb) + va.dot(g * hb)) + d * va.dot(g * vb);
}

Mat metric_matrix(const TangentMetric& m, const TMPoint& at) {
    const int n = m.chart.dim;
    const Mat g = m.chart.metric_checked(at.x);
    const double a = m.structure.alpha_at(at);
    const double d = m.structure.delta_at(at);
    const double s = m.structure.sigma_at(at);

    // L maps coordinate components to (pi_*, K) components: (dx, dy + C dx)
    // with C^k_j = Gamma^k_ij y^i; then M = L^T B L with the lift blocks B.
    const Tensor3 gamma = christoffel(m.chart, at.x);
    Mat C = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += gamma[k](i, j) * at.y[i];
            C(k, j) = acc;
        }

    Mat B(2 * n, 2 * n);
    B.topLeftCorner(n, n) = a * g;
    B.topRightCorner(n, n) = -s * g;
    B.bottomLeftCorner(n, n) = -s * g;
    B.bottomRightCorner(n, n) = d * g;

    Mat L = Mat::Identity(2 * n, 2 * n);
    L.bottomLeftCorner(n, n) = C;
    return L.transpose() * B * L;
}

Mat j_matrix(const TangentMetric& m, const TMPoint& at) {
    const int n = m.chart.dim;
    Mat j(2 * n, 2 * n);
    for (int c = 0; c < 2 * n; ++c) {
        TMVector e;
        e.at = at;
        e.dx = Vec::Zero(n);
        e.dy = Vec::Zero(n);
        if (c < n)
            e.dx[c] = 1.0;
        else
            e.dy[c - n] = 1.0;
        j.col(c) = apply_J(m.structure, m.chart, e).components();
    }
    return j;
}

Vec metric_solve(const TangentMetric& m, const TMPoint& at, const Vec& rhs) {
    const Mat M = metric_matrix(m, at);
    Eigen::LLT<Mat> llt(M);
    if (llt.info() != Eigen::Success)
        throw SingularMetricError("g_{delta,sigma} matrix is not positive definite");
    return llt.solve(rhs);
}

namespace {

Vec scalar_grad_fd(const TangentMetric& m, const ScalarOnTM& f, const TMPoint& at) {
    if (f.grad) return f.grad(at);
    const int n = m.chart.dim;
    Vec grad(2 * n);
    const Vec c0 = at.coords();
    auto eval = [&](const Vec& xy) {
        const TMPoint q = TMPoint::from_coords(xy);
        m.chart.require_inside(q.x);
        return f.value(q);
    };
    for (int i = 0; i < 2 * n; ++i) grad[i] = fd::partial(eval, c0, i);
    return grad;
}

}  // namespace

TMVector gradient_on_TM(const TangentMetric& m, const ScalarOnTM& f, const TMPoint& at) {
    const Vec df = scalar_grad_fd(m, f, at);
    const Vec w = metric_solve(m, at, df);
    TMVector out;
    out.at = at;
    out.dx = w.head(m.chart.dim);
    out.dy = w.tail(m.chart.dim);
    return out;
}

std::pair<Vec, Vec> x1_x2_fields(const TangentMetric& m, const ScalarOnTM& f,
                                 const VectorFieldOnM& X, const Vec& p) {
    TMPoint at;
    at.x = p;
    at.y = X.value(p);
    const TMVector grad = gradient_on_TM(m, f, at);
    return {projection(grad), connection_map(m.chart, grad)};
}

TMVector unit_normal(const TangentMetric& m, const TMPoint& at) {
    const Mat g = m.chart.metric_checked(at.x);
    const double norm2 = at.y.dot(g * at.y);
    if (std::abs(norm2 - 1.0) > 1e-9)
        throw NotUnitFiberError("unit_normal: fiber is not a unit vector");
    const double a = m.structure.alpha_at(at);
    const double s = m.structure.sigma_at(at);
    const double root = std::sqrt(a);
    const TMVector uh = horizontal_lift(m.chart, at.y, at);
    const TMVector uv = vertical_lift(m.chart, at.y, at);
    TMVector out;
    out.at = at;
    out.dx = root * ((s / a) * uh.dx + uv.dx);
    out.dy = root * ((s / a) * uh.dy + uv.dy);
    return out;
}

GNaturalCoefficients gnatural_coefficients(const IsotropicStructure& s) {
    if (!s.radial || !s.delta_of_r2)
        throw NotRadialError("structure does not depend on the point through g(u,u) only");
    auto d = s.delta_of_r2;
    auto sg = s.sigma_of_r2;
    GNaturalCoefficients c;
    c.alpha1 = d;
    c.alpha2 = [sg](double r2) { return -sg(r2); };
    c.alpha3 = [d, sg](double r2) {
        const double dd = d(r2);
        const double ss = sg(r2);
        return (1.0 + ss * ss) / dd - dd;
    };
    return c;
}

namespace {

struct PointData {
    int n;
    Mat g;
    double a, d, s;
    Vec da, dd, ds;    // gradients in induced coordinates
    Vec hga, vga;      // grad alpha split into pi_* and K parts
    Vec hgd, vgd;      // grad delta
    Vec hgs, vgs;      // grad sigma
    std::vector<Tensor3> R;
    Tensor3 gamma;
};

PointData point_data(const TangentMetric& m, const TMPoint& at) {
    PointData pd;
    pd.n = m.chart.dim;
    pd.g = m.chart.metric_checked(at.x);
    pd.a = m.structure.alpha_at(at);
    pd.d = m.structure.delta_at(at);
    pd.s = m.structure.sigma_at(at);
    pd.da = m.structure.alpha_grad(m.chart, at);
    pd.dd = m.structure.delta_grad(m.chart, at);
    pd.ds = m.structure.sigma_grad(m.chart, at);
    pd.R = riemann(m.chart, at.x);
    pd.gamma = christoffel(m.chart, at.x);

    auto split = [&](const Vec& df, Vec& h, Vec& v) {
        const Vec w = metric_solve(m, at, df);
        TMVector t;
        t.at = at;
        t.dx = w.head(pd.n);
        t.dy = w.tail(pd.n);
        h = projection(t);
        v = connection_map(m.chart, t);
    };
    split(pd.da, pd.hga, pd.vga);
    split(pd.dd, pd.hgd, pd.vgd);
    split(pd.ds, pd.hgs, pd.vgs);
    return pd;
}

// Derivative of a structure scalar along the horizontal lift of V.
double hderiv(const PointData& pd, const Vec& grad, const TMPoint& at, const Vec& V) {
    Vec lift(2 * pd.n);
    lift.head(pd.n) = V;
    for (int k = 0; k < pd.n; ++k) {
        double acc = 0.0;
        for (int i = 0; i < pd.n; ++i)
            for (int j = 0; j < pd.n; ++j) acc += pd.gamma[k](i, j) * at.y[i] * V[j];
        lift[pd.n + k] = -acc;
    }
    return grad.dot(lift);
}

// Derivative along the vertical lift of V.
double vderiv(const PointData& pd, const Vec& grad, const Vec& V) {
    return grad.tail(pd.n).dot(V);
}

}  // namespace

ConnectionValue levi_civita_closed(const TangentMetric& m, const VectorFieldOnM& X,
                                   const VectorFieldOnM& Y, LiftKind kind, const TMPoint& at) {
    m.chart.require_inside(at.x);
    const PointData pd = point_data(m, at);
    const int n = pd.n;
    const Vec Xp = X.value(at.x);
    const Vec Yp = Y.value(at.x);
    const double gXY = Xp.dot(pd.g * Yp);
    const double a = pd.a, d = pd.d, s = pd.s;

    auto Ru = [&](const Vec& V, const Vec& W) {
        return riemann_apply(pd.R, at.y, V, W);  // R(u, V) W
    };

    ConnectionValue cv;
    auto add = [&](const std::string& label, const Vec& h, const Vec& v) {
        if (h.isZero(0.0) && v.isZero(0.0)) return;
        const TMVector th = horizontal_lift(m.chart, h, at);
        const TMVector tv = vertical_lift(m.chart, v, at);
        TMVector t;
        t.at = at;
        t.dx = th.dx + tv.dx;
        t.dy = th.dy + tv.dy;
        cv.terms.emplace_back(label, t);
    };
    const Vec zero = Vec::Zero(n);

    switch (kind) {
        case LiftKind::HH: {
            const Vec nXY = covariant_derivative(m.chart, Y, Xp, at.x);
            const Vec curv = Ru(Xp, Yp) + Ru(Yp, Xp);
            const double haX = hderiv(pd, pd.da, at, Xp), haY = hderiv(pd, pd.da, at, Yp);
            const double hsX = hderiv(pd, pd.ds, at, Xp), hsY = hderiv(pd, pd.ds, at, Yp);
            add("nabla_XY", nXY, zero);
            add("curvature_h", -0.5 * s * d * curv, zero);
            add("curvature_v", zero, -0.5 * riemann_apply(pd.R, Xp, Yp, at.y) - 0.5 * s * s * curv);
            add("scalar_Y", 0.5 * (d * haX - s * hsX) * Yp, 0.5 * (s * haX - a * hsX) * Yp);
            add("scalar_X", 0.5 * (d * haY - s * hsY) * Xp, 0.5 * (s * haY - a * hsY) * Xp);
            add("gradient", -0.5 * gXY * pd.hga, -0.5 * gXY * pd.vga);
            break;
        }
        case LiftKind::HV: {
            const Vec nXY = covariant_derivative(m.chart, Y, Xp, at.x);
            const Vec curv = Ru(Yp, Xp);  // R(u,Y)X
            const double hdX = hderiv(pd, pd.dd, at, Xp), hsX = hderiv(pd, pd.ds, at, Xp);
            const double vaY = vderiv(pd, pd.da, Yp), vsY = vderiv(pd, pd.ds, Yp);
            add("nabla_XY", zero, nXY);
            add("curvature", 0.5 * d * d * curv, 0.5 * s * d * curv);
            add("scalar_Y", 0.5 * (s * hdX - d * hsX) * Yp, 0.5 * (a * hdX - s * hsX) * Yp);
            add("scalar_X", 0.5 * (d * vaY - s * vsY) * Xp, 0.5 * (s * vaY - a * vsY) * Xp);
            add("gradient", 0.5 * gXY * pd.hgs, 0.5 * gXY * pd.vgs);
            break;
        }
        case LiftKind::VH: {
            const Vec curv = Ru(Xp, Yp);  // R(u,X)Y
            const double vaX = vderiv(pd, pd.da, Xp), vsX = vderiv(pd, pd.ds, Xp);
            const double hdY = hderiv(pd, pd.dd, at, Yp), hsY = hderiv(pd, pd.ds, at, Yp);
            add("curvature", 0.5 * d * d * curv, 0.5 * s * d * curv);
            add("scalar_Y", 0.5 * (d * vaX - s * vsX) * Yp, 0.5 * (s * vaX - a * vsX) * Yp);
            add("scalar_X", 0.5 * (s * hdY - d * hsY) * Xp, 0.5 * (a * hdY - s * hsY) * Xp);
            add("gradient", 0.5 * gXY * pd.hgs, 0.5 * gXY * pd.vgs);
            break;
        }
        case LiftKind::VV: {
            const double vdX = vderiv(pd, pd.dd, Xp), vsX = vderiv(pd, pd.ds, Xp);
            const double vdY = vderiv(pd, pd.dd, Yp), vsY = vderiv(pd, pd.ds, Yp);
            add("scalar_Y", 0.5 * (s * vdX - d * vsX) * Yp, 0.5 * (a * vdX - s * vsX) * Yp);
            add("scalar_X", 0.5 * (s * vdY - d * vsY) * Xp, 0.5 * (a * vdY - s * vsY) * Xp);
            add("gradient", -0.5 * gXY * pd.hgd, -0.5 * gXY * pd.vgd);
            break;
        }
    }

    TMVector sum;
    sum.at = at;
    sum.dx = Vec::Zero(n);
    sum.dy = Vec::Zero(n);
    for (const auto& [label, t] : cv.terms) {
        sum.dx += t.dx;
        sum.dy += t.dy;
    }
    cv.result = sum;
    return cv;
}

TMVector koszul_oracle(const TangentMetric& m, const TMVectorField& F, const TMVectorField& G,
                       const TMPoint& at) {
    m.chart.require_inside(at.x);
    const int n = m.chart.dim;
    const int dim = 2 * n;
    const Vec c0 = at.coords();

    auto fcomp = [&](const Vec& xy) -> Vec {
        const TMPoint q = TMPoint::from_coords(xy);
        m.chart.require_inside(q.x);
        return F(q).components();
    };
    auto gcomp = [&](const Vec& xy) -> Vec {
        const TMPoint q = TMPoint::from_coords(xy);
        m.chart.require_inside(q.x);
        return G(q).components();
    };
    auto mg = [&](const Vec& xy) -> Vec {
        const TMPoint q = TMPoint::from_coords(xy);
        m.chart.require_inside(q.x);
        return Vec(metric_matrix(m, q) * G(q).components());
    };
    auto mf = [&](const Vec& xy) -> Vec {
        const TMPoint q = TMPoint::from_coords(xy);
        m.chart.require_inside(q.x);
        return Vec(metric_matrix(m, q) * F(q).components());
    };
    auto fmg = [&](const Vec& xy) -> double {
        const TMPoint q = TMPoint::from_coords(xy);
        m.chart.require_inside(q.x);
        const Vec fc = F(q).components();
        const Vec gc = G(q).components();
        return fc.dot(metric_matrix(m, q) * gc);
    };

    const Vec F0 = fcomp(c0);
    const Vec G0 = gcomp(c0);
    const Mat M0 = metric_matrix(m, at);

    // Jacobians of F and G once; [F, e_a] = -d_a F for constant frames.
    Mat jacF(dim, dim), jacG(dim, dim);
    for (int a = 0; a < dim; ++a) {
        jacF.col(a) = fd::partial_vec(fcomp, c0, a);
        jacG.col(a) = fd::partial_vec(gcomp, c0, a);
    }

    Vec rhs = Vec::Zero(dim);
    rhs += fd::directional_vec(mg, c0, F0);  // F[g(G, e_a)]
    rhs += fd::directional_vec(mf, c0, G0);  // G[g(F, e_a)]
    for (int a = 0; a < dim; ++a) rhs[a] -= fd::partial(fmg, c0, a);  // e_a[g(F,G)]

    // [F,G] from the Jacobians already in hand.
    const Vec bracket = jacG * F0 - jacF * G0;
    rhs += M0 * bracket;
    rhs += jacF.transpose() * (M0 * G0);  // -g([F,e_a],G)
    rhs += jacG.transpose() * (M0 * F0);  // -g([G,e_a],F)

    const Vec w = metric_solve(m, at, 0.5 * rhs);
    TMVector out;
    out.at = at;
    out.dx = w.head(n);
    out.dy = w.tail(n);
    return out;
}

}  // namespace isotm
