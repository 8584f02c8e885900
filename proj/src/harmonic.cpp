#include "isotm/harmonic.hpp"

#include <cmath>

#include "isotm/batch.hpp"
#include "isotm/calculus.hpp"
#include "isotm/fd.hpp"

namespace isotm {

TMVector pushforward(const RiemannianChart& chart, const VectorFieldOnM& X, const Vec& V,
                     const Vec& p) {
    chart.require_inside(p);
    TMPoint at;
    at.x = p;
    at.y = X.value(p);
    const TMVector h = horizontal_lift(chart, V, at);
    const TMVector v = vertical_lift(chart, covariant_derivative(chart, X, V, p), at);
    TMVector out;
    out.at = at;
    out.dx = h.dx + v.dx;
    out.dy = h.dy + v.dy;
    return out;
}

QuadratureRegion QuadratureRegion::of_chart(const RiemannianChart& chart) {
    QuadratureRegion r;
    r.lo = chart.box_lo;
    r.hi = chart.box_hi;
    r.ball_radius = chart.ball_radius;
    return r;
}

bool QuadratureRegion::contains(const Vec& x) const {
    for (int i = 0; i < x.size(); ++i)
        if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
    if (std::isfinite(ball_radius) && x.norm() > ball_radius) return false;
    return true;
}

namespace {

// Deterministic lexicographic walk over midpoint cells.
Vec cell_center(const QuadratureRegion& region, int grid, long long flat, int n) {
    Vec x(n);
    long long rest = flat;
    for (int i = n - 1; i >= 0; --i) {
        const long long idx = rest % grid;
        rest /= grid;
        const double h = (region.hi[i] - region.lo[i]) / grid;
        x[i] = region.lo[i] + (idx + 0.5) * h;
    }
    return x;
}

double cell_volume(const QuadratureRegion& region, int grid, int n) {
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= (region.hi[i] - region.lo[i]) / grid;
    return v;
}

long long cell_count(int grid, int n) {
    long long c = 1;
    for (int i = 0; i < n; ++i) c *= grid;
    return c;
}

double sphere_surface(int n) {
    // vol(S^{n-1}) = 2 pi^{n/2} / Gamma(n/2)
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace

double sphere_cap_volume(int n, double radius) {
    if (!std::isfinite(radius)) return 0.0;
    // The chart ball |x| <= R covers polar angles up to
    // theta_b = acos((1-R^2)/(1+R^2)); the missing cap is [theta_b, pi].
    const double cosb = (1.0 - radius * radius) / (1.0 + radius * radius);
    const double theta_b = std::acos(cosb);
    const int steps = 20000;
    const double h = (M_PI - theta_b) / steps;
    auto f = [n](double t) { return std::pow(std::sin(t), n - 1); };
    double acc = f(theta_b) + f(M_PI);
    for (int i = 1; i < steps; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(theta_b + i * h);
    return sphere_surface(n) * acc * h / 3.0;
}

EnergyReport energy(const TangentMetric& m, const VectorFieldOnM& X,
                    const QuadratureRegion& region, int grid) {
    const int n = m.chart.dim;
    const auto chart = m.chart;
    const auto structure = m.structure;
    auto density = [chart, structure, X, n](const Vec& p) {
        chart.require_inside(p);
        TMPoint at;
        at.x = p;
        at.y = X.value(p);
        const double a = structure.alpha_at(at);
        const double d = structure.delta_at(at);
        const double s = structure.sigma_at(at);
        const double div = s == 0.0 ? 0.0 : divergence(chart, X, p);
        return 0.5 * (n * a - 2.0 * s * div + d * grad_norm_sq(chart, X, p));
    };

    EnergyReport report;
    report.density = density;
    report.grid = grid;

    const long long cells = cell_count(grid, n);
    const double vol = cell_volume(region, grid, n);
    std::vector<double> values;
    batch::map(
        static_cast<std::size_t>(cells),
        [&](std::size_t flat) -> double {
            const Vec x = cell_center(region, grid, static_cast<long long>(flat), n);
            if (!region.contains(x) || !m.chart.contains(x)) return 0.0;
            const double w = std::sqrt(m.chart.metric(x).determinant());
            return density(x) * w * vol;
        },
        values);
    report.total = batch::sum_ordered(values);
    long long used = 0;
    for (double v : values)
        if (v != 0.0) ++used;
    report.cells_used = used;

    report.total_with_cap = report.total;
    const bool unit_sphere = m.chart.constant_curvature &&
                             std::abs(*m.chart.constant_curvature - 1.0) < 1e-12 &&
                             std::isfinite(region.ball_radius);
    if (unit_sphere) {
        report.cap_volume = sphere_cap_volume(n, region.ball_radius);
        // boundary density estimate from the axis points just inside the rim
        double mean = 0.0;
        for (int i = 0; i < 2 * n; ++i) {
            Vec x = Vec::Zero(n);
            x[i % n] = (i < n ? 1.0 : -1.0) * region.ball_radius * 0.999;
            mean += density(x);
        }
        mean /= 2.0 * n;
        report.cap_correction = report.cap_volume * mean;
        report.total_with_cap = report.total + report.cap_correction;
    }
    return report;
}

namespace {

struct TensionContext {
    int n = 0;
    TMPoint at;  // (p, X(p))
    Mat g;
    double a = 0.0, d = 0.0, s = 0.0;
    Mat frame;
    std::vector<Vec> W;
    double div_x = 0.0, gnsq = 0.0;
    Vec laplacian;
    Vec ric_u, t_r;
    Vec x1, x2, y1, y2, z1, z2;
    Vec t_av, t_sv, t_aw, t_dw, t_sw;
};

TensionContext tension_context(const TangentMetric& m, const VectorFieldOnM& X, const Vec& p,
                               const std::vector<int>& frame_order = {}) {
    m.chart.require_inside(p);
    TensionContext c;
    const int n = c.n = m.chart.dim;
    c.at.x = p;
    c.at.y = X.value(p);
    c.g = m.chart.metric_checked(p);
    c.a = m.structure.alpha_at(c.at);
    c.d = m.structure.delta_at(c.at);
    c.s = m.structure.sigma_at(c.at);

    c.frame = orthonormal_frame(m.chart, p, frame_order);
    c.W.resize(n);
    for (int i = 0; i < n; ++i) {
        c.W[i] = covariant_derivative(m.chart, X, c.frame.col(i), p);
        c.div_x += c.W[i].dot(c.g * c.frame.col(i));
        c.gnsq += c.W[i].dot(c.g * c.W[i]);
    }
    c.laplacian = rough_laplacian(m.chart, X, p, frame_order);

    const auto R = riemann(m.chart, p);
    c.ric_u = Vec::Zero(n);
    c.t_r = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
        c.ric_u += riemann_apply(R, c.at.y, c.frame.col(i), c.frame.col(i));
        c.t_r += riemann_apply(R, c.at.y, c.W[i], c.frame.col(i));
    }

    const Vec da = m.structure.alpha_grad(m.chart, c.at);
    const Vec dd = m.structure.delta_grad(m.chart, c.at);
    const Vec ds = m.structure.sigma_grad(m.chart, c.at);

    auto split = [&](const Vec& df, Vec& h, Vec& v) {
        const Vec w = metric_solve(m, c.at, df);
        TMVector t;
        t.at = c.at;
        t.dx = w.head(n);
        t.dy = w.tail(n);
        h = projection(t);
        v = connection_map(m.chart, t);
    };
    split(da, c.x1, c.x2);
    split(dd, c.y1, c.y2);
    split(ds, c.z1, c.z2);

    c.t_av = Vec::Zero(n);
    c.t_sv = Vec::Zero(n);
    c.t_aw = Vec::Zero(n);
    c.t_dw = Vec::Zero(n);
    c.t_sw = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
        const double wa = da.tail(n).dot(c.W[i]);
        const double wd = dd.tail(n).dot(c.W[i]);
        const double ws = ds.tail(n).dot(c.W[i]);
        c.t_av += wa * c.frame.col(i);
        c.t_sv += ws * c.frame.col(i);
        c.t_aw += wa * c.W[i];
        c.t_dw += wd * c.W[i];
        c.t_sw += ws * c.W[i];
    }
    return c;
}

TensionReport assemble_report(const RiemannianChart& chart, const TMPoint& at, const Vec& h,
                              const Vec& v, const std::string& source) {
    TensionReport r;
    r.horizontal = h;
    r.vertical = v;
    const TMVector th = horizontal_lift(chart, h, at);
    const TMVector tv = vertical_lift(chart, v, at);
    r.assembled.at = at;
    r.assembled.dx = th.dx + tv.dx;
    r.assembled.dy = th.dy + tv.dy;
    r.source = source;
    return r;
}

void require_unit(const TangentMetric& m, const VectorFieldOnM& X, const Vec& p) {
    const Vec xp = X.value(p);
    const double norm2 = xp.dot(m.chart.metric(p) * xp);
    if (std::abs(norm2 - 1.0) > 1e-9)
        throw NotUnitFieldError("field is not a unit field at the requested point");
}

void require_sigma_zero(const TangentMetric& m) {
    if (!m.structure.sigma_zero)
        throw SigmaNotZeroError("operation requires a structure with sigma == 0");
}

}  // namespace

TensionReport tension_closed(const TangentMetric& m, const VectorFieldOnM& X, const Vec& p) {
    if (!m.structure.sigma_zero && !m.structure.has_jets())
        throw JetRequiredError("tension with sigma != 0 requires analytic structure jets");
    const TensionContext c = tension_context(m, X, p);
    const int n = c.n;
    const double a = c.a, d = c.d, s = c.s;

    const Vec cdir = s * (a * c.y1 - s * c.y2) - d * (a * c.z1 - s * c.z2);
    const Vec edir = a * (a * c.y1 - s * c.y2) - s * (a * c.z1 - s * c.z2);

    Vec tau_h = -s * d * c.ric_u;
    tau_h += d * (a * c.x1 - s * c.x2) - s * (a * c.z1 - s * c.z2);
    tau_h += -(0.5 * n) * c.x1 - 0.5 * c.gnsq * c.y1 + c.div_x * c.z1;
    tau_h += d * d * c.t_r;
    tau_h += covariant_derivative(m.chart, X, cdir, p);
    tau_h += d * c.t_av - s * c.t_sv;
    tau_h += s * c.t_dw - d * c.t_sw;

    Vec tau_v = -s * s * c.ric_u;
    tau_v += s * (a * c.x1 - s * c.x2) - a * (a * c.z1 - s * c.z2);
    tau_v += -(0.5 * n) * c.x2 - 0.5 * c.gnsq * c.y2 + c.div_x * c.z2;
    tau_v += -c.laplacian + s * d * c.t_r;
    tau_v += covariant_derivative(m.chart, X, edir, p);
    tau_v += s * c.t_av - a * c.t_sv;
    tau_v += a * c.t_dw - s * c.t_sw;

    return assemble_report(m.chart, c.at, tau_h, tau_v, "closed_form");
}

TensionReport tension_sigma0(const TangentMetric& m, const VectorFieldOnM& X, const Vec& p) {
    require_sigma_zero(m);
    const TensionContext c = tension_context(m, X, p);
    const int n = c.n;
    const double a = c.a;

    const Vec tau_h =
        (1.0 - 0.5 * n + 0.5 * c.gnsq / (a * a)) * c.x1 + c.t_r / (a * a) + c.t_av / a;
    const Vec tau_v = -c.laplacian - covariant_derivative(m.chart, X, c.x1, p) - c.t_aw / a +
                      (0.5 * c.gnsq / (a * a) - 0.5 * n) * c.x2;

    return assemble_report(m.chart, c.at, tau_h, tau_v, "closed_form");
}

TensionReport tension_oracle(const TangentMetric& m, const VectorFieldOnM& X, const Vec& p,
                             const std::vector<int>& frame_order) {
    m.chart.require_inside(p);
    const int n = m.chart.dim;
    TMPoint at;
    at.x = p;
    at.y = X.value(p);

    const Mat frame = orthonormal_frame(m.chart, p, frame_order);
    Vec acc = Vec::Zero(2 * n);
    for (int i = 0; i < n; ++i) {
        const VectorFieldOnM Vi = frame_field(m.chart, i, frame_order);
        const auto chart = m.chart;
        TMVectorField Fi = [chart, X, Vi](const TMPoint& q) {
            const Vec v = Vi.value(q.x);
            const TMVector h = horizontal_lift(chart, v, q);
            const TMVector vx = vertical_lift(chart, covariant_derivative(chart, X, v, q.x), q);
            TMVector out;
            out.at = q;
            out.dx = h.dx + vx.dx;
            out.dy = h.dy + vx.dy;
            return out;
        };
        acc += koszul_oracle(m, Fi, Fi, at).components();

        const Vec dvv = covariant_derivative(m.chart, Vi, frame.col(i), p);
        const TMVector push_h = horizontal_lift(m.chart, dvv, at);
        const TMVector push_v =
            vertical_lift(m.chart, covariant_derivative(m.chart, X, dvv, p), at);
        acc -= push_h.components() + push_v.components();
    }

    TMVector tau;
    tau.at = at;
    tau.dx = acc.head(n);
    tau.dy = acc.tail(n);
    TensionReport r;
    r.horizontal = projection(tau);
    r.vertical = connection_map(m.chart, tau);
    r.assembled = tau;
    r.source = "oracle";
    return r;
}

TensionReport tension(const TangentMetric& m, const VectorFieldOnM& X, const Vec& p,
                      TensionSource source) {
    if (source == TensionSource::Oracle) return tension_oracle(m, X, p);
    if (m.structure.sigma_zero) return tension_sigma0(m, X, p);
    return tension_closed(m, X, p);
}

Tau1Report tau1(const TangentMetric& m, const VectorFieldOnM& X, const Vec& p,
                TensionSource source) {
    require_sigma_zero(m);
    require_unit(m, X, p);

    const TensionReport tau = tension(m, X, p, source);
    const TMVector N = unit_normal(m, tau.assembled.at);
    const double coeff = metric_eval(m, tau.assembled, N);

    Tau1Report out;
    out.projected.assembled.at = tau.assembled.at;
    out.projected.assembled.dx = tau.assembled.dx - coeff * N.dx;
    out.projected.assembled.dy = tau.assembled.dy - coeff * N.dy;
    out.projected.horizontal = projection(out.projected.assembled);
    out.projected.vertical = connection_map(m.chart, out.projected.assembled);
    out.projected.source = tau.source;

    // Expanded vertical part: tau_v - g(tau_v, X) X with g(Delta X, X)
    // replaced by |nabla X|^2 (valid for unit fields).
    const TensionContext c = tension_context(m, X, p);
    const double s2 = 0.5 * c.gnsq / (c.a * c.a);
    const double gx2x = c.x2.dot(c.g * c.at.y);
    const double gtv = -c.gnsq + (s2 - 0.5 * c.n) * gx2x;
    out.vertical_expanded = tau.vertical - gtv * c.at.y;
    out.form_gap = (out.projected.vertical - out.vertical_expanded).lpNorm<Eigen::Infinity>();
    return out;
}

HarmonicityVerdict harmonic_unit_residual(const TangentMetric& m, const VectorFieldOnM& X,
                                          const Vec& p, TensionSource source) {
    require_sigma_zero(m);
    require_unit(m, X, p);

    HarmonicityVerdict verdict;
    if (source == TensionSource::Oracle) {
        // adjudicated route: residual = vertical part of tau_1 from the oracle
        const auto t1 = tau1(m, X, p, TensionSource::Oracle);
        verdict.residual_norm = t1.projected.vertical.lpNorm<Eigen::Infinity>();
        verdict.breakdown.emplace_back("tau1_vertical", t1.projected.vertical);
    } else {
        const TensionContext c = tension_context(m, X, p);
        const double a = c.a;
        const double s2 = 0.5 * c.gnsq / (a * a);
        const double gx2x = c.x2.dot(c.g * c.at.y);

        const Vec lhs = c.laplacian;
        const Vec term_x = (c.gnsq + (0.5 * c.n - s2) * gx2x) * c.at.y;
        const Vec term_x2 = (s2 - 0.5 * c.n) * c.x2;
        const Vec term_nabla = -covariant_derivative(m.chart, X, c.x1, p);
        const Vec term_trace = -c.t_aw / a;
        const Vec residual = lhs - term_x - term_x2 - term_nabla - term_trace;

        verdict.residual_norm = residual.lpNorm<Eigen::Infinity>();
        verdict.breakdown.emplace_back("laplacian", lhs);
        verdict.breakdown.emplace_back("coefficient_of_X", term_x);
        verdict.breakdown.emplace_back("coefficient_of_X2", term_x2);
        verdict.breakdown.emplace_back("nabla_X1_X", term_nabla);
        verdict.breakdown.emplace_back("alpha_trace", term_trace);
        verdict.breakdown.emplace_back("residual", residual);
    }

    verdict.tolerance = 1e-4;
    if (verdict.residual_norm <= 1e-4)
        verdict.verdict = HarmonicVerdictKind::Harmonic;
    else if (verdict.residual_norm > 1e-2)
        verdict.verdict = HarmonicVerdictKind::NotHarmonic;
    else
        verdict.verdict = HarmonicVerdictKind::Inconclusive;
    return verdict;
}

ParallelCheckReport parallel_field_check(const TangentMetric& m, const VectorFieldOnM& X,
                                         const Vec& p, double tol) {
    require_sigma_zero(m);
    require_unit(m, X, p);
    if (grad_norm_sq(m.chart, X, p) > 1e-16)
        throw NotParallelError("field is not parallel at the requested point");

    const TensionContext c = tension_context(m, X, p);
    ParallelCheckReport r;
    const double coeff = std::abs(1.0 - 0.5 * c.n);
    r.condition1 = coeff * std::sqrt(c.x1.dot(c.g * c.x1));
    const Vec tang = c.x2 - (c.x2.dot(c.g * c.at.y)) * c.at.y;
    r.condition2 = std::sqrt(tang.dot(c.g * tang));
    r.harmonic_map = r.condition1 <= tol && r.condition2 <= tol;
    return r;
}

FirstVariationReport first_variation_check(const TangentMetric& m, const VectorFieldOnM& X,
                                           const VectorFieldOnM& V,
                                           const QuadratureRegion& region, int grid,
                                           double t_step, TensionSource source) {
    require_sigma_zero(m);
    const int n = m.chart.dim;

    const long long cells = cell_count(grid, n);
    for (long long i = 0; i < cells; ++i) {
        const Vec x = cell_center(region, grid, i, n);
        if (!region.contains(x) || !m.chart.contains(x)) continue;
        const Mat g = m.chart.metric(x);
        if (std::abs(V.value(x).dot(g * X.value(x))) > 1e-9)
            throw NotOrthogonalError("variation field is not orthogonal to X on the region");
    }

    const auto chart = m.chart;
    auto unit_variation = [chart, X, V](double t) {
        VectorFieldOnM u;
        u.value = [chart, X, V, t](const Vec& x) -> Vec {
            const Vec w = X.value(x) + t * V.value(x);
            const double norm = std::sqrt(w.dot(chart.metric(x) * w));
            return w / norm;
        };
        return u;
    };

    auto energy_at = [&](double t) { return energy(m, unit_variation(t), region, grid).total; };

    // Richardson-extrapolated central difference in t.
    const double d1 = (energy_at(t_step) - energy_at(-t_step)) / (2.0 * t_step);
    const double d2 = (energy_at(0.5 * t_step) - energy_at(-0.5 * t_step)) / t_step;
    FirstVariationReport r;
    r.lhs = (4.0 * d2 - d1) / 3.0;

    const double vol = cell_volume(region, grid, n);
    std::vector<double> values;
    batch::map(
        static_cast<std::size_t>(cells),
        [&](std::size_t flat) -> double {
            const Vec x = cell_center(region, grid, static_cast<long long>(flat), n);
            if (!region.contains(x) || !m.chart.contains(x)) return 0.0;
            const auto t1 = tau1(m, X, x, source);
            const TMVector vv = vertical_lift(m.chart, V.value(x), t1.projected.assembled.at);
            const double w = std::sqrt(m.chart.metric(x).determinant());
            return -metric_eval(m, vv, t1.projected.assembled) * w * vol;
        },
        values);
    r.rhs = batch::sum_ordered(values);

    const double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
    r.rel_gap = scale > 1e-12 ? std::abs(r.lhs - r.rhs) / scale : 0.0;
    return r;
}

}  // namespace isotm
