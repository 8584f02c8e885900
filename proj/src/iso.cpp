#include "isotm/iso.hpp"

#include <cmath>
#include <sstream>

#include "isotm/calculus.hpp"
#include "isotm/fd.hpp"

namespace isotm {

double fiber_energy(const RiemannianChart& chart, const TMPoint& at) {
    return 0.5 * at.y.dot(chart.metric(at.x) * at.y);
}

Vec fiber_energy_grad(const RiemannianChart& chart, const TMPoint& at) {
    const int n = chart.dim;
    Vec grad(2 * n);
    if (chart.metric_d1) {
        const Tensor3 dg = chart.metric_d1(at.x);
        for (int k = 0; k < n; ++k) grad[k] = 0.5 * at.y.dot(dg[k] * at.y);
    } else {
        for (int k = 0; k < n; ++k) {
            auto f = [&](const Vec& x) { return 0.5 * at.y.dot(chart.metric(x) * at.y); };
            grad[k] = fd::partial(f, at.x, k);
        }
    }
    grad.tail(n) = chart.metric(at.x) * at.y;
    return grad;
}

double IsotropicStructure::delta_at(const TMPoint& at) const {
    const double d = delta(at);
    if (!(d > 0.0)) throw DomainError("delta not positive at the requested point");
    return d;
}

double IsotropicStructure::sigma_at(const TMPoint& at) const {
    if (sigma_zero || !sigma) return 0.0;
    return sigma(at);
}

double IsotropicStructure::alpha_at(const TMPoint& at) const {
    const double d = delta_at(at);
    const double s = sigma_at(at);
    return (1.0 + s * s) / d;
}

namespace {

Vec fd_grad_tm(const RiemannianChart& chart, const std::function<double(const TMPoint&)>& f,
               const TMPoint& at) {
    const int n = chart.dim;
    Vec grad(2 * n);
    const Vec c0 = at.coords();
    auto eval = [&](const Vec& xy) {
        const TMPoint q = TMPoint::from_coords(xy);
        chart.require_inside(q.x);
        return f(q);
    };
    for (int i = 0; i < 2 * n; ++i) grad[i] = fd::partial(eval, c0, i);
    return grad;
}

}  // namespace

Vec IsotropicStructure::delta_grad(const RiemannianChart& chart, const TMPoint& at) const {
    if (delta_jet) return delta_jet(at);
    return fd_grad_tm(chart, delta, at);
}

Vec IsotropicStructure::sigma_grad(const RiemannianChart& chart, const TMPoint& at) const {
    if (sigma_zero || !sigma) return Vec::Zero(2 * chart.dim);
    if (sigma_jet) return sigma_jet(at);
    return fd_grad_tm(chart, sigma, at);
}

Vec IsotropicStructure::alpha_grad(const RiemannianChart& chart, const TMPoint& at) const {
    // alpha = (1 + sigma^2)/delta, so d alpha = (2 sigma d sigma - alpha d delta)/delta.
    const double d = delta_at(at);
    const double s = sigma_at(at);
    const double a = (1.0 + s * s) / d;
    return (2.0 * s * sigma_grad(chart, at) - a * delta_grad(chart, at)) / d;
}

void IsotropicStructure::verify_jets(const RiemannianChart& chart, const TMPoint& at) const {
    if (!has_jets()) return;
    const Vec dj = delta_jet(at);
    const Vec df = fd_grad_tm(chart, delta, at);
    const double dscale = std::max(1.0, dj.lpNorm<Eigen::Infinity>());
    if ((dj - df).lpNorm<Eigen::Infinity>() / dscale > 1e-6) {
        std::ostringstream os;
        os << "delta jet disagrees with finite differences: jet [" << dj.transpose()
           << "] vs fd [" << df.transpose() << "]";
        throw JetMismatchError(os.str());
    }
    if (!sigma_zero && sigma_jet) {
        const Vec sj = sigma_jet(at);
        const Vec sf = fd_grad_tm(chart, sigma, at);
        const double sscale = std::max(1.0, sj.lpNorm<Eigen::Infinity>());
        if ((sj - sf).lpNorm<Eigen::Infinity>() / sscale > 1e-6) {
            std::ostringstream os;
            os << "sigma jet disagrees with finite differences: jet [" << sj.transpose()
               << "] vs fd [" << sf.transpose() << "]";
            throw JetMismatchError(os.str());
        }
    }
}

IsotropicStructure sasaki_structure() {
    IsotropicStructure s;
    s.delta = [](const TMPoint&) { return 1.0; };
    s.sigma_zero = true;
    s.delta_jet = [](const TMPoint& at) { return Vec::Zero(2 * at.dim()); };
    s.radial = true;
    s.delta_of_r2 = [](double) { return 1.0; };
    s.sigma_of_r2 = [](double) { return 0.0; };
    return s;
}

IsotropicStructure family_sigma0(const RiemannianChart& chart, double k, double b) {
    IsotropicStructure s;
    auto t_of = [chart, k, b](const TMPoint& at) {
        const double t = 2.0 * k * fiber_energy(chart, at) + b;
        if (!(t > 0.0)) throw DomainError("2kE + b not positive; family undefined here");
        return t;
    };
    s.delta = [t_of](const TMPoint& at) { return 1.0 / std::sqrt(t_of(at)); };
    s.sigma_zero = true;
    s.delta_jet = [chart, k, t_of](const TMPoint& at) -> Vec {
        const double t = t_of(at);
        return -k * std::pow(t, -1.5) * fiber_energy_grad(chart, at);
    };
    s.radial = true;
    s.delta_of_r2 = [k, b](double r2) {
        const double t = k * r2 + b;
        if (!(t > 0.0)) throw DomainError("k r^2 + b not positive");
        return 1.0 / std::sqrt(t);
    };
    s.sigma_of_r2 = [](double) { return 0.0; };
    return s;
}

IsotropicStructure family_general(const RiemannianChart& chart, double k, double a, double b) {
    if (a == 0.0) throw ParameterError("family_general requires a != 0");
    auto u_of = [chart, k, a, b](const TMPoint& at) {
        const double t = 2.0 * k * fiber_energy(chart, at) + b;
        const double w = std::sqrt(t * t + 4.0 * a * a * k * k);
        const double u = 0.5 * (t + w);
        if (!(u > 0.0)) throw DomainError("delta^-2 not positive; family undefined here");
        return u;
    };
    IsotropicStructure s;
    s.delta = [u_of](const TMPoint& at) { return 1.0 / std::sqrt(u_of(at)); };
    s.sigma = [u_of, a, k](const TMPoint& at) { return a * k / u_of(at); };
    auto du_of = [chart, k, a, b](const TMPoint& at) -> Vec {
        const double t = 2.0 * k * fiber_energy(chart, at) + b;
        const double w = std::sqrt(t * t + 4.0 * a * a * k * k);
        const double factor = (w > 0.0) ? k * (1.0 + t / w) : k;
        return factor * fiber_energy_grad(chart, at);
    };
    s.delta_jet = [u_of, du_of](const TMPoint& at) -> Vec {
        const double u = u_of(at);
        return -0.5 * std::pow(u, -1.5) * du_of(at);
    };
    s.sigma_jet = [u_of, du_of, a, k](const TMPoint& at) -> Vec {
        const double u = u_of(at);
        return -(a * k / (u * u)) * du_of(at);
    };
    s.radial = true;
    s.delta_of_r2 = [k, a, b](double r2) {
        const double t = k * r2 + b;
        const double w = std::sqrt(t * t + 4.0 * a * a * k * k);
        const double u = 0.5 * (t + w);
        if (!(u > 0.0)) throw DomainError("delta^-2 not positive");
        return 1.0 / std::sqrt(u);
    };
    s.sigma_of_r2 = [k, a, b](double r2) {
        const double t = k * r2 + b;
        const double w = std::sqrt(t * t + 4.0 * a * a * k * k);
        return a * k / (0.5 * (t + w));
    };
    return s;
}

IsotropicStructure custom_structure(std::function<double(const TMPoint&)> delta,
                                    std::function<double(const TMPoint&)> sigma,
                                    std::function<Vec(const TMPoint&)> delta_jet,
                                    std::function<Vec(const TMPoint&)> sigma_jet) {
    IsotropicStructure s;
    s.delta = std::move(delta);
    s.sigma = std::move(sigma);
    s.sigma_zero = !s.sigma;
    s.delta_jet = std::move(delta_jet);
    s.sigma_jet = std::move(sigma_jet);
    return s;
}

TMVector apply_J(const IsotropicStructure& s, const RiemannianChart& chart, const TMVector& A) {
    const double d = s.delta_at(A.at);
    const double sg = s.sigma_at(A.at);
    const double a = (1.0 + sg * sg) / d;
    const Vec X = projection(A);
    const Vec Z = connection_map(chart, A);
    const TMVector h = horizontal_lift(chart, sg * X - d * Z, A.at);
    const TMVector v = vertical_lift(chart, a * X - sg * Z, A.at);
    TMVector out;
    out.at = A.at;
    out.dx = h.dx + v.dx;
    out.dy = h.dy + v.dy;
    return out;
}

TMVector nijenhuis(const IsotropicStructure& s, const RiemannianChart& chart, const TMPoint& at,
                   const TMVector& A, const TMVector& B) {
    auto Af = constant_extension(A);
    auto Bf = constant_extension(B);
    TMVectorField JA = [&s, &chart, Af](const TMPoint& q) { return apply_J(s, chart, Af(q)); };
    TMVectorField JB = [&s, &chart, Bf](const TMPoint& q) { return apply_J(s, chart, Bf(q)); };

    const TMVector t1 = bracket_fd(chart, JA, JB, at);
    const TMVector t2 = apply_J(s, chart, bracket_fd(chart, JA, Bf, at));
    const TMVector t3 = apply_J(s, chart, bracket_fd(chart, Af, JB, at));
    const TMVector t4 = bracket_fd(chart, Af, Bf, at);

    TMVector out;
    out.at = at;
    out.dx = t1.dx - t2.dx - t3.dx - t4.dx;
    out.dy = t1.dy - t2.dy - t3.dy - t4.dy;
    return out;
}

double nijenhuis_max_component(const IsotropicStructure& s, const RiemannianChart& chart,
                               const TMPoint& at) {
    const int n = chart.dim;
    double worst = 0.0;
    for (int i = 0; i < 2 * n; ++i)
        for (int j = i + 1; j < 2 * n; ++j) {
            TMVector a, b;
            a.at = b.at = at;
            a.dx = Vec::Zero(n);
            a.dy = Vec::Zero(n);
            b.dx = Vec::Zero(n);
            b.dy = Vec::Zero(n);
            if (i < n)
                a.dx[i] = 1.0;
            else
                a.dy[i - n] = 1.0;
            if (j < n)
                b.dx[j] = 1.0;
            else
                b.dy[j - n] = 1.0;
            const TMVector nij = nijenhuis(s, chart, at, a, b);
            worst = std::max(worst, nij.components().lpNorm<Eigen::Infinity>());
        }
    return worst;
}

IntegrabilityVerdict integrability_verdict(double max_residual, double tol_low, double tol_high) {
    if (max_residual <= tol_low) return IntegrabilityVerdict::Integrable;
    if (max_residual > tol_high) return IntegrabilityVerdict::NotIntegrable;
    return IntegrabilityVerdict::Inconclusive;
}

CVec ComplexFieldZ::dx_at(const Vec& x, const Vec& y) const {
    if (dz_dx) return dz_dx(x, y);
    const int n = static_cast<int>(x.size());
    CVec out(n);
    for (int l = 0; l < n; ++l) {
        auto re = [&](const Vec& xs) { return z(xs, y).real(); };
        auto im = [&](const Vec& xs) { return z(xs, y).imag(); };
        out[l] = Cplx(fd::partial(re, x, l), fd::partial(im, x, l));
    }
    return out;
}

CVec ComplexFieldZ::dy_at(const Vec& x, const Vec& y) const {
    if (dz_dy) return dz_dy(x, y);
    const int n = static_cast<int>(y.size());
    CVec out(n);
    for (int l = 0; l < n; ++l) {
        auto re = [&](const Vec& ys) { return z(x, ys).real(); };
        auto im = [&](const Vec& ys) { return z(x, ys).imag(); };
        out[l] = Cplx(fd::partial(re, y, l), fd::partial(im, y, l));
    }
    return out;
}

ComplexFieldZ z_from_structure(const IsotropicStructure& s) {
    ComplexFieldZ zf;
    zf.z = [s](const Vec& x, const Vec& y) -> Cplx {
        TMPoint at{x, y};
        const double d = s.delta_at(at);
        return Cplx(s.sigma_at(at) / d, 1.0 / d);
    };
    if (s.has_jets()) {
        // u = sigma/delta, v = 1/delta:
        // du = (delta dsigma - sigma ddelta)/delta^2, dv = -ddelta/delta^2.
        auto grad = [s](const Vec& x, const Vec& y, bool xpart) -> CVec {
            TMPoint at{x, y};
            const int n = static_cast<int>(x.size());
            const double d = s.delta_at(at);
            const double sg = s.sigma_at(at);
            const Vec dd = s.delta_jet(at);
            const Vec ds =
                (s.sigma_zero || !s.sigma_jet) ? Vec(Vec::Zero(2 * n)) : Vec(s.sigma_jet(at));
            const Vec du = (d * ds - sg * dd) / (d * d);
            const Vec dv = -dd / (d * d);
            CVec out(n);
            for (int i = 0; i < n; ++i) {
                const int idx = xpart ? i : n + i;
                out[i] = Cplx(du[idx], dv[idx]);
            }
            return out;
        };
        zf.dz_dx = [grad](const Vec& x, const Vec& y) { return grad(x, y, true); };
        zf.dz_dy = [grad](const Vec& x, const Vec& y) { return grad(x, y, false); };
    }
    return zf;
}

IsotropicStructure structure_from_z(const ComplexFieldZ& zf) {
    IsotropicStructure s;
    auto z = zf.z;
    auto eval = [z](const TMPoint& at) -> Cplx {
        const Cplx value = z(at.x, at.y);
        if (!(value.imag() > 0.0))
            throw DomainError("Im z must be positive to define a structure");
        return value;
    };
    s.delta = [eval](const TMPoint& at) { return 1.0 / eval(at).imag(); };
    s.sigma = [eval](const TMPoint& at) {
        const Cplx value = eval(at);
        return value.real() / value.imag();
    };
    if (zf.has_jets()) {
        auto dz_dx = zf.dz_dx;
        auto dz_dy = zf.dz_dy;
        auto pack = [](const CVec& dx, const CVec& dy, bool re) -> Vec {
            const int n = static_cast<int>(dx.size());
            Vec out(2 * n);
            for (int i = 0; i < n; ++i) {
                out[i] = re ? dx[i].real() : dx[i].imag();
                out[n + i] = re ? dy[i].real() : dy[i].imag();
            }
            return out;
        };
        s.delta_jet = [eval, dz_dx, dz_dy, pack](const TMPoint& at) -> Vec {
            const double v = eval(at).imag();
            const Vec dv = pack(dz_dx(at.x, at.y), dz_dy(at.x, at.y), false);
            return -dv / (v * v);
        };
        s.sigma_jet = [eval, dz_dx, dz_dy, pack](const TMPoint& at) -> Vec {
            const Cplx value = eval(at);
            const double u = value.real(), v = value.imag();
            const Vec du = pack(dz_dx(at.x, at.y), dz_dy(at.x, at.y), true);
            const Vec dv = pack(dz_dx(at.x, at.y), dz_dy(at.x, at.y), false);
            return (v * du - u * dv) / (v * v);
        };
    }
    return s;
}

ComplexFieldZ explicit_flat_z(int n) {
    ComplexFieldZ zf;
    zf.z = [](const Vec& x, const Vec& y) -> Cplx {
        const double q = 1.0 + x.squaredNorm();
        const double p = x.dot(y);
        const double D = q * (1.0 + y.squaredNorm()) - p * p;
        if (!(D > 0.0)) throw DomainError("explicit z undefined: discriminant not positive");
        return Cplx(p / q, std::sqrt(D) / q);
    };
    auto jets = [n](const Vec& x, const Vec& y, bool xpart) -> CVec {
        const double q = 1.0 + x.squaredNorm();
        const double r = 1.0 + y.squaredNorm();
        const double p = x.dot(y);
        const double D = q * r - p * p;
        if (!(D > 0.0)) throw DomainError("explicit z undefined: discriminant not positive");
        const double sq = std::sqrt(D);
        CVec out(n);
        for (int l = 0; l < n; ++l) {
            double du, dv;
            if (xpart) {
                du = (y[l] * q - 2.0 * p * x[l]) / (q * q);
                const double dD = 2.0 * x[l] * r - 2.0 * p * y[l];
                dv = (dD / (2.0 * sq) * q - sq * 2.0 * x[l]) / (q * q);
            } else {
                du = x[l] / q;
                const double dD = 2.0 * y[l] * q - 2.0 * p * x[l];
                dv = dD / (2.0 * sq * q);
            }
            out[l] = Cplx(du, dv);
        }
        return out;
    };
    zf.dz_dx = [jets](const Vec& x, const Vec& y) { return jets(x, y, true); };
    zf.dz_dy = [jets](const Vec& x, const Vec& y) { return jets(x, y, false); };
    return zf;
}

CVec flat_pde_residual(const ComplexFieldZ& zf, const Vec& x, const Vec& y) {
    const Cplx z0 = zf.z(x, y);
    const CVec dx = zf.dx_at(x, y);
    const CVec dy = zf.dy_at(x, y);
    return dx + z0 * dy;
}

Cplx sphere_pde_residual(const ComplexFieldZ& zf, const RiemannianChart& chart, const Vec& x,
                         const Vec& y, int s0) {
    if (!chart.conformal) throw ParameterError("sphere_pde_residual needs a conformal chart");
    const int n = chart.dim;
    if (s0 < 0 || s0 >= n) throw ParameterError("component index out of range");
    chart.require_inside(x);

    const double lambda = chart.conformal->lambda(x);
    Vec mu(n);
    if (chart.conformal->dlambda) {
        mu = chart.conformal->dlambda(x) / lambda;
    } else {
        auto lam = chart.conformal->lambda;
        for (int i = 0; i < n; ++i) mu[i] = fd::partial(lam, x, i) / lambda;
    }
    double k;
    if (chart.constant_curvature) {
        k = *chart.constant_curvature;
    } else {
        k = sectional(chart, x, Vec::Unit(n, 0), Vec::Unit(n, 1));
    }

    const Cplx z0 = zf.z(x, y);
    const CVec dzx = zf.dx_at(x, y);
    const CVec dzy = zf.dy_at(x, y);

    Cplx acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += dzy[i] * (y[s0] * mu[i] - mu[s0] * y[i]);
        acc -= dzy[s0] * y[i] * mu[i];
    }
    acc += dzx[s0] + z0 * dzy[s0];
    acc += k * y[s0] * lambda * lambda;
    return acc;
}

Cplx z_map(const IsotropicStructure& s, const TMPoint& at) {
    const double d = s.delta_at(at);
    return Cplx(s.sigma_at(at) / d, 1.0 / d);
}

CVec phi_map(const Vec& u, const Vec& v, Cplx z) {
    if (u.size() != v.size()) throw ParameterError("phi_map: size mismatch");
    if (std::abs(u.dot(u) - 1.0) > 1e-9) throw ParameterError("phi_map: u is not a unit vector");
    if (std::abs(u.dot(v)) > 1e-9) throw ParameterError("phi_map: v is not tangent (u.v != 0)");
    CVec out(u.size());
    for (int i = 0; i < u.size(); ++i) out[i] = Cplx(v[i], 0.0) - z * u[i];
    return out;
}

}  // namespace isotm
