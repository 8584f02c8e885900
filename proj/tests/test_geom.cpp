#include <doctest.h>

#include <cmath>

#include "isotm/calculus.hpp"
#include "isotm/chart.hpp"
#include "isotm/fd.hpp"
#include "isotm/hopf.hpp"
#include "isotm/rng.hpp"

using namespace isotm;

namespace {

Vec sample_point(Rng& rng, const RiemannianChart& chart, double shrink = 0.6) {
    for (;;) {
        Vec x(chart.dim);
        for (int i = 0; i < chart.dim; ++i)
            x[i] = rng.uniform(shrink * chart.box_lo[i], shrink * chart.box_hi[i]);
        if (chart.contains(x)) return x;
    }
}

double max_abs(const Tensor3& t) {
    double m = 0.0;
    for (const auto& mat : t) m = std::max(m, mat.cwiseAbs().maxCoeff());
    return m;
}

}  // namespace

TEST_CASE("christoffel symbols on flat and round charts") {
    Rng rng(42, "geom.christoffel");

    auto flat = euclidean(3);
    const Vec p = sample_point(rng, flat);
    CHECK(max_abs(christoffel(flat, p)) == 0.0);

    auto sphere = sphere_stereographic(2);
    const Vec origin = Vec::Zero(2);
    CHECK(max_abs(christoffel(sphere, origin)) < 1e-14);

    // FD evaluation against the conformal closed form coded independently.
    Vec q(2);
    q << 0.5, 0.0;
    const double s = 1.0 + q.squaredNorm();
    const Vec mu = (-2.0 / s) * q;
    const Tensor3 closed = christoffel_conformal(mu);
    const Tensor3 numeric = christoffel_fd(sphere, q);
    for (int k = 0; k < 2; ++k)
        CHECK((closed[k] - numeric[k]).cwiseAbs().maxCoeff() < 1e-8);

    // Lower-index symmetry holds exactly for both routes.
    for (int trial = 0; trial < 10; ++trial) {
        const Vec x = sample_point(rng, sphere);
        const Tensor3 g1 = christoffel(sphere, x);
        for (int k = 0; k < 2; ++k)
            CHECK((g1[k] - g1[k].transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("analytic metric jet agrees with finite differences") {
    Rng rng(42, "geom.jets");
    auto sphere = sphere_stereographic(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec p = sample_point(rng, sphere);
        const Tensor3 dg = sphere.metric_d1(p);
        for (int k = 0; k < 3; ++k) {
            Vec xp = p, xm = p;
            const double h = fd::step(p[k]);
            xp[k] += h;
            xm[k] -= h;
            const Mat fdk = (sphere.metric(xp) - sphere.metric(xm)) / (2.0 * h);
            const double scale = std::max(1.0, dg[k].cwiseAbs().maxCoeff());
            CHECK((dg[k] - fdk).cwiseAbs().maxCoeff() / scale < 1e-6);
        }
    }
}

TEST_CASE("curvature: space-form law, symmetries, ricci") {
    Rng rng(42, "geom.curvature");

    auto flat = euclidean(2);
    const Vec p0 = sample_point(rng, flat);
    const auto r0 = riemann(flat, p0);
    for (const auto& bl : r0)
        for (const auto& m : bl) CHECK(m.cwiseAbs().maxCoeff() < 1e-10);

    auto sphere2 = sphere_stereographic(2);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec p = sample_point(rng, sphere2);
        const Vec X = rng.uniform_vec(2, -1.0, 1.0);
        const Vec Y = rng.uniform_vec(2, -1.0, 1.0);
        CHECK(sectional(sphere2, p, X, Y) == doctest::Approx(1.0).epsilon(1e-4));
    }
    {
        const Vec p = sample_point(rng, flat);
        CHECK(std::abs(sectional(flat, p, Vec::Unit(2, 0), Vec::Unit(2, 1))) < 1e-8);
    }

    auto sphere3 = sphere_stereographic(3);
    for (int trial = 0; trial < 5; ++trial) {
        const Vec p = sample_point(rng, sphere3);
        const Mat ric = ricci(sphere3, p);
        const Mat g = sphere3.metric(p);
        CHECK((ric - 2.0 * g).cwiseAbs().maxCoeff() < 1e-6 * g.norm());

        // Antisymmetry in the first pair and the first Bianchi identity.
        const auto R = riemann(sphere3, p);
        const Vec X = rng.uniform_vec(3, -1.0, 1.0);
        const Vec Y = rng.uniform_vec(3, -1.0, 1.0);
        const Vec Z = rng.uniform_vec(3, -1.0, 1.0);
        CHECK((riemann_apply(R, X, Y, Z) + riemann_apply(R, Y, X, Z)).norm() < 1e-8);
        const Vec bianchi =
            riemann_apply(R, X, Y, Z) + riemann_apply(R, Y, Z, X) + riemann_apply(R, Z, X, Y);
        CHECK(bianchi.norm() < 1e-6);
    }
}

TEST_CASE("covariant derivative: examples and Levi-Civita properties") {
    Rng rng(42, "geom.nabla");

    auto flat = euclidean(2);
    const VectorFieldOnM c = constant_field(Vec::Unit(2, 0));
    const Vec p = sample_point(rng, flat);
    CHECK(covariant_derivative(flat, c, Vec::Unit(2, 1), p).norm() == 0.0);

    auto sphere = sphere_stereographic(2);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec q = sample_point(rng, sphere);
        const Vec cx = rng.uniform_vec(2, -1.0, 1.0);
        const Mat bx = Mat::Random(2, 2);
        const Vec cy = rng.uniform_vec(2, -1.0, 1.0);
        const Mat by = Mat::Random(2, 2);
        const VectorFieldOnM X = affine_field(cx, bx);
        const VectorFieldOnM Y = affine_field(cy, by);
        const Vec V = rng.uniform_vec(2, -1.0, 1.0);

        // jet vs FD evaluation
        VectorFieldOnM Xfd;
        Xfd.value = X.value;
        const Vec a = covariant_derivative(sphere, X, V, q);
        const Vec b = covariant_derivative(sphere, Xfd, V, q);
        CHECK((a - b).norm() < 1e-5 * std::max(1.0, a.norm()));

        // metric compatibility: V g(X,Y) = g(nabla_V X, Y) + g(X, nabla_V Y)
        auto gXY = [&](const Vec& x) {
            return double(X.value(x).dot(sphere.metric(x) * Y.value(x)));
        };
        const double lhs = fd::directional(gXY, q, V);
        const Mat g = sphere.metric(q);
        const double rhs = covariant_derivative(sphere, X, V, q).dot(g * Y.value(q)) +
                           X.value(q).dot(g * covariant_derivative(sphere, Y, V, q));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-5));

        // torsion-freeness: nabla_X Y - nabla_Y X = [X,Y] (affine fields)
        const Vec tor = covariant_derivative(sphere, Y, X.value(q), q) -
                        covariant_derivative(sphere, X, Y.value(q), q) -
                        (by * X.value(q) - bx * Y.value(q));
        CHECK(tor.norm() < 1e-9);

        // tensoriality in the direction slot
        const Vec W = rng.uniform_vec(2, -1.0, 1.0);
        const double lam = rng.uniform(-2.0, 2.0);
        const Vec lin = covariant_derivative(sphere, X, V + lam * W, q) -
                        covariant_derivative(sphere, X, V, q) -
                        lam * covariant_derivative(sphere, X, W, q);
        CHECK(lin.norm() < 1e-12);
    }
}

TEST_CASE("rough laplacian: flat examples and frame independence") {
    Rng rng(42, "geom.laplacian");

    auto flat = euclidean(3);
    Mat A = Mat::Random(3, 3);
    const VectorFieldOnM lin = affine_field(Vec::Zero(3), A);
    const Vec p = sample_point(rng, flat);
    CHECK(rough_laplacian(flat, lin, p).norm() < 1e-9);

    auto sphere = sphere_stereographic(2);
    const VectorFieldOnM X = normalized_coordinate_field(sphere, 0);
    const Vec q = sample_point(rng, sphere);
    const Vec l1 = rough_laplacian(sphere, X, q);
    const Vec l2 = rough_laplacian(sphere, X, q, {1, 0});
    CHECK((l1 - l2).norm() < 1e-6 * std::max(1.0, l1.norm()));
}

TEST_CASE("hopf fields: orthonormal frame, geodesic flow, golden numbers") {
    Rng rng(42, "geom.hopf");
    auto sphere = sphere_stereographic(3);
    const VectorFieldOnM w1 = hopf_field(sphere, 1);
    const VectorFieldOnM w2 = hopf_field(sphere, 2);
    const VectorFieldOnM w3 = hopf_field(sphere, 3);

    for (int trial = 0; trial < 20; ++trial) {
        const Vec p = sample_point(rng, sphere);
        const Mat g = sphere.metric(p);
        const Vec v1 = w1.value(p), v2 = w2.value(p), v3 = w3.value(p);
        CHECK(std::abs(v1.dot(g * v1) - 1.0) < 1e-10);
        CHECK(std::abs(v2.dot(g * v2) - 1.0) < 1e-10);
        CHECK(std::abs(v3.dot(g * v3) - 1.0) < 1e-10);
        CHECK(std::abs(v1.dot(g * v2)) < 1e-10);
        CHECK(std::abs(v1.dot(g * v3)) < 1e-10);
        CHECK(std::abs(v2.dot(g * v3)) < 1e-10);
    }

    for (int trial = 0; trial < 10; ++trial) {
        const Vec p = sample_point(rng, sphere);
        // analytic jet against finite differences
        VectorFieldOnM w1fd;
        w1fd.value = w1.value;
        const Mat ja = w1.jacobian(p);
        const Mat jf = w1fd.jacobian_at(sphere, p);
        CHECK((ja - jf).cwiseAbs().maxCoeff() < 1e-6 * std::max(1.0, ja.cwiseAbs().maxCoeff()));

        // integral curves of W_1 are geodesics
        CHECK(covariant_derivative(sphere, w1, w1.value(p), p).norm() < 1e-5);

        // Killing field: divergence-free
        CHECK(std::abs(divergence(sphere, w1, p)) < 1e-6);

        // |nabla W1|^2 = 2
        CHECK(grad_norm_sq(sphere, w1, p) == doctest::Approx(2.0).epsilon(1e-5));
    }

    // Delta_g W1 = 2 W1 (minus-trace convention)
    for (int trial = 0; trial < 5; ++trial) {
        const Vec p = sample_point(rng, sphere);
        const Vec lap = rough_laplacian(sphere, w1, p);
        const Vec expect = 2.0 * w1.value(p);
        CHECK((lap - expect).cwiseAbs().maxCoeff() < 1e-4);
    }
}

TEST_CASE("domain and degeneracy errors") {
    auto sphere = sphere_stereographic(2);
    Vec outside(2);
    outside << 5.0, 0.0;
    CHECK_THROWS_AS((void)christoffel(sphere, outside), DomainError);

    Vec p = Vec::Zero(2);
    const Vec X = Vec::Unit(2, 0);
    CHECK_THROWS_AS((void)sectional(sphere, p, X, 2.0 * X), DegeneratePlaneError);

    auto bad = euclidean(2);
    bad.metric = [](const Vec&) {
        Mat m(2, 2);
        m << 1.0, 2.0, 2.0, 1.0;  // indefinite
        return m;
    };
    CHECK_THROWS_AS((void)christoffel(bad, p), SingularMetricError);
}
