#include <doctest.h>

#include <cmath>

#include "isotm/calculus.hpp"
#include "isotm/fd.hpp"
#include "isotm/rng.hpp"
#include "isotm/tbundle.hpp"

using namespace isotm;

namespace {

TMPoint sample_tm_point(Rng& rng, const RiemannianChart& chart, double fiber_radius = 2.0) {
    TMPoint w;
    for (;;) {
        Vec x(chart.dim);
        for (int i = 0; i < chart.dim; ++i)
            x[i] = rng.uniform(0.6 * chart.box_lo[i], 0.6 * chart.box_hi[i]);
        if (chart.contains(x)) {
            w.x = x;
            break;
        }
    }
    w.y = rng.uniform_vec(chart.dim, -fiber_radius, fiber_radius);
    return w;
}

}  // namespace

TEST_CASE("lifts, connection map, decomposition") {
    Rng rng(7, "tbundle.lifts");
    auto flat = euclidean(2);
    auto sphere = sphere_stereographic(2);

    // euclidean: X^h = (X, 0)
    {
        TMPoint w = sample_tm_point(rng, flat);
        const Vec X = rng.uniform_vec(2, -1.0, 1.0);
        const TMVector h = horizontal_lift(flat, X, w);
        CHECK((h.dx - X).norm() == 0.0);
        CHECK(h.dy.norm() == 0.0);
    }

    // sphere with zero fiber: the Gamma-term is linear in y
    {
        TMPoint w = sample_tm_point(rng, sphere);
        w.y.setZero();
        const Vec X = rng.uniform_vec(2, -1.0, 1.0);
        const TMVector h = horizontal_lift(sphere, X, w);
        CHECK(h.dy.norm() == 0.0);
    }

    for (int trial = 0; trial < 25; ++trial) {
        TMPoint w = sample_tm_point(rng, sphere);
        const Vec X = rng.uniform_vec(2, -2.0, 2.0);

        const TMVector h = horizontal_lift(sphere, X, w);
        CHECK(connection_map(sphere, h).norm() < 1e-12);
        CHECK((projection(h) - X).norm() == 0.0);

        const TMVector v = vertical_lift(sphere, X, w);
        CHECK(projection(v).norm() == 0.0);
        CHECK((connection_map(sphere, v) - X).norm() == 0.0);

        // A = (pi_* A)^h + (K A)^v, exactly
        TMVector a;
        a.at = w;
        a.dx = rng.uniform_vec(2, -2.0, 2.0);
        a.dy = rng.uniform_vec(2, -2.0, 2.0);
        const TMVector hh = horizontal_lift(sphere, projection(a), w);
        const TMVector vv = vertical_lift(sphere, connection_map(sphere, a), w);
        CHECK((a.dx - hh.dx - vv.dx).lpNorm<Eigen::Infinity>() < 1e-12);
        CHECK((a.dy - hh.dy - vv.dy).lpNorm<Eigen::Infinity>() < 1e-12);

        // linearity of K and pi_* under random combinations
        TMVector b;
        b.at = w;
        b.dx = rng.uniform_vec(2, -2.0, 2.0);
        b.dy = rng.uniform_vec(2, -2.0, 2.0);
        const double lam = rng.uniform(-2.0, 2.0);
        TMVector comb;
        comb.at = w;
        comb.dx = a.dx + lam * b.dx;
        comb.dy = a.dy + lam * b.dy;
        const Vec klin = connection_map(sphere, comb) - connection_map(sphere, a) -
                         lam * connection_map(sphere, b);
        CHECK(klin.norm() < 1e-12);
    }
}

TEST_CASE("finite-difference brackets and the lift identities") {
    Rng rng(7, "tbundle.brackets");
    auto sphere = sphere_stereographic(2);

    // [F,F] = 0 and constant-coefficient fields commute
    {
        TMPoint w = sample_tm_point(rng, sphere);
        TMVector a;
        a.at = w;
        a.dx = rng.uniform_vec(2, -1.0, 1.0);
        a.dy = rng.uniform_vec(2, -1.0, 1.0);
        auto F = constant_extension(a);
        const TMVector r = bracket_fd(sphere, F, F, w);
        CHECK(r.components().norm() < 1e-9);

        TMVector b = a;
        b.dx = rng.uniform_vec(2, -1.0, 1.0);
        auto G = constant_extension(b);
        CHECK(bracket_fd(sphere, F, G, w).components().norm() < 1e-9);
    }

    // Bracket identities for lifted fields, 25 samples on flat and round base
    for (const auto& chart : {euclidean(2), sphere_stereographic(2)}) {
        for (int trial = 0; trial < 25; ++trial) {
            TMPoint w = sample_tm_point(rng, chart);
            const VectorFieldOnM X =
                affine_field(rng.uniform_vec(2, -1.0, 1.0), Mat::Random(2, 2));
            const VectorFieldOnM Y =
                affine_field(rng.uniform_vec(2, -1.0, 1.0), Mat::Random(2, 2));

            auto Xh = horizontal_lift_field(chart, X);
            auto Yh = horizontal_lift_field(chart, Y);
            auto Yv = vertical_lift_field(chart, Y);

            // [X^h, Y^h](u) = [X,Y]^h - (R(X,Y)u)^v
            {
                const TMVector lhs = bracket_fd(chart, Xh, Yh, w);
                const Vec lieval =
                    Y.jacobian(w.x) * X.value(w.x) - X.jacobian(w.x) * Y.value(w.x);
                const TMVector rh = horizontal_lift(chart, lieval, w);
                const Vec ruv = riemann_apply(chart, w.x, X.value(w.x), Y.value(w.x), w.y);
                const TMVector rv = vertical_lift(chart, ruv, w);
                const Vec resid = lhs.components() - rh.components() + rv.components();
                CHECK(resid.lpNorm<Eigen::Infinity>() < 1e-4);
            }

            // [X^h, Y^v](u) = (nabla_X Y)^v
            {
                const TMVector lhs = bracket_fd(chart, Xh, Yv, w);
                const Vec nxy = covariant_derivative(chart, Y, X.value(w.x), w.x);
                const TMVector rhs = vertical_lift(chart, nxy, w);
                CHECK((lhs.components() - rhs.components()).lpNorm<Eigen::Infinity>() < 1e-4);
            }

            // [X^v, Y^v] = 0
            {
                auto Xv = vertical_lift_field(chart, X);
                CHECK(bracket_fd(chart, Xv, Yv, w).components().lpNorm<Eigen::Infinity>() < 1e-9);
            }
        }
    }
}

TEST_CASE("lift derivatives of pulled-back metric functions") {
    Rng rng(7, "tbundle.lemma");
    auto sphere = sphere_stereographic(2);
    for (int trial = 0; trial < 10; ++trial) {
        TMPoint w = sample_tm_point(rng, sphere);
        const VectorFieldOnM X = affine_field(rng.uniform_vec(2, -1.0, 1.0), Mat::Random(2, 2));
        const VectorFieldOnM Y = affine_field(rng.uniform_vec(2, -1.0, 1.0), Mat::Random(2, 2));
        const VectorFieldOnM Z = affine_field(rng.uniform_vec(2, -1.0, 1.0), Mat::Random(2, 2));

        auto gYZ = [&](const Vec& xy) {
            const TMPoint q = TMPoint::from_coords(xy);
            return double(Y.value(q.x).dot(sphere.metric(q.x) * Z.value(q.x)));
        };

        // along X^h: equals (X g(Y,Z)) o pi
        const TMVector xh = horizontal_lift(sphere, X.value(w.x), w);
        const double dh = fd::directional(gYZ, w.coords(), xh.components());
        auto gYZ_base = [&](const Vec& x) {
            return double(Y.value(x).dot(sphere.metric(x) * Z.value(x)));
        };
        const double base = fd::directional(gYZ_base, w.x, X.value(w.x));
        CHECK(dh == doctest::Approx(base).epsilon(1e-6));

        // along X^v: zero
        const TMVector xv = vertical_lift(sphere, X.value(w.x), w);
        CHECK(std::abs(fd::directional(gYZ, w.coords(), xv.components())) < 1e-6);
    }
}

TEST_CASE("liouville form") {
    Rng rng(7, "tbundle.liouville");
    auto flat = euclidean(2);
    TMPoint w;
    w.x = Vec::Zero(2);
    w.y = Vec::Unit(2, 0);

    // vertical vectors are annihilated
    const TMVector v = vertical_lift(flat, rng.uniform_vec(2, -1.0, 1.0), w);
    CHECK(liouville_form(flat, v) == 0.0);

    // Theta(u^h) = g(u,u)
    const TMVector uh = horizontal_lift(flat, w.y, w);
    CHECK(liouville_form(flat, uh) == doctest::Approx(1.0));

    // orthogonal horizontal direction
    const TMVector e2h = horizontal_lift(flat, Vec::Unit(2, 1), w);
    CHECK(liouville_form(flat, e2h) == 0.0);

    // linearity on a curved chart
    auto sphere = sphere_stereographic(2);
    TMPoint q = sample_tm_point(rng, sphere);
    TMVector a, b;
    a.at = b.at = q;
    a.dx = rng.uniform_vec(2, -1.0, 1.0);
    a.dy = rng.uniform_vec(2, -1.0, 1.0);
    b.dx = rng.uniform_vec(2, -1.0, 1.0);
    b.dy = rng.uniform_vec(2, -1.0, 1.0);
    TMVector sum;
    sum.at = q;
    sum.dx = a.dx + 2.5 * b.dx;
    sum.dy = a.dy + 2.5 * b.dy;
    CHECK(liouville_form(sphere, sum) ==
          doctest::Approx(liouville_form(sphere, a) + 2.5 * liouville_form(sphere, b)));
}

TEST_CASE("bracket stencil outside the chart raises") {
    auto sphere = sphere_stereographic(2);
    TMPoint w;
    w.x = Vec::Zero(2);
    w.x[0] = 3.9999999;  // within the ball but the stencil exits
    w.y = Vec::Zero(2);
    TMVector a;
    a.at = w;
    a.dx = Vec::Unit(2, 0);
    a.dy = Vec::Zero(2);
    auto F = constant_extension(a);
    auto G = [&sphere](const TMPoint& q) {
        return horizontal_lift(sphere, Vec::Unit(2, 0), q);
    };
    CHECK_THROWS_AS((void)bracket_fd(sphere, F, TMVectorField(G), w), DomainError);
}
