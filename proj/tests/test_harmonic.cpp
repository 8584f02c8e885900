#include <doctest.h>

#include <cmath>

#include "isotm/calculus.hpp"
#include "isotm/fd.hpp"
#include "isotm/harmonic.hpp"
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

// Smooth cutoff over a box region, vanishing to third order at the faces.
VectorFieldOnM bump_field(const QuadratureRegion& region, const VectorFieldOnM& V) {
    const Vec lo = region.lo, hi = region.hi;
    VectorFieldOnM f;
    f.value = [lo, hi, V](const Vec& x) -> Vec {
        double b = 1.0;
        for (int i = 0; i < x.size(); ++i) {
            const double t = 2.0 * (x[i] - 0.5 * (lo[i] + hi[i])) / (hi[i] - lo[i]);
            const double c = std::max(0.0, 1.0 - t * t);
            b *= c * c * c;
        }
        return b * V.value(x);
    };
    return f;
}

// Unit field obtained by normalizing an affine field (well-defined when the
// constant part dominates on the region).
VectorFieldOnM normalized_affine(const RiemannianChart& chart, const Vec& c, const Mat& B) {
    VectorFieldOnM f;
    const auto metric = chart.metric;
    f.value = [metric, c, B](const Vec& x) -> Vec {
        const Vec w = c + B * x;
        return w / std::sqrt(w.dot(metric(x) * w));
    };
    return f;
}

// g-unit field orthogonal to a unit field on a 2-d conformal chart.
VectorFieldOnM conformal_rotate(const VectorFieldOnM& X) {
    VectorFieldOnM f;
    f.value = [X](const Vec& x) -> Vec {
        const Vec v = X.value(x);
        Vec r(2);
        r << -v[1], v[0];
        return r;
    };
    return f;
}

}  // namespace

TEST_CASE("pushforward of a vector field as a map into TM") {
    Rng rng(31, "harm.pushforward");

    // parallel field on euclidean space: X_*(V) = V^h
    {
        auto flat = euclidean(2);
        const VectorFieldOnM X = constant_field(Vec::Unit(2, 0));
        const Vec p = sample_point(rng, flat);
        const Vec V = rng.uniform_vec(2, -1.0, 1.0);
        const TMVector push = pushforward(flat, X, V, p);
        const TMVector vh = horizontal_lift(flat, V, push.at);
        CHECK((push.components() - vh.components()).lpNorm<Eigen::Infinity>() == 0.0);
    }

    auto sphere = sphere_stereographic(3);
    const VectorFieldOnM w1 = hopf_field(sphere, 1);
    const VectorFieldOnM w2 = hopf_field(sphere, 2);

    // vertical part against the covariant derivative
    for (int trial = 0; trial < 5; ++trial) {
        const Vec p = sample_point(rng, sphere);
        const TMVector push = pushforward(sphere, w1, w2.value(p), p);
        const Vec expect = covariant_derivative(sphere, w1, w2.value(p), p);
        CHECK((connection_map(sphere, push) - expect).lpNorm<Eigen::Infinity>() < 1e-6);
    }

    // finite-difference differential of p -> (p, X(p)) applied to V
    for (int trial = 0; trial < 5; ++trial) {
        const Vec p = sample_point(rng, sphere);
        const Vec V = rng.uniform_vec(3, -1.0, 1.0);
        const TMVector push = pushforward(sphere, w1, V, p);
        auto curve = [&](const Vec& x) -> Vec {
            Vec out(6);
            out.head(3) = x;
            out.tail(3) = w1.value(x);
            return out;
        };
        const Vec diff = fd::directional_vec(curve, p, V);
        CHECK((push.components() - diff).lpNorm<Eigen::Infinity>() < 1e-5);
    }
}

TEST_CASE("energy density and quadrature totals") {
    // euclidean box, Sasaki, parallel unit field: density n/2, no cap
    {
        auto flat = euclidean(3);
        auto m = make_tangent_metric(flat, sasaki_structure());
        const VectorFieldOnM X = constant_field(Vec::Unit(3, 0));
        QuadratureRegion region;
        region.lo = Vec::Constant(3, -1.0);
        region.hi = Vec::Constant(3, 1.0);
        const auto report = energy(m, X, region, 8);
        CHECK(report.density(Vec::Zero(3)) == doctest::Approx(1.5));
        CHECK(report.total == doctest::Approx(8.0 * 1.5).epsilon(1e-12));
        CHECK(report.cap_volume == 0.0);
    }

    auto sphere = sphere_stereographic(3);
    const VectorFieldOnM w1 = hopf_field(sphere, 1);

    // Sasaki + Hopf: density 5/2 everywhere; total 5 pi^2 with the cap bound
    {
        auto m = make_tangent_metric(sphere, sasaki_structure());
        Rng rng(31, "harm.energy");
        for (int trial = 0; trial < 5; ++trial) {
            const Vec p = sample_point(rng, sphere);
            auto report = energy(m, w1, QuadratureRegion::of_chart(sphere), 4);
            CHECK(report.density(p) == doctest::Approx(2.5).epsilon(1e-6));
        }
        const auto report = energy(m, w1, QuadratureRegion::of_chart(sphere), 48);
        const double expect = 5.0 * M_PI * M_PI;
        CHECK(std::abs(report.total_with_cap - expect) / expect < 0.005);
        CHECK(report.cap_volume > 0.0);
    }

    // family_sigma0(1,1) + Hopf: density = (3 alpha + 2 delta)/2 = 2 sqrt(2)
    {
        auto m = make_tangent_metric(sphere, family_sigma0(sphere, 1.0, 1.0));
        Rng rng(31, "harm.energy2");
        const Vec p = sample_point(rng, sphere);
        const auto report = energy(m, w1, QuadratureRegion::of_chart(sphere), 4);
        CHECK(report.density(p) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
    }
}

TEST_CASE("tension fields: trivial cases and oracle adjudication") {
    Rng rng(31, "harm.tension");

    // euclidean + Sasaki + parallel field: everything vanishes
    {
        auto flat = euclidean(2);
        auto m = make_tangent_metric(flat, sasaki_structure());
        const VectorFieldOnM X = constant_field(Vec::Unit(2, 0));
        const Vec p = sample_point(rng, flat);
        CHECK(tension_sigma0(m, X, p).assembled.components().norm() < 1e-9);
        CHECK(tension_closed(m, X, p).assembled.components().norm() < 1e-9);
        CHECK(tension_oracle(m, X, p).assembled.components().norm() < 1e-6);
    }

    // closed form vs oracle across structures, charts and fields
    {
        auto flat = euclidean(2);
        auto sphere2 = sphere_stereographic(2);
        for (const auto& chart : {flat, sphere2}) {
            std::vector<IsotropicStructure> structures = {
                sasaki_structure(), family_sigma0(chart, 1.0, 1.0),
                family_general(chart, 1.0, 1.0, 1.0)};
            for (const auto& s : structures) {
                auto m = make_tangent_metric(chart, s);
                for (int trial = 0; trial < 4; ++trial) {
                    const Vec p = sample_point(rng, chart);
                    const VectorFieldOnM X = normalized_affine(
                        chart, 2.0 * Vec::Ones(2) + rng.uniform_vec(2, -0.5, 0.5),
                        0.4 * Mat::Random(2, 2));
                    const auto closed = tension_closed(m, X, p);
                    const auto oracle = tension_oracle(m, X, p);
                    const double gap =
                        (closed.assembled.components() - oracle.assembled.components())
                            .lpNorm<Eigen::Infinity>();
                    CHECK(gap < 1e-4);
                }
            }
        }
    }

    // at sigma == 0 the general assembly and the specialization agree to
    // round-off
    {
        auto sphere2 = sphere_stereographic(2);
        auto m = make_tangent_metric(sphere2, family_sigma0(sphere2, 1.0, 1.0));
        for (int trial = 0; trial < 5; ++trial) {
            const Vec p = sample_point(rng, sphere2);
            const VectorFieldOnM X = normalized_affine(
                sphere2, 2.0 * Vec::Ones(2) + rng.uniform_vec(2, -0.5, 0.5),
                0.4 * Mat::Random(2, 2));
            const auto general = tension_closed(m, X, p);
            const auto special = tension_sigma0(m, X, p);
            CHECK((general.assembled.components() - special.assembled.components())
                      .lpNorm<Eigen::Infinity>() < 1e-10);
        }
    }

    // frame independence of the oracle
    {
        auto sphere2 = sphere_stereographic(2);
        auto m = make_tangent_metric(sphere2, family_sigma0(sphere2, 1.0, 1.0));
        const Vec p = sample_point(rng, sphere2);
        const VectorFieldOnM X = normalized_affine(sphere2, 2.0 * Vec::Ones(2), Mat::Zero(2, 2));
        const auto t1 = tension_oracle(m, X, p);
        const auto t2 = tension_oracle(m, X, p, {1, 0});
        CHECK((t1.assembled.components() - t2.assembled.components()).lpNorm<Eigen::Infinity>() <
              1e-6);
    }

    // Sasaki + Hopf on S^3: classical vertical part -Delta X = -2 W1
    {
        auto sphere = sphere_stereographic(3);
        auto m = make_tangent_metric(sphere, sasaki_structure());
        const VectorFieldOnM w1 = hopf_field(sphere, 1);
        const Vec p = sample_point(rng, sphere);
        const auto oracle = tension_oracle(m, w1, p);
        CHECK((oracle.vertical + 2.0 * w1.value(p)).lpNorm<Eigen::Infinity>() < 1e-3);
        const auto closed = tension_sigma0(m, w1, p);
        CHECK((closed.vertical + 2.0 * w1.value(p)).lpNorm<Eigen::Infinity>() < 1e-4);
        // horizontal part: the constant-curvature trace contracts to zero
        CHECK(closed.horizontal.lpNorm<Eigen::Infinity>() < 1e-4);
    }

    // sigma != 0 without jets raises
    {
        auto sphere2 = sphere_stereographic(2);
        auto s = custom_structure([](const TMPoint&) { return 1.0; },
                                  [](const TMPoint& at) { return 0.1 * at.y[0]; });
        auto m = make_tangent_metric(sphere2, s);
        const VectorFieldOnM X = normalized_affine(sphere2, 2.0 * Vec::Ones(2), Mat::Zero(2, 2));
        CHECK_THROWS_AS((void)tension_closed(m, X, Vec::Zero(2)), JetRequiredError);
        CHECK_THROWS_AS((void)tension_sigma0(m, X, Vec::Zero(2)), SigmaNotZeroError);
    }
}

TEST_CASE("tau_1: projection, expanded form, harmonicity of Hopf fields") {
    Rng rng(31, "harm.tau1");
    auto sphere = sphere_stereographic(3);
    const VectorFieldOnM w1 = hopf_field(sphere, 1);

    for (const auto& s : {sasaki_structure(), family_sigma0(sphere, 1.0, 1.0)}) {
        auto m = make_tangent_metric(sphere, s);
        for (int trial = 0; trial < 4; ++trial) {
            const Vec p = sample_point(rng, sphere);
            const auto t1 = tau1(m, w1, p);

            // Hopf fields are harmonic unit fields: vertical part vanishes
            CHECK(t1.projected.vertical.lpNorm<Eigen::Infinity>() < 1e-4);
            // and harmonic maps into S(S^3): horizontal part vanishes too
            CHECK(t1.projected.horizontal.lpNorm<Eigen::Infinity>() < 1e-4);

            // the two forms of the vertical part agree
            CHECK(t1.form_gap < 1e-5);

            // projection idempotence
            const TMVector N = unit_normal(m, t1.projected.assembled.at);
            CHECK(std::abs(metric_eval(m, t1.projected.assembled, N)) < 1e-9);
        }
    }

    // unit-field and sigma guards
    {
        auto m = make_tangent_metric(sphere, sasaki_structure());
        const VectorFieldOnM bad = constant_field(2.0 * Vec::Unit(3, 0));
        CHECK_THROWS_AS((void)tau1(m, bad, Vec::Zero(3)), NotUnitFieldError);
        auto mg = make_tangent_metric(sphere, family_general(sphere, 1.0, 1.0, 1.0));
        CHECK_THROWS_AS((void)tau1(mg, w1, Vec::Zero(3)), SigmaNotZeroError);
    }
}

TEST_CASE("harmonic unit field criterion") {
    Rng rng(31, "harm.residual");
    auto sphere = sphere_stereographic(3);
    const VectorFieldOnM w1 = hopf_field(sphere, 1);

    // Sasaki and the curvature-adapted family: Hopf fields are harmonic
    for (double b : {0.5, 1.0, 2.0}) {
        auto m = make_tangent_metric(sphere, family_sigma0(sphere, 1.0, b));
        const Vec p = sample_point(rng, sphere);
        const auto verdict = harmonic_unit_residual(m, w1, p);
        CHECK(verdict.residual_norm < 1e-4);
        CHECK(verdict.verdict == HarmonicVerdictKind::Harmonic);
    }
    {
        auto m = make_tangent_metric(sphere, sasaki_structure());
        const Vec p = sample_point(rng, sphere);
        const auto verdict = harmonic_unit_residual(m, w1, p);
        CHECK(verdict.verdict == HarmonicVerdictKind::Harmonic);

        // Sasaki reduction: with constant alpha every non-classical term
        // vanishes identically
        for (const auto& [label, value] : verdict.breakdown) {
            if (label == "coefficient_of_X2" || label == "nabla_X1_X" || label == "alpha_trace")
                CHECK(value.lpNorm<Eigen::Infinity>() < 1e-10);
        }
    }

    // The normalized coordinate field on the stereographic S^2 chart turns
    // out to be harmonic: its connection form omega = x2 theta^1 - x1 theta^2
    // has divergence-free dual. Both routes agree on a near-zero residual.
    {
        auto sphere2 = sphere_stereographic(2);
        auto m = make_tangent_metric(sphere2, sasaki_structure());
        const VectorFieldOnM X = normalized_coordinate_field(sphere2, 0);
        for (int trial = 0; trial < 5; ++trial) {
            const Vec p = sample_point(rng, sphere2);
            CHECK(harmonic_unit_residual(m, X, p).residual_norm < 1e-6);
            CHECK(harmonic_unit_residual(m, X, p, TensionSource::Oracle).residual_norm < 1e-6);
        }
    }

    // a tilted unit field on S^2 is not harmonic
    {
        auto sphere2 = sphere_stereographic(2);
        auto m = make_tangent_metric(sphere2, sasaki_structure());
        Vec c(2);
        c << 2.0, 0.7;
        Mat B(2, 2);
        B << 0.3, -0.4, 0.5, 0.2;
        const VectorFieldOnM X = normalized_affine(sphere2, c, B);
        int detected = 0;
        for (int trial = 0; trial < 5; ++trial) {
            const Vec p = sample_point(rng, sphere2);
            const auto verdict = harmonic_unit_residual(m, X, p);
            if (verdict.verdict == HarmonicVerdictKind::NotHarmonic) ++detected;
        }
        CHECK(detected >= 4);
    }

    // criterion equivalence: the residual equals the vertical part of tau_1
    // up to sign
    {
        auto sphere2 = sphere_stereographic(2);
        auto m = make_tangent_metric(sphere2, family_sigma0(sphere2, 1.0, 1.0));
        const VectorFieldOnM X = normalized_coordinate_field(sphere2, 0);
        for (int trial = 0; trial < 5; ++trial) {
            const Vec p = sample_point(rng, sphere2);
            const auto verdict = harmonic_unit_residual(m, X, p);
            const auto t1 = tau1(m, X, p);
            CHECK(verdict.residual_norm ==
                  doctest::Approx(t1.projected.vertical.lpNorm<Eigen::Infinity>())
                      .epsilon(1e-4));
        }
    }

    // g(Delta X, X) = |nabla X|^2 for unit fields
    {
        auto sphere2 = sphere_stereographic(2);
        const VectorFieldOnM X = normalized_coordinate_field(sphere2, 0);
        for (int trial = 0; trial < 5; ++trial) {
            const Vec p = sample_point(rng, sphere2);
            const Vec lap = rough_laplacian(sphere2, X, p);
            const double lhs = lap.dot(sphere2.metric(p) * X.value(p));
            CHECK(lhs == doctest::Approx(grad_norm_sq(sphere2, X, p)).epsilon(1e-6));
        }
    }
}

TEST_CASE("parallel unit fields as harmonic maps") {
    Rng rng(31, "harm.parallel");
    auto flat = euclidean(3);

    // Sasaki + constant field: both conditions hold
    {
        auto m = make_tangent_metric(flat, sasaki_structure());
        const VectorFieldOnM X = constant_field(Vec::Unit(3, 0));
        const auto r = parallel_field_check(m, X, Vec::Zero(3));
        CHECK(r.condition1 == 0.0);
        CHECK(r.condition2 == 0.0);
        CHECK(r.harmonic_map);
    }

    // cross-fiber delta: X_2 not parallel to X, condition 2 fails
    {
        auto s = custom_structure(
            [](const TMPoint& at) { return std::exp(0.4 * at.y[0]); });
        auto m = make_tangent_metric(flat, s);
        const VectorFieldOnM X = constant_field(Vec::Unit(3, 1));
        const auto r = parallel_field_check(m, X, Vec::Zero(3));
        CHECK(r.condition2 > 1e-2);
        CHECK_FALSE(r.harmonic_map);

        // consistent with a nonvanishing tau_1
        const auto t1 = tau1(m, X, Vec::Zero(3));
        CHECK(t1.projected.assembled.components().lpNorm<Eigen::Infinity>() > 1e-3);
    }

    // x-dependent alpha: X_1 != 0, condition 1 active for n = 3 and void for
    // n = 2 where the prefactor 1 - n/2 vanishes
    {
        auto deltax3 = custom_structure(
            [](const TMPoint& at) { return 1.0 + 0.2 * std::sin(at.x[0]); });
        auto m3 = make_tangent_metric(flat, deltax3);
        const VectorFieldOnM X3 = constant_field(Vec::Unit(3, 1));
        Vec p3 = Vec::Zero(3);
        p3[0] = 0.5;
        const auto r3 = parallel_field_check(m3, X3, p3);
        CHECK(r3.condition1 > 1e-3);

        auto flat2 = euclidean(2);
        auto deltax2 = custom_structure(
            [](const TMPoint& at) { return 1.0 + 0.2 * std::sin(at.x[0]); });
        auto m2 = make_tangent_metric(flat2, deltax2);
        const VectorFieldOnM X2 = constant_field(Vec::Unit(2, 1));
        Vec p2 = Vec::Zero(2);
        p2[0] = 0.5;
        const auto r2 = parallel_field_check(m2, X2, p2);
        CHECK(r2.condition1 < 1e-12);

        // the corresponding tau_1 horizontal part also vanishes on surfaces
        const auto t1 = tau1(m2, X2, p2);
        CHECK(t1.projected.horizontal.lpNorm<Eigen::Infinity>() < 1e-6);
    }

    // non-parallel input raises
    {
        auto sphere = sphere_stereographic(3);
        auto m = make_tangent_metric(sphere, sasaki_structure());
        const VectorFieldOnM w1 = hopf_field(sphere, 1);
        CHECK_THROWS_AS((void)parallel_field_check(m, w1, Vec::Zero(3)), NotParallelError);
    }
}

TEST_CASE("first variation of the energy through unit fields") {
    Rng rng(31, "harm.variation");
    auto sphere2 = sphere_stereographic(2);
    auto m = make_tangent_metric(sphere2, sasaki_structure());

    QuadratureRegion region;
    region.lo = Vec::Constant(2, -1.0);
    region.hi = Vec::Constant(2, 1.0);

    Vec tilt(2);
    tilt << 2.0, 0.7;
    Mat tiltB(2, 2);
    tiltB << 0.3, -0.4, 0.5, 0.2;
    const VectorFieldOnM X = normalized_affine(sphere2, tilt, tiltB);

    // V = 0: both sides vanish
    {
        const VectorFieldOnM zero = constant_field(Vec::Zero(2));
        const auto r = first_variation_check(m, X, zero, region, 12);
        CHECK(std::abs(r.lhs) < 1e-12);
        CHECK(std::abs(r.rhs) < 1e-12);
    }

    // non-critical field with a cutoff variation: the two sides agree
    {
        const VectorFieldOnM V = bump_field(region, conformal_rotate(X));
        const auto r = first_variation_check(m, X, V, region, 24);
        CHECK(std::abs(r.lhs) > 1e-4);  // genuinely non-critical
        CHECK(r.rel_gap < 1e-2);
    }

    // orthogonality violation raises
    {
        const auto r = [&] {
            return first_variation_check(m, X, X, region, 8);
        };
        CHECK_THROWS_AS((void)r(), NotOrthogonalError);
    }

    // Hopf field on S^3 is a critical point: both sides near zero
    {
        auto sphere3 = sphere_stereographic(3);
        auto m3 = make_tangent_metric(sphere3, sasaki_structure());
        const VectorFieldOnM w1 = hopf_field(sphere3, 1);
        const VectorFieldOnM w2 = hopf_field(sphere3, 2);
        QuadratureRegion region3;
        region3.lo = Vec::Constant(3, -1.0);
        region3.hi = Vec::Constant(3, 1.0);
        const VectorFieldOnM V = bump_field(region3, w2);
        const auto r = first_variation_check(m3, w1, V, region3, 10);
        CHECK(std::abs(r.lhs) < 1e-3);
        CHECK(std::abs(r.rhs) < 1e-3);
    }
}
