// Benchmark comparing the serial reference kernels against the OpenMP path
// on the three data-parallel workloads: Nijenhuis grid scans, energy
// quadrature, and connection cross-validation batches. The parallel results
// must be bitwise identical to the serial ones (index-addressed buffers,
// ordered reduction); the max deviation column asserts that.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "isotm/batch.hpp"
#include "isotm/gmetric.hpp"
#include "isotm/harmonic.hpp"
#include "isotm/hopf.hpp"
#include "isotm/sampling.hpp"

using namespace isotm;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

struct Row {
    const char* name;
    std::size_t n;
    double serial_ms;
    double parallel_ms;
    double max_dev;
};

Row run_case(const char* name, std::size_t n, const std::function<double(std::size_t)>& fn) {
    std::vector<double> serial, parallel;
    const double t0 = now_ms();
    batch::map_serial(n, fn, serial);
    const double t1 = now_ms();
    batch::map_parallel(n, fn, parallel);
    const double t2 = now_ms();

    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, std::abs(serial[i] - parallel[i]));
    return Row{name, n, t1 - t0, t2 - t1, dev};
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());

    auto sphere2 = sphere_stereographic(2);
    auto sphere3 = sphere_stereographic(3);
    std::vector<Row> rows;

    {
        const auto structure = family_sigma0(sphere2, 1.0, 1.0);
        Rng rng(7, "bench.nijenhuis");
        std::vector<TMPoint> pts;
        for (int i = 0; i < 600; ++i) pts.push_back(sample_tm_point(rng, sphere2, 2.0));
        rows.push_back(run_case("nijenhuis_scan", pts.size(), [&](std::size_t i) {
            return nijenhuis_max_component(structure, sphere2, pts[i]);
        }));
    }

    {
        const auto m = make_tangent_metric(sphere3, sasaki_structure());
        const auto w1 = hopf_field(sphere3, 1);
        const auto region = QuadratureRegion::of_chart(sphere3);
        const int grid = 32;
        const long long cells = 1LL * grid * grid * grid;
        const double cellvol = std::pow((region.hi[0] - region.lo[0]) / grid, 3);
        rows.push_back(run_case("energy_quadrature", cells, [&](std::size_t flat) {
            Vec x(3);
            long long rest = static_cast<long long>(flat);
            for (int i = 2; i >= 0; --i) {
                const long long idx = rest % grid;
                rest /= grid;
                const double h = (region.hi[i] - region.lo[i]) / grid;
                x[i] = region.lo[i] + (idx + 0.5) * h;
            }
            if (!region.contains(x)) return 0.0;
            TMPoint at;
            at.x = x;
            at.y = w1.value(x);
            const double a = m.structure.alpha_at(at);
            const double d = m.structure.delta_at(at);
            const double density = 0.5 * (3.0 * a + d * grad_norm_sq(sphere3, w1, x));
            return density * std::sqrt(sphere3.metric(x).determinant()) * cellvol;
        }));
    }

    {
        const auto m = make_tangent_metric(sphere2, family_general(sphere2, 1.0, 1.0, 1.0));
        Rng rng(7, "bench.connection");
        struct Sample {
            TMPoint at;
            Vec cx, cy;
            Mat bx, by;
        };
        std::vector<Sample> samples;
        for (int i = 0; i < 200; ++i) {
            Sample s;
            s.at = sample_tm_point(rng, sphere2, 2.0);
            s.cx = rng.uniform_vec(2, -1.0, 1.0);
            s.cy = rng.uniform_vec(2, -1.0, 1.0);
            s.bx = Mat::Zero(2, 2);
            s.by = Mat::Zero(2, 2);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    s.bx(a, b) = rng.uniform(-0.5, 0.5);
                    s.by(a, b) = rng.uniform(-0.5, 0.5);
                }
            samples.push_back(s);
        }
        rows.push_back(run_case("connection_xval", samples.size(), [&](std::size_t i) {
            const auto& s = samples[i];
            const VectorFieldOnM X = affine_field(s.cx, s.bx);
            const VectorFieldOnM Y = affine_field(s.cy, s.by);
            const auto closed = levi_civita_closed(m, X, Y, LiftKind::HH, s.at);
            const auto oracle =
                koszul_oracle(m, horizontal_lift_field(sphere2, X),
                              horizontal_lift_field(sphere2, Y), s.at);
            return (closed.result.components() - oracle.components()).lpNorm<Eigen::Infinity>();
        }));
    }

    std::printf("%-20s %10s %12s %12s %10s %10s\n", "case", "items", "serial(ms)",
                "parallel(ms)", "speedup", "max_dev");
    for (const auto& r : rows) {
        std::printf("%-20s %10zu %12.1f %12.1f %9.2fx %10.2e\n", r.name, r.n, r.serial_ms,
                    r.parallel_ms, r.serial_ms / std::max(1e-9, r.parallel_ms), r.max_dev);
    }

    bool identical = true;
    for (const auto& r : rows) identical = identical && r.max_dev == 0.0;
    std::printf("parallel results bitwise identical: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
