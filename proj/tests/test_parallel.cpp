#include <doctest.h>

#include <stdexcept>

#include "isotm/batch.hpp"
#include "isotm/iso.hpp"
#include "isotm/sampling.hpp"

using namespace isotm;

TEST_CASE("parallel kernels are bitwise identical to the serial reference") {
    auto sphere = sphere_stereographic(2);
    const auto structure = family_general(sphere, 1.0, 1.0, 1.0);
    Rng rng(5, "parallel.points");
    std::vector<TMPoint> points;
    for (int i = 0; i < 40; ++i) points.push_back(sample_tm_point(rng, sphere, 2.0));

    auto fn = [&](std::size_t i) {
        return nijenhuis_max_component(structure, sphere, points[i]);
    };

    std::vector<double> serial, parallel;
    batch::map_serial(points.size(), fn, serial);
    batch::map_parallel(points.size(), fn, parallel);

    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == parallel[i]);
    CHECK(batch::sum_ordered(serial) == batch::sum_ordered(parallel));
}

TEST_CASE("exceptions from worker items propagate out of the parallel region") {
    auto fn = [](std::size_t i) -> double {
        if (i == 17) throw DomainError("stencil left the chart");
        return static_cast<double>(i);
    };
    std::vector<double> out;
    CHECK_THROWS_AS(batch::map_parallel(64, fn, out), DomainError);
    CHECK_THROWS_AS(batch::map_serial(64, fn, out), DomainError);
}

TEST_CASE("ordered reduction is independent of the execution mode") {
    // adversarial magnitudes: the fixed index order pins the rounding
    std::vector<double> values(1000);
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = (i % 2 ? 1.0 : -1.0) * std::pow(1.1, static_cast<double>(i % 300));
    const double s1 = batch::sum_ordered(values);
    const double s2 = batch::sum_ordered(values);
    CHECK(s1 == s2);

    auto fn = [&](std::size_t i) { return values[i]; };
    std::vector<double> a, b;
    batch::map_serial(values.size(), fn, a);
    batch::map_parallel(values.size(), fn, b);
    CHECK(batch::sum_ordered(a) == batch::sum_ordered(b));
}
