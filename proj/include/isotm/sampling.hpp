#pragma once

#include "isotm/rng.hpp"
#include "isotm/tbundle.hpp"

namespace isotm {

// Base points drawn uniformly from a shrunken chart box (keeps FD stencils
// away from the boundary); rejection against the ball clip.
inline Vec sample_base_point(Rng& rng, const RiemannianChart& chart, double shrink = 0.6) {
    for (;;) {
        Vec x(chart.dim);
        for (int i = 0; i < chart.dim; ++i)
            x[i] = rng.uniform(shrink * chart.box_lo[i], shrink * chart.box_hi[i]);
        if (chart.contains(x)) return x;
    }
}

inline TMPoint sample_tm_point(Rng& rng, const RiemannianChart& chart, double fiber_radius = 2.0,
                               double shrink = 0.6) {
    TMPoint w;
    w.x = sample_base_point(rng, chart, shrink);
    w.y = rng.uniform_vec(chart.dim, -fiber_radius, fiber_radius);
    return w;
}

inline TMVector sample_tm_vector(Rng& rng, const TMPoint& at, double radius = 2.0) {
    TMVector a;
    a.at = at;
    a.dx = rng.uniform_vec(at.dim(), -radius, radius);
    a.dy = rng.uniform_vec(at.dim(), -radius, radius);
    return a;
}

}  // namespace isotm
