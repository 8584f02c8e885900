#pragma once

#include "isotm/calculus.hpp"
#include "isotm/chart.hpp"

namespace isotm {

// Point of TM in the induced chart: base coordinates x and the components y
// of u in the coordinate basis.
struct TMPoint {
    Vec x;
    Vec y;

    int dim() const { return static_cast<int>(x.size()); }
    Vec coords() const;  // (x, y) stacked, 2n
    static TMPoint from_coords(const Vec& xy);
};

// Tangent vector of TM at `at`, components (dx, dy) in the induced chart.
struct TMVector {
    TMPoint at;
    Vec dx;
    Vec dy;

    Vec components() const;  // (dx, dy) stacked
};

using TMVectorField = std::function<TMVector(const TMPoint&)>;

bool same_point(const TMPoint& a, const TMPoint& b, double tol = 0.0);

// X^h at `at`: (X, dy^k = -Gamma^k_ij y^i X^j).
TMVector horizontal_lift(const RiemannianChart& chart, const Vec& X, const TMPoint& at);

// X^v at `at`: (0, X).
TMVector vertical_lift(const RiemannianChart& chart, const Vec& X, const TMPoint& at);

// Connection map K(A)^k = dy^k + Gamma^k_ij y^i dx^j; kills horizontal lifts.
Vec connection_map(const RiemannianChart& chart, const TMVector& A);

// pi_* A = dx.
Vec projection(const TMVector& A);

// Lifted field builders (lift evaluated at the field's own base point).
TMVectorField horizontal_lift_field(const RiemannianChart& chart, const VectorFieldOnM& X);
TMVectorField vertical_lift_field(const RiemannianChart& chart, const VectorFieldOnM& X);
TMVectorField constant_extension(const TMVector& A);

// Finite-difference Lie bracket on TM: [F,G]^a = F^b d_b G^a - G^b d_b F^a
// over the 2n induced coordinates. Throws DomainError if the stencil leaves
// the chart box.
TMVector bracket_fd(const RiemannianChart& chart, const TMVectorField& F, const TMVectorField& G,
                    const TMPoint& at);

// Liouville 1-form: Theta(A) = g_x(pi_* A, u).
double liouville_form(const RiemannianChart& chart, const TMVector& A);

}  // namespace isotm
