#pragma once

#include "isotm/chart.hpp"

namespace isotm {

// Inverse stereographic embedding of the unit n-sphere,
// Q(x) = (2x/(1+|x|^2), (1-|x|^2)/(1+|x|^2)) in R^{n+1}, and its Jacobian.
// The pullback of the round metric is exactly (2/(1+|x|^2))^2 * flat.
Vec sphere_embed(const Vec& x);
Mat sphere_embed_jacobian(const Vec& x);

// The quaternionic complex structures of R^4 applied to a 4-vector.
Vec quaternion_J(int i, const Vec& v);

// Hopf vector field W_i = J_i N on S^3 pulled back through the stereographic
// chart (closed-form Jacobian, analytic jet). i in {1,2,3}.
VectorFieldOnM hopf_field(const RiemannianChart& chart, int i);

}  // namespace isotm
