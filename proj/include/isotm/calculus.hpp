#pragma once

#include "isotm/chart.hpp"

namespace isotm {

// Christoffel symbols of the second kind, Gamma[k](i,j) = Gamma^k_ij.
// Uses the analytic metric jet when present, central differences otherwise.
Tensor3 christoffel(const RiemannianChart& chart, const Vec& p);

// Finite-difference evaluation regardless of jets (cross-validation route).
Tensor3 christoffel_fd(const RiemannianChart& chart, const Vec& p);

// Closed form for a conformal metric: Gamma^k_ij = d^k_i mu_j + d^k_j mu_i
// - d_ij mu_k, mu = dlambda/lambda. Independent of the generic assembly.
Tensor3 christoffel_conformal(const Vec& mu);

// dGamma[l][k](i,j) = d Gamma^k_ij / d x^l.
std::vector<Tensor3> christoffel_d1(const RiemannianChart& chart, const Vec& p);

// Curvature R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
// so that space forms of curvature k satisfy R(X,Y)Z = k(g(Y,Z)X - g(X,Z)Y).
// Storage: R[l][i](j,k) = (R(e_i,e_j)e_k)^l.
std::vector<Tensor3> riemann(const RiemannianChart& chart, const Vec& p);

Vec riemann_apply(const std::vector<Tensor3>& R, const Vec& X, const Vec& Y, const Vec& Z);
Vec riemann_apply(const RiemannianChart& chart, const Vec& p, const Vec& X, const Vec& Y,
                  const Vec& Z);

// Ric(Y,Z) = tr(X -> R(X,Y)Z); space forms give Ric = (n-1)k g.
Mat ricci(const RiemannianChart& chart, const Vec& p);

// Sectional curvature of span{X, Y}. DegeneratePlaneError on (near-)dependent
// spans.
double sectional(const RiemannianChart& chart, const Vec& p, const Vec& X, const Vec& Y);

// (nabla_V X)^k = V^j d_j X^k + Gamma^k_ij V^i X^j. fd_scale controls the
// step used for the field Jacobian when X carries no jet.
Vec covariant_derivative(const RiemannianChart& chart, const VectorFieldOnM& X, const Vec& V,
                         const Vec& p, double fd_scale);
Vec covariant_derivative(const RiemannianChart& chart, const VectorFieldOnM& X, const Vec& V,
                         const Vec& p);

// Orthonormal frame at p: Gram-Schmidt on the coordinate basis in fixed index
// order; columns are the frame vectors. A non-empty `order` permutes the
// seed basis (the exposed quantities below are frame-independent traces, and
// tests exercise that through this hook).
Mat orthonormal_frame(const RiemannianChart& chart, const Vec& p,
                      const std::vector<int>& order = {});

// The i-th Gram-Schmidt frame vector as a field (no analytic jet).
VectorFieldOnM frame_field(const RiemannianChart& chart, int i,
                           const std::vector<int>& order = {});

// Rough Laplacian with the minus-trace convention:
// Delta X = -sum_i { nabla_{V_i} nabla_{V_i} X - nabla_{nabla_{V_i} V_i} X }.
Vec rough_laplacian(const RiemannianChart& chart, const VectorFieldOnM& X, const Vec& p,
                    const std::vector<int>& frame_order = {});

double divergence(const RiemannianChart& chart, const VectorFieldOnM& X, const Vec& p,
                  const std::vector<int>& frame_order = {});

// |nabla X|^2 as a (1,1)-tensor: sum_i g(nabla_{V_i} X, nabla_{V_i} X).
double grad_norm_sq(const RiemannianChart& chart, const VectorFieldOnM& X, const Vec& p,
                    const std::vector<int>& frame_order = {});

}  // namespace isotm
