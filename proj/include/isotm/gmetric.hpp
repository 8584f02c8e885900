#pragma once

#include <string>
#include <utility>
#include <vector>

#include "isotm/iso.hpp"
#include "isotm/tbundle.hpp"

namespace isotm {

// The metric g_{delta,sigma} = dTheta(J., .) on TM, evaluated through its
// lift blocks:
//   g(X^h,Y^h) = alpha g(X,Y),  g(X^h,Y^v) = -sigma g(X,Y),
//   g(X^v,Y^v) = delta g(X,Y).
struct TangentMetric {
    RiemannianChart chart;
    IsotropicStructure structure;
};

TangentMetric make_tangent_metric(RiemannianChart chart, IsotropicStructure structure);

// Scalar field on TM with optional analytic gradient in induced coordinates.
struct ScalarOnTM {
    std::function<double(const TMPoint&)> value;
    std::function<Vec(const TMPoint&)> grad;  // optional
};

ScalarOnTM alpha_scalar(const TangentMetric& m);
ScalarOnTM delta_scalar(const TangentMetric& m);
ScalarOnTM sigma_scalar(const TangentMetric& m);

double metric_eval(const TangentMetric& m, const TMVector& A, const TMVector& B);

// 2n x 2n coordinate matrix of g_{delta,sigma} at `at`; symmetric positive
// definite for alpha > 0.
Mat metric_matrix(const TangentMetric& m, const TMPoint& at);

// Coordinate matrix of J at `at` (for invariance checks).
Mat j_matrix(const TangentMetric& m, const TMPoint& at);

// Solves M w = rhs with an SPD factorization; SingularMetricError on failure.
Vec metric_solve(const TangentMetric& m, const TMPoint& at, const Vec& rhs);

// gradient of f wrt g_{delta,sigma}: g(grad f, A) = df(A).
TMVector gradient_on_TM(const TangentMetric& m, const ScalarOnTM& f, const TMPoint& at);

// (pi_*(grad f), K(grad f)) at (p, X(p)) — the X_1/X_2-style projections.
std::pair<Vec, Vec> x1_x2_fields(const TangentMetric& m, const ScalarOnTM& f,
                                 const VectorFieldOnM& X, const Vec& p);

// Outward unit normal of the unit tangent bundle,
// N = sqrt(alpha) ((sigma/alpha) u^h + u^v); NotUnitFiberError off S(M).
TMVector unit_normal(const TangentMetric& m, const TMPoint& at);

// g-natural coefficients for structures depending only on r^2 = g(u,u):
// alpha1 = delta, alpha2 = -sigma, alpha3 = alpha - delta (all beta_i = 0).
struct GNaturalCoefficients {
    std::function<double(double)> alpha1;
    std::function<double(double)> alpha2;
    std::function<double(double)> alpha3;
};

GNaturalCoefficients gnatural_coefficients(const IsotropicStructure& s);

enum class LiftKind { HH, HV, VH, VV };

// Closed-form Levi-Civita connection value with a labeled term breakdown;
// `result` is the sum of `terms`.
struct ConnectionValue {
    TMVector result;
    std::vector<std::pair<std::string, TMVector>> terms;
};

// Levi-Civita connection of g_{delta,sigma} on lifted fields, in closed form.
// The four blocks are derived from the Koszul formula with the bracket and
// lift-derivative identities; the mixed (-sigma) block couples the horizontal
// and vertical projections, so each block solves the 2x2 system
//   [alpha -sigma; -sigma delta] [g(W_h,.); g(W_v,.)] = [P(.); Q(.)]
// whose inverse is [delta sigma; sigma alpha] (det = alpha delta - sigma^2 = 1).
// Writing hphi(V), vphi(V) for derivatives of a scalar phi along V^h, V^v:
//
//  hh: W_h = nabla_X Y - (sd/2)(R(u,X)Y + R(u,Y)X)
//            + (1/2)(d ha(X) - s hs(X)) Y + (1/2)(d ha(Y) - s hs(Y)) X
//            - (1/2) g(X,Y) h(grad a)
//      W_v = -(1/2) R(X,Y)u - (s^2/2)(R(u,X)Y + R(u,Y)X)
//            + (1/2)(s ha(X) - a hs(X)) Y + (1/2)(s ha(Y) - a hs(Y)) X
//            - (1/2) g(X,Y) v(grad a)
//  hv: W_h = (d^2/2) R(u,Y)X + (1/2)(s hd(X) - d hs(X)) Y
//            + (1/2)(d va(Y) - s vs(Y)) X + (1/2) g(X,Y) h(grad s)
//      W_v = nabla_X Y + (sd/2) R(u,Y)X + (1/2)(a hd(X) - s hs(X)) Y
//            + (1/2)(s va(Y) - a vs(Y)) X + (1/2) g(X,Y) v(grad s)
//  vh: W_h = (d^2/2) R(u,X)Y + (1/2)(d va(X) - s vs(X)) Y
//            + (1/2)(s hd(Y) - d hs(Y)) X + (1/2) g(X,Y) h(grad s)
//      W_v = (sd/2) R(u,X)Y + (1/2)(s va(X) - a vs(X)) Y
//            + (1/2)(a hd(Y) - s hs(Y)) X + (1/2) g(X,Y) v(grad s)
//  vv: W_h = (1/2)(s vd(X) - d vs(X)) Y + (1/2)(s vd(Y) - d vs(Y)) X
//            - (1/2) g(X,Y) h(grad d)
//      W_v = (1/2)(a vd(X) - s vs(X)) Y + (1/2)(a vd(Y) - s vs(Y)) X
//            - (1/2) g(X,Y) v(grad d)
//
// (a = alpha, d = delta, s = sigma.) At sigma == 0 these reduce to the
// familiar generalized-Sasaki blocks. The independent Koszul oracle below
// certifies every block numerically.
ConnectionValue levi_civita_closed(const TangentMetric& m, const VectorFieldOnM& X,
                                   const VectorFieldOnM& Y, LiftKind kind, const TMPoint& at);

// Independent finite-difference Koszul evaluation of nabla_F G for arbitrary
// TM fields; torsion-free and metric-compatible by construction up to FD
// tolerance. Adjudicates the closed forms.
TMVector koszul_oracle(const TangentMetric& m, const TMVectorField& F, const TMVectorField& G,
                       const TMPoint& at);

}  // namespace isotm
