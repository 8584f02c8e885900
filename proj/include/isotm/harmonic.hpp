#pragma once

#include "isotm/gmetric.hpp"

namespace isotm {

// X_*(V) = V^h + (nabla_V X)^v at (p, X(p)).
TMVector pushforward(const RiemannianChart& chart, const VectorFieldOnM& X, const Vec& V,
                     const Vec& p);

// Axis-aligned quadrature region, optionally clipped to |x| <= ball_radius.
struct QuadratureRegion {
    Vec lo, hi;
    double ball_radius = std::numeric_limits<double>::infinity();

    static QuadratureRegion of_chart(const RiemannianChart& chart);
    bool contains(const Vec& x) const;
};

struct EnergyReport {
    std::function<double(const Vec&)> density;  // e(X)(p)
    double total = 0.0;            // midpoint quadrature over the region
    double cap_volume = 0.0;       // volume of the sphere complement of the region
    double cap_correction = 0.0;   // cap volume times boundary density estimate
    double total_with_cap = 0.0;
    int grid = 0;
    long long cells_used = 0;
};

// Dirichlet energy of X : (M,g) -> (TM, g_{delta,sigma}):
// density e(X)(p) = (n alpha - 2 sigma div X + delta |nabla X|^2)/2 with the
// structure scalars at (p, X(p)); total by midpoint quadrature with
// sqrt(det g) weights. Unit-sphere charts add the analytic polar-cap volume
// (the stereographic box misses a cap around the far pole).
EnergyReport energy(const TangentMetric& m, const VectorFieldOnM& X,
                    const QuadratureRegion& region, int grid);

// Volume of the polar cap of the unit n-sphere not covered by the
// stereographic chart ball |x| <= radius.
double sphere_cap_volume(int n, double radius);

struct TensionReport {
    Vec horizontal;       // vector at p
    Vec vertical;         // vector at p
    TMVector assembled;   // horizontal^h + vertical^v at (p, X(p))
    std::string source;   // "closed_form" or "oracle"
};

enum class TensionSource { ClosedForm, Oracle };

// Tension field of X : (M,g) -> (TM, g_{delta,sigma}), assembled from the
// closed-form connection blocks. For sigma != 0 the structure must carry
// analytic jets (JetRequiredError otherwise). Writing u = X(p),
// W_i = nabla_{V_i} X over an orthonormal frame, RicOp = sum_i R(u,V_i)V_i,
// T_R = sum_i R(u,W_i)V_i, T_phiV = sum_i dphi(W_i^v) V_i,
// T_phiW = sum_i dphi(W_i^v) W_i, and (X_i, Y_i, Z_i) for the split
// g-gradients of (alpha, delta, sigma):
//
//  tau_h = -s d RicOp + d(a X1 - s X2) - s(a Z1 - s Z2) - (n/2) X1
//          - (1/2)|nabla X|^2 Y1 + div(X) Z1 + d^2 T_R + nabla_c X
//          + d T_aV - s T_sV + s T_dW - d T_sW,
//     c  = s(a Y1 - s Y2) - d(a Z1 - s Z2)
//  tau_v = -s^2 RicOp + s(a X1 - s X2) - a(a Z1 - s Z2) - (n/2) X2
//          - (1/2)|nabla X|^2 Y2 + div(X) Z2 - Delta X + s d T_R + nabla_e X
//          + s T_aV - a T_sV + a T_dW - s T_sW,
//     e  = a(a Y1 - s Y2) - s(a Z1 - s Z2).
TensionReport tension_closed(const TangentMetric& m, const VectorFieldOnM& X, const Vec& p);

// sigma == 0 specialization (delta = 1/alpha, so Y_i = -X_i/alpha^2):
//  tau_h = (1 - n/2 + |nabla X|^2/(2 a^2)) X1 + (1/a^2) T_R + (1/a) T_aV
//  tau_v = -Delta X - nabla_{X1} X - (1/a) T_aW
//          + (|nabla X|^2/(2 a^2) - n/2) X2.
// SigmaNotZeroError for structures with sigma != 0.
TensionReport tension_sigma0(const TangentMetric& m, const VectorFieldOnM& X, const Vec& p);

// Defining sum tau = sum_i { nabla_{X_* V_i} X_* V_i - X_*(nabla_{V_i} V_i) }
// evaluated with the finite-difference Koszul connection; independent of the
// closed forms.
TensionReport tension_oracle(const TangentMetric& m, const VectorFieldOnM& X, const Vec& p,
                             const std::vector<int>& frame_order = {});

TensionReport tension(const TangentMetric& m, const VectorFieldOnM& X, const Vec& p,
                      TensionSource source);

struct Tau1Report {
    TensionReport projected;   // tau - g(tau, N) N
    Vec vertical_expanded;     // closed-form vertical part
    double form_gap;           // max |projected vertical - expanded vertical|
};

// Tension into the unit tangent bundle (sigma == 0): tangential projection of
// tau with respect to the unit normal, plus the expanded vertical form for
// cross-checking. NotUnitFieldError off the unit bundle.
Tau1Report tau1(const TangentMetric& m, const VectorFieldOnM& X, const Vec& p,
                TensionSource source = TensionSource::ClosedForm);

enum class HarmonicVerdictKind { Harmonic, NotHarmonic, Inconclusive };

struct HarmonicityVerdict {
    double residual_norm = 0.0;
    double tolerance = 1e-4;
    HarmonicVerdictKind verdict = HarmonicVerdictKind::Inconclusive;
    std::vector<std::pair<std::string, Vec>> breakdown;
};

// Harmonic-unit-field criterion for sigma == 0: with s2 = |nabla X|^2/(2 a^2),
//   Delta X = [|nabla X|^2 + (n/2 - s2) g(X2,X)] X + (s2 - n/2) X2
//             - nabla_{X1} X - (1/a) T_aW.
// The residual is LHS - RHS; its vanishing is equivalent to the vertical part
// of tau_1 vanishing. Thresholds 1e-4 / 1e-2 with an inconclusive band.
HarmonicityVerdict harmonic_unit_residual(const TangentMetric& m, const VectorFieldOnM& X,
                                          const Vec& p,
                                          TensionSource source = TensionSource::ClosedForm);

struct ParallelCheckReport {
    double condition1 = 0.0;  // |1 - n/2| |X1|_g
    double condition2 = 0.0;  // |X2 - g(X2,X) X|_g
    bool harmonic_map = false;
};

// Harmonic-map conditions for a parallel unit field: (1 - n/2) X1 = 0 and
// X2 parallel to X. NotParallelError/NotUnitFieldError on bad input.
ParallelCheckReport parallel_field_check(const TangentMetric& m, const VectorFieldOnM& X,
                                         const Vec& p, double tol = 1e-6);

struct FirstVariationReport {
    double lhs = 0.0;  // d/dt E(U_t) at t = 0, Richardson-extrapolated
    double rhs = 0.0;  // -integral of g(V^v, tau_1(X))
    double rel_gap = 0.0;
};

// First variation of the energy through unit fields U_t = (X+tV)/|X+tV|.
// V must be g-orthogonal to X on the region (NotOrthogonalError otherwise);
// for regions with boundary the caller supplies V with a cutoff so the
// boundary flux vanishes.
FirstVariationReport first_variation_check(const TangentMetric& m, const VectorFieldOnM& X,
                                           const VectorFieldOnM& V,
                                           const QuadratureRegion& region, int grid,
                                           double t_step = 1e-4,
                                           TensionSource source = TensionSource::ClosedForm);

}  // namespace isotm
