#pragma once

#include <complex>
#include <functional>

#include "isotm/tbundle.hpp"

namespace isotm {

using Cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;

// Fiber energy E(x,y) = (1/2) g_x(u,u) and its gradient in the induced
// coordinates. The horizontal derivative of E vanishes identically.
double fiber_energy(const RiemannianChart& chart, const TMPoint& at);
Vec fiber_energy_grad(const RiemannianChart& chart, const TMPoint& at);

// J_{delta,sigma}: scalar fields delta, sigma on TM with alpha derived from
// alpha*delta - sigma^2 = 1, so the defining identity is unviolable. Jets are
// gradients in the 2n induced coordinates.
struct IsotropicStructure {
    std::function<double(const TMPoint&)> delta;
    std::function<double(const TMPoint&)> sigma;      // null means sigma == 0
    std::function<Vec(const TMPoint&)> delta_jet;     // optional
    std::function<Vec(const TMPoint&)> sigma_jet;     // optional

    bool sigma_zero = false;

    // Set by the family constructors: dependence on the point only through
    // r^2 = g(u,u).
    bool radial = false;
    std::function<double(double)> delta_of_r2;
    std::function<double(double)> sigma_of_r2;

    double delta_at(const TMPoint& at) const;
    double sigma_at(const TMPoint& at) const;
    double alpha_at(const TMPoint& at) const;

    bool has_jets() const { return static_cast<bool>(delta_jet) && (sigma_zero || static_cast<bool>(sigma_jet)); }

    // Gradients in induced coordinates; jets when present, else central FD.
    Vec delta_grad(const RiemannianChart& chart, const TMPoint& at) const;
    Vec sigma_grad(const RiemannianChart& chart, const TMPoint& at) const;
    Vec alpha_grad(const RiemannianChart& chart, const TMPoint& at) const;

    // Compares analytic jets against finite differences; JetMismatchError
    // beyond 1e-6 relative.
    void verify_jets(const RiemannianChart& chart, const TMPoint& at) const;
};

// Sasaki case J_{1,0}: delta = alpha = 1, sigma = 0.
IsotropicStructure sasaki_structure();

// delta^-1 = sqrt(2kE + b), sigma = 0. DomainError where 2kE + b <= 0.
IsotropicStructure family_sigma0(const RiemannianChart& chart, double k, double b);

// delta^-2 = (2kE + b + sqrt((2kE+b)^2 + 4 a^2 k^2)) / 2, sigma = a k delta^2.
// ParameterError if a == 0.
IsotropicStructure family_general(const RiemannianChart& chart, double k, double a, double b);

IsotropicStructure custom_structure(std::function<double(const TMPoint&)> delta,
                                    std::function<double(const TMPoint&)> sigma = nullptr,
                                    std::function<Vec(const TMPoint&)> delta_jet = nullptr,
                                    std::function<Vec(const TMPoint&)> sigma_jet = nullptr);

// J A = (sigma X - delta Z)^h + (alpha X - sigma Z)^v for A = X^h + Z^v.
TMVector apply_J(const IsotropicStructure& s, const RiemannianChart& chart, const TMVector& A);

// N(A,B) = [JA,JB] - J[JA,B] - J[A,JB] - [A,B] with constant-coefficient
// extensions of A and B; tensorial, so the extension choice is immaterial.
TMVector nijenhuis(const IsotropicStructure& s, const RiemannianChart& chart, const TMPoint& at,
                   const TMVector& A, const TMVector& B);

// max |N| component over the 2n coordinate-vector pairs at `at`.
double nijenhuis_max_component(const IsotropicStructure& s, const RiemannianChart& chart,
                               const TMPoint& at);

enum class IntegrabilityVerdict { Integrable, NotIntegrable, Inconclusive };

// <= 1e-4 integrable, > 1e-2 not; the gap is reported inconclusive.
IntegrabilityVerdict integrability_verdict(double max_residual, double tol_low = 1e-4,
                                           double tol_high = 1e-2);

// z = u + iv on TM with u = sigma/delta, v = 1/delta.
struct ComplexFieldZ {
    std::function<Cplx(const Vec& x, const Vec& y)> z;
    std::function<CVec(const Vec& x, const Vec& y)> dz_dx;  // optional
    std::function<CVec(const Vec& x, const Vec& y)> dz_dy;  // optional

    bool has_jets() const { return static_cast<bool>(dz_dx) && static_cast<bool>(dz_dy); }
    CVec dx_at(const Vec& x, const Vec& y) const;
    CVec dy_at(const Vec& x, const Vec& y) const;
};

ComplexFieldZ z_from_structure(const IsotropicStructure& s);

// delta = 1/v, sigma = u/v; refuses Im z <= 0.
IsotropicStructure structure_from_z(const ComplexFieldZ& zf);

// The explicit integrable field on T R^n:
// u = x.y/(1+x.x), v = sqrt((1+x.x)(1+y.y) - (x.y)^2)/(1+x.x), analytic jets.
ComplexFieldZ explicit_flat_z(int n);

// residual_l = dz/dx^l + z dz/dy^l; all n components.
CVec flat_pde_residual(const ComplexFieldZ& zf, const Vec& x, const Vec& y);

// Integrability residual on a conformal space-form chart of curvature k:
//   sum_i [ z_{y^i} (y^{s0} mu_i - mu_{s0} y^i) - z_{y^{s0}} y^i mu_i ]
//   + z_{x^{s0}} + z z_{y^{s0}} + k y^{s0} lambda^2,
// with mu_i = (d_i lambda)/lambda. Vanishes exactly for the integrable
// families; the flat limit (k=0, mu=0) reduces to flat_pde_residual.
Cplx sphere_pde_residual(const ComplexFieldZ& zf, const RiemannianChart& chart, const Vec& x,
                         const Vec& y, int s0);

// z(u,v) = (sigma + i)/delta evaluated at a TM point.
Cplx z_map(const IsotropicStructure& s, const TMPoint& at);

// Phi((u,v),z) = v - z u for embedded unit tangent data (u.u = 1, u.v = 0).
CVec phi_map(const Vec& u, const Vec& v, Cplx z);

}  // namespace isotm
