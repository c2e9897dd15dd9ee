#pragma once

#include "gcflow/klein.hpp"
#include "gcflow/prescribed.hpp"

namespace gcflow {

//! Lower limits of the inner 1D integrals, frozen once per run, and the
//! tolerance the inner adaptive quadrature must reach.
struct FunctionalConfig {
    double a = 0.25;          // lower limit for the Klein-side integrals
    double b = 0.25;          // lower limit for the conserved radial integral
    double quad_tol = 1e-12;
};

//! a = uhat_min/2 and b = rho_min/2 of the initial hypersurface.
FunctionalConfig freeze_config(const RadialState& initial,
                               const GeometryFields& fields,
                               const KleinState& kstate);

//! Weight functions of the Klein-side functionals. Named to avoid collision
//! with phi = sinh(rho).
double psi_radial(double s, int n, double alpha);   // s^alpha (1-s^2)^((n+2-alpha)/2)
double varphi_support(double s, int n);             // s^-1 (1-s^2)^(-(n+1)/2)

//! Monotone functional of the unnormalized flow:
//!   Q = int Psi(r) f_tilde dtheta - int Omega(uhat) dsigma,
//! with Psi(r) = int_a^r s^n / psi_radial(s) ds and
//! Omega(u) = int_a^u varphi_support(s) ds. The Gauss-map measure is pulled
//! back to the grid through r^(n+1) dtheta = (uhat/Khat) dsigma.
double q_functional(const SphereGrid& grid, const KleinState& kstate,
                    const ArrayXd& f_tilde, double alpha,
                    const FunctionalConfig& cfg);

//! Monotone functional of the normalized flow: J = int Omega(uhat) dsigma,
//! with the same pullback.
double j_functional(const SphereGrid& grid, const KleinState& kstate,
                    const FunctionalConfig& cfg);

//! int Omega(rho) f_tilde dtheta with Omega(rho) = int_b^rho sinh(s)^(n-alpha) ds;
//! constant along the normalized flow.
double conserved_integral(const SphereGrid& grid, const ArrayXd& rho,
                          const ArrayXd& f_tilde, double alpha,
                          const FunctionalConfig& cfg);

//! Pointwise defect of the target elliptic equation. Unnormalized mode checks
//! phi^alpha K = f_tilde u (c_star = 1); normalized mode measures the best
//! proportionality constant c_star first. Norms are relative to
//! max_j(f_tilde u).
struct ResidualReport {
    double linf = 0.0;
    double l2 = 0.0;
    double c_star = 1.0;
    double ratio_min = 0.0;  // node-wise phi^alpha K / (f_tilde u)
    double ratio_max = 0.0;
    ArrayXd pointwise;       // normalized per-node defect
};

ResidualReport residual(const SphereGrid& grid, const GeometryFields& fields,
                        const ArrayXd& f_tilde, double alpha, bool normalized);

//! Max node distance between two radial profiles on the same grid.
//! Throws std::invalid_argument for incompatible grids.
double uniqueness_distance(const RadialState& a, const RadialState& b);

//! J evaluated on the rotationally symmetric ellipsoid with semi-axes
//! (e1, e2, ..., e2) inside the unit ball, parametrized by its Gauss map:
//! uhat(v) = sqrt(e1^2 - (e1^2 - e2^2) sin^2 v).
double ellipsoid_j(double e1, double e2, int n, double a, double quad_tol);

} // namespace gcflow
