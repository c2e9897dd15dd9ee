#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "gcflow/sphere_grid.hpp"

namespace gcflow {

struct PositivityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

//! Parametric family for the prescribed curvature data f_tilde. Every family
//! is even (invariant under the antipodal map) by construction:
//!   constant      : f_tilde = c0
//!   even_cosine   : f_tilde = c0 + sum_k coeffs[k-1] * cos(2 k theta)   (n=1)
//!   even_legendre : f_tilde = c0 + sum_k coeffs[k-1] * P_{2k}(cos theta1) (n=2)
//!   gaussian_pair : c0 + A * [bumps at +-center and their antipodes]
struct PrescribedSpec {
    enum class Family { constant, even_cosine, even_legendre, gaussian_pair };
    Family family = Family::constant;
    double c0 = 1.0;
    std::vector<double> coeffs;
    double amplitude = 0.0;
    double center = 0.0;
    double width = 0.3;
};

//! f_tilde and f = 1/f_tilde sampled on a grid.
struct PrescribedData {
    PrescribedSpec spec;
    ArrayXd f_tilde;
    ArrayXd f;
    bool even = true;
};

double eval_f_tilde(const PrescribedSpec& spec, int n, double theta);

//! Samples the family on the grid. Throws PositivityError when f_tilde dips
//! to zero or below anywhere on the grid.
PrescribedData sample_prescribed(const PrescribedSpec& spec,
                                 const SphereGrid& grid);

//! Initial hypersurface, as a radial profile over the grid.
//!   geodesic_sphere : rho = rho0
//!   perturbed_sphere: rho0 + eps*cos(k theta) (n=1) or rho0 + eps*P_k(cos theta1)
//!   klein_ellipse   : pullback of the Euclidean ellipse/rotational ellipsoid
//!                     with semi-axes (e1, e2) inside the unit ball
struct InitialShape {
    enum class Kind { geodesic_sphere, perturbed_sphere, klein_ellipse };
    Kind kind = Kind::geodesic_sphere;
    double rho0 = 1.0;
    double eps = 0.0;
    int mode_k = 2;
    double e1 = 0.5, e2 = 0.3;
};

ArrayXd sample_initial(const InitialShape& shape, const SphereGrid& grid);

double legendre_p(int l, double x);

} // namespace gcflow
