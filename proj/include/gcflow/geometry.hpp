#pragma once

#include <memory>

#include "gcflow/sphere_grid.hpp"

namespace gcflow {

//! Radial profile of a star-shaped hypersurface at flow time t.
struct RadialState {
    std::shared_ptr<const SphereGrid> grid;
    ArrayXd rho;  // geodesic distance from the origin, > 0
    double t = 0.0;
};

//! Pointwise geometry of the radial graph. The metric, second fundamental
//! form and Weingarten matrix are expressed in the orthonormal sphere frame
//! (colatitude, azimuth); for axisymmetric graphs they are diagonal, so the
//! per-node Weingarten matrix is stored as its diagonal (W11, W22). The
//! second diagonal entry is unused when n = 1.
struct GeometryFields {
    int n = 1;
    ArrayXd phi;        // sinh(rho)
    ArrayXd phi_prime;  // cosh(rho)
    ArrayXd grad;       // first derivative of rho
    ArrayXd rho_dd;     // second derivative of rho
    ArrayXd w;          // graph factor sqrt(1 + |grad|^2 / phi^2)
    ArrayXd u;          // support function phi / w
    ArrayXd g11, g22;   // induced metric
    ArrayXd h11, h22;   // second fundamental form
    ArrayXd W11, W22;   // Weingarten diagonal = principal curvatures by direction
    ArrayXd kappa_min;  // principal curvatures sorted ascending
    ArrayXd kappa_max;
    ArrayXd K;          // Gauss curvature, det W
    ArrayXd H;          // mean curvature, tr W
    bool star_shaped = true;
};

GeometryFields geometry_fields(const RadialState& state);

struct ConvexityReport {
    bool uniformly_convex = false;
    double margin = 0.0;  // min over nodes of the smallest principal curvature
};

ConvexityReport check_convex(const GeometryFields& fields);

//! phi^alpha * f * K, the quantity whose positivity the flow rides on.
ArrayXd theta_diagnostic(const GeometryFields& fields, const ArrayXd& f,
                         double alpha);

//! Antipodal-symmetry defect of a node field: n = 1 pairs theta_j with
//! -theta_j (node N - j), n = 2 pairs theta1_j with pi - theta1_j.
double evenness_defect(const SphereGrid& grid, const ArrayXd& field);

} // namespace gcflow
