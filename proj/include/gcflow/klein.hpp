#pragma once

#include <cmath>

#include "gcflow/geometry.hpp"

namespace gcflow {

//! Image of the hypersurface in the unit-ball (Klein) model: Euclidean radial
//! function r = tanh(rho), Euclidean support function uhat and Euclidean
//! Gauss curvature Khat. The curvatures are related by
//!   K = Khat * ((1 - r^2) / (1 - uhat^2))^((n+2)/2).
struct KleinState {
    int n = 1;
    ArrayXd r;
    ArrayXd uhat;
    ArrayXd khat;
};

KleinState klein_project(const RadialState& state, const GeometryFields& fields);

//! Euclidean radial-graph curvature and support function computed directly
//! from r on the grid, without reference to the hyperbolic-side fields. Used
//! to cross-check the projection law.
struct EuclideanGraph {
    ArrayXd uhat;
    ArrayXd khat;
};

EuclideanGraph euclidean_graph_curvature(const SphereGrid& grid, const ArrayXd& r);

//! Hyperbolic support function recovered from the Klein-side one.
inline double support_from_uhat(double uhat) {
    return uhat / std::sqrt(1.0 - uhat * uhat);
}

} // namespace gcflow
