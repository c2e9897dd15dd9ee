#pragma once

#include <Eigen/Dense>
#include <memory>

namespace gcflow {

using Eigen::ArrayXd;

//! Discretization of the unit sphere carrying derivative and quadrature
//! operators. Two flavours:
//!   n = 1 : periodic nodes theta_j = 2*pi*j/N on [0, 2*pi).
//!   n = 2 : colatitude nodes theta1_j = pi*j/(N-1) on [0, pi], endpoints are
//!           pole nodes; fields are axisymmetric (no azimuthal dependence).
//! Immutable after construction; safe to share across concurrent runs.
struct SphereGrid {
    int n = 1;          // surface dimension
    int N = 0;          // node count
    double dtheta = 0;  // node spacing (radians)
    ArrayXd theta;      // node coordinates
    ArrayXd weights;    // round-measure quadrature weights (include sin(theta1)
                        // and the azimuthal 2*pi factor when n = 2)

    bool is_pole(int j) const { return n == 2 && (j == 0 || j == N - 1); }
    double measure() const { return weights.sum(); }
};

//! Builds a grid. Throws std::invalid_argument for unsupported n, N < 16,
//! or (n = 2) even N: an odd count keeps the equator on a node.
SphereGrid build_grid(int n, int N);

std::shared_ptr<const SphereGrid> make_grid(int n, int N);

//! First and second derivative in the angle (n = 1) or colatitude (n = 2).
//! n = 1 uses 6th-order periodic central stencils; n = 2 uses 4th-order
//! stencils with ghost-point reflection across the poles, and d1 is pinned to
//! zero at the poles.
ArrayXd d1(const SphereGrid& grid, const ArrayXd& field);
ArrayXd d2(const SphereGrid& grid, const ArrayXd& field);

//! Quadrature of a node field against the round measure of S^n.
double integrate(const SphereGrid& grid, const ArrayXd& field);

//! cos(theta)/sin(theta) * d1(field), with the pole value replaced by its
//! limit d2(field). This is the rotational-direction second derivative of an
//! axisymmetric field on S^2.
ArrayXd rotational_second_derivative(const SphereGrid& grid,
                                     const ArrayXd& field);

} // namespace gcflow
