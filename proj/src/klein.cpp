#include "gcflow/klein.hpp"

namespace gcflow {

KleinState klein_project(const RadialState& state, const GeometryFields& fields) {
    KleinState k;
    k.n = fields.n;
    k.r = state.rho.tanh();
    k.uhat = fields.u / (1.0 + fields.u.square()).sqrt();
    const double e = 0.5 * (fields.n + 2);
    k.khat = fields.K * ((1.0 - k.uhat.square()) / (1.0 - k.r.square())).pow(e);
    return k;
}

EuclideanGraph euclidean_graph_curvature(const SphereGrid& grid,
                                         const ArrayXd& r) {
    const ArrayXd rd1 = d1(grid, r);
    const ArrayXd rd2 = d2(grid, r);
    const ArrayXd s2 = r.square() + rd1.square();
    const ArrayXd s = s2.sqrt();

    EuclideanGraph e;
    e.uhat = r.square() / s;
    const ArrayXd k_mer =
        (-r * rd2 + 2.0 * rd1.square() + r.square()) / (s * s2);
    if (grid.n == 1) {
        e.khat = k_mer;
    } else {
        const ArrayXd rot = rotational_second_derivative(grid, r);
        const ArrayXd k_rot = (-r * rot + r.square()) / (r.square() * s);
        e.khat = k_mer * k_rot;
    }
    return e;
}

} // namespace gcflow
