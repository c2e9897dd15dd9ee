#include "gcflow/geometry.hpp"

#include <cmath>

namespace gcflow {

GeometryFields geometry_fields(const RadialState& state) {
    const SphereGrid& grid = *state.grid;
    const int N = grid.N;

    GeometryFields F;
    F.n = grid.n;
    F.phi = state.rho.sinh();
    F.phi_prime = state.rho.cosh();
    F.grad = d1(grid, state.rho);
    F.rho_dd = d2(grid, state.rho);

    const ArrayXd s2 = F.phi.square() + F.grad.square();
    const ArrayXd s = s2.sqrt();
    F.w = s / F.phi;
    F.u = F.phi / F.w;

    F.g11 = s2;
    F.h11 = (-F.phi * F.rho_dd + 2.0 * F.phi_prime * F.grad.square() +
             F.phi.square() * F.phi_prime) /
            s;
    F.W11 = F.h11 / F.g11;

    if (grid.n == 1) {
        F.g22.setZero(N);
        F.h22.setZero(N);
        F.W22.setZero(N);
        F.kappa_min = F.W11;
        F.kappa_max = F.W11;
        F.K = F.W11;
        F.H = F.W11;
    } else {
        ArrayXd rot(N);
        for (int j = 0; j < N; ++j) {
            rot[j] = grid.is_pole(j) ? F.rho_dd[j]
                                     : std::cos(grid.theta[j]) /
                                           std::sin(grid.theta[j]) * F.grad[j];
        }
        F.g22 = F.phi.square();
        F.h22 = (-F.phi * rot + F.phi.square() * F.phi_prime) / s;
        F.W22 = F.h22 / F.g22;
        F.kappa_min = F.W11.min(F.W22);
        F.kappa_max = F.W11.max(F.W22);
        F.K = F.W11 * F.W22;
        F.H = F.W11 + F.W22;
    }

    F.star_shaped = F.u.allFinite() && (F.u > 0.0).all();
    return F;
}

ConvexityReport check_convex(const GeometryFields& fields) {
    ConvexityReport r;
    r.margin = fields.kappa_min.minCoeff();
    r.uniformly_convex = std::isfinite(r.margin) && r.margin > 0.0;
    return r;
}

ArrayXd theta_diagnostic(const GeometryFields& fields, const ArrayXd& f,
                         double alpha) {
    return fields.phi.pow(alpha) * f * fields.K;
}

double evenness_defect(const SphereGrid& grid, const ArrayXd& field) {
    double defect = 0.0;
    if (grid.n == 1) {
        for (int j = 1; j < grid.N; ++j)
            defect = std::max(defect, std::abs(field[j] - field[grid.N - j]));
    } else {
        for (int j = 0; j < grid.N; ++j)
            defect = std::max(defect, std::abs(field[j] - field[grid.N - 1 - j]));
    }
    return defect;
}

} // namespace gcflow
