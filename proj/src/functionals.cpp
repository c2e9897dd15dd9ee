#include "gcflow/functionals.hpp"

#include <cmath>
#include <stdexcept>

#include "gcflow/quadrature.hpp"

namespace gcflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

// int_b^rho sinh(s)^p ds, closed forms for the integer powers that occur in
// the shipped exponent range, adaptive quadrature otherwise.
double omega_radial(double rho, double b, double p, double tol) {
    if (p == 0.0) return rho - b;
    if (p == -1.0)
        return std::log(std::tanh(0.5 * rho)) - std::log(std::tanh(0.5 * b));
    if (p == -2.0) return 1.0 / std::tanh(b) - 1.0 / std::tanh(rho);
    return adaptive_simpson(
        [p](double s) { return std::pow(std::sinh(s), p); }, b, rho, tol);
}

// antiderivative of varphi_support
double omega_support_anti(double s, int n) {
    const double root = std::sqrt(1.0 - s * s);
    if (n == 1) return std::log(s) - std::log(root);
    return 1.0 / root + std::log(s) - std::log(1.0 + root);
}

double omega_support(double a, double u, int n) {
    return omega_support_anti(u, n) - omega_support_anti(a, n);
}

// int_a^r s^n / psi_radial(s) ds; integrand s^(n-alpha) (1-s^2)^((alpha-n-2)/2).
// Closed forms for the exponent pairs the shipped scenarios hit.
double big_psi(double a, double r, int n, double alpha, double tol) {
    const double p = n - alpha;
    const double q = 0.5 * (alpha - n - 2.0);
    auto anti_p1 = [](double s) {  // p = -1, q = -1/2
        return std::log(s) - std::log(1.0 + std::sqrt(1.0 - s * s));
    };
    if (p == -1.0 && q == -0.5) return anti_p1(r) - anti_p1(a);
    if (p == -2.0 && q == 0.0) return 1.0 / a - 1.0 / r;
    return adaptive_simpson(
        [n, alpha](double s) {
            return std::pow(s, n) / psi_radial(s, n, alpha);
        },
        a, r, tol);
}

} // namespace

FunctionalConfig freeze_config(const RadialState& initial,
                               const GeometryFields& /*fields*/,
                               const KleinState& kstate) {
    FunctionalConfig cfg;
    cfg.a = 0.5 * kstate.uhat.minCoeff();
    cfg.b = 0.5 * initial.rho.minCoeff();
    return cfg;
}

double psi_radial(double s, int n, double alpha) {
    return std::pow(s, alpha) * std::pow(1.0 - s * s, 0.5 * (n + 2 - alpha));
}

double varphi_support(double s, int n) {
    return 1.0 / (s * std::pow(1.0 - s * s, 0.5 * (n + 1)));
}

double q_functional(const SphereGrid& grid, const KleinState& kstate,
                    const ArrayXd& f_tilde, double alpha,
                    const FunctionalConfig& cfg) {
    const int n = grid.n;
    double q = 0.0;
    for (int j = 0; j < grid.N; ++j) {
        const double psi_term =
            big_psi(cfg.a, kstate.r[j], n, alpha, cfg.quad_tol);
        const double omega = omega_support(cfg.a, kstate.uhat[j], n);
        const double sigma_weight =
            kstate.khat[j] * std::pow(kstate.r[j], n + 1) / kstate.uhat[j];
        q += grid.weights[j] * (psi_term * f_tilde[j] - omega * sigma_weight);
    }
    return q;
}

double j_functional(const SphereGrid& grid, const KleinState& kstate,
                    const FunctionalConfig& cfg) {
    const int n = grid.n;
    double jv = 0.0;
    for (int j = 0; j < grid.N; ++j) {
        const double omega = omega_support(cfg.a, kstate.uhat[j], n);
        const double sigma_weight =
            kstate.khat[j] * std::pow(kstate.r[j], n + 1) / kstate.uhat[j];
        jv += grid.weights[j] * omega * sigma_weight;
    }
    return jv;
}

double conserved_integral(const SphereGrid& grid, const ArrayXd& rho,
                          const ArrayXd& f_tilde, double alpha,
                          const FunctionalConfig& cfg) {
    const double p = grid.n - alpha;
    double c = 0.0;
    for (int j = 0; j < grid.N; ++j)
        c += grid.weights[j] * f_tilde[j] *
             omega_radial(rho[j], cfg.b, p, cfg.quad_tol);
    return c;
}

ResidualReport residual(const SphereGrid& grid, const GeometryFields& fields,
                        const ArrayXd& f_tilde, double alpha, bool normalized) {
    const ArrayXd lhs = fields.phi.pow(alpha) * fields.K;
    const ArrayXd target = f_tilde * fields.u;
    const ArrayXd ratio = lhs / target;

    ResidualReport r;
    r.ratio_min = ratio.minCoeff();
    r.ratio_max = ratio.maxCoeff();
    r.c_star = normalized ? ratio.mean() : 1.0;
    const double scale = target.maxCoeff();
    r.pointwise = (lhs - r.c_star * target) / scale;
    r.linf = r.pointwise.abs().maxCoeff();
    r.l2 = std::sqrt(integrate(grid, r.pointwise.square()) / grid.measure());
    return r;
}

double uniqueness_distance(const RadialState& a, const RadialState& b) {
    if (!a.grid || !b.grid || a.grid->n != b.grid->n || a.grid->N != b.grid->N)
        throw std::invalid_argument("uniqueness_distance: incompatible grids");
    return (a.rho - b.rho).abs().maxCoeff();
}

double ellipsoid_j(double e1, double e2, int n, double a, double quad_tol) {
    const double sphere_factor = (n == 1) ? 1.0 : 2.0 * kPi;
    auto uhat = [e1, e2](double v) {
        const double sv = std::sin(v);
        return std::sqrt(e1 * e1 - (e1 * e1 - e2 * e2) * sv * sv);
    };
    auto outer = [&](double v) {
        const double jac = (n == 1) ? 1.0 : std::sin(v);
        return omega_support(a, uhat(v), n) * jac;
    };
    const double upper = (n == 1) ? 2.0 * kPi : kPi;
    return sphere_factor * adaptive_simpson(outer, 0.0, upper, quad_tol);
}

} // namespace gcflow
