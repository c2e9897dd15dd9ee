#include "gcflow/prescribed.hpp"

#include <cmath>

namespace gcflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Periodic gaussian bump on [0, 2*pi), wrapped over a few periods.
double wrapped_gaussian(double x, double sigma) {
    double s = 0.0;
    for (int m = -3; m <= 3; ++m) {
        const double d = x - 2.0 * kPi * m;
        s += std::exp(-0.5 * d * d / (sigma * sigma));
    }
    return s;
}

} // namespace

double legendre_p(int l, double x) {
    double p0 = 1.0, p1 = x;
    if (l == 0) return p0;
    for (int k = 2; k <= l; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double eval_f_tilde(const PrescribedSpec& spec, int n, double theta) {
    using Family = PrescribedSpec::Family;
    switch (spec.family) {
        case Family::constant:
            return spec.c0;
        case Family::even_cosine: {
            double v = spec.c0;
            for (std::size_t k = 0; k < spec.coeffs.size(); ++k)
                v += spec.coeffs[k] * std::cos(2.0 * (k + 1) * theta);
            return v;
        }
        case Family::even_legendre: {
            const double x = std::cos(theta);
            double v = spec.c0;
            for (std::size_t k = 0; k < spec.coeffs.size(); ++k)
                v += spec.coeffs[k] * legendre_p(2 * (k + 1), x);
            return v;
        }
        case Family::gaussian_pair: {
            if (n == 1) {
                // Symmetrized under both reflection and the antipodal map.
                const double s = wrapped_gaussian(theta - spec.center, spec.width) +
                                 wrapped_gaussian(theta + spec.center, spec.width) +
                                 wrapped_gaussian(theta - spec.center - kPi, spec.width) +
                                 wrapped_gaussian(theta + spec.center + kPi, spec.width);
                return spec.c0 + spec.amplitude * s;
            }
            // n = 2: bump pair at the poles, even in cos(theta1).
            const double a = theta / spec.width;
            const double b = (kPi - theta) / spec.width;
            return spec.c0 + spec.amplitude *
                                 (std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b));
        }
    }
    return spec.c0;
}

PrescribedData sample_prescribed(const PrescribedSpec& spec,
                                 const SphereGrid& grid) {
    PrescribedData out;
    out.spec = spec;
    out.f_tilde.resize(grid.N);
    for (int j = 0; j < grid.N; ++j)
        out.f_tilde[j] = eval_f_tilde(spec, grid.n, grid.theta[j]);
    if ((out.f_tilde <= 0.0).any())
        throw PositivityError("prescribed data: f_tilde must be positive on the grid");
    out.f = out.f_tilde.inverse();
    out.even = true;
    return out;
}

ArrayXd sample_initial(const InitialShape& shape, const SphereGrid& grid) {
    ArrayXd rho(grid.N);
    switch (shape.kind) {
        case InitialShape::Kind::geodesic_sphere:
            rho.setConstant(shape.rho0);
            break;
        case InitialShape::Kind::perturbed_sphere:
            for (int j = 0; j < grid.N; ++j) {
                const double t = grid.theta[j];
                rho[j] = shape.rho0 +
                         (grid.n == 1
                              ? shape.eps * std::cos(shape.mode_k * t)
                              : shape.eps * legendre_p(shape.mode_k, std::cos(t)));
            }
            break;
        case InitialShape::Kind::klein_ellipse:
            for (int j = 0; j < grid.N; ++j) {
                const double t = grid.theta[j];
                const double c = std::cos(t), s = std::sin(t);
                const double r = shape.e1 * shape.e2 /
                                 std::sqrt(shape.e2 * shape.e2 * c * c +
                                           shape.e1 * shape.e1 * s * s);
                rho[j] = std::atanh(r);
            }
            break;
    }
    return rho;
}

} // namespace gcflow
