#include "gcflow/sphere_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace gcflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Clenshaw-Curtis weights on x_k = cos(k*pi/m), k = 0..m (m even). They
// integrate polynomials of degree <= m over [-1,1] and sum to 2 exactly.
ArrayXd clenshaw_curtis(int m) {
    ArrayXd w(m + 1);
    for (int k = 0; k <= m; ++k) {
        double acc = 1.0;
        for (int j = 1; j <= m / 2; ++j) {
            const double bj = (j == m / 2) ? 1.0 : 2.0;
            acc -= bj / (4.0 * j * j - 1.0) * std::cos(2.0 * j * k * kPi / m);
        }
        const double ck = (k == 0 || k == m) ? 1.0 : 2.0;
        w[k] = ck * acc / m;
    }
    return w;
}

// Reflect an index across the pole endpoints 0 and N-1.
inline int reflect(int idx, int N) {
    if (idx < 0) return -idx;
    if (idx > N - 1) return 2 * (N - 1) - idx;
    return idx;
}

} // namespace

SphereGrid build_grid(int n, int N) {
    if (n != 1 && n != 2)
        throw std::invalid_argument("build_grid: dimension must be 1 or 2");
    if (N < 16)
        throw std::invalid_argument("build_grid: need at least 16 nodes");
    if (n == 2 && N % 2 == 0)
        throw std::invalid_argument(
            "build_grid: n = 2 needs an odd node count (equator on a node)");

    SphereGrid g;
    g.n = n;
    g.N = N;
    g.theta.resize(N);
    g.weights.resize(N);
    if (n == 1) {
        g.dtheta = 2.0 * kPi / N;
        for (int j = 0; j < N; ++j) g.theta[j] = g.dtheta * j;
        g.weights.setConstant(g.dtheta);
    } else {
        const int m = N - 1;
        g.dtheta = kPi / m;
        for (int j = 0; j < N; ++j) g.theta[j] = g.dtheta * j;
        g.weights = 2.0 * kPi * clenshaw_curtis(m);
    }
    return g;
}

std::shared_ptr<const SphereGrid> make_grid(int n, int N) {
    return std::make_shared<const SphereGrid>(build_grid(n, N));
}

ArrayXd d1(const SphereGrid& grid, const ArrayXd& field) {
    const int N = grid.N;
    ArrayXd out(N);
    if (grid.n == 1) {
        const double scale = 1.0 / (60.0 * grid.dtheta);
        for (int j = 0; j < N; ++j) {
            const double* f = field.data();
            auto at = [&](int o) { return f[(j + o + 3 * N) % N]; };
            out[j] = scale * (-at(-3) + 9.0 * at(-2) - 45.0 * at(-1) +
                              45.0 * at(1) - 9.0 * at(2) + at(3));
        }
    } else {
        const double scale = 1.0 / (12.0 * grid.dtheta);
        for (int j = 0; j < N; ++j) {
            auto at = [&](int o) { return field[reflect(j + o, N)]; };
            out[j] = scale * (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2));
        }
        out[0] = 0.0;
        out[N - 1] = 0.0;
    }
    return out;
}

ArrayXd d2(const SphereGrid& grid, const ArrayXd& field) {
    // difference-from-center form annihilates constants exactly
    const int N = grid.N;
    ArrayXd out(N);
    if (grid.n == 1) {
        const double scale = 1.0 / (180.0 * grid.dtheta * grid.dtheta);
        for (int j = 0; j < N; ++j) {
            const double* f = field.data();
            const double c = f[j];
            auto at = [&](int o) { return f[(j + o + 3 * N) % N] - c; };
            out[j] = scale * (2.0 * (at(-3) + at(3)) - 27.0 * (at(-2) + at(2)) +
                              270.0 * (at(-1) + at(1)));
        }
    } else {
        const double scale = 1.0 / (12.0 * grid.dtheta * grid.dtheta);
        for (int j = 0; j < N; ++j) {
            const double c = field[j];
            auto at = [&](int o) { return field[reflect(j + o, N)] - c; };
            out[j] = scale * (-(at(-2) + at(2)) + 16.0 * (at(-1) + at(1)));
        }
    }
    return out;
}

double integrate(const SphereGrid& grid, const ArrayXd& field) {
    return (grid.weights * field).sum();
}

ArrayXd rotational_second_derivative(const SphereGrid& grid,
                                     const ArrayXd& field) {
    const ArrayXd fd1 = d1(grid, field);
    const ArrayXd fd2 = d2(grid, field);
    ArrayXd out(grid.N);
    for (int j = 0; j < grid.N; ++j) {
        if (grid.is_pole(j))
            out[j] = fd2[j];
        else
            out[j] = std::cos(grid.theta[j]) / std::sin(grid.theta[j]) * fd1[j];
    }
    return out;
}

} // namespace gcflow
