#include <doctest.h>

#include <cmath>
#include <vector>

#include "gcflow/geometry.hpp"
#include "oracle.hpp"

using namespace gcflow;

namespace {
constexpr double kPi = 3.14159265358979323846;

RadialState circle_state(int N, double rho0) {
    RadialState s;
    s.grid = make_grid(1, N);
    s.rho = ArrayXd::Constant(N, rho0);
    return s;
}
} // namespace

TEST_CASE("geodesic circle: phi, w, u, K") {
    const double rho0 = std::asinh(1.0);
    const RadialState s = circle_state(64, rho0);
    const GeometryFields F = geometry_fields(s);
    CHECK(F.phi[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(F.phi_prime[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(F.w[10] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(F.u[10] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(F.K[20] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(F.H[20] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(F.star_shaped);

    const ConvexityReport c = check_convex(F);
    CHECK(c.uniformly_convex);
    CHECK(c.margin == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("geodesic sphere (n = 2)") {
    const double rho0 = 0.8;
    RadialState s;
    s.grid = make_grid(2, 65);
    s.rho = ArrayXd::Constant(65, rho0);
    const GeometryFields F = geometry_fields(s);
    const double cot = std::cosh(rho0) / std::sinh(rho0);
    for (int j : {0, 7, 32, 64}) {
        CHECK(F.W11[j] == doctest::Approx(cot).epsilon(1e-13));
        CHECK(F.W22[j] == doctest::Approx(cot).epsilon(1e-13));
        CHECK(F.K[j] == doctest::Approx(cot * cot).epsilon(1e-13));
        CHECK(F.u[j] == doctest::Approx(std::sinh(rho0)).epsilon(1e-14));
    }
}

TEST_CASE("u * w = phi identity") {
    const auto grid = make_grid(1, 128);
    RadialState s{grid, 1.0 + 0.3 * (2.0 * grid->theta).cos(), 0.0};
    const GeometryFields F = geometry_fields(s);
    CHECK(((F.u * F.w - F.phi).abs() / F.phi).maxCoeff() < 1e-14);

    const auto g2 = make_grid(2, 65);
    RadialState s2{g2, 0.9 + 0.1 * g2->theta.cos().square(), 0.0};
    const GeometryFields F2 = geometry_fields(s2);
    CHECK(((F2.u * F2.w - F2.phi).abs() / F2.phi).maxCoeff() < 1e-14);
}

TEST_CASE("curvature against independent oracles") {
    // rho = 1 + 0.1 cos(2 theta): library K vs (a) closed-form derivatives and
    // (b) an 8th-order stencil evaluation at 4x resolution.
    const int N = 512;
    const auto grid = make_grid(1, N);
    RadialState s{grid, 1.0 + 0.1 * (2.0 * grid->theta).cos(), 0.0};
    const GeometryFields F = geometry_fields(s);

    for (int j : {0, N / 8, N / 4}) {  // theta = 0, pi/4, pi/2
        const double t = grid->theta[j];
        const double rho = 1.0 + 0.1 * std::cos(2.0 * t);
        const double rd1 = -0.2 * std::sin(2.0 * t);
        const double rd2 = -0.4 * std::cos(2.0 * t);
        const double k_exact = oracle::curve_curvature(rho, rd1, rd2);
        CHECK(std::abs(F.K[j] - k_exact) / std::abs(k_exact) < 1e-8);
    }

    const int M = 4 * N;
    const double h = 2.0 * kPi / M;
    std::vector<double> rho_fine(M);
    for (int j = 0; j < M; ++j) rho_fine[j] = 1.0 + 0.1 * std::cos(2.0 * h * j);
    const std::vector<double> f1 = oracle::d1_periodic8(rho_fine, h);
    const std::vector<double> f2 = oracle::d2_periodic8(rho_fine, h);
    for (int j : {0, N / 8, N / 4}) {
        const int jf = 4 * j;
        const double k_oracle =
            oracle::curve_curvature(rho_fine[jf], f1[jf], f2[jf]);
        CHECK(std::abs(F.K[j] - k_oracle) / std::abs(k_oracle) < 1e-8);
    }
}

TEST_CASE("curvature error shrinks at stencil order") {
    auto max_err = [](int N) {
        const auto grid = make_grid(1, N);
        RadialState s{grid, 1.0 + 0.1 * (2.0 * grid->theta).cos(), 0.0};
        const GeometryFields F = geometry_fields(s);
        double e = 0.0;
        for (int j = 0; j < N; ++j) {
            const double t = grid->theta[j];
            const double k = oracle::curve_curvature(
                1.0 + 0.1 * std::cos(2.0 * t), -0.2 * std::sin(2.0 * t),
                -0.4 * std::cos(2.0 * t));
            e = std::max(e, std::abs(F.K[j] - k));
        }
        return e;
    };
    // doubling the resolution must shrink the error by >= 2^(order - 0.5)
    const double gain = std::pow(2.0, 6.0 - 0.5);
    CHECK(max_err(32) / max_err(64) >= gain);
    CHECK(max_err(64) / max_err(128) >= gain);
}

TEST_CASE("non-convex profile is flagged") {
    // rho = 1 + 0.9 cos(2 theta) has negative geodesic curvature near the
    // waist; scan at high resolution as the oracle, then check the flag.
    const auto fine = make_grid(1, 4096);
    double kmin_oracle = 1.0;
    for (int j = 0; j < fine->N; ++j) {
        const double t = fine->theta[j];
        kmin_oracle = std::min(
            kmin_oracle,
            oracle::curve_curvature(1.0 + 0.9 * std::cos(2.0 * t),
                                    -1.8 * std::sin(2.0 * t),
                                    -3.6 * std::cos(2.0 * t)));
    }
    REQUIRE(kmin_oracle < 0.0);

    const auto grid = make_grid(1, 512);
    RadialState s{grid, 1.0 + 0.9 * (2.0 * grid->theta).cos(), 0.0};
    const ConvexityReport c = check_convex(geometry_fields(s));
    CHECK_FALSE(c.uniformly_convex);
    CHECK(c.margin < 0.0);
    CHECK(c.margin == doctest::Approx(kmin_oracle).epsilon(1e-6));
}

TEST_CASE("n = 2: det of the Weingarten map equals the curvature product") {
    // rebuild the 2x2 Weingarten matrix from explicitly assembled metric and
    // second fundamental form and compare det/trace with K/H
    const auto grid = make_grid(2, 65);
    RadialState s{grid, 1.0 + 0.1 * grid->theta.cos().square(), 0.0};
    const GeometryFields F = geometry_fields(s);
    const ArrayXd rd1 = d1(*grid, s.rho);
    const ArrayXd rot = rotational_second_derivative(*grid, s.rho);
    const ArrayXd rd2 = d2(*grid, s.rho);
    for (int j : {0, 10, 32, 55, 64}) {
        const double phi = F.phi[j], phip = F.phi_prime[j];
        const double sq = std::sqrt(phi * phi + rd1[j] * rd1[j]);
        Eigen::Matrix2d g, h;
        g << phi * phi + rd1[j] * rd1[j], 0.0, 0.0, phi * phi;
        h << (-phi * rd2[j] + 2.0 * phip * rd1[j] * rd1[j] +
              phi * phi * phip) /
                 sq,
            0.0, 0.0, (-phi * rot[j] + phi * phi * phip) / sq;
        const Eigen::Matrix2d W = h * g.inverse();
        CHECK(F.K[j] == doctest::Approx(W.determinant()).epsilon(1e-14));
        CHECK(F.H[j] == doctest::Approx(W.trace()).epsilon(1e-14));
        CHECK(F.kappa_min[j] <= F.kappa_max[j]);
    }
}

TEST_CASE("evenness defect") {
    const auto grid = make_grid(1, 64);
    ArrayXd sym = 1.0 + 0.2 * (2.0 * grid->theta).cos();
    CHECK(evenness_defect(*grid, sym) < 1e-15);
    ArrayXd skew = sym + 0.01 * grid->theta.sin();
    CHECK(evenness_defect(*grid, skew) > 1e-3);
}
