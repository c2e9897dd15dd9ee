#include <doctest.h>

#include <cmath>

#include "gcflow/functionals.hpp"
#include "oracle.hpp"

using namespace gcflow;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kRho0 = std::acosh(2.0);  // cosh(rho0) = 2

RadialState circle(int N, double rho0) {
    auto grid = make_grid(1, N);
    return {grid, ArrayXd::Constant(N, rho0), 0.0};
}

// deterministic convex test profiles
RadialState wobble(int N, unsigned seed) {
    auto grid = make_grid(1, N);
    const double a1 = 0.03 + 0.01 * ((seed * 7) % 5);
    const double a2 = 0.01 + 0.005 * ((seed * 13) % 3);
    RadialState s{grid,
                  0.9 + a1 * (2.0 * grid->theta).cos() +
                      a2 * (3.0 * grid->theta + 0.7 * seed).sin(),
                  0.0};
    return s;
}
} // namespace

TEST_CASE("klein projection basics") {
    auto grid = make_grid(1, 64);
    RadialState s{grid, ArrayXd::Constant(64, std::atanh(0.5)), 0.0};
    GeometryFields F = geometry_fields(s);
    KleinState k = klein_project(s, F);
    CHECK(k.r[0] == doctest::Approx(0.5).epsilon(1e-15));

    // circle: uhat = r = tanh(rho0), Khat = 1/r0 both through the curvature
    // law and through the direct Euclidean formula
    const RadialState c = circle(64, kRho0);
    const GeometryFields Fc = geometry_fields(c);
    const KleinState kc = klein_project(c, Fc);
    const double r0 = std::tanh(kRho0);
    CHECK(kc.uhat[5] == doctest::Approx(r0).epsilon(1e-15));
    CHECK(kc.khat[5] == doctest::Approx(1.0 / r0).epsilon(1e-14));
    const EuclideanGraph e = euclidean_graph_curvature(*c.grid, kc.r);
    CHECK(e.khat[5] == doctest::Approx(1.0 / r0).epsilon(1e-14));
    CHECK(e.uhat[5] == doctest::Approx(r0).epsilon(1e-15));

    // support function round-trip
    for (int j : {0, 17, 40})
        CHECK(support_from_uhat(kc.uhat[j]) ==
              doctest::Approx(Fc.u[j]).epsilon(1e-14));
}

TEST_CASE("klein invariants on a non-round profile") {
    auto grid = make_grid(1, 256);
    RadialState s{grid, 1.0 + 0.2 * (2.0 * grid->theta).cos(), 0.0};
    GeometryFields F = geometry_fields(s);
    KleinState k = klein_project(s, F);
    CHECK((k.uhat > 0.0).all());
    CHECK((k.uhat <= k.r + 1e-15).all());
    CHECK((k.r < 1.0).all());
    // curvature law round-trip
    const ArrayXd back =
        k.khat * ((1.0 - k.r.square()) / (1.0 - k.uhat.square())).pow(1.5);
    CHECK(((back - F.K).abs() / F.K).maxCoeff() < 1e-14);
}

TEST_CASE("projected curvature agrees with the intrinsic one at stencil order") {
    auto mismatch = [](int N) {
        auto grid = make_grid(1, N);
        RadialState s{grid, 1.0 + 0.2 * (2.0 * grid->theta).cos(), 0.0};
        GeometryFields F = geometry_fields(s);
        KleinState k = klein_project(s, F);
        const EuclideanGraph e = euclidean_graph_curvature(*grid, k.r);
        return ((e.khat - k.khat).abs() / k.khat.abs()).maxCoeff();
    };
    const double m64 = mismatch(64), m128 = mismatch(128), m256 = mismatch(256);
    CHECK(m128 < m64 / 4.0);
    CHECK(m256 < m128 / 4.0);
}

TEST_CASE("Q on the arccosh-2 circle matches the frozen oracle value") {
    // oracle (closed-form antiderivatives, cross-checked by Romberg):
    // Q = 2 pi (2 Psi(r0) - Omega(r0)), a = 0.4
    const double kFrozenQ = 4.1253258609868828;
    const double r0 = std::tanh(kRho0);
    const double live =
        2.0 * kPi *
        (2.0 * (oracle::anti_psi_inv_n1_a2(r0) - oracle::anti_psi_inv_n1_a2(0.4)) -
         (oracle::anti_varphi_n1(r0) - oracle::anti_varphi_n1(0.4)));
    REQUIRE(std::abs(live - kFrozenQ) < 1e-12);

    const RadialState c = circle(256, kRho0);
    const GeometryFields F = geometry_fields(c);
    const KleinState k = klein_project(c, F);
    FunctionalConfig cfg;
    cfg.a = 0.4;
    const ArrayXd f_tilde = ArrayXd::Constant(256, 2.0);
    CHECK(std::abs(q_functional(*c.grid, k, f_tilde, 2.0, cfg) - kFrozenQ) <
          1e-10);
}

TEST_CASE("Q and J vanish when everything sits at the lower limit") {
    auto grid = make_grid(1, 64);
    FunctionalConfig cfg;
    cfg.a = 0.37;
    KleinState k;
    k.n = 1;
    k.r = ArrayXd::Constant(64, cfg.a);
    k.uhat = ArrayXd::Constant(64, cfg.a);
    k.khat = ArrayXd::Constant(64, 1.0 / cfg.a);
    const ArrayXd f_tilde = ArrayXd::Constant(64, 2.0);
    CHECK(q_functional(*grid, k, f_tilde, 2.0, cfg) == 0.0);
    CHECK(j_functional(*grid, k, cfg) == 0.0);
}

TEST_CASE("ellipsoid J matches the frozen quadrature oracle") {
    const double kFrozenJ = 17.890399502170606;  // e1=0.9 e2=0.5 n=2 a=0.25
    // live oracle: Romberg on the closed-form inner antiderivative
    auto anti = [](double s) {
        return 1.0 / std::sqrt(1.0 - s * s) +
               std::log(s / (1.0 + std::sqrt(1.0 - s * s)));
    };
    auto outer = [&](double v) {
        const double sv = std::sin(v);
        const double u = std::sqrt(0.81 - (0.81 - 0.25) * sv * sv);
        return (anti(u) - anti(0.25)) * sv;
    };
    const double live = 2.0 * kPi * oracle::romberg(outer, 0.0, kPi, 1e-13);
    REQUIRE(std::abs(live - kFrozenJ) < 1e-10);

    CHECK(std::abs(ellipsoid_j(0.9, 0.5, 2, 0.25, 1e-12) - kFrozenJ) < 1e-8);
}

TEST_CASE("ellipsoid J stays bounded as e1 -> 1") {
    // the increments contract geometrically toward a finite limit even though
    // the hyperbolic preimages run off to infinity
    const double j1 = ellipsoid_j(0.9, 0.5, 2, 0.25, 1e-12);
    const double j2 = ellipsoid_j(0.99, 0.5, 2, 0.25, 1e-12);
    const double j3 = ellipsoid_j(0.999, 0.5, 2, 0.25, 1e-12);
    const double j4 = ellipsoid_j(0.9999, 0.5, 2, 0.25, 1e-12);
    CHECK(std::isfinite(j4));
    CHECK(j2 > j1);
    CHECK(j3 - j2 < 0.5 * (j2 - j1));
    CHECK(j4 - j3 < 0.5 * (j3 - j2));
    // geometric contraction pins the limit: J(e1) <= J4 + (J4 - J3) for all e1
    CHECK(j4 + (j4 - j3) < 25.0);
}

TEST_CASE("conserved integral") {
    FunctionalConfig cfg;
    cfg.b = 0.2;

    auto grid = make_grid(1, 128);
    const ArrayXd ones = ArrayXd::Ones(128);

    // rho == b gives zero
    CHECK(conserved_integral(*grid, ArrayXd::Constant(128, cfg.b), ones, 2.0,
                             cfg) == 0.0);

    // closed form 2 pi log(tanh(rho0/2)/tanh(b/2)) for n=1, alpha=2, f=1
    const double kFrozen = 7.6427636806475716;  // rho0=0.7 b=0.2
    CHECK(std::abs(conserved_integral(*grid, ArrayXd::Constant(128, 0.7), ones,
                                      2.0, cfg) -
                   kFrozen) < 1e-12);

    // fractional exponent path (adaptive quadrature) against Romberg
    const double got = conserved_integral(*grid, ArrayXd::Constant(128, 0.7),
                                          ones, 2.5, cfg);
    const double want =
        2.0 * kPi * oracle::romberg(
                        [](double s) { return std::pow(std::sinh(s), -1.5); },
                        0.2, 0.7, 1e-14);
    CHECK(std::abs(got - want) < 1e-11);
}

TEST_CASE("residual: manufactured solutions vanish") {
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
        RadialState s = wobble(128, seed);
        GeometryFields F = geometry_fields(s);
        REQUIRE(check_convex(F).uniformly_convex);
        const ArrayXd f_tilde = F.phi.pow(3.0) * F.K / F.u;
        const ResidualReport r = residual(*s.grid, F, f_tilde, 3.0, false);
        CHECK(r.linf < 1e-14);
        CHECK(r.l2 < 1e-14);
        CHECK(r.c_star == 1.0);
    }
}

TEST_CASE("residual on the arccosh-2 circle") {
    const RadialState c = circle(256, kRho0);
    const GeometryFields F = geometry_fields(c);
    const ArrayXd two = ArrayXd::Constant(256, 2.0);
    const ResidualReport r = residual(*c.grid, F, two, 2.0, false);
    CHECK(r.linf < 1e-13);  // round states carry no discretization error

    // doubling f_tilde makes the relative defect exactly one half
    const ArrayXd four = ArrayXd::Constant(256, 4.0);
    const ResidualReport r4 = residual(*c.grid, F, four, 2.0, false);
    CHECK(r4.linf == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("normalized residual measures the proportionality constant") {
    const RadialState c = circle(128, 0.9);
    const GeometryFields F = geometry_fields(c);
    const ArrayXd f_tilde = ArrayXd::Constant(128, 1.7);
    const ResidualReport r = residual(*c.grid, F, f_tilde, 2.5, true);
    const double expect = std::pow(std::sinh(0.9), 2.5) *
                          (std::cosh(0.9) / std::sinh(0.9)) /
                          (1.7 * std::sinh(0.9));
    CHECK(r.c_star == doctest::Approx(expect).epsilon(1e-14));
    CHECK(r.linf < 1e-14);
}

TEST_CASE("uniqueness distance") {
    const RadialState a = circle(64, 0.5);
    RadialState b = circle(64, 0.5);
    CHECK(uniqueness_distance(a, b) == 0.0);
    b.rho[10] += 1e-3;
    CHECK(uniqueness_distance(a, b) == doctest::Approx(1e-3));
    const RadialState c = circle(128, 0.5);
    CHECK_THROWS_AS(uniqueness_distance(a, c), std::invalid_argument);
}

TEST_CASE("klein invariants hold across generated profiles") {
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u, 6u}) {
        RadialState s = wobble(96, seed);
        GeometryFields F = geometry_fields(s);
        KleinState k = klein_project(s, F);
        CHECK((k.uhat > 0.0).all());
        CHECK((k.uhat <= k.r + 1e-15).all());
        CHECK((k.r < 1.0).all());
        CHECK((k.r - s.rho.tanh()).abs().maxCoeff() == 0.0);
        // support and curvature round-trips
        for (int j = 0; j < 96; j += 17)
            CHECK(support_from_uhat(k.uhat[j]) ==
                  doctest::Approx(F.u[j]).epsilon(1e-13));
        const ArrayXd back =
            k.khat *
            ((1.0 - k.r.square()) / (1.0 - k.uhat.square())).pow(1.5);
        CHECK(((back - F.K).abs() / F.K).maxCoeff() < 1e-13);
    }
}

TEST_CASE("freeze_config halves the initial minima") {
    RadialState s = wobble(128, 2u);
    GeometryFields F = geometry_fields(s);
    KleinState k = klein_project(s, F);
    const FunctionalConfig cfg = freeze_config(s, F, k);
    CHECK(cfg.a == doctest::Approx(0.5 * k.uhat.minCoeff()).epsilon(1e-15));
    CHECK(cfg.b == doctest::Approx(0.5 * s.rho.minCoeff()).epsilon(1e-15));
}
