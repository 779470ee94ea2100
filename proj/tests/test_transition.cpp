#include <doctest.h>

#include <cmath>
#include <random>

#include "ltvi/tank.hpp"
#include "ltvi/transition.hpp"
#include "test_helpers.hpp"

using namespace ltvi;

TEST_CASE("transition matrix at zero elapsed time is the identity, exactly") {
    const auto A = MatrixFunction::constant((-Matrix::Identity(4, 4)).eval());
    CHECK(transition_matrix(A, 2.5, 2.5) == Matrix::Identity(4, 4));
}

TEST_CASE("constant diagonal system matches the matrix exponential") {
    Matrix a(2, 2);
    a << -1.0, 0.0, 0.0, -2.0;
    const auto phi = transition_matrix(MatrixFunction::constant(a), 0.0, 1.0, 1e-12);
    CHECK(phi(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    CHECK(phi(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
    CHECK(std::abs(phi(0, 1)) < 1e-12);
    CHECK(std::abs(phi(1, 0)) < 1e-12);
}

TEST_CASE("semigroup property holds through a coefficient jump") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 5; ++rep) {
        const Matrix a1 = testing::random_hurwitz(rng, 3, 0.2);
        const Matrix a2 = testing::random_hurwitz(rng, 3, 0.2);
        const MatrixFunction A(3, 3, [a1, a2](double t) { return t < 1.0 ? a1 : a2; });
        const double tol = 1e-10;
        const Matrix whole = transition_matrix(A, 0.0, 2.0, tol);
        const Matrix staged =
            transition_matrix(A, 1.0, 2.0, tol) * transition_matrix(A, 0.0, 1.0, tol);
        CHECK((whole - staged).norm() < 10.0 * tol * whole.norm() + 1e-12);
    }
}

TEST_CASE("UES constants for x' = -x come out as M ~ 1, mu ~ 1") {
    const auto A = MatrixFunction::constant((-Matrix::Identity(2, 2)).eval());
    const auto est = estimate_ues_constants(A, {0.0, 1.0, 2.0}, 6.0);
    CHECK(est.mu == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(est.M >= 1.0);
    CHECK(est.M == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(est.grid.size() == 3);
}

TEST_CASE("an unstable system is rejected") {
    const auto A = MatrixFunction::constant(Matrix::Identity(2, 2).eval());
    CHECK_THROWS_WITH_AS(estimate_ues_constants(A, {0.0}, 3.0),
                         doctest::Contains("not exponentially stable"), std::runtime_error);
}

TEST_CASE("argument validation") {
    const auto A = MatrixFunction::constant((-Matrix::Identity(2, 2)).eval());
    CHECK_THROWS_AS((void)transition_matrix(A, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS((void)estimate_ues_constants(A, {}, 3.0), std::invalid_argument);
    CHECK_THROWS_AS((void)estimate_ues_constants(A, {0.0}, -1.0), std::invalid_argument);
    const auto rect = MatrixFunction::constant(Matrix::Zero(2, 3));
    CHECK_THROWS_AS((void)transition_matrix(rect, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("estimate majorizes independently recomputed transition norms") {
    std::mt19937_64 rng(99);
    const Matrix a = testing::random_hurwitz(rng, 3, 0.4);
    const auto A = MatrixFunction::constant(a);
    const auto est = estimate_ues_constants(A, {0.0, 0.5}, 8.0);
    for (double dt : {0.02, 0.3, 1.1, 4.0, 8.0}) {
        const double norm =
            transition_matrix(A, 0.0, dt, 1e-12).jacobiSvd().singularValues()(0);
        CHECK(norm <= est.bound(dt) * (1.0 + 1e-6));
    }
}

TEST_CASE("two-tank open loop is exponentially stable over a reference period") {
    const TankParams p;
    const auto sys = linearized_system(p);
    const double period = 1.0 / p.c6;
    const auto est =
        estimate_ues_constants(sys.A(), {0.0, 0.25 * period, 0.5 * period, 0.75 * period},
                               period, 1e-10);
    CHECK(est.mu > 0.0);
    CHECK(std::isfinite(est.M));
    // Decay rate is set by the diagonal entries, both near -0.1 1/s.
    CHECK(est.mu > 0.05);
    CHECK(est.mu < 0.2);
}
