#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ltvi/ltv.hpp"
#include "ltvi/tank.hpp"

using namespace ltvi;

TEST_CASE("constant coefficient evaluates identically at any time") {
    Matrix m(2, 2);
    m << 1.0, 2.0, 3.0, 4.0;
    const auto f = MatrixFunction::constant(m);
    CHECK(f(0.0) == m);
    CHECK(f(123.4) == m);
    CHECK(f.derivative(7.0).norm() == 0.0);
    CHECK(f.has_analytic_derivative());
}

TEST_CASE("shape-checked evaluation rejects drifting evaluators") {
    auto bad = MatrixFunction(2, 2, [](double t) {
        return t < 1.0 ? Matrix::Zero(2, 2).eval() : Matrix::Zero(3, 2).eval();
    });
    CHECK_NOTHROW((void)bad(0.0));
    CHECK_THROWS_AS((void)bad(2.0), std::invalid_argument);
}

TEST_CASE("finite-difference fallback tracks an analytic derivative") {
    auto f = MatrixFunction(1, 1, [](double t) { return Matrix::Constant(1, 1, std::sin(t)); });
    CHECK_FALSE(f.has_analytic_derivative());
    for (double t : {0.0, 0.7, 3.1, 40.0}) {
        CHECK(f.derivative(t)(0, 0) == doctest::Approx(std::cos(t)).epsilon(1e-7));
    }
}

TEST_CASE("sampled table interpolates linearly and rejects out-of-range times") {
    Matrix a = Matrix::Constant(1, 1, 1.0);
    Matrix b = Matrix::Constant(1, 1, 3.0);
    const auto f = MatrixFunction::from_table({0.0, 2.0}, {a, b});
    CHECK(f(0.0)(0, 0) == doctest::Approx(1.0));
    CHECK(f(1.0)(0, 0) == doctest::Approx(2.0));
    CHECK(f(2.0)(0, 0) == doctest::Approx(3.0));
    CHECK(f.derivative(0.5)(0, 0) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)f(-0.1), std::domain_error);
    CHECK_THROWS_AS((void)f(2.1), std::domain_error);
}

TEST_CASE("LtvSystem validates shapes against the state dimension") {
    const auto A = MatrixFunction::constant(Matrix::Zero(2, 2));
    const auto B = MatrixFunction::constant(Matrix::Zero(2, 1));
    const auto F = MatrixFunction::constant(Matrix::Zero(2, 1));
    const auto C = MatrixFunction::constant(Matrix::Identity(2, 2));
    CHECK_NOTHROW(LtvSystem(A, B, F, C));
    const auto B_bad = MatrixFunction::constant(Matrix::Zero(3, 1));
    CHECK_THROWS_AS(LtvSystem(A, B_bad, F, C), std::invalid_argument);
}

TEST_CASE("eval_system on a constant plant returns identical snapshots") {
    const auto A = MatrixFunction::constant((-Matrix::Identity(3, 3)).eval());
    const auto sys = LtvSystem(A, MatrixFunction::constant(Matrix::Ones(3, 1)),
                               MatrixFunction::constant(Matrix::Ones(3, 2)),
                               MatrixFunction::constant(Matrix::Identity(2, 3).eval()));
    const auto s0 = eval_system(sys, 0.0);
    const auto s1 = eval_system(sys, 55.5);
    CHECK(s0.A == s1.A);
    CHECK(s0.B == s1.B);
    CHECK(s0.F == s1.F);
    CHECK(s0.C == s1.C);
    CHECK(sys.dims().n == 3);
    CHECK(sys.dims().l == 1);
    CHECK(sys.dims().p == 2);
    CHECK(sys.dims().m == 2);
}

TEST_CASE("two-tank linearization at t = 0 matches hand-computed entries") {
    const TankParams p;
    const auto sys = linearized_system(p);
    const auto snap = eval_system(sys, 0.0);

    CHECK(snap.B(0, 0) == doctest::Approx(0.299).epsilon(1e-12));
    CHECK(snap.B(1, 0) == 0.0);
    CHECK(snap.F(0, 0) == 1.0);
    CHECK(snap.F(1, 0) == 0.0);

    // Reference oracle, straight from the formulas: r(0) = c4,
    // r'(0) = 2 pi c6 c5, zref1(0) = (c2 sqrt(r) + r')^2 / c1^2.
    const double r0 = p.c4;
    const double rdot0 = 2.0 * std::numbers::pi * p.c6 * p.c5;
    const double zref1_0 = std::pow(p.c2 * std::sqrt(r0) + rdot0, 2) / (p.c1 * p.c1);
    CHECK(zref1_0 == doctest::Approx(8.07).epsilon(2e-3));
    CHECK(snap.A(0, 0) == doctest::Approx(-p.c1 / (2.0 * std::sqrt(zref1_0))).epsilon(1e-12));
    CHECK(snap.A(0, 0) == doctest::Approx(-0.0903).epsilon(2e-3));
    CHECK(snap.A(1, 0) == doctest::Approx(-snap.A(0, 0)).epsilon(1e-14));
    CHECK(snap.A(0, 1) == 0.0);
}
