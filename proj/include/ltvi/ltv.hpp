#pragma once

// Time-varying matrix coefficients and the LTV plant they assemble into.
// Coefficients are callables of time; a sampled-table constructor with
// linear interpolation covers data-driven plants.

#include <functional>
#include <optional>
#include <vector>

#include "ltvi/types.hpp"

namespace ltvi {

class MatrixFunction {
public:
    using Evaluator = std::function<Matrix(double)>;

    MatrixFunction() = default;

    /// Callable coefficient, optionally with an analytic time derivative and
    /// a declared uniform norm bound.
    MatrixFunction(int rows, int cols, Evaluator eval, Evaluator deriv = nullptr,
                   std::optional<double> declared_bound = std::nullopt);

    static MatrixFunction constant(const Matrix& value);

    /// Piecewise-linear interpolation of matrices sampled at increasing times.
    /// Evaluation outside [times.front(), times.back()] throws std::domain_error.
    static MatrixFunction from_table(std::vector<double> times, std::vector<Matrix> values);

    [[nodiscard]] int rows() const { return rows_; }
    [[nodiscard]] int cols() const { return cols_; }
    [[nodiscard]] bool has_analytic_derivative() const { return static_cast<bool>(deriv_); }
    [[nodiscard]] std::optional<double> declared_bound() const { return declared_bound_; }

    /// Evaluate at time t. Throws std::invalid_argument if the evaluator
    /// returns an unexpected shape.
    [[nodiscard]] Matrix operator()(double t) const;

    /// Elementwise time derivative. Falls back to a central difference with
    /// step h = 1e-5 * max(1, |t|); less accurate near piecewise boundaries.
    [[nodiscard]] Matrix derivative(double t) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    Evaluator eval_;
    Evaluator deriv_;
    std::optional<double> declared_bound_;
};

struct LtvDims {
    int n = 0;  // states
    int l = 0;  // inputs
    int m = 0;  // outputs
    int p = 0;  // disturbances
};

/// Plant coefficients A(t), B(t), F(t), C(t) with shapes n x n, n x l, n x p, m x n.
class LtvSystem {
public:
    LtvSystem(MatrixFunction A, MatrixFunction B, MatrixFunction F, MatrixFunction C);

    [[nodiscard]] const LtvDims& dims() const { return dims_; }
    [[nodiscard]] const MatrixFunction& A() const { return A_; }
    [[nodiscard]] const MatrixFunction& B() const { return B_; }
    [[nodiscard]] const MatrixFunction& F() const { return F_; }
    [[nodiscard]] const MatrixFunction& C() const { return C_; }

private:
    MatrixFunction A_, B_, F_, C_;
    LtvDims dims_;
};

struct SystemSnapshot {
    Matrix A, B, F, C;
};

/// All four coefficients at time t, shape-checked.
SystemSnapshot eval_system(const LtvSystem& sys, double t);

}  // namespace ltvi
