#pragma once

// Integral extension of a nominal state-feedback gain K(t):
//
//   u  = -[K(t) + Ki H(t)] x + Ki v
//   v' = G(t) x + H(t) B(t) (u* - u)        (last term only with anti-windup)
//   G  = H'(t) + H(t) [A(t) - B(t) K(t)]
//
// With v(t0) = H(t0) x(t0) the law reproduces u = -K(t) x exactly while the
// disturbance is zero; the integral part only acts on what the nominal loop
// cannot explain.

#include <functional>
#include <vector>

#include "ltvi/ltv.hpp"
#include "ltvi/ode.hpp"
#include "ltvi/types.hpp"

namespace ltvi {

struct ControllerState {
    Vector v;
};

class IntegralController {
public:
    /// K and H are l x n; Ki is l x l, symmetric positive definite.
    /// Ki with relative asymmetry below 1e-12 is symmetrized, anything worse
    /// is rejected.
    IntegralController(MatrixFunction K, MatrixFunction H, Matrix Ki, bool antiwindup = false);

    [[nodiscard]] const MatrixFunction& K() const { return K_; }
    [[nodiscard]] const MatrixFunction& H() const { return H_; }
    [[nodiscard]] const Matrix& Ki() const { return Ki_; }
    [[nodiscard]] bool antiwindup() const { return antiwindup_; }

private:
    MatrixFunction K_, H_;
    Matrix Ki_;
    bool antiwindup_ = false;
};

/// G(t) = H'(t) + H(t) [A(t) - B(t) K(t)].
Matrix compute_G(const IntegralController& ctrl, const LtvSystem& sys, double t);

/// v(t0) = H(t0) x(t0), the performance-preserving initialization.
ControllerState init_integrator(const IntegralController& ctrl, double t0, const Vector& x0);

/// Unconstrained control u = -[K(t) + Ki H(t)] x + Ki v.
Vector control_output(const IntegralController& ctrl, const LtvSystem& sys, double t,
                      const Vector& x, const ControllerState& state);

/// Integrator rate; u_star is the input actually applied (equal to u when
/// unconstrained). Anti-windup feeds H B (u* - u) back so v keeps tracking
/// the derivative of H x under saturation.
Vector integrator_rate(const IntegralController& ctrl, const LtvSystem& sys, double t,
                       const Vector& x, const Vector& u, const Vector& u_star);

enum class HVariant { Transpose, Normalized, EigenNormalized, Floored };

/// Feedback-matrix candidates built from B(t): B^T, B^T/||B||^2,
/// B^T/lambda_min(B^T B), or the floored variant with floor L. Normalized
/// variants throw a degenerate-input error when lambda_min(B^T B) < 1e-12 at
/// an evaluated time. The analytic derivative passes through only for the
/// transpose variant; the others use the central-difference fallback.
MatrixFunction choose_H(const LtvSystem& sys, HVariant variant, double L = 0.0);

/// Minimal scalar gain reaching decay rate mu*: Ki = (mu*/beta) I.
Matrix tune_Ki(double beta, double mu_star, int l);

using Disturbance = std::function<Vector(double)>;
using Saturation = std::function<Vector(const Vector&)>;

struct LinearSample {
    double t = 0.0;
    Vector x, v, u, u_star, w;
};

struct LinearTrajectory {
    std::vector<LinearSample> samples;
    OdeMethod method = OdeMethod::Rk4;
    double step = 0.0;
};

/// Co-integrate plant and integrator state over [t0, t1]. disturbance and
/// saturation may be null (zero disturbance, unconstrained input); the plant
/// receives u*.
LinearTrajectory simulate_linear(const LtvSystem& sys, const IntegralController& ctrl,
                                 const Disturbance& disturbance, const Saturation& saturation,
                                 const Vector& x0, const Vector& v0, double t0, double t1,
                                 const SolverSettings& settings,
                                 const std::vector<double>& sample_times);

}  // namespace ltvi
