#pragma once

// State transition matrices of x' = A_cl(t) x and estimation of uniform
// exponential stability constants (M, mu) from sampled transition norms.
// Sampling over the start-time grid is a parallel kernel; pass
// ExecPolicy::Serial for the reference path.

#include <utility>
#include <vector>

#include "ltvi/ltv.hpp"
#include "ltvi/parallel.hpp"
#include "ltvi/types.hpp"

namespace ltvi {

/// Phi(t1, t0) from integrating Phi' = A_cl(t) Phi, Phi(t0, t0) = I, with
/// local tolerance tol. t1 == t0 returns the identity exactly.
Matrix transition_matrix(const MatrixFunction& A_cl, double t0, double t1, double tol = 1e-10);

struct UesEstimate {
    double M = 1.0;            // amplitude, >= 1
    double mu = 0.0;           // decay rate, > 0
    double fit_residual = 0.0; // max |log-domain fit error| before inflating M
    std::vector<std::pair<double, double>> grid;  // (t0, horizon) pairs sampled

    /// Majorant value M * exp(-mu * dt).
    [[nodiscard]] double bound(double dt) const;
};

/// Fit (M, mu) so that ||Phi(t0 + dt, t0)|| <= M exp(-mu dt) on a log-spaced
/// dt grid for every start time in t0_grid: least squares in the log domain,
/// then M raised until no sample violates the bound. Throws std::runtime_error
/// when the sampled norms do not decay ("not exponentially stable on sampled
/// data").
UesEstimate estimate_ues_constants(const MatrixFunction& A_cl, const std::vector<double>& t0_grid,
                                   double horizon, double tol = 1e-10,
                                   ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace ltvi
