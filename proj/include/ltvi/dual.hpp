#pragma once

// Dual of the nominal closed loop, used to evaluate candidate output-injection
// gains M(t) for output-feedback integral action. The dual is anti-stable, so
// forward propagation of the H-dynamics diverges for generic initial values;
// divergence is detected and flagged rather than silently integrated.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ltvi/ltv.hpp"
#include "ltvi/ode.hpp"
#include "ltvi/transition.hpp"
#include "ltvi/types.hpp"

namespace ltvi {

struct DualSystem {
    MatrixFunction A_dual;      // -(A - BK)^T, n x n
    MatrixFunction input_map;   // C^T, n x m
    MatrixFunction output_map;  // B^T, l x n
    std::string note;
};

DualSystem build_dual(const LtvSystem& sys, const MatrixFunction& K,
                      const std::optional<UesEstimate>& nominal_ues = std::nullopt);

struct PropagationResult {
    std::vector<std::pair<double, Matrix>> H;  // H(t) samples, l x n
    std::vector<std::pair<double, Matrix>> Q;  // Q(t) = H(t) B(t), l x l
    bool diverged = false;
    double stop_time = 0.0;
};

/// Integrate H' = -H [A(t) - B(t) K(t)] + M(t) C(t) forward from H0 and
/// report H and Q = H B at the sample times. Growth of ||H|| beyond 1e6 times
/// max(1, ||H0||) stops the run early with the diverged flag set.
PropagationResult propagate_H(const LtvSystem& sys, const MatrixFunction& K,
                              const MatrixFunction& M_fn, const Matrix& H0, double t0, double t1,
                              const SolverSettings& settings,
                              const std::vector<double>& sample_times);

}  // namespace ltvi
