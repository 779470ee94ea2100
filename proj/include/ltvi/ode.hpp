#pragma once

// Deterministic ODE integration: fixed-step RK4 for reproducible traces,
// adaptive Dormand-Prince RK45 where a local tolerance matters more than
// bit-stable output.

#include <functional>
#include <utility>
#include <vector>

#include "ltvi/types.hpp"

namespace ltvi {

enum class OdeMethod { Rk4, Rk45 };

struct SolverSettings {
    OdeMethod method = OdeMethod::Rk4;
    double step = 0.01;      // fixed-step size (Rk4)
    double abs_tol = 1e-9;   // adaptive tolerances (Rk45)
    double rel_tol = 1e-9;
    long max_steps = 50'000'000;

    static SolverSettings rk4(double step);
    static SolverSettings rk45(double abs_tol, double rel_tol);
};

using OdeRhs = std::function<Vector(double, const Vector&)>;

struct OdeSample {
    double t = 0.0;
    Vector x;
};

/// Integrate x' = rhs(t, x) over [t_start, t_end] and report the state at
/// each requested sample time (sorted, within the span). The fixed-step
/// method marches the uniform grid t_start + i*step and reaches off-grid
/// sample times by one partial step from the latest grid state, so identical
/// inputs give bit-identical outputs.
std::vector<OdeSample> integrate(const OdeRhs& rhs, const Vector& x0, double t_start,
                                 double t_end, const SolverSettings& settings,
                                 const std::vector<double>& sample_times);

/// Uniformly spaced sample times t0, t0+dt, ..., covering [t0, t1].
std::vector<double> uniform_times(double t0, double t1, double dt);

}  // namespace ltvi
