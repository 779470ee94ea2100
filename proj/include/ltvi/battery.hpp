#pragma once

// Seeded batch of piecewise-constant disturbances for empirical BIBS checks.
// Members are deterministic in (seed, index) and run as a parallel batch.

#include <vector>

#include "ltvi/controller.hpp"
#include "ltvi/ltv.hpp"
#include "ltvi/parallel.hpp"

namespace ltvi {

struct PiecewiseConstantSignal {
    std::vector<double> switch_times;  // segment start times, first = t0
    std::vector<Vector> levels;        // one level per segment, sup norm = 1

    [[nodiscard]] Vector operator()(double t) const;
};

/// Piecewise-constant p-vector signal with `segments` equal segments over
/// [t0, t1], levels drawn uniformly from [-1, 1]^p and rescaled so the
/// largest level norm is exactly 1.
PiecewiseConstantSignal make_disturbance(int p, double t0, double t1, int segments,
                                         unsigned long long seed);

struct BatteryMember {
    unsigned long long seed = 0;
    double sup_x = 0.0;  // max ||x(t)|| over the sampled run
    double sup_w = 1.0;
};

/// Zero-initial-state closed-loop responses to `count` seeded disturbances.
std::vector<BatteryMember> disturbance_battery(const LtvSystem& sys,
                                               const IntegralController& ctrl, double t0,
                                               double t1, const SolverSettings& settings,
                                               double sample_dt, int count,
                                               unsigned long long seed,
                                               ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace ltvi
