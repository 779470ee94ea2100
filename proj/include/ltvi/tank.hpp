#pragma once

// Two-tank tracking study: nonlinear plant, reference trajectory with
// feedforward, linearization along the reference, the integral-extended
// controller specialized to K = 0 and H = [alpha alpha], and a standard
// I-controller for comparison. Sweep members run as a parallel batch.

#include <string>
#include <vector>

#include "ltvi/ltv.hpp"
#include "ltvi/ode.hpp"
#include "ltvi/parallel.hpp"
#include "ltvi/types.hpp"

namespace ltvi {

struct TankParams {
    double c1 = 0.513;   // sqrt(cm)/s
    double c2 = 0.513;   // sqrt(cm)/s
    double c3 = 0.299;   // cm/(V s)
    double c4 = 7.0;     // cm, reference offset
    double c5 = 2.0;     // cm, reference amplitude
    double c6 = 0.008;   // Hz, reference frequency
    double w = 0.5;      // cm/s, inflow disturbance
    double q_sat = 8.0;  // V, pump saturation
    double horizon = 500.0;  // s
    double alpha = 0.12;     // integral feedback weight
    double beta_I = 0.0062;  // 1/s, standard I-controller gain
    double ki = 1.0;         // integral gain

    /// Throws std::invalid_argument on c1..c3 <= 0, c4 < c5, c5 <= 0,
    /// c6 <= 0, or q_sat <= 0.
    void validate() const;
};

struct ReferencePoint {
    double zref1 = 0.0;      // cm
    double zref2 = 0.0;      // cm
    double qref = 0.0;       // V
    double zref1_dot = 0.0;  // cm/s
};

/// Reference levels and feedforward voltage at time t. Throws
/// std::domain_error when the reference level is not strictly positive.
ReferencePoint reference_trajectory(const TankParams& p, double t);

/// z1' = -c1 sqrt(z1) + c3 q + w,  z2' = c1 sqrt(z1) - c2 sqrt(z2).
/// Negative levels are clamped to zero under the square root; each clamp
/// increments *clamp_count when given.
Vector two_tank_rhs(const TankParams& p, double t, const Vector& z, double q_applied, double w,
                    long* clamp_count = nullptr);

/// Error dynamics x = z - zref(t) linearized along the reference:
/// lower-triangular A(t), B = [c3; 0], F = [1; 0], C = I.
LtvSystem linearized_system(const TankParams& p);

/// Componentwise clamp of the pump voltage to [0, q_sat].
double saturate(double q, const TankParams& p);

enum class TankControllerKind { Proposed, StandardI, None };

std::string to_string(TankControllerKind k);

/// The two control laws of the study, in original (z, q) coordinates.
struct TankControlLaw {
    TankControllerKind kind = TankControllerKind::None;
    double ki = 1.0;
    double alpha = 0.12;
    double beta_I = 0.0062;
    bool antiwindup = true;

    /// Pump voltage q(t, z, v) before saturation.
    [[nodiscard]] double control(const TankParams& p, double t, const Vector& z, double v) const;

    /// Integrator rate v'(t, z, q, q*); the anti-windup term only applies to
    /// the proposed law.
    [[nodiscard]] double rate(const TankParams& p, double t, const Vector& z, double q,
                              double q_star) const;
};

TankControlLaw proposed_tank_controller(const TankParams& p, bool antiwindup = true);
TankControlLaw standard_I_controller(const TankParams& p);

enum class TankPlant { NonlinearTwoTank, Linearized };

struct Scenario {
    TankParams params;
    TankPlant plant = TankPlant::NonlinearTwoTank;
    TankControllerKind controller = TankControllerKind::Proposed;
    bool antiwindup = true;
    Vector z0 = Vector::Zero(2);
    double v0 = 0.0;
    SolverSettings solver = SolverSettings::rk4(0.01);
    double sample_dt = 0.1;
    std::string label;
};

struct TankSample {
    double t = 0.0;
    double z1 = 0.0, z2 = 0.0;
    double zref1 = 0.0, zref2 = 0.0;
    double q = 0.0, q_star = 0.0;
    double v = 0.0;
    double err2 = 0.0;  // z2 - zref2
};

struct TankTrajectory {
    std::vector<TankSample> samples;
    long clamp_warnings = 0;
    OdeMethod method = OdeMethod::Rk4;
    double step = 0.0;
    std::string label;
};

TankTrajectory run_scenario(const Scenario& s);

/// Run sweep members as a batch; results keep the input ordering regardless
/// of the execution policy.
std::vector<TankTrajectory> run_sweep(const std::vector<Scenario>& members,
                                      ExecPolicy policy = ExecPolicy::Parallel);

struct TankMetrics {
    double settling_time_2pct = 0.0;  // +inf marker when never settled
    double first_band_entry = 0.0;    // +inf marker when the band is never reached
    double max_overshoot = 0.0;       // exceedance above the upper band edge
    long oscillation_count = 0;       // err2 sign changes after first band entry
    double final_error = 0.0;         // |err2| at the last sample
};

/// Band is +/- 2% of the reference; settling is the first band entry without
/// a later exit.
TankMetrics metrics(const TankTrajectory& traj);

}  // namespace ltvi
