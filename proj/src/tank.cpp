#include "ltvi/tank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ltvi {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double clamped_sqrt(double level, long* clamp_count) {
    if (level < 0.0) {
        if (clamp_count != nullptr) {
            ++(*clamp_count);
        }
        return 0.0;
    }
    return std::sqrt(level);
}

}  // namespace

void TankParams::validate() const {
    for (double v : {c1, c2, c3, c4, c5, c6, w, q_sat, horizon, alpha, beta_I, ki}) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("TankParams: parameters must be finite");
        }
    }
    if (c1 <= 0.0 || c2 <= 0.0 || c3 <= 0.0) {
        throw std::invalid_argument("TankParams: c1, c2, c3 must be positive");
    }
    if (c5 <= 0.0 || c4 < c5) {
        throw std::invalid_argument("TankParams: need c4 >= c5 > 0");
    }
    if (c6 <= 0.0) {
        throw std::invalid_argument("TankParams: c6 must be positive");
    }
    if (q_sat <= 0.0) {
        throw std::invalid_argument("TankParams: q_sat must be positive");
    }
    if (horizon <= 0.0) {
        throw std::invalid_argument("TankParams: horizon must be positive");
    }
}

ReferencePoint reference_trajectory(const TankParams& p, double t) {
    const double omega = kTwoPi * p.c6;
    const double r = p.c4 + p.c5 * std::sin(omega * t);
    if (r <= 0.0) {
        throw std::domain_error("reference_trajectory: r(t) must be strictly positive (t = " +
                                std::to_string(t) + ")");
    }
    const double r_dot = p.c5 * omega * std::cos(omega * t);
    const double r_ddot = -p.c5 * omega * omega * std::sin(omega * t);

    // zref1 = c1^{-2} (c2 sqrt(r) + r')^2, differentiated by the chain rule.
    const double s = p.c2 * std::sqrt(r) + r_dot;
    if (s <= 0.0) {
        throw std::domain_error("reference_trajectory: upper-tank reference level vanishes (t = " +
                                std::to_string(t) + ")");
    }
    const double s_dot = p.c2 * r_dot / (2.0 * std::sqrt(r)) + r_ddot;

    ReferencePoint ref;
    ref.zref2 = r;
    ref.zref1 = (s / p.c1) * (s / p.c1);
    ref.zref1_dot = 2.0 * s * s_dot / (p.c1 * p.c1);
    ref.qref = ref.zref1_dot / p.c3 + p.c1 * std::sqrt(ref.zref1) / p.c3;
    return ref;
}

Vector two_tank_rhs(const TankParams& p, double t, const Vector& z, double q_applied, double w,
                    long* clamp_count) {
    (void)t;
    if (z.size() != 2) {
        throw std::invalid_argument("two_tank_rhs: state must be [z1, z2]");
    }
    const double root1 = clamped_sqrt(z(0), clamp_count);
    const double root2 = clamped_sqrt(z(1), clamp_count);
    Vector dz(2);
    dz(0) = -p.c1 * root1 + p.c3 * q_applied + w;
    dz(1) = p.c1 * root1 - p.c2 * root2;
    return dz;
}

LtvSystem linearized_system(const TankParams& p) {
    TankParams params = p;
    auto A_eval = [params](double t) {
        const auto ref = reference_trajectory(params, t);
        const double g1 = params.c1 / (2.0 * std::sqrt(ref.zref1));
        const double g2 = params.c2 / (2.0 * std::sqrt(ref.zref2));
        Matrix A(2, 2);
        A << -g1, 0.0, g1, -g2;
        return A;
    };
    MatrixFunction A(2, 2, A_eval);
    Matrix B(2, 1), F(2, 1);
    B << p.c3, 0.0;
    F << 1.0, 0.0;
    return LtvSystem(A, MatrixFunction::constant(B), MatrixFunction::constant(F),
                     MatrixFunction::constant(Matrix::Identity(2, 2)));
}

double saturate(double q, const TankParams& p) {
    return std::max(0.0, std::min(p.q_sat, q));
}

std::string to_string(TankControllerKind k) {
    switch (k) {
        case TankControllerKind::Proposed: return "proposed";
        case TankControllerKind::StandardI: return "standard-I";
        case TankControllerKind::None: return "none";
    }
    return "?";
}

double TankControlLaw::control(const TankParams& p, double t, const Vector& z, double v) const {
    const auto ref = reference_trajectory(p, t);
    switch (kind) {
        case TankControllerKind::Proposed:
            return ref.qref - ki * alpha * (z(0) - ref.zref1 + z(1) - ref.zref2) + ki * v;
        case TankControllerKind::StandardI:
            return ref.qref + ki * v;
        case TankControllerKind::None:
            return ref.qref;
    }
    return ref.qref;
}

double TankControlLaw::rate(const TankParams& p, double t, const Vector& z, double q,
                            double q_star) const {
    const auto ref = reference_trajectory(p, t);
    switch (kind) {
        case TankControllerKind::Proposed: {
            double rate = -alpha * p.c2 / (2.0 * std::sqrt(ref.zref2)) * (z(1) - ref.zref2);
            if (antiwindup) {
                rate += alpha * p.c3 * (q_star - q);
            }
            return rate;
        }
        case TankControllerKind::StandardI:
            return -beta_I * (z(1) - ref.zref2);
        case TankControllerKind::None:
            return 0.0;
    }
    return 0.0;
}

TankControlLaw proposed_tank_controller(const TankParams& p, bool antiwindup) {
    TankControlLaw law;
    law.kind = TankControllerKind::Proposed;
    law.ki = p.ki;
    law.alpha = p.alpha;
    law.beta_I = p.beta_I;
    law.antiwindup = antiwindup;
    return law;
}

TankControlLaw standard_I_controller(const TankParams& p) {
    TankControlLaw law;
    law.kind = TankControllerKind::StandardI;
    law.ki = p.ki;
    law.alpha = p.alpha;
    law.beta_I = p.beta_I;
    law.antiwindup = false;
    return law;
}

TankTrajectory run_scenario(const Scenario& s) {
    s.params.validate();
    if (s.z0.size() != 2) {
        throw std::invalid_argument("run_scenario: z0 must be [z1, z2]");
    }

    TankControlLaw law;
    switch (s.controller) {
        case TankControllerKind::Proposed:
            law = proposed_tank_controller(s.params, s.antiwindup);
            break;
        case TankControllerKind::StandardI:
            law = standard_I_controller(s.params);
            break;
        case TankControllerKind::None:
            law.kind = TankControllerKind::None;
            break;
    }

    long clamp_count = 0;
    const TankParams& p = s.params;

    auto rhs = [&](double t, const Vector& y) -> Vector {
        const Vector z = y.head(2);
        const double v = y(2);
        const double q = law.control(p, t, z, v);
        const double q_star = saturate(q, p);

        Vector dy(3);
        if (s.plant == TankPlant::NonlinearTwoTank) {
            dy.head(2) = two_tank_rhs(p, t, z, q_star, p.w, &clamp_count);
        } else {
            // Linearized error dynamics written back in level coordinates:
            // z' = zref' + A(t) (z - zref) + B (q* - qref) + F w.
            const auto ref = reference_trajectory(p, t);
            const double g1 = p.c1 / (2.0 * std::sqrt(ref.zref1));
            const double g2 = p.c2 / (2.0 * std::sqrt(ref.zref2));
            const double x1 = z(0) - ref.zref1;
            const double x2 = z(1) - ref.zref2;
            const double u_star = q_star - ref.qref;
            dy(0) = ref.zref1_dot - g1 * x1 + p.c3 * u_star + p.w;
            dy(1) = (p.c1 * std::sqrt(ref.zref1) - p.c2 * std::sqrt(ref.zref2)) + g1 * x1 -
                    g2 * x2;
        }
        dy(2) = law.rate(p, t, z, q, q_star);
        return dy;
    };

    Vector y0(3);
    y0 << s.z0(0), s.z0(1), s.v0;
    const auto times = uniform_times(0.0, p.horizon, s.sample_dt);
    const auto raw = integrate(rhs, y0, 0.0, p.horizon, s.solver, times);

    TankTrajectory traj;
    traj.clamp_warnings = clamp_count;
    traj.method = s.solver.method;
    traj.step = s.solver.step;
    traj.label = s.label;
    traj.samples.reserve(raw.size());
    for (const auto& smp : raw) {
        const auto ref = reference_trajectory(p, smp.t);
        TankSample row;
        row.t = smp.t;
        row.z1 = smp.x(0);
        row.z2 = smp.x(1);
        row.zref1 = ref.zref1;
        row.zref2 = ref.zref2;
        row.v = smp.x(2);
        row.q = law.control(p, smp.t, smp.x.head(2), row.v);
        row.q_star = saturate(row.q, p);
        row.err2 = row.z2 - row.zref2;
        traj.samples.push_back(row);
    }
    return traj;
}

std::vector<TankTrajectory> run_sweep(const std::vector<Scenario>& members, ExecPolicy policy) {
    std::vector<TankTrajectory> out(members.size());
    par::for_index(static_cast<std::ptrdiff_t>(members.size()), policy, [&](std::ptrdiff_t i) {
        out[static_cast<std::size_t>(i)] = run_scenario(members[static_cast<std::size_t>(i)]);
    });
    return out;
}

TankMetrics metrics(const TankTrajectory& traj) {
    TankMetrics m;
    if (traj.samples.empty()) {
        m.settling_time_2pct = std::numeric_limits<double>::infinity();
        m.first_band_entry = std::numeric_limits<double>::infinity();
        return m;
    }

    auto in_band = [](const TankSample& s) { return std::abs(s.err2) <= 0.02 * s.zref2; };

    // Settling: first band entry with no later exit.
    long last_outside = -1;
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        if (!in_band(traj.samples[i])) {
            last_outside = static_cast<long>(i);
        }
    }
    if (last_outside < 0) {
        m.settling_time_2pct = 0.0;
    } else if (last_outside + 1 >= static_cast<long>(traj.samples.size())) {
        m.settling_time_2pct = std::numeric_limits<double>::infinity();
    } else {
        m.settling_time_2pct = traj.samples[static_cast<std::size_t>(last_outside + 1)].t;
    }

    // Overshoot above the upper band edge.
    for (const auto& s : traj.samples) {
        m.max_overshoot = std::max(m.max_overshoot, s.z2 - 1.02 * s.zref2);
    }
    m.max_overshoot = std::max(0.0, m.max_overshoot);

    // Sign changes of the tracking error after the first band entry. A
    // hysteresis of a quarter band width keeps roundoff chatter around zero
    // from registering as oscillation.
    std::size_t first_entry = traj.samples.size();
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        if (in_band(traj.samples[i])) {
            first_entry = i;
            break;
        }
    }
    m.first_band_entry = (first_entry < traj.samples.size())
                             ? traj.samples[first_entry].t
                             : std::numeric_limits<double>::infinity();
    int last_sign = 0;
    for (std::size_t i = first_entry; i < traj.samples.size(); ++i) {
        const double e = traj.samples[i].err2;
        const double deadband = 0.005 * traj.samples[i].zref2;
        const int sign = (e > deadband) - (e < -deadband);
        if (sign != 0) {
            if (last_sign != 0 && sign != last_sign) {
                ++m.oscillation_count;
            }
            last_sign = sign;
        }
    }

    m.final_error = std::abs(traj.samples.back().err2);
    return m;
}

}  // namespace ltvi
