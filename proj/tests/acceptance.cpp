// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Thresholds are pinned here, next to the checks, not in a config.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "ltvi/analysis.hpp"
#include "ltvi/battery.hpp"
#include "ltvi/controller.hpp"
#include "ltvi/dual.hpp"
#include "ltvi/ode.hpp"
#include "ltvi/tank.hpp"
#include "ltvi/ti.hpp"
#include "ltvi/transition.hpp"

using namespace ltvi;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::vector<double> linspace(double a, double b, int count) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out.push_back(a + (b - a) * static_cast<double>(i) / (count - 1));
    }
    return out;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

Matrix random_matrix(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            m(i, j) = uniform(rng, -scale, scale);
        }
    }
    return m;
}

Matrix random_spd(std::mt19937_64& rng, int n, double lo, double hi) {
    const Matrix q = random_matrix(rng, n, n);
    const Matrix u = Eigen::HouseholderQR<Matrix>(q).householderQ();
    Matrix d = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        d(i, i) = uniform(rng, lo, hi);
    }
    const Matrix s = u * d * u.transpose();
    return 0.5 * (s + s.transpose().eval());
}

Matrix random_hurwitz(std::mt19937_64& rng, int n, double margin) {
    const Matrix a = random_matrix(rng, n, n);
    Eigen::EigenSolver<Matrix> es(a);
    double max_re = -1e300;
    for (int i = 0; i < n; ++i) {
        max_re = std::max(max_re, es.eigenvalues()(i).real());
    }
    return a - (max_re + margin + uniform(rng, 0.0, 1.0)) * Matrix::Identity(n, n);
}

IntegralController tank_controller(const TankParams& p, double ki, bool antiwindup) {
    Matrix H(1, 2);
    H << p.alpha, p.alpha;
    return IntegralController(MatrixFunction::constant(Matrix::Zero(1, 2)),
                              MatrixFunction::constant(H), Matrix::Constant(1, 1, ki),
                              antiwindup);
}

double lambda_min(const Matrix& sym) {
    return Eigen::SelfAdjointEigenSolver<Matrix>(sym).eigenvalues().minCoeff();
}

std::vector<std::complex<double>> spectrum(const Matrix& m) {
    Eigen::EigenSolver<Matrix> es(m);
    std::vector<std::complex<double>> out(static_cast<std::size_t>(m.rows()));
    for (int i = 0; i < m.rows(); ++i) {
        out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    }
    return out;
}

// --- criterion 1: performance preservation on the linearized plant ----------

Outcome criterion_performance_preservation() {
    const double t_start = now_seconds();
    const TankParams p;
    const auto sys = linearized_system(p);
    const auto ctrl = tank_controller(p, 1.0, false);

    const auto ref0 = reference_trajectory(p, 0.0);
    Vector x0(2);
    x0 << -ref0.zref1, -ref0.zref2;  // level coordinates start empty
    const Vector v0 = init_integrator(ctrl, 0.0, x0).v;

    const auto traj = simulate_linear(sys, ctrl, nullptr, nullptr, x0, v0, 0.0, p.horizon,
                                      SolverSettings::rk4(0.01), uniform_times(0.0, p.horizon, 0.5));
    double worst = 0.0;
    for (const auto& s : traj.samples) {
        worst = std::max(worst,
                         (s.u + ctrl.K()(s.t) * s.x).lpNorm<Eigen::Infinity>());
    }
    const double elapsed = now_seconds() - t_start;
    const bool pass = worst <= 1e-8 && elapsed < 5.0;
    return {pass, "max |u + K x| = " + fmt(worst) + " V (limit 1e-08), " + fmt(elapsed) +
                      " s (limit 5)"};
}

// --- criterion 2: two-tank reproduction --------------------------------------

Outcome criterion_two_tank_reproduction() {
    const double t_start = now_seconds();

    auto member = [](TankControllerKind kind, double ki) {
        Scenario s;
        s.controller = kind;
        s.params.ki = ki;
        return s;
    };
    const auto runs = run_sweep({member(TankControllerKind::Proposed, 1.0),
                                 member(TankControllerKind::Proposed, 10.0),
                                 member(TankControllerKind::StandardI, 1.0),
                                 member(TankControllerKind::StandardI, 10.0)});
    const auto m_prop1 = metrics(runs[0]);
    const auto m_prop10 = metrics(runs[1]);
    const auto m_std1 = metrics(runs[2]);
    const auto m_std10 = metrics(runs[3]);
    const double elapsed = now_seconds() - t_start;

    const bool settled = std::isfinite(m_prop1.settling_time_2pct) &&
                         std::isfinite(m_std1.settling_time_2pct);
    const double rel_gap =
        std::abs(m_prop1.settling_time_2pct - m_std1.settling_time_2pct) /
        std::min(m_prop1.settling_time_2pct, m_std1.settling_time_2pct);
    const bool a = settled && rel_gap <= 0.25;

    const bool b = m_std10.oscillation_count >= 3 * std::max<long>(1, m_prop10.oscillation_count);

    double tail = 0.0;
    for (const auto& run : {runs[0], runs[1]}) {
        for (const auto& s : run.samples) {
            if (s.t >= 0.8 * 500.0) {
                tail = std::max(tail, std::abs(s.err2));
            }
        }
    }
    const bool c = tail < 0.05;

    const bool pass = a && b && c && elapsed < 30.0;
    return {pass, "(a) settling " + fmt(m_prop1.settling_time_2pct) + " vs " +
                      fmt(m_std1.settling_time_2pct) + " s, gap " + fmt(100.0 * rel_gap) +
                      "% (limit 25%); (b) oscillations " + std::to_string(m_std10.oscillation_count) +
                      " vs " + std::to_string(m_prop10.oscillation_count) +
                      " (need 3x); (c) tail error " + fmt(tail) + " cm (limit 0.05); " +
                      fmt(elapsed) + " s (limit 30)"};
}

// --- criterion 3: anti-windup ------------------------------------------------

Outcome criterion_antiwindup() {
    Scenario with_aw;
    with_aw.params.ki = 10.0;
    Scenario without_aw = with_aw;
    without_aw.antiwindup = false;

    const auto runs = run_sweep({with_aw, without_aw});
    const auto m_aw = metrics(runs[0]);
    const auto m_plain = metrics(runs[1]);

    // The unconstrained u of the anti-windup law recovers -K x - w0, with w0
    // the matched disturbance image w / c3 in volts.
    const TankParams p;
    const double w0 = p.w / p.c3;
    double recovery = 0.0;
    for (const auto& s : runs[0].samples) {
        if (s.t >= 0.75 * p.horizon) {
            const auto ref = reference_trajectory(p, s.t);
            recovery = std::max(recovery, std::abs((s.q - ref.qref) + w0));
        }
    }

    const bool pass = m_aw.max_overshoot < m_plain.max_overshoot && recovery < 1e-2;
    return {pass, "overshoot " + fmt(m_aw.max_overshoot) + " < " + fmt(m_plain.max_overshoot) +
                      " cm; final-quarter |u + K x + w0| = " + fmt(recovery) +
                      " V (limit 0.01)"};
}

// --- criterion 4: theorem 1 / corollary 1 consistency ------------------------

Outcome criterion_consistency() {
    std::mt19937_64 rng(408001);
    const auto grid = linspace(0.0, 10.0, 101);
    int checked = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 4);
        const int l = 1 + static_cast<int>(rng() % std::min(3, n));
        Matrix B0 = random_matrix(rng, n, l, 1.0);
        const double lm0 = lambda_min(Matrix(B0.transpose() * B0));
        if (lm0 < 1e-6) {
            B0 += Matrix::Identity(n, l);
        }
        const double lm1 = lambda_min(Matrix(B0.transpose() * B0));
        B0 *= std::sqrt(std::max(0.1 / lm1, 1.0)) * (1.0 + uniform(rng, 0.0, 2.0));
        const double lm = lambda_min(Matrix(B0.transpose() * B0));

        const auto B = MatrixFunction::constant(B0);
        const auto H = MatrixFunction::constant(Matrix(B0.transpose()));
        const Matrix Ki = random_spd(rng, l, 0.3, 3.0);

        const auto cor = check_corollary1(B, Ki, grid);
        if (cor.verdict != Verdict::Satisfied) {
            return {false, "corollary unexpectedly unsatisfied at instance " +
                               std::to_string(rep)};
        }
        const auto thm = check_theorem1(H, B, Ki, grid);
        const bool ok = thm.verdict == Verdict::Satisfied && thm.T == 0.0 &&
                        std::abs(thm.beta - lm) <= 0.05 * lm;
        if (!ok) {
            return {false, "instance " + std::to_string(rep) + ": verdict " +
                               to_string(thm.verdict) + ", T = " + fmt(thm.T) + ", beta " +
                               fmt(thm.beta) + " vs lambda_min " + fmt(lm)};
        }
        ++checked;
    }
    return {true, std::to_string(checked) + " constant-B plants, T = 0 and beta within 5%"};
}

// --- criterion 5: exponential envelope ---------------------------------------

Outcome criterion_envelope() {
    std::mt19937_64 rng(505001);
    double worst_violation = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const int l = 1 + static_cast<int>(rng() % 2);
        const int n = l + static_cast<int>(rng() % (4 - l));

        // sigma_min(B0) floored at 1, oscillation amplitude capped at 0.3.
        Matrix B0 = random_matrix(rng, n, l, 1.5);
        Eigen::JacobiSVD<Matrix> svd(B0, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Vector sv = svd.singularValues();
        for (int i = 0; i < sv.size(); ++i) {
            sv(i) = std::max(sv(i), 1.0);
        }
        B0 = svd.matrixU().leftCols(l) * sv.asDiagonal() * svd.matrixV().transpose();
        Matrix B1 = random_matrix(rng, n, l, 0.5);
        if (rep % 3 == 0) {
            B1.setZero();
        } else if (B1.norm() > 0.9) {
            B1 *= 0.9 / B1.norm();
        }
        const double omega = uniform(rng, 0.1, 0.5);
        const double phase = uniform(rng, 0.0, 6.28);

        auto B_eval = [B0, B1, omega, phase](double t) {
            return Matrix(B0 + 0.3 * std::sin(omega * t + phase) * B1);
        };
        auto B_deriv = [B1, omega, phase](double t) {
            return Matrix(0.3 * omega * std::cos(omega * t + phase) * B1);
        };
        const MatrixFunction B(n, l, B_eval, B_deriv);
        const MatrixFunction H(l, n, [B](double t) { return Matrix(B(t).transpose()); },
                               [B](double t) { return Matrix(B.derivative(t).transpose()); });
        const Matrix Ki = random_spd(rng, l, 0.4, 2.0);

        const double horizon = 20.0;
        const auto rep_thm = check_theorem1(H, B, Ki, linspace(0.0, horizon, 2001));
        if (rep_thm.verdict != Verdict::Satisfied) {
            return {false, "instance " + std::to_string(rep) + " failed the stability check"};
        }

        // Simulate z' = -Ki H B z with a step well inside the accuracy range.
        const double sigma_max = sv.maxCoeff() + 0.3;
        const double rate_max =
            Eigen::SelfAdjointEigenSolver<Matrix>(Ki).eigenvalues().maxCoeff() * sigma_max *
            sigma_max;
        const double h = std::min(0.005, 0.1 / rate_max);
        auto rhs = [&](double t, const Vector& z) {
            return Vector(-Ki * (H(t) * (B(t) * z)));
        };
        const Vector z0 = random_matrix(rng, l, 1, 2.0);
        const auto times = uniform_times(0.0, horizon, 0.02);
        const auto samples = integrate(rhs, z0, 0.0, horizon, SolverSettings::rk4(h), times);

        std::vector<std::pair<double, Vector>> z_traj;
        z_traj.reserve(samples.size());
        for (const auto& s : samples) {
            z_traj.emplace_back(s.t, s.x);
        }
        const auto check =
            verify_exponential_envelope(z_traj, rep_thm.alpha, rep_thm.beta, rep_thm.T, Ki, 1e-9);
        worst_violation = std::max(worst_violation, check.max_violation);
        if (!check.ok) {
            return {false, "instance " + std::to_string(rep) + ": violation " +
                               fmt(check.max_violation)};
        }
    }
    return {true, "20 closed loops under the envelope, worst relative excess " +
                      fmt(worst_violation)};
}

// --- criterion 6: BIBS bound -------------------------------------------------

Outcome criterion_bibs() {
    const TankParams p;
    const auto sys = linearized_system(p);
    Matrix H(1, 2);
    H << p.alpha, p.alpha;
    const auto Hf = MatrixFunction::constant(H);
    const Matrix Ki = Matrix::Identity(1, 1);

    const auto grid = linspace(0.0, p.horizon, 2001);
    const auto rep = check_theorem1(Hf, sys.B(), Ki, grid);
    if (rep.verdict != Verdict::Satisfied) {
        return {false, "stability check unexpectedly unsatisfied"};
    }
    const double period = 1.0 / p.c6;
    const auto ues = estimate_ues_constants(
        sys.A(), linspace(0.0, period, 9), period, 1e-10);
    const auto bounds = collect_bibs_bounds(sys, Hf, Ki, rep, ues, grid);
    const double gamma = bibs_gain(bounds);

    const auto ctrl = tank_controller(p, 1.0, false);
    const auto battery = disturbance_battery(sys, ctrl, 0.0, p.horizon,
                                             SolverSettings::rk4(0.01), 0.1, 100, 606001);
    double worst = 0.0;
    for (const auto& member : battery) {
        worst = std::max(worst, member.sup_x / member.sup_w);
    }
    const bool pass = worst <= gamma;
    return {pass, "100 disturbances, max sup||x||/sup||w|| = " + fmt(worst) +
                      " <= gamma = " + fmt(gamma) + " (M = " + fmt(ues.M) +
                      ", mu = " + fmt(ues.mu) + ")"};
}

// --- criterion 7: time-invariant eigenvalue union ----------------------------

Outcome criterion_ti_union() {
    // Worked example first: spectrum exactly {-1, -2, -1}.
    Matrix A(2, 2), B(2, 1), C(1, 2), K(1, 2);
    A << 0, 1, 0, 0;
    B << 0, 1;
    C << 1, 0;
    K << 2, 3;
    const TiPlant worked(A, B, C, K);
    const Matrix Hw = compute_H_ti(worked, compute_M_ti(worked));
    const auto eigs_w = closed_loop_eigs(worked, Matrix::Identity(1, 1), Hw);
    const double d_w =
        multiset_distance(eigs_w.eigenvalues, {{-2.0, 0.0}, {-1.0, 0.0}, {-1.0, 0.0}});
    if (d_w >= 1e-10) {
        return {false, "worked example distance " + fmt(d_w) + " (limit 1e-10)"};
    }

    std::mt19937_64 rng(707001);
    double worst = 0.0;
    int built = 0;
    while (built < 100) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const int l = 1 + static_cast<int>(rng() % std::min(3, n));
        const int m = l + static_cast<int>(rng() % (n - l + 1));
        const Matrix Acl = random_hurwitz(rng, n, 0.4);
        const Matrix Bm = random_matrix(rng, n, l);
        const Matrix Cm = random_matrix(rng, m, n);
        const Matrix Km = random_matrix(rng, l, n, 0.7);

        const Matrix dc = Cm * Acl.partialPivLu().solve(Bm);
        Eigen::JacobiSVD<Matrix> svd(dc);
        if (svd.singularValues().size() < l || svd.singularValues()(l - 1) < 1e-3) {
            continue;
        }
        const TiPlant plant(Matrix(Acl + Bm * Km), Bm, Cm, Km);
        const Matrix Ki = random_spd(rng, l, 0.3, 3.0);
        const Matrix Hm = compute_H_ti(plant, compute_M_ti(plant));

        const auto eigs = closed_loop_eigs(plant, Ki, Hm);
        auto expected = spectrum(plant.Acl());
        const auto extra = spectrum(Matrix(-Ki));
        expected.insert(expected.end(), extra.begin(), extra.end());
        const double dist = multiset_distance(eigs.eigenvalues, expected);
        worst = std::max(worst, dist);
        if (!eigs.hb_identity_ok || dist >= 1e-8) {
            return {false, "instance " + std::to_string(built) + ": distance " + fmt(dist)};
        }
        ++built;
    }
    return {true, "worked example distance " + fmt(d_w) + "; 100 random plants, worst " +
                      fmt(worst)};
}

// --- criterion 8: dual fixed point -------------------------------------------

Outcome criterion_dual_fixed_point() {
    Matrix A(2, 2), B(2, 1), C(2, 2), K(1, 2);
    A << -1.0, 0.3, 0.0, -1.4;
    B << 1.0, 0.5;
    C = Matrix::Identity(2, 2);
    K.setZero();
    const LtvSystem sys(MatrixFunction::constant(A), MatrixFunction::constant(B),
                        MatrixFunction::constant(Matrix::Zero(2, 1)),
                        MatrixFunction::constant(C));
    const TiPlant plant(A, B, C, K);
    const Matrix M = compute_M_ti(plant);
    const Matrix H0 = compute_H_ti(plant, M);

    // Slowest nominal mode has |Re| = 1: ten time constants = 10 s.
    const auto times = uniform_times(0.0, 10.0, 0.1);
    const auto res = propagate_H(sys, MatrixFunction::constant(K), MatrixFunction::constant(M),
                                 H0, 0.0, 10.0, SolverSettings::rk4(0.002), times);
    if (res.diverged) {
        return {false, "propagation diverged"};
    }
    double drift = 0.0;
    for (const auto& [t, Ht] : res.H) {
        drift = std::max(drift, (Ht - H0).norm());
    }
    const double rel = drift / H0.norm();
    return {rel < 1e-6, "relative drift over 10 time constants = " + fmt(rel) +
                            " (limit 1e-06)"};
}

// --- criterion 9: RK4 order --------------------------------------------------

Outcome criterion_rk4_order() {
    auto rhs = [](double, const Vector& x) { return Vector(-x); };
    auto error_at = [&](double h) {
        const auto out = integrate(rhs, Vector::Ones(1), 0.0, 1.0, SolverSettings::rk4(h), {1.0});
        return std::abs(out.back().x(0) - std::exp(-1.0));
    };
    const double ratio = error_at(0.05) / error_at(0.025);
    return {ratio >= 12.0 && ratio <= 20.0,
            "error ratio between h and h/2 = " + fmt(ratio) + " (window [12, 20])"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {1, "performance preservation", criterion_performance_preservation},
        {2, "two-tank reproduction", criterion_two_tank_reproduction},
        {3, "anti-windup", criterion_antiwindup},
        {4, "theorem 1 / corollary 1 consistency", criterion_consistency},
        {5, "exponential envelope", criterion_envelope},
        {6, "BIBS bound", criterion_bibs},
        {7, "time-invariant eigenvalue union", criterion_ti_union},
        {8, "dual fixed point", criterion_dual_fixed_point},
        {9, "solver order check", criterion_rk4_order},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] criterion %d: %s — %s\n", outcome.pass ? "PASS" : "FAIL", c.id,
                    c.name, outcome.detail.c_str());
        std::fflush(stdout);
        if (!outcome.pass) {
            ++failures;
        }
    }
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
