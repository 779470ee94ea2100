// Serial vs OpenMP timings for the grid/batch kernels. Each kernel runs both
// policies on identical inputs; results must match, wall times are reported.

#include <cstdio>
#include <string>
#include <vector>

#include "ltvi/analysis.hpp"
#include "ltvi/battery.hpp"
#include "ltvi/controller.hpp"
#include "ltvi/parallel.hpp"
#include "ltvi/tank.hpp"
#include "ltvi/transition.hpp"

using namespace ltvi;

namespace {

std::vector<double> linspace(double a, double b, int count) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out.push_back(a + (b - a) * static_cast<double>(i) / (count - 1));
    }
    return out;
}

struct Timing {
    double serial = 0.0;
    double parallel = 0.0;
};

template <class F>
Timing time_both(F&& run) {
    Timing t;
    double t0 = par::wtime();
    run(ExecPolicy::Serial);
    t.serial = par::wtime() - t0;
    t0 = par::wtime();
    run(ExecPolicy::Parallel);
    t.parallel = par::wtime() - t0;
    return t;
}

void report(const std::string& name, const Timing& t) {
    std::printf("%-34s %9.3f s %9.3f s %7.2fx\n", name.c_str(), t.serial, t.parallel,
                t.serial / t.parallel);
}

}  // namespace

int main() {
    const TankParams p;
    const auto sys = linearized_system(p);
    Matrix H(1, 2);
    H << p.alpha, p.alpha;
    const auto Hf = MatrixFunction::constant(H);
    const Matrix Ki = Matrix::Identity(1, 1);

    std::printf("threads: %d\n", par::thread_count());
    std::printf("%-34s %11s %11s %8s\n", "kernel", "serial", "parallel", "speedup");

    {
        const auto grid = linspace(0.0, p.horizon, 8001);
        double beta_serial = 0.0, beta_parallel = 0.0;
        const auto t = time_both([&](ExecPolicy policy) {
            const auto rep = check_theorem1(Hf, sys.B(), Ki, grid, {}, policy);
            (policy == ExecPolicy::Serial ? beta_serial : beta_parallel) = rep.beta;
        });
        report("theorem-1 grid + window scan", t);
        if (beta_serial != beta_parallel) {
            std::printf("  MISMATCH: %.17g vs %.17g\n", beta_serial, beta_parallel);
            return 1;
        }
    }
    {
        const double period = 1.0 / p.c6;
        const auto starts = linspace(0.0, period, 16);
        double mu_serial = 0.0, mu_parallel = 0.0;
        const auto t = time_both([&](ExecPolicy policy) {
            const auto est = estimate_ues_constants(sys.A(), starts, period, 1e-10, policy);
            (policy == ExecPolicy::Serial ? mu_serial : mu_parallel) = est.mu;
        });
        report("transition-norm sampling (UES)", t);
        if (mu_serial != mu_parallel) {
            std::printf("  MISMATCH: %.17g vs %.17g\n", mu_serial, mu_parallel);
            return 1;
        }
    }
    {
        const IntegralController ctrl(MatrixFunction::constant(Matrix::Zero(1, 2)), Hf, Ki);
        double sup_serial = 0.0, sup_parallel = 0.0;
        const auto t = time_both([&](ExecPolicy policy) {
            const auto batch = disturbance_battery(sys, ctrl, 0.0, 250.0,
                                                   SolverSettings::rk4(0.01), 0.25, 32, 1,
                                                   policy);
            double worst = 0.0;
            for (const auto& member : batch) {
                worst = std::max(worst, member.sup_x);
            }
            (policy == ExecPolicy::Serial ? sup_serial : sup_parallel) = worst;
        });
        report("disturbance battery (32 runs)", t);
        if (sup_serial != sup_parallel) {
            std::printf("  MISMATCH: %.17g vs %.17g\n", sup_serial, sup_parallel);
            return 1;
        }
    }
    {
        std::vector<Scenario> members;
        for (double ki : {1.0, 2.0, 5.0, 10.0}) {
            for (auto kind : {TankControllerKind::Proposed, TankControllerKind::StandardI}) {
                Scenario s;
                s.controller = kind;
                s.params.ki = ki;
                members.push_back(s);
            }
        }
        double err_serial = 0.0, err_parallel = 0.0;
        const auto t = time_both([&](ExecPolicy policy) {
            const auto runs = run_sweep(members, policy);
            double acc = 0.0;
            for (const auto& run : runs) {
                acc += run.samples.back().err2;
            }
            (policy == ExecPolicy::Serial ? err_serial : err_parallel) = acc;
        });
        report("scenario sweep (8 members)", t);
        if (err_serial != err_parallel) {
            std::printf("  MISMATCH: %.17g vs %.17g\n", err_serial, err_parallel);
            return 1;
        }
    }
    std::printf("all kernels: serial and parallel results identical\n");
    return 0;
}
