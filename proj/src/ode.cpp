#include "ltvi/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ltvi {
namespace {

void check_finite(const Vector& x, double t) {
    if (!x.allFinite()) {
        throw std::runtime_error("ode: non-finite state at t = " + std::to_string(t));
    }
}

Vector rk4_step(const OdeRhs& rhs, double t, const Vector& x, double h) {
    const Vector k1 = rhs(t, x);
    const Vector k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
    const Vector k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
    const Vector k4 = rhs(t + h, x + h * k3);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::vector<OdeSample> integrate_rk4(const OdeRhs& rhs, const Vector& x0, double t_start,
                                     double t_end, const SolverSettings& s,
                                     const std::vector<double>& sample_times) {
    if (s.step <= 0.0) {
        throw std::invalid_argument("ode: fixed step must be positive");
    }
    std::vector<OdeSample> out;
    out.reserve(sample_times.size());

    const double h = s.step;
    Vector x = x0;
    double t = t_start;
    long grid_index = 0;
    std::size_t next_sample = 0;
    long steps = 0;

    // Samples at the marching time use the grid state; samples strictly
    // inside the upcoming step come from a partial step that leaves the
    // marching state untouched.
    auto emit_at_current = [&] {
        while (next_sample < sample_times.size() &&
               sample_times[next_sample] <= t + 1e-12 * h) {
            out.push_back({sample_times[next_sample], x});
            ++next_sample;
        }
    };
    auto emit_inside = [&](double t_next) {
        while (next_sample < sample_times.size() &&
               sample_times[next_sample] < t_next - 1e-12 * h) {
            const double ts = sample_times[next_sample];
            out.push_back({ts, rk4_step(rhs, t, x, ts - t)});
            ++next_sample;
        }
    };

    emit_at_current();
    while (t < t_end - 1e-12 * h) {
        if (++steps > s.max_steps) {
            throw std::runtime_error("ode: max_steps exceeded at t = " + std::to_string(t));
        }
        ++grid_index;
        const double t_next = std::min(t_end, t_start + static_cast<double>(grid_index) * h);
        emit_inside(t_next);
        x = rk4_step(rhs, t, x, t_next - t);
        check_finite(x, t_next);
        t = t_next;
        emit_at_current();
    }
    // Anything left is the end point within roundoff.
    while (next_sample < sample_times.size()) {
        out.push_back({sample_times[next_sample], x});
        ++next_sample;
    }
    return out;
}

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

std::vector<OdeSample> integrate_rk45(const OdeRhs& rhs, const Vector& x0, double t_start,
                                      double t_end, const SolverSettings& s,
                                      const std::vector<double>& sample_times) {
    std::vector<OdeSample> out;
    out.reserve(sample_times.size());

    Vector x = x0;
    double t = t_start;
    double h = std::min(1e-2 * std::max(1.0, t_end - t_start), t_end - t_start);
    std::size_t next_sample = 0;
    long steps = 0;
    auto eps_at = [](double time) { return 1e-12 * std::max(1.0, std::abs(time)); };

    while (next_sample < sample_times.size() && sample_times[next_sample] <= t + eps_at(t)) {
        out.push_back({sample_times[next_sample], x});
        ++next_sample;
    }

    while (t < t_end - eps_at(t_end)) {
        if (++steps > s.max_steps) {
            throw std::runtime_error("ode: max_steps exceeded at t = " + std::to_string(t));
        }
        // Land exactly on the next sample time or the end of the span.
        double target = (next_sample < sample_times.size()) ? sample_times[next_sample] : t_end;
        target = std::min(target, t_end);
        h = std::min(h, target - t);
        if (h <= 0.0) {
            h = 1e-14;
        }

        const Vector k1 = rhs(t, x);
        const Vector k2 = rhs(t + c2 * h, x + h * (a21 * k1));
        const Vector k3 = rhs(t + c3 * h, x + h * (a31 * k1 + a32 * k2));
        const Vector k4 = rhs(t + c4 * h, x + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vector k5 = rhs(t + c5 * h, x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vector k6 =
            rhs(t + h, x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vector x_new = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vector k7 = rhs(t + h, x_new);
        const Vector err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err = 0.0;
        for (int i = 0; i < x.size(); ++i) {
            const double sc = s.abs_tol + s.rel_tol * std::max(std::abs(x(i)), std::abs(x_new(i)));
            err = std::max(err, std::abs(err_vec(i)) / sc);
        }

        if (err <= 1.0) {
            t += h;
            x = x_new;
            check_finite(x, t);
            while (next_sample < sample_times.size() &&
                   sample_times[next_sample] <= t + eps_at(t)) {
                out.push_back({sample_times[next_sample], x});
                ++next_sample;
            }
        }
        double scale = 0.9 * std::pow(std::max(err, 1e-12), -0.2);
        scale = std::clamp(scale, 0.2, 5.0);
        h = std::max(1e-14, h * scale);
    }

    while (next_sample < sample_times.size()) {
        out.push_back({sample_times[next_sample], x});
        ++next_sample;
    }
    return out;
}

}  // namespace

SolverSettings SolverSettings::rk4(double step) {
    SolverSettings s;
    s.method = OdeMethod::Rk4;
    s.step = step;
    return s;
}

SolverSettings SolverSettings::rk45(double abs_tol, double rel_tol) {
    SolverSettings s;
    s.method = OdeMethod::Rk45;
    s.abs_tol = abs_tol;
    s.rel_tol = rel_tol;
    return s;
}

std::vector<OdeSample> integrate(const OdeRhs& rhs, const Vector& x0, double t_start,
                                 double t_end, const SolverSettings& settings,
                                 const std::vector<double>& sample_times) {
    if (t_end <= t_start) {
        throw std::invalid_argument("ode: t_end must exceed t_start");
    }
    if (!std::is_sorted(sample_times.begin(), sample_times.end())) {
        throw std::invalid_argument("ode: sample times must be sorted");
    }
    if (!sample_times.empty() &&
        (sample_times.front() < t_start - 1e-12 || sample_times.back() > t_end + 1e-12)) {
        throw std::invalid_argument("ode: sample times must lie within the span");
    }
    if (settings.max_steps < 1) {
        throw std::invalid_argument("ode: max_steps must be >= 1");
    }
    if (settings.method == OdeMethod::Rk4) {
        return integrate_rk4(rhs, x0, t_start, t_end, settings, sample_times);
    }
    if (settings.abs_tol <= 0.0 || settings.rel_tol <= 0.0) {
        throw std::invalid_argument("ode: adaptive tolerances must be positive");
    }
    return integrate_rk45(rhs, x0, t_start, t_end, settings, sample_times);
}

std::vector<double> uniform_times(double t0, double t1, double dt) {
    if (dt <= 0.0 || t1 <= t0) {
        throw std::invalid_argument("uniform_times: need dt > 0 and t1 > t0");
    }
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((t1 - t0) / dt + 1e-9));
    out.reserve(static_cast<std::size_t>(count) + 2);
    for (long i = 0; i <= count; ++i) {
        out.push_back(t0 + static_cast<double>(i) * dt);
    }
    if (out.back() < t1 - 1e-9 * dt) {
        out.push_back(t1);
    } else {
        out.back() = std::min(out.back(), t1);
    }
    return out;
}

}  // namespace ltvi
