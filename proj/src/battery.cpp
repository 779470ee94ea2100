#include "ltvi/battery.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ltvi/ode.hpp"

namespace ltvi {
namespace {

// Portable uniform in [-1, 1]: top 53 bits of the engine output, so the
// stream does not depend on the standard library's distribution internals.
double uniform_pm1(std::mt19937_64& rng) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 2.0 * unit - 1.0;
}

}  // namespace

Vector PiecewiseConstantSignal::operator()(double t) const {
    auto it = std::upper_bound(switch_times.begin(), switch_times.end(), t);
    const auto idx = static_cast<std::size_t>(
        std::max<std::ptrdiff_t>(0, (it - switch_times.begin()) - 1));
    return levels[std::min(idx, levels.size() - 1)];
}

PiecewiseConstantSignal make_disturbance(int p, double t0, double t1, int segments,
                                         unsigned long long seed) {
    if (p <= 0 || segments <= 0 || t1 <= t0) {
        throw std::invalid_argument("make_disturbance: bad arguments");
    }
    std::mt19937_64 rng(seed);
    PiecewiseConstantSignal sig;
    sig.switch_times.reserve(static_cast<std::size_t>(segments));
    sig.levels.reserve(static_cast<std::size_t>(segments));
    const double dt = (t1 - t0) / segments;
    double max_norm = 0.0;
    for (int k = 0; k < segments; ++k) {
        sig.switch_times.push_back(t0 + k * dt);
        Vector level(p);
        for (int i = 0; i < p; ++i) {
            level(i) = uniform_pm1(rng);
        }
        max_norm = std::max(max_norm, level.norm());
        sig.levels.push_back(std::move(level));
    }
    if (max_norm <= 0.0) {
        sig.levels.front().setOnes();
        max_norm = sig.levels.front().norm();
    }
    for (auto& level : sig.levels) {
        level /= max_norm;
    }
    return sig;
}

std::vector<BatteryMember> disturbance_battery(const LtvSystem& sys,
                                               const IntegralController& ctrl, double t0,
                                               double t1, const SolverSettings& settings,
                                               double sample_dt, int count,
                                               unsigned long long seed, ExecPolicy policy) {
    if (count <= 0) {
        return {};
    }
    const int n = sys.dims().n;
    const int l = sys.dims().l;
    const int p = sys.dims().p;
    const auto times = uniform_times(t0, t1, sample_dt);

    std::vector<BatteryMember> out(static_cast<std::size_t>(count));
    par::for_index(count, policy, [&](std::ptrdiff_t i) {
        const unsigned long long member_seed = seed + static_cast<unsigned long long>(i);
        const auto w = make_disturbance(p, t0, t1, 12, member_seed);
        const auto traj = simulate_linear(sys, ctrl, [w](double t) { return w(t); }, nullptr,
                                          Vector::Zero(n), Vector::Zero(l), t0, t1, settings,
                                          times);
        double sup_x = 0.0;
        for (const auto& s : traj.samples) {
            sup_x = std::max(sup_x, s.x.norm());
        }
        out[static_cast<std::size_t>(i)] = BatteryMember{member_seed, sup_x, 1.0};
    });
    return out;
}

}  // namespace ltvi
