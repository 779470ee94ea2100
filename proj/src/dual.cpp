#include "ltvi/dual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ltvi {
namespace {

Vector flatten(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unflatten(const Vector& v, int rows, int cols) {
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

}  // namespace

DualSystem build_dual(const LtvSystem& sys, const MatrixFunction& K,
                      const std::optional<UesEstimate>& nominal_ues) {
    const int n = sys.dims().n;
    const int l = sys.dims().l;
    const int m = sys.dims().m;
    if (K.rows() != l || K.cols() != n) {
        throw std::invalid_argument("build_dual: K must be l x n");
    }

    const MatrixFunction A = sys.A();
    const MatrixFunction B = sys.B();
    const MatrixFunction C = sys.C();
    const MatrixFunction Kf = K;

    DualSystem dual;
    dual.A_dual = MatrixFunction(n, n, [A, B, Kf](double t) {
        return Matrix(-(A(t) - B(t) * Kf(t)).transpose());
    });
    dual.input_map = MatrixFunction(n, m, [C](double t) { return Matrix(C(t).transpose()); });
    dual.output_map = MatrixFunction(l, n, [B](double t) { return Matrix(B(t).transpose()); });
    if (nominal_ues) {
        dual.note = "anti-stable: uniformly exponentially stable in reverse time (nominal M = " +
                    std::to_string(nominal_ues->M) + ", mu = " + std::to_string(nominal_ues->mu) +
                    ")";
    }
    return dual;
}

PropagationResult propagate_H(const LtvSystem& sys, const MatrixFunction& K,
                              const MatrixFunction& M_fn, const Matrix& H0, double t0, double t1,
                              const SolverSettings& settings,
                              const std::vector<double>& sample_times) {
    const int n = sys.dims().n;
    const int l = sys.dims().l;
    if (H0.rows() != l || H0.cols() != n) {
        throw std::invalid_argument("propagate_H: H0 must be l x n");
    }
    if (M_fn.rows() != l || M_fn.cols() != sys.dims().m) {
        throw std::invalid_argument("propagate_H: M must be l x m");
    }
    if (!std::is_sorted(sample_times.begin(), sample_times.end()) || sample_times.empty()) {
        throw std::invalid_argument("propagate_H: sample times must be sorted and nonempty");
    }

    auto rhs = [&](double t, const Vector& y) {
        const Matrix H = unflatten(y, l, n);
        const Matrix Acl = sys.A()(t) - sys.B()(t) * K(t);
        return flatten(Matrix(-H * Acl + M_fn(t) * sys.C()(t)));
    };

    const double blowup = 1e6 * std::max(1.0, H0.norm());

    PropagationResult result;
    result.stop_time = t1;

    // March sample to sample so growth can stop the run between outputs.
    Vector y = flatten(H0);
    double t = t0;
    auto record = [&](double ts, const Vector& state) {
        const Matrix H = unflatten(state, l, n);
        result.H.emplace_back(ts, H);
        result.Q.emplace_back(ts, Matrix(H * sys.B()(ts)));
    };
    auto eps_at = [](double time) { return 1e-12 * std::max(1.0, std::abs(time)); };
    if (sample_times.front() <= t0 + eps_at(t0)) {
        record(t0, y);
    }
    for (double ts : sample_times) {
        if (ts <= t + eps_at(t)) {
            continue;
        }
        auto chunk = integrate(rhs, y, t, ts, settings, {ts});
        y = chunk.back().x;
        t = ts;
        record(ts, y);
        if (unflatten(y, l, n).norm() > blowup) {
            result.diverged = true;
            result.stop_time = ts;
            return result;
        }
    }
    return result;
}

}  // namespace ltvi
