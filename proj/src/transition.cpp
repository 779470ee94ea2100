#include "ltvi/transition.hpp"

#include <cmath>
#include <stdexcept>

#include "ltvi/ode.hpp"

namespace ltvi {
namespace {

Vector flatten(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unflatten(const Vector& v, int rows, int cols) {
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

double spectral_norm(const Matrix& m) {
    return m.jacobiSvd().singularValues()(0);
}

}  // namespace

Matrix transition_matrix(const MatrixFunction& A_cl, double t0, double t1, double tol) {
    const int n = A_cl.rows();
    if (A_cl.cols() != n) {
        throw std::invalid_argument("transition_matrix: A_cl must be square");
    }
    if (t1 < t0) {
        throw std::invalid_argument("transition_matrix: t1 must be >= t0");
    }
    if (t1 == t0) {
        return Matrix::Identity(n, n);
    }

    auto rhs = [&A_cl, n](double t, const Vector& y) {
        const Matrix phi = unflatten(y, n, n);
        return flatten(Matrix(A_cl(t) * phi));
    };
    // Local tolerance two orders below the requested one keeps the
    // accumulated error at the end of the span near tol.
    auto samples = integrate(rhs, flatten(Matrix::Identity(n, n)), t0, t1,
                             SolverSettings::rk45(0.01 * tol, 0.01 * tol), {t1});
    return unflatten(samples.back().x, n, n);
}

double UesEstimate::bound(double dt) const {
    return M * std::exp(-mu * dt);
}

UesEstimate estimate_ues_constants(const MatrixFunction& A_cl, const std::vector<double>& t0_grid,
                                   double horizon, double tol, ExecPolicy policy) {
    if (t0_grid.empty()) {
        throw std::invalid_argument("estimate_ues_constants: empty start-time grid");
    }
    if (horizon <= 0.0) {
        throw std::invalid_argument("estimate_ues_constants: horizon must be positive");
    }
    const int n = A_cl.rows();

    // Log-spaced offsets dt in (0, horizon], densest where the transient lives.
    constexpr int kOffsets = 24;
    std::vector<double> offsets;
    offsets.reserve(kOffsets);
    const double dt_min = horizon / 512.0;
    for (int k = 0; k < kOffsets; ++k) {
        const double f = static_cast<double>(k) / (kOffsets - 1);
        offsets.push_back(dt_min * std::pow(horizon / dt_min, f));
    }
    offsets.back() = horizon;

    // One integration pass per start time, norms recorded at every offset.
    std::vector<std::vector<double>> norms(t0_grid.size());
    par::for_index(static_cast<std::ptrdiff_t>(t0_grid.size()), policy, [&](std::ptrdiff_t i) {
        const double t0 = t0_grid[static_cast<std::size_t>(i)];
        std::vector<double> sample_times;
        sample_times.reserve(offsets.size());
        for (double dt : offsets) {
            sample_times.push_back(t0 + dt);
        }
        auto rhs = [&A_cl, n](double t, const Vector& y) {
            const Matrix phi = unflatten(y, n, n);
            return flatten(Matrix(A_cl(t) * phi));
        };
        auto samples = integrate(rhs, flatten(Matrix::Identity(n, n)), t0, t0 + horizon,
                                 SolverSettings::rk45(tol, tol), sample_times);
        std::vector<double> row;
        row.reserve(samples.size());
        for (const auto& s : samples) {
            row.push_back(spectral_norm(unflatten(s.x, n, n)));
        }
        norms[static_cast<std::size_t>(i)] = std::move(row);
    });

    // Least squares on log||Phi|| = log M - mu dt, pooled over start times.
    double s_dt = 0.0, s_dt2 = 0.0, s_y = 0.0, s_dty = 0.0;
    long count = 0;
    for (const auto& row : norms) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            const double y = std::log(std::max(row[k], 1e-300));
            s_dt += offsets[k];
            s_dt2 += offsets[k] * offsets[k];
            s_y += y;
            s_dty += offsets[k] * y;
            ++count;
        }
    }
    const double denom = static_cast<double>(count) * s_dt2 - s_dt * s_dt;
    const double slope = (static_cast<double>(count) * s_dty - s_dt * s_y) / denom;
    const double intercept = (s_y - slope * s_dt) / static_cast<double>(count);
    const double mu = -slope;
    if (!(mu > 0.0)) {
        throw std::runtime_error("estimate_ues_constants: not exponentially stable on sampled data");
    }

    // Eq-style majorant: raise M until every sample sits below the bound.
    double log_M = intercept;
    double residual = 0.0;
    for (const auto& row : norms) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            const double y = std::log(std::max(row[k], 1e-300));
            const double excess = y - (log_M - mu * offsets[k]);
            residual = std::max(residual, std::abs(excess));
            if (excess > 0.0) {
                log_M += excess;
            }
        }
    }
    UesEstimate est;
    est.M = std::max(1.0, std::exp(log_M) * (1.0 + 1e-9));
    est.mu = mu;
    est.fit_residual = residual;
    est.grid.reserve(t0_grid.size());
    for (double t0 : t0_grid) {
        est.grid.emplace_back(t0, horizon);
    }
    return est;
}

}  // namespace ltvi
