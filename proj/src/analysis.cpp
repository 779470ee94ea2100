#include "ltvi/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace ltvi {
namespace {

constexpr double kPsdTol = 1e-10;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double lambda_min_sym(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    return es.eigenvalues().minCoeff();
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& t,
                                         const std::vector<double>& q) {
    std::vector<double> cum(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) {
        cum[i] = cum[i - 1] + 0.5 * (q[i] + q[i - 1]) * (t[i] - t[i - 1]);
    }
    return cum;
}

/// Largest beta such that cum[j] - cum[i] >= 2 beta (t_j - t_i) for every
/// grid pair: the all-pairs scan, parallel over the left endpoint.
double window_rate_infimum(const std::vector<double>& t, const std::vector<double>& cum,
                           ExecPolicy policy) {
    const auto n = static_cast<std::ptrdiff_t>(t.size());
    std::vector<double> row_min(t.size(), std::numeric_limits<double>::infinity());
    par::for_index(n - 1, policy, [&](std::ptrdiff_t i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::ptrdiff_t j = i + 1; j < n; ++j) {
            const double tau = t[j] - t[i];
            if (tau <= 0.0) {
                continue;
            }
            best = std::min(best, (cum[j] - cum[i]) / (2.0 * tau));
        }
        row_min[static_cast<std::size_t>(i)] = best;
    });
    double inf = std::numeric_limits<double>::infinity();
    for (double v : row_min) {
        inf = std::min(inf, v);
    }
    return inf;
}

/// Longest window length that still violates cum[j] - cum[i] >= 2 beta tau;
/// -inf when nothing violates.
double max_violating_tau(const std::vector<double>& t, const std::vector<double>& cum,
                         double beta, ExecPolicy policy) {
    const auto n = static_cast<std::ptrdiff_t>(t.size());
    std::vector<double> row_max(t.size(), -std::numeric_limits<double>::infinity());
    par::for_index(n - 1, policy, [&](std::ptrdiff_t i) {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::ptrdiff_t j = i + 1; j < n; ++j) {
            const double tau = t[j] - t[i];
            if (cum[j] - cum[i] < 2.0 * beta * tau) {
                worst = std::max(worst, tau);
            }
        }
        row_max[static_cast<std::size_t>(i)] = worst;
    });
    double worst = -std::numeric_limits<double>::infinity();
    for (double v : row_max) {
        worst = std::max(worst, v);
    }
    return worst;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Satisfied: return "satisfied";
        case Verdict::Violated: return "violated";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string to_string(DisturbanceClass c) {
    switch (c) {
        case DisturbanceClass::AsymptoticallyConstant: return "asymptotically-constant";
        case DisturbanceClass::Matched: return "matched";
        case DisturbanceClass::Unclassified: return "unclassified";
    }
    return "?";
}

std::string StabilityReport::to_text() const {
    std::string s;
    s += "stability check: " + to_string(verdict) + "\n";
    s += "  psd margin   min lambda_min[Q+Q^T] = " + fmt(psd_margin) + "\n";
    s += "  alpha        " + fmt(alpha) + "\n";
    s += "  beta         " + fmt(beta) + "\n";
    s += "  T            " + fmt(T) + "\n";
    if (witness_time) {
        s += "  psd violated at t = " + fmt(*witness_time) + "\n";
    }
    if (!grid_note.empty()) {
        s += "  grid         " + grid_note + "\n";
    }
    return s;
}

std::vector<std::pair<std::string, std::string>> StabilityReport::to_kv() const {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("verdict", to_string(verdict));
    kv.emplace_back("psd_margin", fmt(psd_margin));
    kv.emplace_back("alpha", fmt(alpha));
    kv.emplace_back("beta", fmt(beta));
    kv.emplace_back("T", fmt(T));
    if (witness_time) {
        kv.emplace_back("witness_time", fmt(*witness_time));
    }
    return kv;
}

std::vector<std::pair<std::string, std::string>> BibsBounds::to_kv() const {
    return {
        {"B_bound", fmt(B_bound)}, {"F_bound", fmt(F_bound)}, {"H_bound", fmt(H_bound)},
        {"M", fmt(M)},             {"mu", fmt(mu)},           {"alpha", fmt(alpha)},
        {"beta", fmt(beta)},       {"T", fmt(T)},             {"Ki_min", fmt(Ki_min)},
        {"Ki_max", fmt(Ki_max)},
    };
}

StabilityReport check_theorem1(const MatrixFunction& H, const MatrixFunction& B, const Matrix& Ki,
                               const std::vector<double>& grid,
                               const std::vector<double>& window_taus, ExecPolicy policy) {
    if (grid.size() < 2 || !std::is_sorted(grid.begin(), grid.end())) {
        throw std::invalid_argument("check_theorem1: grid must be sorted with >= 2 points");
    }
    StabilityReport rep;
    rep.alpha = lambda_min_sym(0.5 * (Ki + Ki.transpose().eval()));
    rep.grid_note = std::to_string(grid.size()) + " points on [" + fmt(grid.front()) + ", " +
                    fmt(grid.back()) + "]";

    // q(t) = lambda_min[Q + Q^T], Q = H B, on the grid.
    std::vector<double> q(grid.size(), 0.0);
    par::for_index(static_cast<std::ptrdiff_t>(grid.size()), policy, [&](std::ptrdiff_t i) {
        const double t = grid[static_cast<std::size_t>(i)];
        const Matrix Q = H(t) * B(t);
        q[static_cast<std::size_t>(i)] = lambda_min_sym(Q + Q.transpose().eval());
    });

    rep.psd_margin = *std::min_element(q.begin(), q.end());
    if (rep.psd_margin < -kPsdTol) {
        rep.verdict = Verdict::Violated;
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (q[i] < -kPsdTol) {
                rep.witness_time = grid[i];
                break;
            }
        }
        return rep;
    }
    if (rep.alpha <= 0.0) {
        rep.verdict = Verdict::Violated;
        return rep;
    }

    const auto cum = cumulative_trapezoid(grid, q);

    // Prefer T = 0 with the largest feasible beta. The grid infimum can
    // overshoot the continuous-time one by the trapezoid error between grid
    // points; a 1% margin turns it into a usable certificate.
    const double beta0 = window_rate_infimum(grid, cum, policy);
    if (beta0 > 0.0) {
        rep.beta = 0.99 * beta0;
        rep.T = 0.0;
        rep.verdict = Verdict::Satisfied;
        return rep;
    }

    // Otherwise pin beta at 0.9x the asymptotic window rate and search the
    // smallest workable T among the candidates.
    const double slope = cum.back() / (grid.back() - grid.front());
    const double beta_fixed = 0.9 * 0.5 * slope;
    if (beta_fixed <= 0.0) {
        rep.verdict = Verdict::Inconclusive;
        return rep;
    }
    const double tau_bad = max_violating_tau(grid, cum, beta_fixed, policy);
    double chosen = std::numeric_limits<double>::infinity();
    if (!window_taus.empty()) {
        for (double cand : window_taus) {
            if (cand > tau_bad && cand < chosen) {
                chosen = cand;
            }
        }
    } else {
        // No candidate list: the smallest grid duration that clears every
        // violating window.
        for (double t : grid) {
            const double cand = t - grid.front();
            if (cand > tau_bad) {
                chosen = cand;
                break;
            }
        }
    }
    if (!std::isfinite(chosen)) {
        rep.verdict = Verdict::Inconclusive;
        rep.beta = beta_fixed;
        return rep;
    }
    rep.beta = beta_fixed;
    rep.T = chosen;
    rep.verdict = Verdict::Satisfied;
    return rep;
}

StabilityReport check_corollary1(const MatrixFunction& B, const Matrix& Ki,
                                 const std::vector<double>& grid, ExecPolicy policy) {
    if (grid.empty()) {
        throw std::invalid_argument("check_corollary1: empty grid");
    }
    StabilityReport rep;
    rep.alpha = lambda_min_sym(0.5 * (Ki + Ki.transpose().eval()));
    rep.grid_note = std::to_string(grid.size()) + " points";
    rep.T = 0.0;

    std::vector<double> lmin(grid.size(), 0.0);
    par::for_index(static_cast<std::ptrdiff_t>(grid.size()), policy, [&](std::ptrdiff_t i) {
        const Matrix b = B(grid[static_cast<std::size_t>(i)]);
        lmin[static_cast<std::size_t>(i)] = lambda_min_sym(Matrix(b.transpose() * b));
    });
    rep.beta = *std::min_element(lmin.begin(), lmin.end());
    rep.psd_margin = 2.0 * rep.beta;
    rep.verdict =
        (rep.alpha > 0.0 && rep.beta > 0.0) ? Verdict::Satisfied : Verdict::Violated;
    return rep;
}

BibsBounds collect_bibs_bounds(const LtvSystem& sys, const MatrixFunction& H, const Matrix& Ki,
                               const StabilityReport& report, const UesEstimate& ues,
                               const std::vector<double>& grid) {
    auto grid_norm_max = [&grid](const MatrixFunction& f) {
        double best = 0.0;
        for (double t : grid) {
            best = std::max(best, f(t).jacobiSvd().singularValues()(0));
        }
        return 1.01 * best;
    };
    BibsBounds b;
    b.B_bound = grid_norm_max(sys.B());
    b.F_bound = grid_norm_max(sys.F());
    b.H_bound = grid_norm_max(H);
    b.M = ues.M;
    b.mu = ues.mu;
    b.alpha = report.alpha;
    b.beta = report.beta;
    b.T = report.T;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Ki + Ki.transpose().eval()));
    b.Ki_min = es.eigenvalues().minCoeff();
    b.Ki_max = es.eigenvalues().maxCoeff();
    return b;
}

double bibs_gain(const BibsBounds& b) {
    const bool ok = b.B_bound > 0.0 && b.F_bound > 0.0 && b.H_bound > 0.0 && b.M > 0.0 &&
                    b.mu > 0.0 && b.alpha > 0.0 && b.beta > 0.0 && b.T >= 0.0 &&
                    b.Ki_min > 0.0 && b.Ki_max > 0.0;
    if (!ok) {
        throw std::invalid_argument("bibs_gain: bounds must be positive (T may be zero)");
    }
    return (b.B_bound * b.M / b.mu) * std::exp(b.alpha * b.beta * b.T) *
               std::sqrt(b.Ki_max / b.Ki_min) * (b.Ki_max / b.alpha) *
               (b.H_bound * b.F_bound / b.beta) +
           b.F_bound * b.M / b.mu;
}

Vector z_coordinate(double t, const Vector& x, const Vector& v, const Vector& w0,
                    const MatrixFunction& H, const Matrix& Ki) {
    return -Ki * (H(t) * x) + Ki * v + w0;
}

Vector wtilde(double t, const Vector& w, const Vector& w0, const LtvSystem& sys) {
    return sys.F()(t) * w - sys.B()(t) * w0;
}

EnvelopeCheck verify_exponential_envelope(const std::vector<std::pair<double, Vector>>& z_traj,
                                          double alpha, double beta, double T, const Matrix& Ki,
                                          double tol) {
    EnvelopeCheck check;
    if (z_traj.empty()) {
        check.ok = true;
        return check;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Ki + Ki.transpose().eval()));
    const double cond = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
    const double prefactor = std::exp(alpha * beta * T) * std::sqrt(cond);

    const double t0 = z_traj.front().first;
    const double z0 = z_traj.front().second.norm();
    double worst = 0.0;
    for (const auto& [t, z] : z_traj) {
        const double bound = prefactor * std::exp(-alpha * beta * (t - t0)) * z0;
        const double norm = z.norm();
        if (bound <= 0.0) {
            if (norm > 0.0) {
                worst = std::numeric_limits<double>::infinity();
            }
            continue;
        }
        worst = std::max(worst, norm / bound - 1.0);
    }
    check.max_violation = worst;
    check.ok = worst <= tol;
    return check;
}

DisturbanceReport classify_disturbance(const std::vector<std::pair<double, Vector>>& w_samples,
                                       const LtvSystem& sys, std::optional<Vector> candidate_w0) {
    if (w_samples.size() < 4) {
        throw std::invalid_argument("classify_disturbance: need at least 4 samples");
    }
    const int l = sys.dims().l;
    DisturbanceReport rep;

    const std::size_t tail_start = w_samples.size() - w_samples.size() / 4;
    if (candidate_w0) {
        rep.w0 = *candidate_w0;
    } else {
        // Least-squares w0 over the final window: minimize sum ||F w - B w0||^2.
        Matrix gram = Matrix::Zero(l, l);
        Vector moment = Vector::Zero(l);
        for (std::size_t i = tail_start; i < w_samples.size(); ++i) {
            const auto& [t, w] = w_samples[i];
            const Matrix B = sys.B()(t);
            gram += B.transpose() * B;
            moment += B.transpose() * (sys.F()(t) * w);
        }
        rep.w0 = gram.ldlt().solve(moment);
    }

    double overall_max = 0.0;
    double tail_max = 0.0;
    bool channel_matched = true;
    rep.residual.reserve(w_samples.size());
    for (std::size_t i = 0; i < w_samples.size(); ++i) {
        const auto& [t, w] = w_samples[i];
        const double r = wtilde(t, w, rep.w0, sys).norm();
        rep.residual.emplace_back(t, r);
        overall_max = std::max(overall_max, r);
        if (i >= tail_start) {
            tail_max = std::max(tail_max, r);
        }
        // F in the column range of B, i.e. F = B D has a solution.
        const Matrix B = sys.B()(t);
        const Matrix F = sys.F()(t);
        const Matrix D = B.completeOrthogonalDecomposition().solve(F);
        if ((F - B * D).norm() > 1e-9 * std::max(1.0, F.norm())) {
            channel_matched = false;
        }
    }

    const bool decayed = tail_max <= std::max(1e-9, 1e-2 * overall_max);
    if (decayed) {
        rep.cls = channel_matched ? DisturbanceClass::Matched
                                  : DisturbanceClass::AsymptoticallyConstant;
    } else {
        rep.cls = DisturbanceClass::Unclassified;
    }
    return rep;
}

}  // namespace ltvi
