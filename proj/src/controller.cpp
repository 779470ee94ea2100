#include "ltvi/controller.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace ltvi {

IntegralController::IntegralController(MatrixFunction K, MatrixFunction H, Matrix Ki,
                                       bool antiwindup)
    : K_(std::move(K)), H_(std::move(H)), Ki_(std::move(Ki)), antiwindup_(antiwindup) {
    const int l = K_.rows();
    const int n = K_.cols();
    if (H_.rows() != l || H_.cols() != n) {
        throw std::invalid_argument("IntegralController: H must match K's shape");
    }
    if (Ki_.rows() != l || Ki_.cols() != l) {
        throw std::invalid_argument("IntegralController: Ki must be l x l");
    }
    const double asym = (Ki_ - Ki_.transpose()).norm();
    if (asym > 1e-12 * std::max(1.0, Ki_.norm())) {
        throw std::invalid_argument("IntegralController: Ki is not symmetric");
    }
    Ki_ = 0.5 * (Ki_ + Ki_.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Matrix> es(Ki_);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        throw std::invalid_argument("IntegralController: Ki must be positive definite");
    }
}

Matrix compute_G(const IntegralController& ctrl, const LtvSystem& sys, double t) {
    const Matrix A = sys.A()(t);
    const Matrix B = sys.B()(t);
    const Matrix K = ctrl.K()(t);
    const Matrix H = ctrl.H()(t);
    const Matrix Hdot = ctrl.H().derivative(t);
    if (K.cols() != A.rows() || B.cols() != K.rows()) {
        throw std::invalid_argument("compute_G: controller/plant dimensions disagree");
    }
    return Hdot + H * (A - B * K);
}

ControllerState init_integrator(const IntegralController& ctrl, double t0, const Vector& x0) {
    return ControllerState{ctrl.H()(t0) * x0};
}

Vector control_output(const IntegralController& ctrl, const LtvSystem& sys, double t,
                      const Vector& x, const ControllerState& state) {
    const Matrix K = ctrl.K()(t);
    const Matrix H = ctrl.H()(t);
    (void)sys;
    return -(K + ctrl.Ki() * H) * x + ctrl.Ki() * state.v;
}

Vector integrator_rate(const IntegralController& ctrl, const LtvSystem& sys, double t,
                       const Vector& x, const Vector& u, const Vector& u_star) {
    Vector rate = compute_G(ctrl, sys, t) * x;
    if (ctrl.antiwindup()) {
        rate += ctrl.H()(t) * sys.B()(t) * (u_star - u);
    }
    return rate;
}

MatrixFunction choose_H(const LtvSystem& sys, HVariant variant, double L) {
    const MatrixFunction B = sys.B();
    const int n = sys.dims().n;
    const int l = sys.dims().l;

    if (variant == HVariant::Floored && L <= 0.0) {
        throw std::invalid_argument("choose_H: floored variant needs L > 0");
    }

    auto lambda_min_btb = [](const Matrix& b) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(b.transpose() * b));
        return es.eigenvalues().minCoeff();
    };

    switch (variant) {
        case HVariant::Transpose: {
            auto eval = [B](double t) { return Matrix(B(t).transpose()); };
            if (B.has_analytic_derivative()) {
                auto deriv = [B](double t) { return Matrix(B.derivative(t).transpose()); };
                return MatrixFunction(l, n, eval, deriv);
            }
            return MatrixFunction(l, n, eval);
        }
        case HVariant::Normalized: {
            auto eval = [B, lambda_min_btb](double t) {
                const Matrix b = B(t);
                if (lambda_min_btb(b) < 1e-12) {
                    throw std::domain_error("choose_H: degenerate input matrix at t = " +
                                            std::to_string(t));
                }
                const double nrm = b.jacobiSvd().singularValues()(0);
                return Matrix(b.transpose() / (nrm * nrm));
            };
            return MatrixFunction(l, n, eval);
        }
        case HVariant::EigenNormalized: {
            auto eval = [B, lambda_min_btb](double t) {
                const Matrix b = B(t);
                const double lm = lambda_min_btb(b);
                if (lm < 1e-12) {
                    throw std::domain_error("choose_H: degenerate input matrix at t = " +
                                            std::to_string(t));
                }
                return Matrix(b.transpose() / lm);
            };
            return MatrixFunction(l, n, eval);
        }
        case HVariant::Floored: {
            auto eval = [B, lambda_min_btb, L](double t) {
                const Matrix b = B(t);
                return Matrix(b.transpose() / std::max(lambda_min_btb(b), L));
            };
            return MatrixFunction(l, n, eval);
        }
    }
    throw std::logic_error("choose_H: unknown variant");
}

Matrix tune_Ki(double beta, double mu_star, int l) {
    if (beta <= 0.0 || mu_star <= 0.0 || l <= 0) {
        throw std::invalid_argument("tune_Ki: beta, mu_star, l must be positive");
    }
    return (mu_star / beta) * Matrix::Identity(l, l);
}

LinearTrajectory simulate_linear(const LtvSystem& sys, const IntegralController& ctrl,
                                 const Disturbance& disturbance, const Saturation& saturation,
                                 const Vector& x0, const Vector& v0, double t0, double t1,
                                 const SolverSettings& settings,
                                 const std::vector<double>& sample_times) {
    const int n = sys.dims().n;
    const int l = sys.dims().l;
    const int p = sys.dims().p;
    if (x0.size() != n || v0.size() != l) {
        throw std::invalid_argument("simulate_linear: initial state dimensions disagree");
    }

    auto eval_w = [&](double t) -> Vector {
        return disturbance ? disturbance(t) : Vector(Vector::Zero(p));
    };

    auto rhs = [&](double t, const Vector& y) -> Vector {
        const Vector x = y.head(n);
        const ControllerState st{y.tail(l)};
        const Vector u = control_output(ctrl, sys, t, x, st);
        const Vector u_star = saturation ? saturation(u) : u;
        const Vector w = eval_w(t);

        Vector dy(n + l);
        dy.head(n) = sys.A()(t) * x + sys.B()(t) * u_star + sys.F()(t) * w;
        dy.tail(l) = integrator_rate(ctrl, sys, t, x, u, u_star);
        return dy;
    };

    Vector y0(n + l);
    y0 << x0, v0;
    auto raw = integrate(rhs, y0, t0, t1, settings, sample_times);

    LinearTrajectory traj;
    traj.method = settings.method;
    traj.step = settings.step;
    traj.samples.reserve(raw.size());
    for (const auto& s : raw) {
        LinearSample smp;
        smp.t = s.t;
        smp.x = s.x.head(n);
        smp.v = s.x.tail(l);
        smp.u = control_output(ctrl, sys, s.t, smp.x, ControllerState{smp.v});
        smp.u_star = saturation ? saturation(smp.u) : smp.u;
        smp.w = eval_w(s.t);
        traj.samples.push_back(std::move(smp));
    }
    return traj;
}

}  // namespace ltvi
