#include "ltvi/ti.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>

namespace ltvi {
namespace {

std::vector<std::complex<double>> sorted_eigs(const Matrix& m) {
    Eigen::EigenSolver<Matrix> es(m);
    std::vector<std::complex<double>> out(static_cast<std::size_t>(m.rows()));
    for (int i = 0; i < m.rows(); ++i) {
        out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) {
            return a.real() < b.real();
        }
        return a.imag() < b.imag();
    });
    return out;
}

}  // namespace

TiPlant::TiPlant(Matrix A, Matrix B, Matrix C, Matrix K)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), K_(std::move(K)) {
    const auto n = A_.rows();
    if (A_.cols() != n || B_.rows() != n || C_.cols() != n || K_.cols() != n ||
        K_.rows() != B_.cols()) {
        throw std::invalid_argument("TiPlant: inconsistent matrix shapes");
    }
    Acl_ = A_ - B_ * K_;
    Eigen::EigenSolver<Matrix> es(Acl_);
    for (int i = 0; i < n; ++i) {
        if (es.eigenvalues()(i).real() >= 0.0) {
            throw std::invalid_argument("TiPlant: A - BK must be Hurwitz");
        }
    }
}

Matrix compute_M_ti(const TiPlant& p) {
    const auto lu = p.Acl().partialPivLu();
    const Matrix dc_gain = p.C() * lu.solve(p.B());  // C (A - BK)^{-1} B, m x l

    Eigen::JacobiSVD<Matrix> svd(dc_gain, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-10 * sv(0);
    const int l = static_cast<int>(dc_gain.cols());
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) {
            ++rank;
        }
    }
    if (rank < l) {
        throw std::runtime_error(
            "compute_M_ti: transmission zero at origin / singular dc-gain (rank " +
            std::to_string(rank) + " < " + std::to_string(l) + ")");
    }
    Matrix sigma_inv = Matrix::Zero(sv.size(), sv.size());
    for (int i = 0; i < sv.size(); ++i) {
        sigma_inv(i, i) = 1.0 / sv(i);
    }
    return svd.matrixV() * sigma_inv * svd.matrixU().transpose();
}

Matrix compute_H_ti(const TiPlant& p, const Matrix& M) {
    if (M.cols() != p.C().rows()) {
        throw std::invalid_argument("compute_H_ti: M must be l x m");
    }
    // H Acl = M C, solved through Acl^T H^T = (M C)^T with one step of
    // iterative refinement to pin the fixed-point residual near roundoff.
    const Matrix rhs = (M * p.C()).transpose();
    const auto lu = p.Acl().transpose().partialPivLu();
    Matrix Ht = lu.solve(rhs);
    Ht += lu.solve(Matrix(rhs - p.Acl().transpose() * Ht));
    return Ht.transpose();
}

ClosedLoopEigs closed_loop_eigs(const TiPlant& p, const Matrix& Ki, const Matrix& H) {
    const auto n = p.A().rows();
    const auto l = p.B().cols();
    if (Ki.rows() != l || Ki.cols() != l || H.rows() != l || H.cols() != n) {
        throw std::invalid_argument("closed_loop_eigs: Ki/H shapes disagree with plant");
    }
    ClosedLoopEigs out;
    out.hb_identity_ok = (H * p.B() - Matrix::Identity(l, l)).norm() <= 1e-8;

    // The loop in (x, v) coordinates is similar, via z = -Ki H x + Ki v, to
    // the block-triangular form below (exactly, for any invertible Ki). The
    // -Ki H B block carries the actual wiring: it collapses to -Ki only when
    // H B = I, which is what the eigenvalue-union claim rests on.
    Matrix full(n + l, n + l);
    full.topLeftCorner(n, n) = p.Acl();
    full.topRightCorner(n, l) = p.B();
    full.bottomLeftCorner(l, n).setZero();
    full.bottomRightCorner(l, l) = -Ki * H * p.B();
    out.eigenvalues = sorted_eigs(full);
    return out;
}

double multiset_distance(std::vector<std::complex<double>> a,
                         std::vector<std::complex<double>> b) {
    if (a.size() != b.size()) {
        return std::numeric_limits<double>::infinity();
    }
    auto lt = [](const std::complex<double>& x, const std::complex<double>& y) {
        if (x.real() != y.real()) {
            return x.real() < y.real();
        }
        return x.imag() < y.imag();
    };
    std::sort(a.begin(), a.end(), lt);
    std::sort(b.begin(), b.end(), lt);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

}  // namespace ltvi
