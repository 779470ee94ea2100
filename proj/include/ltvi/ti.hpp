#pragma once

// Time-invariant specialization: constant H from the dc-gain pseudo-inverse,
// and the closed-loop eigenvalue split eig(A - BK) U eig(-Ki) that follows
// when H B = I.

#include <complex>
#include <vector>

#include "ltvi/types.hpp"

namespace ltvi {

class TiPlant {
public:
    /// Throws std::invalid_argument unless A - BK is Hurwitz.
    TiPlant(Matrix A, Matrix B, Matrix C, Matrix K);

    [[nodiscard]] const Matrix& A() const { return A_; }
    [[nodiscard]] const Matrix& B() const { return B_; }
    [[nodiscard]] const Matrix& C() const { return C_; }
    [[nodiscard]] const Matrix& K() const { return K_; }
    [[nodiscard]] const Matrix& Acl() const { return Acl_; }

private:
    Matrix A_, B_, C_, K_, Acl_;
};

/// Minimum-norm left inverse of the dc-gain C (A - BK)^{-1} B, so that
/// M C (A - BK)^{-1} B = I. Rank threshold 1e-10 x largest singular value;
/// rank deficiency throws ("transmission zero at origin / singular dc-gain").
Matrix compute_M_ti(const TiPlant& p);

/// H = M C (A - BK)^{-1}; with M from compute_M_ti this gives H B = I.
Matrix compute_H_ti(const TiPlant& p, const Matrix& M);

struct ClosedLoopEigs {
    std::vector<std::complex<double>> eigenvalues;  // sorted by (re, im)
    bool hb_identity_ok = false;                    // ||H B - I|| <= 1e-8
};

/// Eigenvalues of the closed loop in (x, v) coordinates:
///   x' = (A - BK - B Ki H) x + B Ki v
///   v' = H (A - BK) x
/// When H B = I this spectrum equals eig(A - BK) U eig(-Ki) as multisets;
/// otherwise hb_identity_ok is false and no split is claimed.
ClosedLoopEigs closed_loop_eigs(const TiPlant& p, const Matrix& Ki, const Matrix& H);

/// Max pairwise distance after sorting both spectra by (re, im).
double multiset_distance(std::vector<std::complex<double>> a,
                         std::vector<std::complex<double>> b);

}  // namespace ltvi
