#include "ltvi/ltv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace ltvi {

MatrixFunction::MatrixFunction(int rows, int cols, Evaluator eval, Evaluator deriv,
                               std::optional<double> declared_bound)
    : rows_(rows), cols_(cols), eval_(std::move(eval)), deriv_(std::move(deriv)),
      declared_bound_(declared_bound) {
    if (rows_ <= 0 || cols_ <= 0) {
        throw std::invalid_argument("MatrixFunction: shape must be positive");
    }
    if (!eval_) {
        throw std::invalid_argument("MatrixFunction: evaluator must be callable");
    }
    if (declared_bound_ && *declared_bound_ < 0.0) {
        throw std::invalid_argument("MatrixFunction: declared bound must be nonnegative");
    }
}

MatrixFunction MatrixFunction::constant(const Matrix& value) {
    Matrix zero = Matrix::Zero(value.rows(), value.cols());
    const auto sv = value.jacobiSvd().singularValues();
    const double bound = sv.size() > 0 ? sv(0) : 0.0;
    return MatrixFunction(
        static_cast<int>(value.rows()), static_cast<int>(value.cols()),
        [value](double) { return value; }, [zero](double) { return zero; }, bound);
}

MatrixFunction MatrixFunction::from_table(std::vector<double> times, std::vector<Matrix> values) {
    if (times.size() < 2 || times.size() != values.size()) {
        throw std::invalid_argument("MatrixFunction::from_table: need >= 2 samples, one matrix each");
    }
    if (!std::is_sorted(times.begin(), times.end())) {
        throw std::invalid_argument("MatrixFunction::from_table: times must be increasing");
    }
    const auto rows = static_cast<int>(values.front().rows());
    const auto cols = static_cast<int>(values.front().cols());
    for (const auto& v : values) {
        if (v.rows() != rows || v.cols() != cols) {
            throw std::invalid_argument("MatrixFunction::from_table: inconsistent sample shapes");
        }
    }

    auto locate = [times](double t) -> std::size_t {
        if (t < times.front() || t > times.back()) {
            throw std::domain_error("MatrixFunction table: t = " + std::to_string(t) +
                                    " outside sampled range [" + std::to_string(times.front()) +
                                    ", " + std::to_string(times.back()) + "]");
        }
        auto it = std::upper_bound(times.begin(), times.end(), t);
        std::size_t hi = std::min<std::size_t>(times.size() - 1, static_cast<std::size_t>(it - times.begin()));
        return std::max<std::size_t>(1, hi);
    };

    auto eval = [times, values, locate](double t) {
        const std::size_t hi = locate(t);
        const double t0 = times[hi - 1];
        const double t1 = times[hi];
        const double s = (t1 > t0) ? (t - t0) / (t1 - t0) : 0.0;
        return Matrix((1.0 - s) * values[hi - 1] + s * values[hi]);
    };
    auto deriv = [times, values, locate](double t) {
        const std::size_t hi = locate(t);
        const double dt = times[hi] - times[hi - 1];
        if (dt <= 0.0) {
            return Matrix(Matrix::Zero(values.front().rows(), values.front().cols()));
        }
        return Matrix((values[hi] - values[hi - 1]) / dt);
    };
    return MatrixFunction(rows, cols, eval, deriv);
}

Matrix MatrixFunction::operator()(double t) const {
    Matrix out = eval_(t);
    if (out.rows() != rows_ || out.cols() != cols_) {
        throw std::invalid_argument("MatrixFunction: evaluator returned " +
                                    std::to_string(out.rows()) + "x" + std::to_string(out.cols()) +
                                    ", expected " + std::to_string(rows_) + "x" +
                                    std::to_string(cols_));
    }
    return out;
}

Matrix MatrixFunction::derivative(double t) const {
    if (deriv_) {
        Matrix out = deriv_(t);
        if (out.rows() != rows_ || out.cols() != cols_) {
            throw std::invalid_argument("MatrixFunction: derivative evaluator shape mismatch");
        }
        return out;
    }
    const double h = 1e-5 * std::max(1.0, std::abs(t));
    return ((*this)(t + h) - (*this)(t - h)) / (2.0 * h);
}

LtvSystem::LtvSystem(MatrixFunction A, MatrixFunction B, MatrixFunction F, MatrixFunction C)
    : A_(std::move(A)), B_(std::move(B)), F_(std::move(F)), C_(std::move(C)) {
    dims_.n = A_.rows();
    dims_.l = B_.cols();
    dims_.m = C_.rows();
    dims_.p = F_.cols();
    if (A_.cols() != dims_.n) {
        throw std::invalid_argument("LtvSystem: A must be square");
    }
    if (B_.rows() != dims_.n || F_.rows() != dims_.n || C_.cols() != dims_.n) {
        throw std::invalid_argument("LtvSystem: B, F, C row/column counts must match state dimension");
    }
}

SystemSnapshot eval_system(const LtvSystem& sys, double t) {
    return SystemSnapshot{sys.A()(t), sys.B()(t), sys.F()(t), sys.C()(t)};
}

}  // namespace ltvi
