#pragma once

#include "gumdp/errors.hpp"

#include <Eigen/Dense>

#include <string>

namespace gumdp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Reciprocal-condition threshold below which a dense system is treated as singular.
inline constexpr double kSingularTolerance = 1e-10;

/// Dense LU with partial pivoting that refuses numerically singular systems.
class DenseSolver {
public:
    explicit DenseSolver(const Matrix& a, std::string what = "linear system")
        : lu_(a), what_(std::move(what)) {
        if (a.rows() != a.cols())
            throw NumericalError(what_ + ": matrix is not square");
        if (a.rows() > 0 && !(lu_.rcond() > kSingularTolerance))
            throw NumericalError(what_ + ": matrix is numerically singular (rcond " +
                                 std::to_string(lu_.rcond()) + ")");
    }

    template <typename Rhs>
    Matrix solve(const Eigen::MatrixBase<Rhs>& b) const {
        return lu_.solve(b);
    }

private:
    Eigen::PartialPivLU<Matrix> lu_;
    std::string what_;
};

/// Largest |row sum - 1| over the rows of a matrix.
inline double max_row_sum_error(const Matrix& m) {
    if (m.rows() == 0) return 0.0;
    return (m.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

}  // namespace gumdp
