#pragma once

#include <span>
#include <vector>

#include "matseg/linalg.hpp"

namespace matseg {

using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using MatrixMap = Eigen::Map<RowMatrix>;

/**
 * n observations of a p x q real matrix, stored contiguously in time order
 * with each observation row-major.
 *
 * The same buffer can be viewed three ways without copying:
 *  - `at(t)`: the p x q observation Y_t,
 *  - `time_rows()`: n x (p q), row t is Y_t flattened row by row,
 *  - `stacked()`: (n p) x q, the observations stacked vertically.
 *
 * Invariants: n >= 2, p >= 1, q >= 1, every entry finite.
 */
class MatrixSeries {
public:
    MatrixSeries(Index n, Index p, Index q, std::vector<double> values);
    static MatrixSeries zeros(Index n, Index p, Index q);
    static MatrixSeries from_matrices(std::span<const Matrix> observations);

    Index length() const noexcept { return n_; }
    Index rows() const noexcept { return p_; }
    Index cols() const noexcept { return q_; }

    ConstMatrixMap at(Index t) const { return ConstMatrixMap(values_.data() + t * p_ * q_, p_, q_); }
    MatrixMap at(Index t) { return MatrixMap(values_.data() + t * p_ * q_, p_, q_); }
    ConstMatrixMap time_rows() const { return ConstMatrixMap(values_.data(), n_, p_ * q_); }
    ConstMatrixMap stacked() const { return ConstMatrixMap(values_.data(), n_ * p_, q_); }

    const std::vector<double>& values() const noexcept { return values_; }

    /// Full-sample mean of the observations (p x q).
    Matrix mean() const;
    /// Y_t - mean for every t.
    MatrixSeries centered() const;
    /// Y_t * right for every t.
    MatrixSeries times(const Matrix& right) const;
    /// Y_t^T for every t.
    MatrixSeries transposed() const;
    /// Keeps the listed columns, in the given order.
    MatrixSeries select_columns(std::span<const Index> columns) const;

    friend bool operator==(const MatrixSeries&, const MatrixSeries&) = default;

private:
    Index n_;
    Index p_;
    Index q_;
    std::vector<double> values_;
};

}  // namespace matseg
