#include "matseg/series.hpp"

#include <cmath>
#include <string>

namespace matseg {

MatrixSeries::MatrixSeries(Index n, Index p, Index q, std::vector<double> values)
    : n_(n), p_(p), q_(q), values_(std::move(values)) {
    require(n_ >= 2, "matrix series needs at least 2 observations");
    require(p_ >= 1 && q_ >= 1, "matrix series needs p >= 1 and q >= 1");
    require(static_cast<Index>(values_.size()) == n_ * p_ * q_,
            "matrix series payload has " + std::to_string(values_.size()) + " values, expected " +
                std::to_string(n_ * p_ * q_));
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error::invalid_input("matrix series has a non-finite entry");
    }
}

MatrixSeries MatrixSeries::zeros(Index n, Index p, Index q) {
    return MatrixSeries(n, p, q, std::vector<double>(static_cast<std::size_t>(n * p * q), 0.0));
}

MatrixSeries MatrixSeries::from_matrices(std::span<const Matrix> observations) {
    require(!observations.empty(), "no observations");
    const Index p = observations.front().rows();
    const Index q = observations.front().cols();
    std::vector<double> values;
    values.reserve(observations.size() * static_cast<std::size_t>(p * q));
    for (const Matrix& y : observations) {
        require(y.rows() == p && y.cols() == q, "observations have inconsistent shapes");
        for (Index i = 0; i < p; ++i)
            for (Index j = 0; j < q; ++j) values.push_back(y(i, j));
    }
    return MatrixSeries(static_cast<Index>(observations.size()), p, q, std::move(values));
}

Matrix MatrixSeries::mean() const {
    const Eigen::RowVectorXd m = time_rows().colwise().mean();
    return ConstMatrixMap(m.data(), p_, q_);
}

MatrixSeries MatrixSeries::centered() const {
    MatrixSeries out = *this;
    const Eigen::RowVectorXd m = time_rows().colwise().mean();
    Eigen::Map<RowMatrix>(out.values_.data(), n_, p_ * q_).rowwise() -= m;
    return out;
}

MatrixSeries MatrixSeries::times(const Matrix& right) const {
    require(right.rows() == q_, "times: dimension mismatch");
    std::vector<double> values(static_cast<std::size_t>(n_ * p_ * right.cols()));
    Eigen::Map<RowMatrix>(values.data(), n_ * p_, right.cols()) = stacked() * right;
    return MatrixSeries(n_, p_, right.cols(), std::move(values));
}

MatrixSeries MatrixSeries::transposed() const {
    std::vector<double> values(values_.size());
    for (Index t = 0; t < n_; ++t) {
        Eigen::Map<RowMatrix>(values.data() + t * p_ * q_, q_, p_) = at(t).transpose();
    }
    return MatrixSeries(n_, q_, p_, std::move(values));
}

MatrixSeries MatrixSeries::select_columns(std::span<const Index> columns) const {
    const Index k = static_cast<Index>(columns.size());
    require(k >= 1, "select_columns: empty selection");
    std::vector<double> values(static_cast<std::size_t>(n_ * p_ * k));
    Eigen::Map<RowMatrix> out(values.data(), n_ * p_, k);
    const auto in = stacked();
    for (Index c = 0; c < k; ++c) {
        require(columns[static_cast<std::size_t>(c)] >= 0 && columns[static_cast<std::size_t>(c)] < q_,
                "select_columns: index out of range");
        out.col(c) = in.col(columns[static_cast<std::size_t>(c)]);
    }
    return MatrixSeries(n_, p_, k, std::move(values));
}

}  // namespace matseg
