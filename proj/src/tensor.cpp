#include "matseg/tensor.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace matseg {

namespace {

Index product(std::span<const Index> dims) {
    return std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
}

void check_dims(std::span<const Index> dims) {
    require(dims.size() >= 2, "tensor order must be >= 2");
    for (Index d : dims) require(d >= 1, "tensor dimensions must be >= 1");
}

// Visits every multi-index in storage order (first index fastest), calling
// fn(offset, row, column) for the mode-`mode` unfolding.
template <typename Fn>
void walk_unfolding(std::span<const Index> dims, Index mode, Fn&& fn) {
    const std::size_t r = dims.size();
    std::vector<Index> idx(r, 0);
    std::vector<Index> col_stride(r, 0);
    Index stride = 1;
    for (std::size_t k = 0; k < r; ++k) {
        if (static_cast<Index>(k) == mode) continue;
        col_stride[k] = stride;
        stride *= dims[k];
    }
    const Index total = product(dims);
    for (Index offset = 0; offset < total; ++offset) {
        Index col = 0;
        for (std::size_t k = 0; k < r; ++k) col += idx[k] * col_stride[k];
        fn(offset, idx[static_cast<std::size_t>(mode)], col);
        for (std::size_t k = 0; k < r; ++k) {
            if (++idx[k] < dims[k]) break;
            idx[k] = 0;
        }
    }
}

}  // namespace

TensorSeries::TensorSeries(Index n, std::vector<Index> dims, std::vector<double> values)
    : n_(n), dims_(std::move(dims)), values_(std::move(values)) {
    check_dims(dims_);
    require(n_ >= 2, "tensor series needs at least 2 observations");
    size_ = product(dims_);
    require(static_cast<Index>(values_.size()) == n_ * size_,
            "tensor series payload has " + std::to_string(values_.size()) + " values, expected " +
                std::to_string(n_ * size_));
    for (double v : values_) require(std::isfinite(v), "tensor series has a non-finite entry");
}

Tensor TensorSeries::at(Index t) const {
    const auto s = slice(t);
    return Tensor{dims_, std::vector<double>(s.begin(), s.end())};
}

Matrix matricize(std::span<const double> values, std::span<const Index> dims, Index mode) {
    check_dims(dims);
    require(mode >= 0 && mode < static_cast<Index>(dims.size()), "matricize: mode out of range");
    const Index total = product(dims);
    require(static_cast<Index>(values.size()) == total, "matricize: value count does not match dims");
    Matrix out(dims[static_cast<std::size_t>(mode)], total / dims[static_cast<std::size_t>(mode)]);
    walk_unfolding(dims, mode, [&](Index offset, Index row, Index col) {
        out(row, col) = values[static_cast<std::size_t>(offset)];
    });
    return out;
}

Tensor tensorize(const Matrix& unfolded, Index mode, std::span<const Index> dims) {
    check_dims(dims);
    require(mode >= 0 && mode < static_cast<Index>(dims.size()), "tensorize: mode out of range");
    const Index total = product(dims);
    require(unfolded.rows() == dims[static_cast<std::size_t>(mode)] &&
                unfolded.rows() * unfolded.cols() == total,
            "tensorize: matrix shape does not match dims");
    Tensor out{std::vector<Index>(dims.begin(), dims.end()), std::vector<double>(static_cast<std::size_t>(total))};
    walk_unfolding(dims, mode, [&](Index offset, Index row, Index col) {
        out.values[static_cast<std::size_t>(offset)] = unfolded(row, col);
    });
    return out;
}

MatrixSeries mode_series(const TensorSeries& series, Index mode) {
    require(mode >= 0 && mode < series.order(), "mode out of range");
    const Index n = series.length();
    const Index pm = series.dims()[static_cast<std::size_t>(mode)];
    const Index rest = series.tensor_size() / pm;
    std::vector<double> values(static_cast<std::size_t>(n * series.tensor_size()));
    for (Index t = 0; t < n; ++t) {
        Eigen::Map<RowMatrix>(values.data() + t * rest * pm, rest, pm) =
            matricize(series.slice(t), series.dims(), mode).transpose();
    }
    return MatrixSeries(n, rest, pm, std::move(values));
}

TensorSeries fold_mode_series(const MatrixSeries& series, Index mode, const std::vector<Index>& dims) {
    const Index n = series.length();
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n * series.rows() * series.cols()));
    for (Index t = 0; t < n; ++t) {
        const Tensor folded = tensorize(series.at(t).transpose(), mode, dims);
        values.insert(values.end(), folded.values.begin(), folded.values.end());
    }
    return TensorSeries(n, dims, std::move(values));
}

SequentialResult sequential_segment(const TensorSeries& series, const SegmentationConfig& cfg) {
    cfg.validate();
    std::vector<SegmentationResult> modes;
    TensorSeries current = series;
    for (Index mode = 0; mode < series.order(); ++mode) {
        const MatrixSeries unfolded = mode_series(current, mode);
        SegmentationResult result = segment(unfolded, cfg);
        if (result.status == SegmentationStatus::SingleColumn) {
            modes.push_back(std::move(result));
            continue;
        }
        current = fold_mode_series(result.transformed, mode, series.dims());
        modes.push_back(std::move(result));
    }
    return SequentialResult{std::move(modes), std::move(current)};
}

}  // namespace matseg
