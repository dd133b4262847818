#pragma once

#include <span>
#include <vector>

#include "matseg/segmentation.hpp"

namespace matseg {

/// A single order-r tensor, stored with the first index varying fastest.
struct Tensor {
    std::vector<Index> dims;
    std::vector<double> values;

    Index order() const noexcept { return static_cast<Index>(dims.size()); }
    friend bool operator==(const Tensor&, const Tensor&) = default;
};

/// n tensors of a common shape (order r >= 2), each stored first-index-fastest.
class TensorSeries {
public:
    TensorSeries(Index n, std::vector<Index> dims, std::vector<double> values);

    Index length() const noexcept { return n_; }
    const std::vector<Index>& dims() const noexcept { return dims_; }
    Index order() const noexcept { return static_cast<Index>(dims_.size()); }
    Index tensor_size() const noexcept { return size_; }
    const std::vector<double>& values() const noexcept { return values_; }

    Tensor at(Index t) const;
    std::span<const double> slice(Index t) const {
        return std::span<const double>(values_).subspan(static_cast<std::size_t>(t * size_), static_cast<std::size_t>(size_));
    }

    friend bool operator==(const TensorSeries&, const TensorSeries&) = default;

private:
    Index n_;
    std::vector<Index> dims_;
    Index size_;
    std::vector<double> values_;
};

/**
 * Mode-`mode` unfolding (0-based mode): p_mode x prod_{i != mode} p_i, whose
 * columns are the mode fibres. Columns are ordered by the remaining indices
 * with the lowest-numbered mode varying fastest.
 */
Matrix matricize(std::span<const double> values, std::span<const Index> dims, Index mode);
inline Matrix matricize(const Tensor& t, Index mode) { return matricize(t.values, t.dims, mode); }

/// Inverse of matricize.
Tensor tensorize(const Matrix& unfolded, Index mode, std::span<const Index> dims);

struct SequentialResult {
    std::vector<SegmentationResult> modes;  ///< one per mode, in order 1..r
    TensorSeries transformed;
};

/**
 * One sweep over the modes. For mode m every tensor is unfolded, transposed
 * so mode m indexes the columns (a prod_{i != m} p_i x p_m matrix), the
 * resulting matrix series is segmented, and the transformed observations are
 * folded back into tensors that feed mode m + 1. Modes of size 1 are passed
 * through unchanged with a SingleColumn result.
 */
SequentialResult sequential_segment(const TensorSeries& series, const SegmentationConfig& cfg);

/// The matrix series mode `mode` of a tensor series contributes to the sweep.
MatrixSeries mode_series(const TensorSeries& series, Index mode);

/// Folds a mode series (see mode_series) back into tensors of shape `dims`.
TensorSeries fold_mode_series(const MatrixSeries& series, Index mode, const std::vector<Index>& dims);

}  // namespace matseg
