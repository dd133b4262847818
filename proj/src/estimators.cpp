#include "matseg/estimators.hpp"

#include <cmath>
#include <string>

namespace matseg {

namespace {

void check_lag(const MatrixSeries& series, Index lag, const char* what) {
    // Lag n-1 still leaves one product term.
    require(lag >= 0 && lag <= series.length() - 1,
            std::string(what) + ": lag " + std::to_string(lag) + " outside [0, n-1]");
}

void check_thresholds(std::span<const double> thresholds, std::size_t expected, const char* what) {
    if (thresholds.empty()) return;
    require(thresholds.size() == expected, std::string(what) + ": wrong number of per-lag thresholds");
    for (double u : thresholds) require(u >= 0.0, std::string(what) + ": negative threshold");
}

}  // namespace

Matrix row_autocov(const MatrixSeries& series, Index k) {
    check_lag(series, k, "row_autocov");
    const Index n = series.length();
    const Index p = series.rows();
    const MatrixSeries c = series.centered();
    const auto stacked = c.stacked();
    const Index overlap = (n - k) * p;
    Matrix out = stacked.bottomRows(overlap).transpose() * stacked.topRows(overlap);
    out /= static_cast<double>(n * p);
    return out;
}

Matrix pair_autocov(const MatrixSeries& series, Index i, Index j, Index h) {
    check_lag(series, h, "pair_autocov");
    require(i >= 0 && i < series.rows() && j >= 0 && j < series.rows(), "pair_autocov: row index out of range");
    const Index n = series.length();
    const Index q = series.cols();
    const MatrixSeries c = series.centered();
    const auto rows = c.time_rows();
    // Row i of Y_t occupies columns [i q, (i+1) q) of the time-row view.
    Matrix out = rows.block(h, i * q, n - h, q).transpose() * rows.block(0, j * q, n - h, q);
    out /= static_cast<double>(n);
    return out;
}

Matrix all_pair_autocov(const MatrixSeries& series, Index h) {
    check_lag(series, h, "all_pair_autocov");
    const Index n = series.length();
    const MatrixSeries c = series.centered();
    const auto rows = c.time_rows();
    Matrix out = rows.bottomRows(n - h).transpose() * rows.topRows(n - h);
    out /= static_cast<double>(n);
    return out;
}

Matrix hard_threshold(const Matrix& m, double u, bool keep_diagonal) {
    require(u >= 0.0, "hard_threshold: negative threshold");
    Matrix out = m;
    for (Index j = 0; j < out.cols(); ++j) {
        for (Index i = 0; i < out.rows(); ++i) {
            if (keep_diagonal && i == j) continue;
            if (std::abs(out(i, j)) < u) out(i, j) = 0.0;
        }
    }
    return out;
}

SymMatrix w_stat(const MatrixSeries& series, Index k0, std::span<const double> u_per_lag) {
    require(k0 >= 1 && k0 <= series.length() - 2, "w_stat: k0 outside [1, n-2]");
    check_thresholds(u_per_lag, static_cast<std::size_t>(k0), "w_stat");
    const Index q = series.cols();
    Matrix w = Matrix::Identity(q, q);
    for (Index k = 1; k <= k0; ++k) {
        Matrix s = row_autocov(series, k);
        if (!u_per_lag.empty()) s = hard_threshold(s, u_per_lag[static_cast<std::size_t>(k - 1)]);
        w.noalias() += s * s.transpose();
    }
    return SymMatrix(w);
}

SymMatrix w_stat_rowpair(const MatrixSeries& series, Index k0, std::span<const double> v_per_lag) {
    require(k0 >= 1 && k0 <= series.length() - 2, "w_stat_rowpair: k0 outside [1, n-2]");
    check_thresholds(v_per_lag, static_cast<std::size_t>(k0 + 1), "w_stat_rowpair");
    const Index p = series.rows();
    const Index q = series.cols();
    Matrix w = Matrix::Zero(q, q);
    for (Index k = 0; k <= k0; ++k) {
        const Matrix all = all_pair_autocov(series, k);
        // Blocks are visited in a fixed order so the sum is reproducible.
        for (Index i = 0; i < p; ++i) {
            for (Index j = 0; j < p; ++j) {
                Matrix s = all.block(i * q, j * q, q, q);
                if (!v_per_lag.empty()) s = hard_threshold(s, v_per_lag[static_cast<std::size_t>(k)]);
                w.noalias() += s * s.transpose();
            }
        }
    }
    w /= static_cast<double>(p * p);
    return SymMatrix(w);
}

}  // namespace matseg
