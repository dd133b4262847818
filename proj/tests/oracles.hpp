#pragma once

// Slow, loop-by-loop reference implementations used as test oracles. They
// share nothing with the library beyond the data containers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "matseg/series.hpp"
#include "matseg/segmentation.hpp"

namespace oracle {

using matseg::Index;
using matseg::Matrix;
using matseg::MatrixSeries;

inline MatrixSeries random_series(std::mt19937_64& rng, Index n, Index p, Index q) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> values(static_cast<std::size_t>(n * p * q));
    for (double& v : values) v = normal(rng);
    return MatrixSeries(n, p, q, std::move(values));
}

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
    return m;
}

inline double y(const MatrixSeries& s, Index t, Index r, Index c) { return s.values()[static_cast<std::size_t>((t * s.rows() + r) * s.cols() + c)]; }

inline double mean_entry(const MatrixSeries& s, Index r, Index c) {
    double sum = 0.0;
    for (Index t = 0; t < s.length(); ++t) sum += y(s, t, r, c);
    return sum / static_cast<double>(s.length());
}

/// (1/(n p)) sum_t sum_r (Y_{t+k} - Ybar)_{r a} (Y_t - Ybar)_{r b}
inline Matrix row_autocov(const MatrixSeries& s, Index k) {
    const Index n = s.length(), p = s.rows(), q = s.cols();
    Matrix out = Matrix::Zero(q, q);
    for (Index a = 0; a < q; ++a)
        for (Index b = 0; b < q; ++b) {
            double sum = 0.0;
            for (Index t = 0; t + k < n; ++t)
                for (Index r = 0; r < p; ++r)
                    sum += (y(s, t + k, r, a) - mean_entry(s, r, a)) * (y(s, t, r, b) - mean_entry(s, r, b));
            out(a, b) = sum / static_cast<double>(n * p);
        }
    return out;
}

/// (1/n) sum_t (y_{i:}^{t+h} - ybar_i)^T (y_{j:}^t - ybar_j)
inline Matrix pair_autocov(const MatrixSeries& s, Index i, Index j, Index h) {
    const Index n = s.length(), q = s.cols();
    Matrix out = Matrix::Zero(q, q);
    for (Index a = 0; a < q; ++a)
        for (Index b = 0; b < q; ++b) {
            double sum = 0.0;
            for (Index t = 0; t + h < n; ++t)
                sum += (y(s, t + h, i, a) - mean_entry(s, i, a)) * (y(s, t, j, b) - mean_entry(s, j, b));
            out(a, b) = sum / static_cast<double>(n);
        }
    return out;
}

inline Matrix threshold(const Matrix& m, double u) {
    Matrix out = m;
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            if (std::abs(m(i, j)) < u) out(i, j) = 0.0;
    return out;
}

inline Matrix gram(const Matrix& m) {
    Matrix out = Matrix::Zero(m.rows(), m.rows());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.rows(); ++j)
            for (Index c = 0; c < m.cols(); ++c) out(i, j) += m(i, c) * m(j, c);
    return out;
}

inline Matrix w_stat(const MatrixSeries& s, Index k0, const std::vector<double>& u) {
    Matrix out = Matrix::Identity(s.cols(), s.cols());
    for (Index k = 1; k <= k0; ++k) {
        Matrix sk = oracle::row_autocov(s, k);
        if (!u.empty()) sk = threshold(sk, u[static_cast<std::size_t>(k - 1)]);
        out += gram(sk);
    }
    return out;
}

inline Matrix w_stat_rowpair(const MatrixSeries& s, Index k0, const std::vector<double>& v) {
    const Index p = s.rows();
    Matrix out = Matrix::Zero(s.cols(), s.cols());
    for (Index k = 0; k <= k0; ++k)
        for (Index i = 0; i < p; ++i)
            for (Index j = 0; j < p; ++j) {
                Matrix sij = oracle::pair_autocov(s, i, j, k);
                if (!v.empty()) sij = threshold(sij, v[static_cast<std::size_t>(k)]);
                out += gram(sij);
            }
    return out / static_cast<double>(p * p);
}

/// Connected components by depth-first search, in the library's reporting
/// order (members ascending, groups by smallest member).
inline matseg::Partition components(const std::vector<std::pair<Index, Index>>& edges, Index q) {
    std::vector<std::vector<Index>> adj(static_cast<std::size_t>(q));
    for (auto [a, b] : edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    std::vector<bool> seen(static_cast<std::size_t>(q), false);
    matseg::Partition out;
    for (Index start = 0; start < q; ++start) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        std::vector<Index> group;
        std::vector<Index> stack{start};
        seen[static_cast<std::size_t>(start)] = true;
        while (!stack.empty()) {
            const Index v = stack.back();
            stack.pop_back();
            group.push_back(v);
            for (Index w : adj[static_cast<std::size_t>(v)]) {
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = true;
                    stack.push_back(w);
                }
            }
        }
        std::sort(group.begin(), group.end());
        out.push_back(std::move(group));
    }
    return out;
}

/// Direct argmax of the ratio rule: ratios evaluated one by one, first
/// maximum kept, 1-based count returned.
inline Index ratio_select(const std::vector<double>& l, double c0, bool shifted, double s) {
    const std::size_t q0 = l.size();
    std::size_t best = 1;
    double best_ratio = -1.0;
    for (std::size_t j = 1; j < q0; ++j) {
        if (!shifted && !(static_cast<double>(j) < c0 * static_cast<double>(q0)) && j > 1) break;
        double r;
        if (shifted) {
            r = (l[j - 1] + s) / (l[j] + s);
        } else if (l[j] == 0.0) {
            r = l[j - 1] == 0.0 ? 1.0 : INFINITY;
        } else {
            r = l[j - 1] / l[j];
        }
        if (r > best_ratio) {
            best_ratio = r;
            best = j;
        }
        if (std::isinf(r)) break;
    }
    return static_cast<Index>(best);
}

/// Mode-m unfolding from the explicit index formula: the column of element
/// (i_1..i_r) is sum_{k != m} i_k prod_{l < k, l != m} p_l.
inline Matrix matricize(const std::vector<double>& values, const std::vector<Index>& dims, Index mode) {
    const std::size_t r = dims.size();
    Index total = 1;
    for (Index d : dims) total *= d;
    Matrix out(dims[static_cast<std::size_t>(mode)], total / dims[static_cast<std::size_t>(mode)]);
    for (Index offset = 0; offset < total; ++offset) {
        std::vector<Index> idx(r);
        Index rest = offset;
        for (std::size_t k = 0; k < r; ++k) {
            idx[k] = rest % dims[k];
            rest /= dims[k];
        }
        Index col = 0, stride = 1;
        for (std::size_t k = 0; k < r; ++k) {
            if (static_cast<Index>(k) == mode) continue;
            col += idx[k] * stride;
            stride *= dims[k];
        }
        out(idx[static_cast<std::size_t>(mode)], col) = values[static_cast<std::size_t>(offset)];
    }
    return out;
}

/// Plain Pearson-style lag-h correlation of two univariate series with
/// full-sample means and 1/n normalisation: corr(a_{t+h}, b_t).
inline double lag_corr(const std::vector<double>& a, const std::vector<double>& b, Index h) {
    const auto n = static_cast<Index>(a.size());
    double ma = 0, mb = 0;
    for (Index t = 0; t < n; ++t) {
        ma += a[static_cast<std::size_t>(t)];
        mb += b[static_cast<std::size_t>(t)];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double cross = 0, va = 0, vb = 0;
    for (Index t = 0; t < n; ++t) {
        va += (a[static_cast<std::size_t>(t)] - ma) * (a[static_cast<std::size_t>(t)] - ma);
        vb += (b[static_cast<std::size_t>(t)] - mb) * (b[static_cast<std::size_t>(t)] - mb);
        if (t + h < n) cross += (a[static_cast<std::size_t>(t + h)] - ma) * (b[static_cast<std::size_t>(t)] - mb);
    }
    return cross / std::sqrt(va * vb);
}

/// ||A - B||_inf
inline double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace oracle
