#pragma once

#include <span>

#include "matseg/series.hpp"

namespace matseg {

/// Row autocovariance at lag k (q x q):
///   (1/(n p)) sum_{t=1}^{n-k} (Y_{t+k} - Ybar)^T (Y_t - Ybar),
/// with Ybar the mean over all n observations. Requires 0 <= k <= n-1.
Matrix row_autocov(const MatrixSeries& series, Index k);

/// Lag-h covariance between row i (at t+h) and row j (at t), q x q:
///   (1/n) sum_{t=1}^{n-h} (y_{i:}^{t+h} - ybar_{i:})^T (y_{j:}^t - ybar_{j:}).
/// Indices are 0-based.
Matrix pair_autocov(const MatrixSeries& series, Index i, Index j, Index h);

/// Every row-pair covariance at lag h in one (p q) x (p q) matrix; the q x q
/// block at (i q, j q) equals pair_autocov(series, i, j, h).
Matrix all_pair_autocov(const MatrixSeries& series, Index h);

/// Entrywise hard threshold: m_ij -> 0 when |m_ij| < u. With keep_diagonal
/// the diagonal is left untouched.
Matrix hard_threshold(const Matrix& m, double u, bool keep_diagonal = false);

/// I_q + sum_{k=1}^{k0} T_{u_k}(S(k)) T_{u_k}(S(k))^T with S = row_autocov.
/// `u_per_lag` is either empty (no thresholding) or holds u_1..u_{k0}.
SymMatrix w_stat(const MatrixSeries& series, Index k0, std::span<const double> u_per_lag = {});

/// (1/p^2) sum_{k=0}^{k0} sum_{i,j} T_{v_k}(S_ij(k)) T_{v_k}(S_ij(k))^T with
/// S_ij = pair_autocov. `v_per_lag` is empty or holds v_0..v_{k0}.
SymMatrix w_stat_rowpair(const MatrixSeries& series, Index k0, std::span<const double> v_per_lag = {});

}  // namespace matseg
