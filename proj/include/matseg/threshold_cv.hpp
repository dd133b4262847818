#pragma once

#include <cstdint>
#include <vector>

#include "matseg/series.hpp"

namespace matseg {

/**
 * Random-split cross-validation plan for the hard-threshold levels.
 *
 * Each split draws a uniformly random subset of size
 * n1 = floor(n (1 - 1/log n)) as the first part (kept in time order); the
 * other n2 = n - n1 observations form the second part. Split s is drawn from
 * its own generator seeded by (seed, s), so the splits do not depend on how
 * many lags are tuned or in which order.
 *
 * An empty `grid` means "use default_grid() on the full-sample estimate".
 */
struct CvPlan {
    int splits = 20;
    std::vector<double> grid;
    std::uint64_t seed = 0;
};

Index cv_first_part_size(Index n);

/// First-part indices (0-based, ascending) of every split.
std::vector<std::vector<Index>> cv_splits(Index n, const CvPlan& plan);

/// 32 candidates: 0, the empirical quantiles of |entries| at 30 levels evenly
/// spaced over [0.10, 0.99], and max |entry|. Ascending.
std::vector<double> default_grid(const Matrix& estimate);

struct CvSelection {
    double threshold = 0.0;
    std::vector<double> grid;
    std::vector<double> objective;  ///< R(grid[g]) for every candidate
};

/// Threshold for the lag-k row autocovariance, minimising
///   R_1(u) = mean_s || T_u(S_{s,1}(k)) - S_{s,2}(k) ||_F^2.
/// The split estimates use the split's own mean, 1/(n_i p) normalisation, and
/// contribute nothing for t + k beyond the sample.
CvSelection cv_select_autocov(const MatrixSeries& series, Index k, const CvPlan& plan);
double cv_threshold_autocov(const MatrixSeries& series, Index k, const CvPlan& plan);

/// Threshold for the lag-h row-pair covariances, minimising
///   R_2(v) = mean_s || T_v(O_{s,1}(h)) - O_{s,2}(h) ||_F^2,
/// where O_{s,i}(h) = (1/n_i) sum_t Y_t (x) Y_{t+h} over part i of split s.
/// The series is centred by its full-sample mean first. Throws ResourceLimit
/// when (p q)^2 exceeds 1e8 entries.
CvSelection cv_select_pair(const MatrixSeries& series, Index h, const CvPlan& plan);
double cv_threshold_pair(const MatrixSeries& series, Index h, const CvPlan& plan);

}  // namespace matseg
