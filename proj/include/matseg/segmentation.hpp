#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "matseg/series.hpp"

namespace matseg {

struct NoThreshold {
    friend bool operator==(const NoThreshold&, const NoThreshold&) = default;
};
/// u thresholds the row autocovariances (all lags), v the row-pair covariances.
struct FixedThreshold {
    double u = 0.0;
    double v = 0.0;
    friend bool operator==(const FixedThreshold&, const FixedThreshold&) = default;
};
/// Per-lag thresholds chosen by random-split cross-validation.
struct CrossValidatedThreshold {
    int splits = 20;
    friend bool operator==(const CrossValidatedThreshold&, const CrossValidatedThreshold&) = default;
};
using ThresholdMode = std::variant<NoThreshold, FixedThreshold, CrossValidatedThreshold>;

struct SegmentationConfig {
    Index k0 = 2;                       ///< lags in the W statistic
    Index m = 10;                       ///< max |lag| in the cross-correlation score
    double c0 = 0.75;                   ///< ratio search covers j < c0 * q0
    std::optional<double> ratio_shift;  ///< (L_j + s) / (L_{j+1} + s) over all j when set
    ThresholdMode threshold = NoThreshold{};
    double eps = 1e-10;                 ///< relative eigenvalue floor of the standardiser
    std::uint64_t seed = 0;             ///< cross-validation splits

    void validate() const;
    friend bool operator==(const SegmentationConfig&, const SegmentationConfig&) = default;
};

/// Resolved per-lag thresholds. Empty vectors mean "no thresholding".
struct LagThresholds {
    std::vector<double> u;  ///< u_0 .. u_{k0}
    std::vector<double> v;  ///< v_0 .. v_m
    friend bool operator==(const LagThresholds&, const LagThresholds&) = default;
};

struct PairScore {
    Index i;  ///< 0-based, i < j
    Index j;
    double score;
    friend bool operator==(const PairScore&, const PairScore&) = default;
};

using Partition = std::vector<std::vector<Index>>;

enum class SegmentationStatus { Ok, SingleColumn };

struct SegmentationResult {
    SegmentationStatus status = SegmentationStatus::Ok;
    Matrix gamma;         ///< q x q orthogonal, eigenvectors of the W statistic
    Vector eigenvalues;   ///< descending, aligned with gamma's columns
    Matrix standardizer;  ///< q x q, S_0^{-1/2}
    MatrixSeries transformed;       ///< Y_t S_0^{-1/2} gamma
    std::vector<PairScore> scores;  ///< every pair once, descending by score
    Index selected_edges = 0;       ///< top-d pairs are edges
    Partition groups;               ///< connected components, 0-based, sorted
    std::vector<Matrix> a_hat;      ///< gamma's columns per group
    LagThresholds thresholds;
    std::vector<std::string> warnings;
};

struct Standardized {
    MatrixSeries series;
    Matrix standardizer;
};

/// Y_t -> Y_t S_0^{-1/2}, S_0 = T_u(row_autocov(series, 0)) with its diagonal
/// kept. `u` = 0 disables thresholding.
Standardized standardize(const MatrixSeries& series, double u = 0.0, double eps = 1e-10);

/// Eigen-decomposition of w_stat on an already standardised series.
/// `u_per_lag` is empty or holds u_1..u_{k0}.
EigenDecomposition estimate_gamma(const MatrixSeries& standardized, Index k0, std::span<const double> u_per_lag = {});

/**
 * Lag-h cross-correlations between transformed columns.
 *
 * With v = gamma's columns, entry (k, l) of cross_corr(i, j, h) is
 *   v_i^T T(S_kl(h)) v_j / (d_{i,k} d_{j,l}),  d_{i,k}^2 = v_i^T T(S_kk(0)) v_i,
 * where S_kl is the row-pair covariance of the standardised series and T the
 * lag's threshold. Lag-0 diagonal blocks keep their diagonal under T.
 *
 * All lags 0..m are precomputed once, so scoring every pair costs one sweep.
 */
class CrossCorrelator {
public:
    /// `v_per_lag` is empty or holds v_0..v_m.
    CrossCorrelator(const MatrixSeries& standardized, const Matrix& gamma, Index m,
                    std::span<const double> v_per_lag = {});

    Index max_lag() const noexcept { return m_; }

    /// p x p matrix of correlations between column i at t+h and column j at t.
    Matrix cross_corr(Index i, Index j, Index h) const;

    /// max over |h| <= m of the largest |entry|; symmetric in (i, j).
    double max_cross_corr(Index i, Index j) const;

private:
    double entry(Index i, Index j, Index h, Index k, Index l) const;

    Index p_;
    Index q_;
    Index m_;
    // transformed_[h] is (p q) x (p q): block (k, l) = gamma^T T(S_kl(h)) gamma.
    std::vector<Matrix> transformed_;
    Matrix scale_;  // p x q, scale_(k, i) = d_{i,k}
};

/// Convenience wrapper: cross-correlation of a single pair at one lag.
Matrix cross_corr(const MatrixSeries& standardized, const Matrix& gamma, Index i, Index j, Index h,
                  std::optional<double> v = std::nullopt);

/// Convenience wrapper for one pair's score; bit-identical to the value inside segment().
double max_cross_corr(const MatrixSeries& standardized, const Matrix& gamma, Index i, Index j, Index m,
                      std::span<const double> v_per_lag = {});

/**
 * Number of edges from a descending score list.
 *
 * Without a shift: argmax over 1 <= j < c0 q0 of L_j / L_{j+1}; a zero
 * L_{j+1} makes the ratio infinite at the first such j. With shift s:
 * argmax over 1 <= j < q0 of (L_j + s) / (L_{j+1} + s). Ties go to the
 * smallest j. The searched range always contains j = 1. Returns a 1-based count.
 */
Index ratio_select(std::span<const double> scores, double c0, std::optional<double> shift = std::nullopt);

/// Connected components of ({0..q-1}, edges); members ascending, groups
/// ordered by smallest member.
Partition group_columns(std::span<const std::pair<Index, Index>> edges, Index q);

/// Score above which a lone pair (q = 2) is treated as connected:
/// 1.5 sqrt(2 log(2 p^2 (2m+1)) / n), a margin over the largest of the
/// p^2 (2m+1) correlations expected under independent white noise.
double single_pair_cutoff(Index n, Index p, Index m);

/// Thresholds the configured mode implies for this (raw) series. Under
/// cross-validation u_0 is tuned on the raw series and every other level on
/// the series standardised with u_0.
LagThresholds resolve_thresholds(const MatrixSeries& raw, const SegmentationConfig& cfg);

/// Standardise, estimate gamma, score all pairs, select edges, group.
SegmentationResult segment(const MatrixSeries& series, const SegmentationConfig& cfg);

}  // namespace matseg
