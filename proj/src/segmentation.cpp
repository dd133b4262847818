#include "matseg/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "matseg/estimators.hpp"
#include "matseg/threshold_cv.hpp"

namespace matseg {

void SegmentationConfig::validate() const {
    require(k0 >= 1, "k0 must be >= 1");
    require(m >= 0, "m must be >= 0");
    require(c0 > 0.0 && c0 < 1.0, "c0 must lie in (0, 1)");
    require(eps > 0.0, "eps must be positive");
    if (ratio_shift) require(*ratio_shift >= 0.0 && std::isfinite(*ratio_shift), "ratio shift must be >= 0");
    if (const auto* fixed = std::get_if<FixedThreshold>(&threshold)) {
        require(fixed->u >= 0.0 && fixed->v >= 0.0, "thresholds must be non-negative");
    }
    if (const auto* cv = std::get_if<CrossValidatedThreshold>(&threshold)) {
        require(cv->splits >= 1, "cross-validation needs at least one split");
    }
}

Standardized standardize(const MatrixSeries& series, double u, double eps) {
    Matrix s0 = row_autocov(series, 0);
    for (Index c = 0; c < s0.cols(); ++c) {
        if (!(s0(c, c) > 0.0)) throw Error::degenerate_column(static_cast<std::size_t>(c));
    }
    if (u > 0.0) s0 = hard_threshold(s0, u, /*keep_diagonal=*/true);
    const SymMatrix root = inv_sqrt_psd(SymMatrix(s0), eps);
    return Standardized{series.times(root.matrix()), root.matrix()};
}

EigenDecomposition estimate_gamma(const MatrixSeries& standardized, Index k0, std::span<const double> u_per_lag) {
    return sym_eig(w_stat(standardized, k0, u_per_lag));
}

CrossCorrelator::CrossCorrelator(const MatrixSeries& standardized, const Matrix& gamma, Index m,
                                 std::span<const double> v_per_lag)
    : p_(standardized.rows()), q_(standardized.cols()), m_(m) {
    require(gamma.rows() == q_ && gamma.cols() == q_, "cross-correlation: gamma must be q x q");
    require(m_ >= 0 && m_ <= standardized.length() - 2, "cross-correlation: max lag outside [0, n-2]");
    require(v_per_lag.empty() || static_cast<Index>(v_per_lag.size()) == m_ + 1,
            "cross-correlation: need one threshold per lag 0..m");

    transformed_.reserve(static_cast<std::size_t>(m_ + 1));
    for (Index h = 0; h <= m_; ++h) {
        const Matrix cov = all_pair_autocov(standardized, h);
        const double v = v_per_lag.empty() ? 0.0 : v_per_lag[static_cast<std::size_t>(h)];
        Matrix out(p_ * q_, p_ * q_);
        for (Index k = 0; k < p_; ++k) {
            for (Index l = 0; l < p_; ++l) {
                Matrix block = cov.block(k * q_, l * q_, q_, q_);
                if (v > 0.0) block = hard_threshold(block, v, h == 0 && k == l);
                out.block(k * q_, l * q_, q_, q_).noalias() = gamma.transpose() * block * gamma;
            }
        }
        transformed_.push_back(std::move(out));
    }

    scale_.resize(p_, q_);
    for (Index k = 0; k < p_; ++k) {
        for (Index i = 0; i < q_; ++i) {
            const double var = transformed_[0](k * q_ + i, k * q_ + i);
            if (!(var > 0.0)) throw Error::degenerate_variance(static_cast<std::size_t>(i), static_cast<std::size_t>(k));
            scale_(k, i) = std::sqrt(var);
        }
    }
}

double CrossCorrelator::entry(Index i, Index j, Index h, Index k, Index l) const {
    return transformed_[static_cast<std::size_t>(h)](k * q_ + i, l * q_ + j) / (scale_(k, i) * scale_(l, j));
}

Matrix CrossCorrelator::cross_corr(Index i, Index j, Index h) const {
    require(i >= 0 && i < q_ && j >= 0 && j < q_, "cross_corr: column index out of range");
    require(h >= 0 && h <= m_, "cross_corr: lag outside [0, m]");
    Matrix out(p_, p_);
    for (Index k = 0; k < p_; ++k)
        for (Index l = 0; l < p_; ++l) out(k, l) = entry(i, j, h, k, l);
    return out;
}

double CrossCorrelator::max_cross_corr(Index i, Index j) const {
    require(i >= 0 && i < q_ && j >= 0 && j < q_, "max_cross_corr: column index out of range");
    // Lag -h for (i, j) is lag +h for (j, i) transposed, so both orders over
    // h = 0..m cover |h| <= m.
    double best = 0.0;
    for (Index h = 0; h <= m_; ++h) {
        for (Index k = 0; k < p_; ++k) {
            for (Index l = 0; l < p_; ++l) {
                best = std::max(best, std::abs(entry(i, j, h, k, l)));
                best = std::max(best, std::abs(entry(j, i, h, k, l)));
            }
        }
    }
    return best;
}

Matrix cross_corr(const MatrixSeries& standardized, const Matrix& gamma, Index i, Index j, Index h,
                  std::optional<double> v) {
    require(h >= 0, "cross_corr: negative lag; use the transposed pair");
    std::vector<double> thresholds;
    if (v) thresholds.assign(static_cast<std::size_t>(h + 1), *v);
    return CrossCorrelator(standardized, gamma, h, thresholds).cross_corr(i, j, h);
}

double max_cross_corr(const MatrixSeries& standardized, const Matrix& gamma, Index i, Index j, Index m,
                      std::span<const double> v_per_lag) {
    return CrossCorrelator(standardized, gamma, m, v_per_lag).max_cross_corr(i, j);
}

Index ratio_select(std::span<const double> scores, double c0, std::optional<double> shift) {
    const Index q0 = static_cast<Index>(scores.size());
    require(q0 >= 2, "ratio_select needs at least two scores");
    for (Index j = 0; j < q0; ++j) {
        require(std::isfinite(scores[static_cast<std::size_t>(j)]) && scores[static_cast<std::size_t>(j)] >= 0.0,
                "ratio_select: scores must be finite and non-negative");
        require(j == 0 || scores[static_cast<std::size_t>(j)] <= scores[static_cast<std::size_t>(j - 1)],
                "ratio_select: scores must be sorted in descending order");
    }

    Index last;  // largest admissible j (1-based)
    if (shift) {
        last = q0 - 1;
    } else {
        require(c0 > 0.0 && c0 < 1.0, "ratio_select: c0 must lie in (0, 1)");
        const double bound = c0 * static_cast<double>(q0);
        last = static_cast<Index>(std::ceil(bound)) - 1;  // j < bound
        last = std::clamp<Index>(last, 1, q0 - 1);
    }

    Index best = 1;
    double best_ratio = -1.0;
    for (Index j = 1; j <= last; ++j) {
        const double lead = scores[static_cast<std::size_t>(j - 1)];
        const double next = scores[static_cast<std::size_t>(j)];
        double ratio;
        if (shift) {
            const double s = *shift;
            ratio = (lead + s) / (next + s);
            if (lead + s == 0.0) ratio = 1.0;
        } else if (next == 0.0) {
            ratio = lead == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
        } else {
            ratio = lead / next;
        }
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best = j;
            if (std::isinf(ratio)) break;
        }
    }
    return best;
}

Partition group_columns(std::span<const std::pair<Index, Index>> edges, Index q) {
    require(q >= 1, "group_columns: q must be >= 1");
    std::vector<Index> parent(static_cast<std::size_t>(q));
    std::iota(parent.begin(), parent.end(), Index{0});
    auto find = [&parent](Index x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (const auto& [a, b] : edges) {
        require(a >= 0 && a < q && b >= 0 && b < q, "group_columns: edge index out of range");
        const Index ra = find(a);
        const Index rb = find(b);
        // Smaller index becomes the root, so roots are the smallest members.
        if (ra < rb) parent[static_cast<std::size_t>(rb)] = ra;
        else if (rb < ra) parent[static_cast<std::size_t>(ra)] = rb;
    }
    Partition groups;
    std::vector<Index> slot(static_cast<std::size_t>(q), -1);
    for (Index c = 0; c < q; ++c) {
        const Index root = find(c);
        if (slot[static_cast<std::size_t>(root)] < 0) {
            slot[static_cast<std::size_t>(root)] = static_cast<Index>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<std::size_t>(slot[static_cast<std::size_t>(root)])].push_back(c);
    }
    return groups;
}

double single_pair_cutoff(Index n, Index p, Index m) {
    const double tests = 2.0 * static_cast<double>(p * p) * static_cast<double>(2 * m + 1);
    return 1.5 * std::sqrt(2.0 * std::log(tests) / static_cast<double>(n));
}

LagThresholds resolve_thresholds(const MatrixSeries& raw, const SegmentationConfig& cfg) {
    cfg.validate();
    LagThresholds out;
    if (const auto* fixed = std::get_if<FixedThreshold>(&cfg.threshold)) {
        out.u.assign(static_cast<std::size_t>(cfg.k0 + 1), fixed->u);
        out.v.assign(static_cast<std::size_t>(cfg.m + 1), fixed->v);
    } else if (const auto* cv = std::get_if<CrossValidatedThreshold>(&cfg.threshold)) {
        CvPlan plan;
        plan.splits = cv->splits;
        plan.seed = cfg.seed;
        out.u.push_back(cv_threshold_autocov(raw, 0, plan));
        const MatrixSeries standardized = standardize(raw, out.u[0], cfg.eps).series;
        for (Index k = 1; k <= cfg.k0; ++k) out.u.push_back(cv_threshold_autocov(standardized, k, plan));
        for (Index h = 0; h <= cfg.m; ++h) out.v.push_back(cv_threshold_pair(standardized, h, plan));
    }
    return out;
}

SegmentationResult segment(const MatrixSeries& series, const SegmentationConfig& cfg) {
    cfg.validate();
    const Index n = series.length();
    const Index p = series.rows();
    const Index q = series.cols();
    require(cfg.k0 <= n - 2, "k0 exceeds n - 2");
    require(cfg.m <= n - 2, "m exceeds n - 2");

    std::vector<std::string> warnings;
    if (n <= q) warnings.push_back("n <= q: the sample row covariance is likely singular");

    if (q == 1) {
        Standardized st = standardize(series, 0.0, cfg.eps);
        MatrixSeries transformed = st.series;
        return SegmentationResult{SegmentationStatus::SingleColumn,
                                  Matrix::Identity(1, 1),
                                  Vector::Ones(1),
                                  std::move(st.standardizer),
                                  std::move(transformed),
                                  {},
                                  0,
                                  Partition{{0}},
                                  {Matrix::Identity(1, 1)},
                                  {},
                                  std::move(warnings)};
    }

    LagThresholds thresholds = resolve_thresholds(series, cfg);
    const double u0 = thresholds.u.empty() ? 0.0 : thresholds.u[0];
    Standardized st = standardize(series, u0, cfg.eps);

    const std::span<const double> u_lags =
        thresholds.u.empty() ? std::span<const double>{} : std::span<const double>(thresholds.u).subspan(1);
    EigenDecomposition eig = estimate_gamma(st.series, cfg.k0, u_lags);

    const CrossCorrelator correlator(st.series, eig.vectors, cfg.m, thresholds.v);
    std::vector<PairScore> scores;
    scores.reserve(static_cast<std::size_t>(q * (q - 1) / 2));
    for (Index i = 0; i < q; ++i)
        for (Index j = i + 1; j < q; ++j) scores.push_back({i, j, correlator.max_cross_corr(i, j)});
    std::stable_sort(scores.begin(), scores.end(),
                     [](const PairScore& a, const PairScore& b) { return a.score > b.score; });

    Index edges_selected;
    if (scores.size() == 1) {
        edges_selected = scores[0].score > single_pair_cutoff(n, p, cfg.m) ? 1 : 0;
    } else {
        std::vector<double> values;
        values.reserve(scores.size());
        for (const auto& s : scores) values.push_back(s.score);
        edges_selected = ratio_select(values, cfg.c0, cfg.ratio_shift);
    }

    std::vector<std::pair<Index, Index>> edges;
    for (Index e = 0; e < edges_selected; ++e) edges.emplace_back(scores[static_cast<std::size_t>(e)].i, scores[static_cast<std::size_t>(e)].j);
    Partition groups = group_columns(edges, q);

    std::vector<Matrix> a_hat;
    for (const auto& group : groups) {
        Matrix block(q, static_cast<Index>(group.size()));
        for (std::size_t c = 0; c < group.size(); ++c) block.col(static_cast<Index>(c)) = eig.vectors.col(group[c]);
        a_hat.push_back(std::move(block));
    }

    MatrixSeries transformed = st.series.times(eig.vectors);
    return SegmentationResult{SegmentationStatus::Ok,
                              std::move(eig.vectors),
                              std::move(eig.values),
                              std::move(st.standardizer),
                              std::move(transformed),
                              std::move(scores),
                              edges_selected,
                              std::move(groups),
                              std::move(a_hat),
                              std::move(thresholds),
                              std::move(warnings)};
}

}  // namespace matseg
