#include "matseg/threshold_cv.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "matseg/estimators.hpp"

namespace matseg {

namespace {

constexpr double kMaxOmegaEntries = 1e8;

void check_plan(const CvPlan& plan) {
    require(plan.splits >= 1, "cross-validation needs at least one split");
    for (std::size_t g = 0; g < plan.grid.size(); ++g) {
        require(plan.grid[g] >= 0.0 && std::isfinite(plan.grid[g]), "threshold grid must be finite and non-negative");
        require(g == 0 || plan.grid[g] > plan.grid[g - 1], "threshold grid must be strictly ascending");
    }
}

std::vector<Index> complement(Index n, const std::vector<Index>& first) {
    std::vector<Index> rest;
    rest.reserve(static_cast<std::size_t>(n) - first.size());
    std::size_t f = 0;
    for (Index t = 0; t < n; ++t) {
        if (f < first.size() && first[f] == t) {
            ++f;
        } else {
            rest.push_back(t);
        }
    }
    return rest;
}

double threshold_distance(const Matrix& first, const Matrix& second, double u) {
    double sum = 0.0;
    for (Index j = 0; j < first.cols(); ++j) {
        for (Index i = 0; i < first.rows(); ++i) {
            const double a = std::abs(first(i, j)) < u ? 0.0 : first(i, j);
            const double d = a - second(i, j);
            sum += d * d;
        }
    }
    return sum;
}

CvSelection pick(std::vector<double> grid, std::vector<double> objective) {
    CvSelection out;
    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g) {
        if (objective[g] < objective[best]) best = g;
    }
    out.threshold = grid[best];
    out.grid = std::move(grid);
    out.objective = std::move(objective);
    return out;
}

/// (1/(size p)) sum_{t in part, t+k<n} (Y_{t+k} - m)^T (Y_t - m) with m the part mean.
Matrix part_autocov(const MatrixSeries& series, const std::vector<Index>& part, Index k) {
    const Index n = series.length();
    const Index q = series.cols();
    Matrix mean = Matrix::Zero(series.rows(), q);
    for (Index t : part) mean += series.at(t);
    mean /= static_cast<double>(part.size());
    Matrix out = Matrix::Zero(q, q);
    for (Index t : part) {
        if (t + k >= n) continue;
        out.noalias() += (series.at(t + k) - mean).transpose() * (series.at(t) - mean);
    }
    out /= static_cast<double>(static_cast<Index>(part.size()) * series.rows());
    return out;
}

}  // namespace

Index cv_first_part_size(Index n) {
    require(n >= 8, "cross-validation needs n >= 8");
    const double nd = static_cast<double>(n);
    return static_cast<Index>(std::floor(nd * (1.0 - 1.0 / std::log(nd))));
}

std::vector<std::vector<Index>> cv_splits(Index n, const CvPlan& plan) {
    check_plan(plan);
    const Index n1 = cv_first_part_size(n);
    require(n1 >= 2 && n - n1 >= 2, "series too short to split for cross-validation");
    std::vector<std::vector<Index>> splits;
    splits.reserve(static_cast<std::size_t>(plan.splits));
    for (int s = 0; s < plan.splits; ++s) {
        std::seed_seq seq{static_cast<std::uint32_t>(plan.seed), static_cast<std::uint32_t>(plan.seed >> 32),
                          static_cast<std::uint32_t>(s), 0x63765350u};
        std::mt19937_64 rng(seq);
        std::vector<Index> idx(static_cast<std::size_t>(n));
        for (Index t = 0; t < n; ++t) idx[static_cast<std::size_t>(t)] = t;
        // Partial Fisher-Yates: the first n1 slots become a uniform subset.
        for (Index i = 0; i < n1; ++i) {
            std::uniform_int_distribution<Index> pick_index(i, n - 1);
            std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick_index(rng))]);
        }
        idx.resize(static_cast<std::size_t>(n1));
        std::sort(idx.begin(), idx.end());
        splits.push_back(std::move(idx));
    }
    return splits;
}

std::vector<double> default_grid(const Matrix& estimate) {
    std::vector<double> mags(estimate.data(), estimate.data() + estimate.size());
    for (double& m : mags) m = std::abs(m);
    std::sort(mags.begin(), mags.end());
    std::vector<double> grid{0.0};
    if (mags.empty()) return grid;
    constexpr int kLevels = 30;
    for (int l = 0; l < kLevels; ++l) {
        const double level = 0.10 + (0.99 - 0.10) * l / (kLevels - 1);
        // Linear interpolation between order statistics.
        const double pos = level * static_cast<double>(mags.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, mags.size() - 1);
        grid.push_back(mags[lo] + (pos - static_cast<double>(lo)) * (mags[hi] - mags[lo]));
    }
    grid.push_back(mags.back());
    return grid;
}

CvSelection cv_select_autocov(const MatrixSeries& series, Index k, const CvPlan& plan) {
    check_plan(plan);
    const Index n = series.length();
    require(n >= 8, "cross-validation needs n >= 8");
    require(k >= 0 && k <= n - 2, "cv_threshold_autocov: lag outside [0, n-2]");

    std::vector<double> grid = plan.grid.empty() ? default_grid(row_autocov(series, k)) : plan.grid;
    std::vector<double> objective(grid.size(), 0.0);
    for (const auto& first : cv_splits(n, plan)) {
        const std::vector<Index> second = complement(n, first);
        const Matrix a = part_autocov(series, first, k);
        const Matrix b = part_autocov(series, second, k);
        for (std::size_t g = 0; g < grid.size(); ++g) objective[g] += threshold_distance(a, b, grid[g]);
    }
    for (double& r : objective) r /= static_cast<double>(plan.splits);
    return pick(std::move(grid), std::move(objective));
}

double cv_threshold_autocov(const MatrixSeries& series, Index k, const CvPlan& plan) {
    return cv_select_autocov(series, k, plan).threshold;
}

CvSelection cv_select_pair(const MatrixSeries& series, Index h, const CvPlan& plan) {
    check_plan(plan);
    const Index n = series.length();
    require(n >= 8, "cross-validation needs n >= 8");
    require(h >= 0 && h <= n - 2, "cv_threshold_pair: lag outside [0, n-2]");
    const Index d = series.rows() * series.cols();
    if (static_cast<double>(d) * static_cast<double>(d) > kMaxOmegaEntries) {
        throw Error(ErrorKind::ResourceLimit,
                    "pair-threshold cross-validation needs a " + std::to_string(d) + " x " + std::to_string(d) +
                        " matrix; limit is 1e8 entries");
    }

    // Rows are vec(Y_t); v_t v_{t+h}^T holds the same products as the
    // Kronecker product Y_t (x) Y_{t+h}, only arranged differently, and both
    // the threshold and the Frobenius norm ignore the arrangement.
    const MatrixSeries c = series.centered();
    const auto rows = c.time_rows();
    const Matrix full = rows.topRows(n - h).transpose() * rows.bottomRows(n - h);

    std::vector<double> grid = plan.grid.empty() ? default_grid(full / static_cast<double>(n)) : plan.grid;
    std::vector<double> objective(grid.size(), 0.0);

    const Index n1 = cv_first_part_size(n);
    const Index n2 = n - n1;
    for (const auto& first : cv_splits(n, plan)) {
        const std::vector<Index> second = complement(n, first);
        Matrix lead(static_cast<Index>(second.size()), d);
        Matrix lagged(static_cast<Index>(second.size()), d);
        Index used = 0;
        for (Index t : second) {
            if (t + h >= n) continue;
            lead.row(used) = rows.row(t);
            lagged.row(used) = rows.row(t + h);
            ++used;
        }
        const Matrix second_sum = lead.topRows(used).transpose() * lagged.topRows(used);
        const Matrix b = second_sum / static_cast<double>(n2);
        const Matrix a = (full - second_sum) / static_cast<double>(n1);
        for (std::size_t g = 0; g < grid.size(); ++g) objective[g] += threshold_distance(a, b, grid[g]);
    }
    for (double& r : objective) r /= static_cast<double>(plan.splits);
    return pick(std::move(grid), std::move(objective));
}

double cv_threshold_pair(const MatrixSeries& series, Index h, const CvPlan& plan) {
    return cv_select_pair(series, h, plan).threshold;
}

}  // namespace matseg
