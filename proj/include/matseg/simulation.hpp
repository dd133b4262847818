#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "matseg/segmentation.hpp"

namespace matseg {

using Rng = std::mt19937_64;

/// Generator seeded from a list of 64-bit keys, e.g. {seed, n, rep}.
Rng make_rng(std::initializer_list<std::uint64_t> keys);

struct VarmaCoefficients {
    Matrix phi;    ///< AR matrix, rescaled to operator norm 0.9
    Matrix theta;  ///< MA matrix, entries U(-1, 1)
};

/// Phi with U(-3, 3) entries rescaled to 0.9 Phi / ||Phi||_2; Theta U(-1, 1).
VarmaCoefficients draw_varma_coefficients(Index dim, Rng& rng);

/// eta_t = Phi eta_{t-1} + eps_t - Theta eps_{t-1} with standard normal
/// eps, started from standard normal eta_0 and eps_0; the first `burn_in`
/// steps are dropped. Row t of the result is eta_t.
Matrix simulate_varma(const VarmaCoefficients& coefficients, Index n_total, Rng& rng, Index burn_in = 200);

/// draw_varma_coefficients followed by simulate_varma.
Matrix gen_factor_varma(Index dim, Index n_total, Rng& rng);

struct GroundTruth {
    Matrix a_true;       ///< q x q mixing matrix, Y_t = X_t A^T
    Partition partition;  ///< column groups of X_t, 0-based

    Index group_count() const noexcept { return static_cast<Index>(partition.size()); }
    std::vector<Index> sizes() const;
};

struct SimulatedData {
    MatrixSeries series;  ///< Y_t
    MatrixSeries latent;  ///< X_t
    GroundTruth truth;
};

/// X_t whose consecutive column groups of the given sizes come from
/// independent p-dimensional factor processes: a group of size l built from
/// path eta has columns eta_t, eta_{t+1}, ..., eta_{t+l-1}.
MatrixSeries gen_block_latent(Index p, std::span<const Index> sizes, Index n, Rng& rng);

/// Y_t = X_t A^T with the given latent series.
SimulatedData mix_latent(MatrixSeries latent, Matrix a, std::span<const Index> sizes);

/**
 * The three simulation designs.
 *  1: p = 3,  q = 6,  groups 3/2/1,   A with U(-3, 3) entries.
 *  2: p = 6,  q = 6,  groups 3/2/1,   A with U(-3, 3) entries.
 *  3: p = 10, q = 10, groups 4/3/2/1, A = diag(B_1..B_5), B_i the 2 x 2
 *     rotation by theta_i pi with theta = (pi/5, pi/6, pi/7, pi/8, pi/9).
 */
SimulatedData gen_example(int example, Index n, Rng& rng);

enum class Outcome { Correct, NearComplete, Incorrect };

/// Correct: same group count and same multiset of group sizes.
/// NearComplete: exactly one group fewer than the truth. Otherwise Incorrect.
Outcome classify_partition(const Partition& estimated, const GroundTruth& truth);
Outcome classify_segmentation(const SegmentationResult& result, const GroundTruth& truth);

/// For each true group j, the index of the estimated block paired with it:
/// among unused blocks of the same size, the one closest to the true block
/// of standardizer * A. Throws InvalidState if the sizes do not match.
std::vector<std::size_t> pair_blocks(std::span<const Matrix> a_hat, const GroundTruth& truth,
                                     const Matrix& standardizer);

/// Mean over true groups of D(M(A_hat_j), M((standardizer * A)_j)).
double mean_subspace_error(std::span<const Matrix> a_hat, const GroundTruth& truth, const Matrix& standardizer);

struct ExperimentRow {
    int example = 0;
    Index n = 0;
    Index reps = 0;
    Index correct = 0;
    Index incorrect = 0;      ///< includes near-complete runs and failures
    Index near_complete = 0;  ///< subset of incorrect
    Index failures = 0;       ///< runs that threw; subset of incorrect
    std::vector<double> d_bar;  ///< one per correct run, in replication order

    double proportion(Index count) const { return static_cast<double>(count) / static_cast<double>(reps); }
    std::optional<double> d_bar_quantile(double level) const;
    std::optional<double> d_bar_mean() const;

    friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

struct ExperimentReport {
    std::uint64_t seed = 0;
    std::vector<ExperimentRow> rows;
    friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

/// Outcome of one replication.
struct Replication {
    Outcome outcome = Outcome::Incorrect;
    bool failed = false;
    std::optional<double> d_bar;
};

/// Generate -> segment -> classify -> error for replication `rep`.
Replication run_replication(int example, Index n, Index rep, const SegmentationConfig& cfg, std::uint64_t seed);

/// `reps` replications per sample size, each seeded from (seed, n, rep) so
/// the report does not depend on `threads`.
ExperimentReport run_experiment(int example, std::span<const Index> n_list, Index reps, const SegmentationConfig& cfg,
                                std::uint64_t seed, int threads = 1);

}  // namespace matseg
