#include "matseg/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "matseg/parallel.hpp"

namespace matseg {

Rng make_rng(std::initializer_list<std::uint64_t> keys) {
    std::vector<std::uint32_t> words;
    for (std::uint64_t k : keys) {
        words.push_back(static_cast<std::uint32_t>(k));
        words.push_back(static_cast<std::uint32_t>(k >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

VarmaCoefficients draw_varma_coefficients(Index dim, Rng& rng) {
    require(dim >= 1, "VARMA dimension must be >= 1");
    std::uniform_real_distribution<double> wide(-3.0, 3.0);
    std::uniform_real_distribution<double> narrow(-1.0, 1.0);
    VarmaCoefficients c{Matrix(dim, dim), Matrix(dim, dim)};
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) c.phi(i, j) = wide(rng);
    c.phi *= 0.9 / operator_norm(c.phi);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) c.theta(i, j) = narrow(rng);
    return c;
}

Matrix simulate_varma(const VarmaCoefficients& coefficients, Index n_total, Rng& rng, Index burn_in) {
    require(n_total >= 1, "VARMA length must be >= 1");
    require(burn_in >= 0, "burn-in must be >= 0");
    const Index dim = coefficients.phi.rows();
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&] {
        Vector v(dim);
        for (Index i = 0; i < dim; ++i) v(i) = normal(rng);
        return v;
    };
    Vector eta = draw();
    Vector eps_prev = draw();
    Matrix out(n_total, dim);
    for (Index t = 0; t < burn_in + n_total; ++t) {
        const Vector eps = draw();
        eta = coefficients.phi * eta + eps - coefficients.theta * eps_prev;
        eps_prev = eps;
        if (t >= burn_in) out.row(t - burn_in) = eta.transpose();
    }
    return out;
}

Matrix gen_factor_varma(Index dim, Index n_total, Rng& rng) {
    const VarmaCoefficients c = draw_varma_coefficients(dim, rng);
    return simulate_varma(c, n_total, rng);
}

std::vector<Index> GroundTruth::sizes() const {
    std::vector<Index> out;
    for (const auto& g : partition) out.push_back(static_cast<Index>(g.size()));
    return out;
}

MatrixSeries gen_block_latent(Index p, std::span<const Index> sizes, Index n, Rng& rng) {
    require(p >= 1 && n >= 2 && !sizes.empty(), "gen_block_latent: invalid shape");
    const Index q = std::accumulate(sizes.begin(), sizes.end(), Index{0});
    MatrixSeries x = MatrixSeries::zeros(n, p, q);
    Index offset = 0;
    for (Index l : sizes) {
        require(l >= 1, "group sizes must be >= 1");
        const Matrix eta = gen_factor_varma(p, n + l - 1, rng);
        for (Index t = 0; t < n; ++t) {
            for (Index c = 0; c < l; ++c) x.at(t).col(offset + c) = eta.row(t + c).transpose();
        }
        offset += l;
    }
    return x;
}

SimulatedData mix_latent(MatrixSeries latent, Matrix a, std::span<const Index> sizes) {
    require(a.rows() == latent.cols() && a.cols() == latent.cols(), "mixing matrix must be q x q");
    Partition partition;
    Index offset = 0;
    for (Index l : sizes) {
        std::vector<Index> group(static_cast<std::size_t>(l));
        std::iota(group.begin(), group.end(), offset);
        partition.push_back(std::move(group));
        offset += l;
    }
    require(offset == latent.cols(), "group sizes must sum to q");
    MatrixSeries series = latent.times(a.transpose());
    return SimulatedData{std::move(series), std::move(latent), GroundTruth{std::move(a), std::move(partition)}};
}

SimulatedData gen_example(int example, Index n, Rng& rng) {
    require(n >= 50, "simulation examples need n >= 50");
    std::vector<Index> sizes;
    Index p = 0;
    switch (example) {
        case 1: p = 3; sizes = {3, 2, 1}; break;
        case 2: p = 6; sizes = {3, 2, 1}; break;
        case 3: p = 10; sizes = {4, 3, 2, 1}; break;
        default: throw Error::invalid_input("unknown example " + std::to_string(example) + " (expected 1, 2 or 3)");
    }
    MatrixSeries latent = gen_block_latent(p, sizes, n, rng);
    const Index q = latent.cols();
    Matrix a = Matrix::Zero(q, q);
    if (example == 3) {
        const double theta[5] = {std::numbers::pi / 5, std::numbers::pi / 6, std::numbers::pi / 7,
                                 std::numbers::pi / 8, std::numbers::pi / 9};
        for (Index b = 0; b < 5; ++b) {
            const double angle = theta[b] * std::numbers::pi;
            a(2 * b, 2 * b) = std::cos(angle);
            a(2 * b, 2 * b + 1) = std::sin(angle);
            a(2 * b + 1, 2 * b) = -std::sin(angle);
            a(2 * b + 1, 2 * b + 1) = std::cos(angle);
        }
    } else {
        std::uniform_real_distribution<double> wide(-3.0, 3.0);
        for (Index i = 0; i < q; ++i)
            for (Index j = 0; j < q; ++j) a(i, j) = wide(rng);
    }
    return mix_latent(std::move(latent), std::move(a), sizes);
}

Outcome classify_partition(const Partition& estimated, const GroundTruth& truth) {
    const Index q1 = truth.group_count();
    const Index estimated_count = static_cast<Index>(estimated.size());
    if (estimated_count == q1) {
        std::vector<Index> want = truth.sizes();
        std::vector<Index> got;
        for (const auto& g : estimated) got.push_back(static_cast<Index>(g.size()));
        std::sort(want.begin(), want.end());
        std::sort(got.begin(), got.end());
        if (want == got) return Outcome::Correct;
    }
    if (estimated_count == q1 - 1) return Outcome::NearComplete;
    return Outcome::Incorrect;
}

Outcome classify_segmentation(const SegmentationResult& result, const GroundTruth& truth) {
    return classify_partition(result.groups, truth);
}

std::vector<std::size_t> pair_blocks(std::span<const Matrix> a_hat, const GroundTruth& truth,
                                     const Matrix& standardizer) {
    const Index q = truth.a_true.rows();
    if (static_cast<Index>(a_hat.size()) != truth.group_count())
        throw Error(ErrorKind::InvalidState, "subspace error needs a correct segmentation (group count differs)");
    require(standardizer.rows() == q && standardizer.cols() == q, "standardizer must be q x q");
    const Matrix target = standardizer * truth.a_true;

    std::vector<bool> used(a_hat.size(), false);
    std::vector<std::size_t> pairing;
    for (const auto& group : truth.partition) {
        Matrix block(q, static_cast<Index>(group.size()));
        for (std::size_t c = 0; c < group.size(); ++c) block.col(static_cast<Index>(c)) = target.col(group[c]);
        const Basis truth_basis(block);
        std::optional<std::size_t> best;
        double best_distance = 2.0;
        for (std::size_t e = 0; e < a_hat.size(); ++e) {
            if (used[e] || a_hat[e].cols() != block.cols()) continue;
            const double d = subspace_distance(Basis(a_hat[e]), truth_basis);
            if (d < best_distance) {
                best_distance = d;
                best = e;
            }
        }
        if (!best) throw Error(ErrorKind::InvalidState, "subspace error needs a correct segmentation (sizes differ)");
        used[*best] = true;
        pairing.push_back(*best);
    }
    return pairing;
}

double mean_subspace_error(std::span<const Matrix> a_hat, const GroundTruth& truth, const Matrix& standardizer) {
    const std::vector<std::size_t> pairing = pair_blocks(a_hat, truth, standardizer);
    const Matrix target = standardizer * truth.a_true;
    double sum = 0.0;
    for (std::size_t j = 0; j < truth.partition.size(); ++j) {
        const auto& group = truth.partition[j];
        Matrix block(target.rows(), static_cast<Index>(group.size()));
        for (std::size_t c = 0; c < group.size(); ++c) block.col(static_cast<Index>(c)) = target.col(group[c]);
        sum += subspace_distance(Basis(a_hat[pairing[j]]), Basis(block));
    }
    return sum / static_cast<double>(truth.partition.size());
}

std::optional<double> ExperimentRow::d_bar_quantile(double level) const {
    if (d_bar.empty()) return std::nullopt;
    std::vector<double> sorted = d_bar;
    std::sort(sorted.begin(), sorted.end());
    const double pos = level * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::optional<double> ExperimentRow::d_bar_mean() const {
    if (d_bar.empty()) return std::nullopt;
    double sum = 0.0;
    for (double d : d_bar) sum += d;
    return sum / static_cast<double>(d_bar.size());
}

Replication run_replication(int example, Index n, Index rep, const SegmentationConfig& cfg, std::uint64_t seed) {
    Rng rng = make_rng({seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rep)});
    SegmentationConfig local = cfg;
    local.seed = rng();
    Replication out;
    try {
        const SimulatedData data = gen_example(example, n, rng);
        const SegmentationResult result = segment(data.series, local);
        out.outcome = classify_segmentation(result, data.truth);
        if (out.outcome == Outcome::Correct)
            out.d_bar = mean_subspace_error(result.a_hat, data.truth, result.standardizer);
    } catch (const Error&) {
        out.failed = true;
        out.outcome = Outcome::Incorrect;
    }
    return out;
}

ExperimentReport run_experiment(int example, std::span<const Index> n_list, Index reps, const SegmentationConfig& cfg,
                                std::uint64_t seed, int threads) {
    require(reps >= 1, "reps must be >= 1");
    require(example >= 1 && example <= 3, "unknown example " + std::to_string(example));
    cfg.validate();
    ExperimentReport report;
    report.seed = seed;
    for (Index n : n_list) {
        require(n >= 50, "simulation examples need n >= 50");
        std::vector<Replication> runs(static_cast<std::size_t>(reps));
        parallel_for(runs.size(), threads, [&](std::size_t rep) {
            runs[rep] = run_replication(example, n, static_cast<Index>(rep), cfg, seed);
        });
        ExperimentRow row;
        row.example = example;
        row.n = n;
        row.reps = reps;
        for (const Replication& r : runs) {
            if (r.outcome == Outcome::Correct) {
                ++row.correct;
                if (r.d_bar) row.d_bar.push_back(*r.d_bar);
            } else {
                ++row.incorrect;
                if (r.outcome == Outcome::NearComplete) ++row.near_complete;
                if (r.failed) ++row.failures;
            }
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace matseg
