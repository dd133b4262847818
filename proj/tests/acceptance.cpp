// Acceptance run: one PASS/FAIL line per criterion with the measured values.
// Exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "matseg/cli.hpp"
#include "matseg/estimators.hpp"
#include "matseg/simulation.hpp"
#include "matseg/tensor.hpp"
#include "oracles.hpp"

using namespace matseg;

namespace {

constexpr std::uint64_t kSeed = 12345;

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& measured) {
    if (!pass) ++failures;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << what << " | " << measured << std::endl;
}

std::string fixed(double v, int digits = 3) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

int worker_count() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

ExperimentRow experiment(int example, Index n, Index reps, const SegmentationConfig& cfg) {
    const std::vector<Index> n_list{n};
    return run_experiment(example, n_list, reps, cfg, kSeed, worker_count()).rows.front();
}

double correct_share(const ExperimentRow& row) { return row.proportion(row.correct); }

SegmentationConfig cv_config() {
    SegmentationConfig cfg;
    cfg.threshold = CrossValidatedThreshold{};
    cfg.seed = kSeed;
    return cfg;
}

// Counts property checks so each family can be held to its minimum.
struct Tally {
    int cases = 0;
    int failed = 0;
    void check(bool ok) {
        ++cases;
        if (!ok) ++failed;
    }
    bool pass(int minimum) const { return cases >= minimum && failed == 0; }
    std::string str() const { return std::to_string(cases - failed) + "/" + std::to_string(cases); }
};

void criterion_5() {
    std::mt19937_64 rng(5);
    double worst[4] = {0, 0, 0, 0};
    int instances = 0;
    for (; instances < 20; ++instances) {
        const Index n = 4 + static_cast<Index>(rng() % 7);
        const Index p = 1 + static_cast<Index>(rng() % 4), q = 1 + static_cast<Index>(rng() % 4);
        const MatrixSeries s = oracle::random_series(rng, n, p, q);
        const Index k = static_cast<Index>(rng() % static_cast<unsigned>(n - 1));
        const Index i = static_cast<Index>(rng() % p), j = static_cast<Index>(rng() % p);
        const Index k0 = 1 + static_cast<Index>(rng() % 2);
        std::uniform_real_distribution<double> level(0.0, 0.3);
        std::vector<double> u(static_cast<std::size_t>(k0)), v(static_cast<std::size_t>(k0 + 1));
        for (double& x : u) x = level(rng);
        for (double& x : v) x = level(rng);
        worst[0] = std::max(worst[0], oracle::max_diff(row_autocov(s, k), oracle::row_autocov(s, k)));
        worst[1] = std::max(worst[1], oracle::max_diff(pair_autocov(s, i, j, k), oracle::pair_autocov(s, i, j, k)));
        worst[2] = std::max(worst[2], oracle::max_diff(w_stat(s, k0, u).matrix(), oracle::w_stat(s, k0, u)));
        worst[3] = std::max(worst[3], oracle::max_diff(w_stat_rowpair(s, k0, v).matrix(), oracle::w_stat_rowpair(s, k0, v)));
    }
    const bool pass = *std::max_element(worst, worst + 4) <= 1e-12;
    std::ostringstream m;
    m << instances << " instances each; max |diff| row_autocov " << worst[0] << ", pair_autocov " << worst[1] << ", w_stat "
      << worst[2] << ", w_stat_rowpair " << worst[3] << " (tolerance 1e-12)";
    report(5, pass, "estimators match brute-force loops", m.str());
}

void criterion_6() {
    std::mt19937_64 rng(6);
    Tally orth, idem, dist, tensor, ratio, groups, perm;
    SegmentationConfig cfg;
    cfg.m = 3;

    for (int rep = 0; rep < 100; ++rep) {
        const Index q = 2 + static_cast<Index>(rng() % 4);
        const MatrixSeries s = oracle::random_series(rng, 60 + rng() % 60, 1 + rng() % 3, q);
        const SegmentationResult a = segment(s, cfg);
        orth.check(oracle::max_diff(a.gamma.transpose() * a.gamma, Matrix::Identity(q, q)) <= 1e-8);

        // Permuting the input columns permutes nothing that is reported.
        std::vector<Index> order(static_cast<std::size_t>(q));
        std::iota(order.begin(), order.end(), Index{0});
        std::shuffle(order.begin(), order.end(), rng);
        const SegmentationResult b = segment(s.select_columns(order), cfg);
        bool same = a.scores.size() == b.scores.size();
        for (std::size_t k = 0; same && k < a.scores.size(); ++k) same = std::abs(a.scores[k].score - b.scores[k].score) <= 1e-8;
        std::vector<std::size_t> sa, sb;
        for (const auto& g : a.groups) sa.push_back(g.size());
        for (const auto& g : b.groups) sb.push_back(g.size());
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        perm.check(same && sa == sb);
    }

    for (int rep = 0; rep < 100; ++rep) {
        const Matrix m = oracle::random_matrix(rng, 1 + rng() % 6, 1 + rng() % 6);
        const double u = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
        const bool keep = m.rows() == m.cols() && rng() % 2 == 0;
        const Matrix once = hard_threshold(m, u, keep);
        idem.check(hard_threshold(once, u, keep) == once);
    }

    for (int rep = 0; rep < 100; ++rep) {
        const Index n = 3 + static_cast<Index>(rng() % 6);
        const Index r = 1 + static_cast<Index>(rng() % (n - 1));
        const Matrix h1 = oracle::random_matrix(rng, n, r);
        const Matrix h2 = oracle::random_matrix(rng, n, 1 + static_cast<Index>(rng() % (n - 1)));
        const double d = subspace_distance(Basis(h1), Basis(h2));
        // A subspace of span(h1), and the orthogonal complement of span(h1).
        const Matrix nested = h1 * oracle::random_matrix(rng, r, 1 + static_cast<Index>(rng() % r));
        const Matrix full_q = Eigen::HouseholderQR<Matrix>(h1).householderQ();
        const Matrix complement = full_q.rightCols(n - r);
        dist.check(d >= 0.0 && d <= 1.0 && subspace_distance(Basis(h1), Basis(nested)) <= 1e-7 &&
                   std::abs(subspace_distance(Basis(h1), Basis(complement)) - 1.0) <= 1e-7);
    }

    for (int rep = 0; rep < 100; ++rep) {
        std::vector<Index> dims(2 + rng() % 3);
        std::size_t total = 1;
        for (auto& d : dims) total *= static_cast<std::size_t>(d = 1 + static_cast<Index>(rng() % 4));
        std::vector<double> values(total);
        for (double& v : values) v = std::normal_distribution<double>(0.0, 1.0)(rng);
        const Tensor t{dims, values};
        bool ok = true;
        for (Index mode = 0; mode < static_cast<Index>(dims.size()); ++mode)
            ok = ok && matricize(t, mode) == oracle::matricize(values, dims, mode) && tensorize(matricize(t, mode), mode, dims) == t;
        tensor.check(ok);
    }

    ratio.check(ratio_select(std::vector<double>{0.9, 0.8, 0.5, 0.05, 0.04, 0.03}, 0.75) == 3);
    ratio.check(ratio_select(std::vector<double>{0.5, 0.5, 0.5, 0.5}, 0.75) == 1);
    ratio.check(ratio_select(std::vector<double>{0.9, 0.7, 0.0, 0.0, 0.0, 0.0}, 0.75) == 2);
    ratio.check(ratio_select(std::vector<double>{0.8, 0.4, 0.2, 0.1}, 0.75, 0.2) == 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> l(2 + rng() % 20);
        for (double& v : l) v = rng() % 5 == 0 ? 0.0 : unit(rng);
        std::sort(l.rbegin(), l.rend());
        const double c0 = 0.05 + 0.9 * unit(rng);
        ratio.check(ratio_select(l, c0) == oracle::ratio_select(l, c0, false, 0.0));
    }

    for (int rep = 0; rep < 100; ++rep) {
        const Index q = 1 + static_cast<Index>(rng() % 15);
        std::vector<std::pair<Index, Index>> e;
        const auto count = rng() % static_cast<unsigned>(q + 3);
        for (unsigned k = 0; k < count; ++k) e.emplace_back(static_cast<Index>(rng() % q), static_cast<Index>(rng() % q));
        groups.check(group_columns(e, q) == oracle::components(e, q));
    }

    const bool pass = orth.pass(100) && idem.pass(100) && dist.pass(100) && tensor.pass(100) && ratio.pass(100) &&
                      groups.pass(100) && perm.pass(100);
    report(6, pass, "invariant suite, >= 100 cases per property",
           "gamma orthogonality " + orth.str() + ", threshold idempotence " + idem.str() + ", subspace distance " +
               dist.str() + ", unfolding round trip " + tensor.str() + ", ratio_select " + ratio.str() +
               ", components vs DFS " + groups.str() + ", permutation equivariance " + perm.str());
}

void criterion_8() {
    const auto run = [](const std::string& threads) {
        const std::vector<std::string> args{"matseg", "replicate", "--example", "1", "--n", "100,300", "--reps", "20",
                                            "--seed", "8", "--threads", threads};
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        return code == 0 ? out.str() : "exit " + std::to_string(code) + ": " + err.str();
    };
    const std::string a = run("1"), b = run("1"), c = run("4");
    const bool pass = a == b && a == c && a.rfind("example,", 0) == 0;
    report(8, pass, "replicate CSV is byte-identical across runs and --threads 1/4",
           std::string(a == b ? "runs identical" : "runs differ") + ", " + (a == c ? "threads identical" : "threads differ") +
               ", " + std::to_string(a.size()) + " bytes");
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    const SegmentationConfig plain;

    const ExperimentRow ex1_1500 = experiment(1, 1500, 100, plain);
    const ExperimentRow ex1_100 = experiment(1, 100, 100, plain);
    report(1, correct_share(ex1_1500) >= 0.88, "Example 1, n=1500, 100 reps, no threshold: correct >= 0.88",
           "correct " + fixed(correct_share(ex1_1500)) + ", near-complete " + fixed(ex1_1500.proportion(ex1_1500.near_complete)));
    const double gain = correct_share(ex1_1500) - correct_share(ex1_100);
    report(2, gain >= 0.15 - 1e-12, "Example 1 correct(n=1500) - correct(n=100) >= 0.15",
           fixed(correct_share(ex1_1500)) + " - " + fixed(correct_share(ex1_100)) + " = " + fixed(gain));

    const ExperimentRow ex3_plain = experiment(3, 1500, 100, plain);
    const ExperimentRow ex3_cv = experiment(3, 1500, 100, cv_config());
    report(3, correct_share(ex3_plain) <= 0.40 && correct_share(ex3_cv) >= 0.80,
           "Example 3, n=1500, 100 reps: no threshold <= 0.40 and CV threshold >= 0.80",
           "no threshold " + fixed(correct_share(ex3_plain)) + ", CV " + fixed(correct_share(ex3_cv)));

    const ExperimentRow ex2 = experiment(2, 1500, 100, plain);
    report(4, correct_share(ex2) >= 0.65 && correct_share(ex2) <= 0.90, "Example 2, n=1500, 100 reps: correct in [0.65, 0.90]",
           "correct " + fixed(correct_share(ex2)));

    criterion_5();
    criterion_6();

    std::string trend;
    bool decreasing = true;
    for (const auto& [example, cfg] : {std::pair{1, plain}, std::pair{3, cv_config()}}) {
        trend += (trend.empty() ? "" : "; ") + std::string("Example ") + std::to_string(example) + " median";
        double previous = 2.0;
        for (Index n : {100, 500, 1500}) {
            const ExperimentRow row = experiment(example, n, 50, cfg);
            const auto median = row.d_bar_quantile(0.5);
            trend += " n=" + std::to_string(n) + ":" + (median ? fixed(*median, 4) : std::string("none")) + " (" +
                     std::to_string(row.correct) + " correct)";
            decreasing = decreasing && median && *median < previous;
            if (median) previous = *median;
        }
    }
    report(7, decreasing, "median D over correct runs strictly decreases over n in {100, 500, 1500}, 50 reps", trend);

    criterion_8();

    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << " in "
              << fixed(seconds, 1) << " s" << std::endl;
    return failures == 0 ? 0 : 1;
}
