#include "matseg/cli.hpp"

#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matseg/io.hpp"
#include "matseg/parallel.hpp"
#include "matseg/threshold_cv.hpp"

namespace matseg::cli {

namespace {

// Bad flag values found after CLI11 accepted the command line.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigFlags {
    Index k0 = 2;
    Index m = 10;
    double c0 = 0.75;
    double ratio_shift = 0.0;
    CLI::Option* ratio_shift_opt = nullptr;
    std::string threshold = "none";
};

void add_config_flags(CLI::App* app, ConfigFlags& f) {
    app->add_option("--k0", f.k0, "lags in the W statistic")->capture_default_str();
    app->add_option("--m", f.m, "largest lag in the cross-correlation score")->capture_default_str();
    app->add_option("--c0", f.c0, "ratio search covers j < c0 * q(q-1)/2")->capture_default_str();
    f.ratio_shift_opt =
        app->add_option("--ratio-shift", f.ratio_shift, "use (L_j + s) / (L_{j+1} + s) over all j instead of c0");
    app->add_option("--threshold", f.threshold, "none, fixed:u,v or cv:N1")->capture_default_str();
}

SegmentationConfig build_config(const ConfigFlags& f, std::uint64_t seed) {
    SegmentationConfig cfg;
    cfg.k0 = f.k0;
    cfg.m = f.m;
    cfg.c0 = f.c0;
    if (f.ratio_shift_opt != nullptr && f.ratio_shift_opt->count() > 0) cfg.ratio_shift = f.ratio_shift;
    cfg.seed = seed;
    try {
        cfg.threshold = io::parse_threshold(f.threshold);
        cfg.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
    } else {
        io::write_text_file(path, text);
    }
}

void error_record(std::ostream& err, std::string_view kind, const std::string& message, std::size_t line = 0) {
    io::Json j;
    j["error"] = kind;
    j["message"] = message;
    if (line > 0) j["line"] = line;
    err << j.dump() << '\n';
}

// ---- simulate ----

struct SimulateArgs {
    int example = 1;
    Index n = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string truth;
};

void cmd_simulate(const SimulateArgs& a) {
    if (a.example < 1 || a.example > 3) throw UsageError("--example must be 1, 2 or 3");
    if (a.n < 50) throw UsageError("--n must be >= 50");
    Rng rng = make_rng({a.seed, static_cast<std::uint64_t>(a.example), static_cast<std::uint64_t>(a.n)});
    const SimulatedData data = gen_example(a.example, a.n, rng);
    io::save_series(a.out, data.series);
    const std::string truth_path = a.truth.empty() ? a.out + ".truth.json" : a.truth;
    io::write_text_file(truth_path, io::truth_to_json(data.truth, a.example, a.n, a.seed).dump(2) + "\n");
}

// ---- segment ----

struct SegmentArgs {
    std::string input;
    ConfigFlags flags;
    std::uint64_t seed = 0;
    bool transpose = false;
    std::string out;
    std::string transformed_out;
};

void cmd_segment(const SegmentArgs& a, std::ostream& out) {
    const SegmentationConfig cfg = build_config(a.flags, a.seed);
    io::SeriesData data = io::load_series(a.input);

    io::ResultDocument doc;
    doc.config = cfg;
    if (auto* matrix = std::get_if<MatrixSeries>(&data)) {
        const MatrixSeries series = a.transpose ? matrix->transposed() : std::move(*matrix);
        const SegmentationResult result = segment(series, cfg);
        doc.kind = "matrix";
        doc.n = series.length();
        doc.dims = {series.rows(), series.cols()};
        doc.transposed = a.transpose;
        doc.modes.push_back(io::ModeSummary::from(result));
        if (!a.transformed_out.empty()) io::save_series(a.transformed_out, result.transformed);
    } else {
        if (a.transpose) throw UsageError("--transpose applies to matrix series only");
        const auto& tensor = std::get<TensorSeries>(data);
        const SequentialResult result = sequential_segment(tensor, cfg);
        doc.kind = "tensor";
        doc.n = tensor.length();
        doc.dims = tensor.dims();
        for (const auto& mode : result.modes) doc.modes.push_back(io::ModeSummary::from(mode));
        if (!a.transformed_out.empty()) io::save_series(a.transformed_out, result.transformed);
    }
    emit(a.out, io::result_to_json(doc).dump(2) + "\n", out);
}

// ---- correlogram ----

struct CorrelogramArgs {
    std::string input;
    Index m = 10;
    std::string gamma;
    std::string threshold = "none";
    std::uint64_t seed = 0;
    std::string out;
};

void cmd_correlogram(const CorrelogramArgs& a, std::ostream& out) {
    if (a.m < 0) throw UsageError("--m must be >= 0");
    ThresholdMode mode;
    try {
        mode = io::parse_threshold(a.threshold);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    MatrixSeries series = io::load_matrix_series(a.input);
    Matrix gamma = Matrix::Identity(series.cols(), series.cols());
    if (!a.gamma.empty()) {
        const io::ResultDocument doc = io::load_result(a.gamma);
        if (doc.kind != "matrix" || doc.modes.size() != 1)
            throw Error::invalid_input("--gamma needs the result of a matrix segmentation");
        if (doc.transposed) series = series.transposed();
        const io::ModeSummary& mode_result = doc.modes.front();
        if (mode_result.gamma.rows() != series.cols())
            throw Error::invalid_input("--gamma result has q = " + std::to_string(mode_result.gamma.rows()) +
                                       ", the series has q = " + std::to_string(series.cols()));
        series = series.times(mode_result.standardizer);
        gamma = mode_result.gamma;
    }
    if (a.m > series.length() - 2) throw UsageError("--m exceeds n - 2");

    std::vector<double> v;
    if (const auto* fixed = std::get_if<FixedThreshold>(&mode)) {
        v.assign(static_cast<std::size_t>(a.m + 1), fixed->v);
    } else if (const auto* cv = std::get_if<CrossValidatedThreshold>(&mode)) {
        CvPlan plan;
        plan.splits = cv->splits;
        plan.seed = a.seed;
        for (Index h = 0; h <= a.m; ++h) v.push_back(cv_threshold_pair(series, h, plan));
    }

    const CrossCorrelator correlator(series, gamma, a.m, v);
    std::ostringstream csv;
    csv << "i,j,h,max_abs_corr\n";
    const Index q = series.cols();
    for (Index i = 0; i < q; ++i)
        for (Index j = i; j < q; ++j)
            for (Index h = 0; h <= a.m; ++h) {
                const double value = correlator.cross_corr(i, j, h).cwiseAbs().maxCoeff();
                csv << i + 1 << ',' << j + 1 << ',' << h << ',' << io::format_double(value) << '\n';
            }
    emit(a.out, csv.str(), out);
}

// ---- replicate ----

struct ReplicateArgs {
    int example = 1;
    std::vector<Index> n_list;
    Index reps = 100;
    ConfigFlags flags;
    std::uint64_t seed = 0;
    int threads = 0;
    CLI::Option* threads_opt = nullptr;
    std::string out;
};

void cmd_replicate(const ReplicateArgs& a, std::ostream& out) {
    if (a.example < 1 || a.example > 3) throw UsageError("--example must be 1, 2 or 3");
    if (a.reps < 1) throw UsageError("--reps must be >= 1");
    for (Index n : a.n_list)
        if (n < 50) throw UsageError("every --n must be >= 50");
    const SegmentationConfig cfg = build_config(a.flags, a.seed);
    std::optional<int> requested;
    if (a.threads_opt != nullptr && a.threads_opt->count() > 0) {
        if (a.threads < 1) throw UsageError("--threads must be >= 1");
        requested = a.threads;
    }
    const ExperimentReport report = run_experiment(a.example, a.n_list, a.reps, cfg, a.seed, resolve_threads(requested));
    std::ostringstream csv;
    io::write_report_csv(csv, report);
    emit(a.out, csv.str(), out);
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NumericalFailure:
        case ErrorKind::DegenerateCovariance:
        case ErrorKind::DegenerateVariance:
            return kNumericalFailure;
        case ErrorKind::InvalidInput:
        case ErrorKind::InvalidState:
        case ErrorKind::DegenerateColumn:
        case ErrorKind::ResourceLimit:
        case ErrorKind::ParseError:
        case ErrorKind::IoError:
            return kDataError;
    }
    return kDataError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Segmentation of matrix- and tensor-valued time series", "matseg"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "write a simulated example series and its truth");
    simulate->add_option("--example", sim.example, "1, 2 or 3")->required();
    simulate->add_option("--n", sim.n, "series length (>= 50)")->required();
    simulate->add_option("--seed", sim.seed, "random seed")->capture_default_str();
    simulate->add_option("--out", sim.out, "series file")->required();
    simulate->add_option("--truth", sim.truth, "truth file (default: <out>.truth.json)");

    SegmentArgs seg;
    auto* segment_cmd = app.add_subcommand("segment", "segment a matrix or tensor series");
    segment_cmd->add_option("input", seg.input, "series file")->required();
    add_config_flags(segment_cmd, seg.flags);
    segment_cmd->add_option("--seed", seg.seed, "cross-validation seed")->capture_default_str();
    segment_cmd->add_flag("--transpose", seg.transpose, "segment the rows (Y_t^T) instead of the columns");
    segment_cmd->add_option("--out", seg.out, "result document (default: stdout)");
    segment_cmd->add_option("--transformed-out", seg.transformed_out, "write the transformed series here");

    CorrelogramArgs cor;
    auto* correlogram = app.add_subcommand("correlogram", "max |cross-correlation| per column pair and lag as CSV");
    correlogram->add_option("input", cor.input, "matrix series file")->required();
    correlogram->add_option("--m", cor.m, "largest lag")->capture_default_str();
    correlogram->add_option("--gamma", cor.gamma, "result document whose transformation is applied first");
    correlogram->add_option("--threshold", cor.threshold, "none, fixed:u,v or cv:N1 (only v is used)")
        ->capture_default_str();
    correlogram->add_option("--seed", cor.seed, "cross-validation seed")->capture_default_str();
    correlogram->add_option("--out", cor.out, "CSV file (default: stdout)");

    ReplicateArgs rep;
    auto* replicate = app.add_subcommand("replicate", "Monte-Carlo segmentation accuracy as CSV");
    replicate->add_option("--example", rep.example, "1, 2 or 3")->required();
    replicate->add_option("--n", rep.n_list, "comma-separated sample sizes")->required()->delimiter(',');
    replicate->add_option("--reps", rep.reps, "replications per sample size")->capture_default_str();
    add_config_flags(replicate, rep.flags);
    replicate->add_option("--seed", rep.seed, "experiment seed")->capture_default_str();
    rep.threads_opt = replicate->add_option("--threads", rep.threads, "worker threads (default: $MATSEG_THREADS or all cores)");
    replicate->add_option("--out", rep.out, "CSV file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        error_record(err, "Usage", e.what());
        return kUsage;
    }

    try {
        if (simulate->parsed()) cmd_simulate(sim);
        if (segment_cmd->parsed()) cmd_segment(seg, out);
        if (correlogram->parsed()) cmd_correlogram(cor, out);
        if (replicate->parsed()) cmd_replicate(rep, out);
    } catch (const UsageError& e) {
        error_record(err, "Usage", e.what());
        return kUsage;
    } catch (const Error& e) {
        error_record(err, to_string(e.kind()), e.what(), e.line());
        return exit_code_for(e.kind());
    } catch (const std::bad_alloc&) {
        error_record(err, "ResourceLimit", "out of memory");
        return kDataError;
    }
    return kSuccess;
}

}  // namespace matseg::cli
