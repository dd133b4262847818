#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "matseg/simulation.hpp"
#include "matseg/tensor.hpp"

namespace matseg::io {

using Json = nlohmann::json;

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/*
 * Series files are plain comma-separated text:
 *
 *   matseg,matrix,1          matseg,tensor,1
 *   n,p,q                    n,r,p1,...,pr
 *   <n payload lines>        <n payload lines>
 *
 * A matrix payload line holds Y_t row by row (p q values); a tensor payload
 * line holds the tensor with its first index varying fastest.
 */
using SeriesData = std::variant<MatrixSeries, TensorSeries>;

void write_series(std::ostream& out, const MatrixSeries& series);
void write_series(std::ostream& out, const TensorSeries& series);
/// Throws ParseError with the offending 1-based line number.
SeriesData read_series(std::istream& in);

void save_series(const std::filesystem::path& path, const SeriesData& series);
SeriesData load_series(const std::filesystem::path& path);
MatrixSeries load_matrix_series(const std::filesystem::path& path);

/// "none", "fixed:u,v" or "cv:N1".
ThresholdMode parse_threshold(std::string_view text);
std::string format_threshold(const ThresholdMode& mode);

Json config_to_json(const SegmentationConfig& cfg);
SegmentationConfig config_from_json(const Json& j);

/// The serialisable part of a SegmentationResult (the transformed series is
/// written separately, a_hat follows from gamma and groups).
struct ModeSummary {
    SegmentationStatus status = SegmentationStatus::Ok;
    Matrix gamma;
    Vector eigenvalues;
    Matrix standardizer;
    std::vector<PairScore> scores;
    Index selected_edges = 0;
    Partition groups;
    LagThresholds thresholds;
    std::vector<std::string> warnings;

    static ModeSummary from(const SegmentationResult& result);
    /// Exact equality, shapes included.
    friend bool operator==(const ModeSummary& a, const ModeSummary& b);
};

struct ResultDocument {
    SegmentationConfig config;
    std::string kind = "matrix";  ///< "matrix" or "tensor"
    Index n = 0;
    std::vector<Index> dims;      ///< (p, q) or (p1, ..., pr) of the input
    bool transposed = false;      ///< matrix input segmented as Y_t^T
    std::vector<ModeSummary> modes;

    friend bool operator==(const ResultDocument&, const ResultDocument&) = default;
};

/// Indices are written 1-based and matrices as arrays of rows. A matrix
/// document carries its single mode's fields at top level; a tensor
/// document lists them under "modes".
Json result_to_json(const ResultDocument& doc);
ResultDocument result_from_json(const Json& j);

void save_result(const std::filesystem::path& path, const ResultDocument& doc);
ResultDocument load_result(const std::filesystem::path& path);

Json truth_to_json(const GroundTruth& truth, int example, Index n, std::uint64_t seed);
GroundTruth truth_from_json(const Json& j);

/// example,n,reps,correct,incorrect,near_complete,d_bar_median; empty
/// median when no run was correct.
void write_report_csv(std::ostream& out, const ExperimentReport& report);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace matseg::io
