#include "matseg/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace matseg::io {

namespace {

constexpr std::string_view kMagic = "matseg";
constexpr std::string_view kVersion = "1";

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_real(std::string_view text, std::size_t line) {
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw Error::parse(line, "'" + std::string(text) + "' is not a number");
    if (!std::isfinite(value)) throw Error::parse(line, "non-finite value '" + std::string(text) + "'");
    return value;
}

Index parse_count(std::string_view text, std::size_t line, std::string_view what) {
    text = trim(text);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw Error::parse(line, std::string(what) + " '" + std::string(text) + "' is not an integer");
    if (value < 1) throw Error::parse(line, std::string(what) + " must be >= 1");
    return static_cast<Index>(value);
}

// Reads lines, counting them and dropping a trailing carriage return.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::string& line) {
        if (!std::getline(in_, line)) return false;
        ++number_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }
    std::size_t number() const noexcept { return number_; }

private:
    std::istream& in_;
    std::size_t number_ = 0;
};

void write_values(std::ostream& out, const double* data, Index count) {
    std::string line;
    for (Index i = 0; i < count; ++i) {
        if (i > 0) line.push_back(',');
        line += format_double(data[i]);
    }
    line.push_back('\n');
    out << line;
}

std::vector<double> read_payload(LineReader& reader, Index n, Index width) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n * width));
    std::string line;
    for (Index t = 0; t < n; ++t) {
        if (!reader.next(line))
            throw Error::parse(reader.number() + 1, "expected " + std::to_string(n) + " data rows, found " +
                                                         std::to_string(t));
        const auto fields = split(line);
        if (static_cast<Index>(fields.size()) != width)
            throw Error::parse(reader.number(), "expected " + std::to_string(width) + " values, found " +
                                                    std::to_string(fields.size()));
        for (auto f : fields) values.push_back(parse_real(f, reader.number()));
    }
    while (reader.next(line)) {
        if (!trim(line).empty()) throw Error::parse(reader.number(), "unexpected data after the last row");
    }
    return values;
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    const Index rows = static_cast<Index>(j.size());
    const Index cols = rows == 0 ? 0 : static_cast<Index>(j.at(0).size());
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const Json& row = j.at(static_cast<std::size_t>(i));
        if (static_cast<Index>(row.size()) != cols) throw Error(ErrorKind::ParseError, "ragged matrix in JSON");
        for (Index c = 0; c < cols; ++c) m(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    return m;
}

Json partition_to_json(const Partition& groups) {
    Json out = Json::array();
    for (const auto& g : groups) {
        Json members = Json::array();
        for (Index c : g) members.push_back(c + 1);
        out.push_back(std::move(members));
    }
    return out;
}

Partition partition_from_json(const Json& j) {
    Partition out;
    for (const Json& g : j) {
        std::vector<Index> members;
        for (const Json& c : g) {
            const Index one_based = c.get<Index>();
            if (one_based < 1) throw Error(ErrorKind::ParseError, "group members are 1-based");
            members.push_back(one_based - 1);
        }
        out.push_back(std::move(members));
    }
    return out;
}

Json mode_to_json(const ModeSummary& m, Json j) {
    j["status"] = m.status == SegmentationStatus::Ok ? "ok" : "single_column";
    j["gamma"] = matrix_to_json(m.gamma);
    j["eigenvalues"] = std::vector<double>(m.eigenvalues.data(), m.eigenvalues.data() + m.eigenvalues.size());
    j["standardizer"] = matrix_to_json(m.standardizer);
    Json scores = Json::array();
    for (const auto& s : m.scores) scores.push_back({{"i", s.i + 1}, {"j", s.j + 1}, {"score", s.score}});
    j["scores"] = std::move(scores);
    j["d_hat"] = m.selected_edges;
    j["groups"] = partition_to_json(m.groups);
    j["thresholds"] = {{"u", m.thresholds.u}, {"v", m.thresholds.v}};
    j["warnings"] = m.warnings;
    return j;
}

ModeSummary mode_from_json(const Json& j) {
    ModeSummary m;
    const auto status = j.at("status").get<std::string>();
    if (status == "ok") {
        m.status = SegmentationStatus::Ok;
    } else if (status == "single_column") {
        m.status = SegmentationStatus::SingleColumn;
    } else {
        throw Error(ErrorKind::ParseError, "unknown status '" + status + "'");
    }
    m.gamma = matrix_from_json(j.at("gamma"));
    const auto eig = j.at("eigenvalues").get<std::vector<double>>();
    m.eigenvalues = Eigen::Map<const Vector>(eig.data(), static_cast<Index>(eig.size()));
    m.standardizer = matrix_from_json(j.at("standardizer"));
    for (const Json& s : j.at("scores"))
        m.scores.push_back({s.at("i").get<Index>() - 1, s.at("j").get<Index>() - 1, s.at("score").get<double>()});
    m.selected_edges = j.at("d_hat").get<Index>();
    m.groups = partition_from_json(j.at("groups"));
    m.thresholds.u = j.at("thresholds").at("u").get<std::vector<double>>();
    m.thresholds.v = j.at("thresholds").at("v").get<std::vector<double>>();
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
    return m;
}

// Runs fn, turning JSON access errors into ParseError.
template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
    try {
        return fn();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string(what) + ": " + e.what());
    }
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw Error(ErrorKind::InvalidState, "cannot format number");
    return std::string(buf, ptr);
}

void write_series(std::ostream& out, const MatrixSeries& series) {
    out << kMagic << ",matrix," << kVersion << '\n'
        << series.length() << ',' << series.rows() << ',' << series.cols() << '\n';
    const Index width = series.rows() * series.cols();
    for (Index t = 0; t < series.length(); ++t) write_values(out, series.values().data() + t * width, width);
}

void write_series(std::ostream& out, const TensorSeries& series) {
    out << kMagic << ",tensor," << kVersion << '\n' << series.length() << ',' << series.order();
    for (Index d : series.dims()) out << ',' << d;
    out << '\n';
    for (Index t = 0; t < series.length(); ++t) write_values(out, series.slice(t).data(), series.tensor_size());
}

SeriesData read_series(std::istream& in) {
    LineReader reader(in);
    std::string line;
    if (!reader.next(line)) throw Error::parse(1, "empty file");
    const auto magic = split(line);
    if (magic.size() != 3 || trim(magic[0]) != kMagic)
        throw Error::parse(1, "missing 'matseg,<kind>,<version>' header");
    const std::string kind(trim(magic[1]));
    if (kind != "matrix" && kind != "tensor") throw Error::parse(1, "unknown series kind '" + std::string(kind) + "'");
    if (trim(magic[2]) != kVersion) throw Error::parse(1, "unsupported format version '" + std::string(magic[2]) + "'");

    if (!reader.next(line)) throw Error::parse(2, "missing dimension line");
    const auto fields = split(line);
    try {
        if (kind == "matrix") {
            if (fields.size() != 3) throw Error::parse(2, "expected 'n,p,q'");
            const Index n = parse_count(fields[0], 2, "n");
            const Index p = parse_count(fields[1], 2, "p");
            const Index q = parse_count(fields[2], 2, "q");
            if (n < 2) throw Error::parse(2, "a series needs n >= 2");
            std::vector<double> values = read_payload(reader, n, p * q);
            return MatrixSeries(n, p, q, std::move(values));
        }
        if (fields.size() < 2) throw Error::parse(2, "expected 'n,r,p1,...,pr'");
        const Index n = parse_count(fields[0], 2, "n");
        const Index r = parse_count(fields[1], 2, "r");
        if (n < 2) throw Error::parse(2, "a series needs n >= 2");
        if (r < 2) throw Error::parse(2, "tensor order must be >= 2");
        if (static_cast<Index>(fields.size()) != 2 + r)
            throw Error::parse(2, "expected " + std::to_string(r) + " tensor dimensions");
        std::vector<Index> dims;
        Index size = 1;
        for (Index k = 0; k < r; ++k) {
            dims.push_back(parse_count(fields[static_cast<std::size_t>(2 + k)], 2, "dimension"));
            size *= dims.back();
        }
        std::vector<double> values = read_payload(reader, n, size);
        return TensorSeries(n, std::move(dims), std::move(values));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ParseError) throw;
        throw Error::parse(reader.number(), e.what());
    }
}

void save_series(const std::filesystem::path& path, const SeriesData& series) {
    std::ostringstream text;
    std::visit([&](const auto& s) { write_series(text, s); }, series);
    write_text_file(path, text.str());
}

SeriesData load_series(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for reading");
    try {
        return read_series(in);
    } catch (const Error& e) {
        throw Error::in_file(path.string(), e);
    }
}

MatrixSeries load_matrix_series(const std::filesystem::path& path) {
    SeriesData data = load_series(path);
    if (auto* m = std::get_if<MatrixSeries>(&data)) return std::move(*m);
    throw Error::invalid_input("'" + path.string() + "' holds a tensor series; a matrix series is required");
}

ThresholdMode parse_threshold(std::string_view text) {
    if (text == "none") return NoThreshold{};
    auto bad = [&] {
        return Error::invalid_input("threshold must be none, fixed:u,v or cv:N1 (got '" + std::string(text) + "')");
    };
    if (text.starts_with("fixed:")) {
        const auto parts = split(text.substr(6));
        if (parts.size() != 2) throw bad();
        FixedThreshold fixed;
        try {
            fixed.u = parse_real(parts[0], 0);
            fixed.v = parse_real(parts[1], 0);
        } catch (const Error&) {
            throw bad();
        }
        if (fixed.u < 0 || fixed.v < 0) throw Error::invalid_input("fixed thresholds must be >= 0");
        return fixed;
    }
    if (text.starts_with("cv:")) {
        const std::string_view count = text.substr(3);
        int splits = 0;
        const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), splits);
        if (ec != std::errc() || ptr != count.data() + count.size() || count.empty()) throw bad();
        if (splits < 1) throw Error::invalid_input("cross-validation needs at least one split");
        return CrossValidatedThreshold{splits};
    }
    if (text == "cv") return CrossValidatedThreshold{};
    throw bad();
}

std::string format_threshold(const ThresholdMode& mode) {
    if (const auto* f = std::get_if<FixedThreshold>(&mode)) return "fixed:" + format_double(f->u) + "," + format_double(f->v);
    if (const auto* c = std::get_if<CrossValidatedThreshold>(&mode)) return "cv:" + std::to_string(c->splits);
    return "none";
}

Json config_to_json(const SegmentationConfig& cfg) {
    Json j;
    j["k0"] = cfg.k0;
    j["m"] = cfg.m;
    j["c0"] = cfg.c0;
    j["ratio_shift"] = cfg.ratio_shift ? Json(*cfg.ratio_shift) : Json(nullptr);
    j["threshold"] = format_threshold(cfg.threshold);
    j["eps"] = cfg.eps;
    j["seed"] = cfg.seed;
    return j;
}

SegmentationConfig config_from_json(const Json& j) {
    return guarded("config", [&] {
        SegmentationConfig cfg;
        cfg.k0 = j.at("k0").get<Index>();
        cfg.m = j.at("m").get<Index>();
        cfg.c0 = j.at("c0").get<double>();
        if (!j.at("ratio_shift").is_null()) cfg.ratio_shift = j.at("ratio_shift").get<double>();
        cfg.threshold = parse_threshold(j.at("threshold").get<std::string>());
        cfg.eps = j.at("eps").get<double>();
        cfg.seed = j.at("seed").get<std::uint64_t>();
        return cfg;
    });
}

ModeSummary ModeSummary::from(const SegmentationResult& r) {
    return ModeSummary{r.status,         r.gamma,  r.eigenvalues, r.standardizer, r.scores,
                       r.selected_edges, r.groups, r.thresholds,  r.warnings};
}

namespace {
bool same(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}
}  // namespace

bool operator==(const ModeSummary& a, const ModeSummary& b) {
    return a.status == b.status && same(a.gamma, b.gamma) && same(a.eigenvalues, b.eigenvalues) &&
           same(a.standardizer, b.standardizer) && a.scores == b.scores && a.selected_edges == b.selected_edges &&
           a.groups == b.groups && a.thresholds == b.thresholds && a.warnings == b.warnings;
}

Json result_to_json(const ResultDocument& doc) {
    Json j;
    j["format"] = "matseg-result";
    j["version"] = 1;
    j["kind"] = doc.kind;
    j["n"] = doc.n;
    j["dims"] = doc.dims;
    j["transposed"] = doc.transposed;
    j["config"] = config_to_json(doc.config);
    if (doc.kind == "matrix" && doc.modes.size() == 1) return mode_to_json(doc.modes.front(), std::move(j));
    Json modes = Json::array();
    for (std::size_t k = 0; k < doc.modes.size(); ++k) {
        Json mode;
        mode["mode"] = k + 1;
        modes.push_back(mode_to_json(doc.modes[k], std::move(mode)));
    }
    j["modes"] = std::move(modes);
    return j;
}

ResultDocument result_from_json(const Json& j) {
    return guarded("result document", [&] {
        if (j.at("format").get<std::string>() != "matseg-result")
            throw Error(ErrorKind::ParseError, "not a matseg result document");
        if (j.at("version").get<int>() != 1) throw Error(ErrorKind::ParseError, "unsupported result version");
        ResultDocument doc;
        doc.kind = j.at("kind").get<std::string>();
        doc.n = j.at("n").get<Index>();
        doc.dims = j.at("dims").get<std::vector<Index>>();
        doc.transposed = j.at("transposed").get<bool>();
        doc.config = config_from_json(j.at("config"));
        if (j.contains("modes")) {
            for (const Json& mode : j.at("modes")) doc.modes.push_back(mode_from_json(mode));
        } else {
            doc.modes.push_back(mode_from_json(j));
        }
        return doc;
    });
}

void save_result(const std::filesystem::path& path, const ResultDocument& doc) {
    write_text_file(path, result_to_json(doc).dump(2) + "\n");
}

ResultDocument load_result(const std::filesystem::path& path) { return result_from_json(read_json_file(path)); }

Json truth_to_json(const GroundTruth& truth, int example, Index n, std::uint64_t seed) {
    Json j;
    j["format"] = "matseg-truth";
    j["version"] = 1;
    j["example"] = example;
    j["n"] = n;
    j["seed"] = seed;
    j["a"] = matrix_to_json(truth.a_true);
    j["partition"] = partition_to_json(truth.partition);
    return j;
}

GroundTruth truth_from_json(const Json& j) {
    return guarded("truth document", [&] {
        if (j.at("format").get<std::string>() != "matseg-truth")
            throw Error(ErrorKind::ParseError, "not a matseg truth document");
        return GroundTruth{matrix_from_json(j.at("a")), partition_from_json(j.at("partition"))};
    });
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
    out << "example,n,reps,correct,incorrect,near_complete,d_bar_median\n";
    for (const ExperimentRow& row : report.rows) {
        out << row.example << ',' << row.n << ',' << row.reps << ',' << format_double(row.proportion(row.correct))
            << ',' << format_double(row.proportion(row.incorrect)) << ','
            << format_double(row.proportion(row.near_complete)) << ',';
        if (const auto median = row.d_bar_quantile(0.5)) out << format_double(*median);
        out << '\n';
    }
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for reading");
    std::ostringstream text;
    text << in.rdbuf();
    const std::string s = text.str();
    try {
        return Json::parse(s);
    } catch (const nlohmann::json::parse_error& e) {
        const std::size_t upto = std::min(e.byte, s.size());
        const auto line = 1 + static_cast<std::size_t>(std::count(s.begin(), s.begin() + static_cast<long>(upto), '\n'));
        throw Error::parse(line, path.string() + ": malformed JSON");
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorKind::IoError, "write to '" + path.string() + "' failed");
}

}  // namespace matseg::io
