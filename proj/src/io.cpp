#include "uavtrack/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uavtrack/errors.hpp"
#include "text_util.hpp"

namespace uavtrack {

namespace {

using nlohmann::json;

struct RawRow {
    int frame = 0;
    MotRow row;
};

enum class RowKind { Detection, GroundTruth, Tracks };

std::vector<RawRow> parse_mot_rows(const std::filesystem::path& path, RowKind kind,
                                   const ParseOptions& opts, int& dropped) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string(), 0, "cannot open file");
    }

    std::vector<RawRow> rows;
    std::string line;
    int line_no = 0;
    dropped = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view trimmed = detail::trim(line);
        if (trimmed.empty()) continue;

        const auto fields = detail::split_fields(trimmed);
        if (fields.size() != 9) {
            throw ParseError(path.string(), line_no,
                             "expected 9 fields (frame,id,x,y,w,h,score,class,visibility), got " +
                                 std::to_string(fields.size()));
        }

        RawRow r;
        if (!detail::parse_int(fields[0], r.frame) || r.frame < 1) {
            throw ParseError(path.string(), line_no, "invalid frame index");
        }
        if (!detail::parse_int(fields[1], r.row.id)) {
            throw ParseError(path.string(), line_no, "invalid id");
        }
        double coords[4];
        for (int i = 0; i < 4; ++i) {
            if (!detail::parse_double(fields[i + 2], coords[i]) || !std::isfinite(coords[i])) {
                throw ParseError(path.string(), line_no, "invalid box coordinate");
            }
        }
        if (coords[2] < 0.0 || coords[3] < 0.0) {
            throw ParseError(path.string(), line_no, "negative box size");
        }
        r.row.box = {coords[0], coords[1], coords[2], coords[3]};
        if (!detail::parse_double(fields[6], r.row.score) || !std::isfinite(r.row.score)) {
            throw ParseError(path.string(), line_no, "invalid score");
        }
        if (r.row.score < 0.0 || r.row.score > 1.0) {
            throw ParseError(path.string(), line_no, "score out of range [0,1]");
        }
        if (!detail::parse_int(fields[7], r.row.cls)) {
            throw ParseError(path.string(), line_no, "invalid class");
        }
        if (!detail::parse_int(fields[8], r.row.visibility)) {
            throw ParseError(path.string(), line_no, "invalid visibility");
        }
        if (kind == RowKind::GroundTruth &&
            r.row.visibility != 0 && r.row.visibility != 1) {
            throw ParseError(path.string(), line_no, "ground-truth visibility must be 0 or 1");
        }

        // annotation cleanup: zero-sized and (optionally) full-frame boxes
        if (r.row.box.w == 0.0 || r.row.box.h == 0.0) {
            ++dropped;
            continue;
        }
        if (opts.drop_full_frame && opts.frame_size &&
            area(r.row.box) == opts.frame_size->first * opts.frame_size->second) {
            ++dropped;
            continue;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

template <typename T>
void size_to_max_frame(std::vector<std::vector<T>>& frames, int frame) {
    if (frame > static_cast<int>(frames.size())) frames.resize(frame);
}

} // namespace

DetectionFile parse_detections(const std::filesystem::path& path, const ParseOptions& opts) {
    DetectionFile file;
    const auto rows = parse_mot_rows(path, RowKind::Detection, opts, file.dropped);
    for (const auto& r : rows) {
        size_to_max_frame(file.frames, r.frame);
        file.frames[r.frame - 1].push_back({r.row.box, r.row.score, std::nullopt});
    }
    return file;
}

MotFile parse_ground_truth(const std::filesystem::path& path, const ParseOptions& opts) {
    MotFile file;
    const auto rows = parse_mot_rows(path, RowKind::GroundTruth, opts, file.dropped);
    for (const auto& r : rows) {
        size_to_max_frame(file.frames, r.frame);
        file.frames[r.frame - 1].push_back(r.row);
    }
    return file;
}

MotFile parse_tracks(const std::filesystem::path& path, const ParseOptions& opts) {
    MotFile file;
    const auto rows = parse_mot_rows(path, RowKind::Tracks, opts, file.dropped);
    for (const auto& r : rows) {
        size_to_max_frame(file.frames, r.frame);
        file.frames[r.frame - 1].push_back(r.row);
    }
    return file;
}

namespace {

void write_mot_row(std::ofstream& out, int frame, const MotRow& row) {
    out << frame << ',' << row.id << ',' << detail::format_number(row.box.x) << ','
        << detail::format_number(row.box.y) << ',' << detail::format_number(row.box.w) << ','
        << detail::format_number(row.box.h) << ',' << detail::format_number(row.score) << ','
        << row.cls << ',' << row.visibility << '\n';
}

} // namespace

void write_tracks(const std::filesystem::path& path,
                  const std::vector<std::vector<MotRow>>& frames) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    for (std::size_t f = 0; f < frames.size(); ++f) {
        std::vector<MotRow> sorted = frames[f];
        std::sort(sorted.begin(), sorted.end(),
                  [](const MotRow& a, const MotRow& b) { return a.id < b.id; });
        for (const auto& row : sorted) {
            write_mot_row(out, static_cast<int>(f + 1), row);
        }
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

void write_detections(const std::filesystem::path& path,
                      const std::vector<std::vector<Detection>>& frames) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    for (std::size_t f = 0; f < frames.size(); ++f) {
        for (const auto& d : frames[f]) {
            MotRow row;
            row.id = -1;
            row.box = d.box;
            row.score = d.score;
            row.cls = -1;
            row.visibility = -1;
            write_mot_row(out, static_cast<int>(f + 1), row);
        }
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

EmbeddingTable parse_embeddings(const std::filesystem::path& path, int dim) {
    if (dim < 1) {
        throw std::invalid_argument("parse_embeddings: dimension must be positive");
    }
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string(), 0, "cannot open file");
    }

    EmbeddingTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view trimmed = detail::trim(line);
        if (trimmed.empty()) continue;

        const auto fields = detail::split_fields(trimmed);
        if (static_cast<int>(fields.size()) != dim + 2) {
            throw ParseError(path.string(), line_no,
                             "expected " + std::to_string(dim + 2) + " fields for dimension " +
                                 std::to_string(dim) + ", got " + std::to_string(fields.size()));
        }
        int frame = 0, det_index = 0;
        if (!detail::parse_int(fields[0], frame) || frame < 1) {
            throw ParseError(path.string(), line_no, "invalid frame index");
        }
        if (!detail::parse_int(fields[1], det_index) || det_index < 0) {
            throw ParseError(path.string(), line_no, "invalid detection index");
        }
        EmbeddingVector v(dim);
        for (int i = 0; i < dim; ++i) {
            double x = 0.0;
            if (!detail::parse_double(fields[i + 2], x) || !std::isfinite(x)) {
                throw ParseError(path.string(), line_no, "invalid embedding value");
            }
            v(i) = x;
        }
        if (v.norm() <= 0.0) {
            throw ParseError(path.string(), line_no, "zero embedding cannot be normalized");
        }
        const auto key = std::make_pair(frame, det_index);
        if (!table.emplace(key, normalize_embedding(v)).second) {
            throw ParseError(path.string(), line_no,
                             "duplicate embedding key (" + std::to_string(frame) + "," +
                                 std::to_string(det_index) + ")");
        }
    }
    return table;
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingTable& table) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    for (const auto& [key, vec] : table) {
        out << key.first << ',' << key.second;
        for (Eigen::Index i = 0; i < vec.size(); ++i) {
            out << ',' << detail::format_number(vec(i));
        }
        out << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

namespace {

DimStats stats_from_sorted(std::vector<double>& values) {
    DimStats s;
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    s.min = values.front();
    s.max = values.back();
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size()));
    return s;
}

} // namespace

AnnotationStats summarize_annotations(const std::vector<std::filesystem::path>& gt_paths,
                                      const ParseOptions& opts) {
    AnnotationStats stats;
    std::vector<double> widths, heights, areas;

    for (const auto& path : gt_paths) {
        const MotFile file = parse_ground_truth(path, opts);
        ++stats.sequences;
        stats.frames += static_cast<long long>(file.frames.size());
        for (const auto& frame : file.frames) {
            for (const auto& row : frame) {
                widths.push_back(row.box.w);
                heights.push_back(row.box.h);
                areas.push_back(area(row.box));
                ++stats.boxes;
            }
        }
    }

    // sorted accumulation keeps the result independent of input file order
    stats.width = stats_from_sorted(widths);
    stats.height = stats_from_sorted(heights);
    stats.area = stats_from_sorted(areas);
    return stats;
}

SequenceBundle load_sequence(const std::filesystem::path& dir, const ParseOptions& opts) {
    const auto info_path = dir / "seqinfo.json";
    std::ifstream info_in(info_path);
    if (!info_in) {
        throw ParseError(info_path.string(), 0, "cannot open sequence info");
    }
    json info;
    try {
        info = json::parse(info_in);
    } catch (const json::parse_error& e) {
        throw ParseError(info_path.string(), 0, e.what());
    }

    SequenceBundle bundle;
    bundle.name = info.value("name", dir.filename().string());
    bundle.frame_count = info.at("frame_count").get<int>();
    bundle.width = info.value("width", 640.0);
    bundle.height = info.value("height", 512.0);
    bundle.embedding_dim = info.value("embedding_dim", 0);
    if (bundle.frame_count < 1) {
        throw ParseError(info_path.string(), 0, "frame_count must be >= 1");
    }

    ParseOptions local = opts;
    if (!local.frame_size) local.frame_size = {{bundle.width, bundle.height}};

    DetectionFile dets = parse_detections(dir / "det.txt", local);
    bundle.dropped_rows += dets.dropped;
    bundle.detections = std::move(dets.frames);
    bundle.detections.resize(bundle.frame_count);

    if (std::filesystem::exists(dir / "gt.txt")) {
        MotFile gt = parse_ground_truth(dir / "gt.txt", local);
        bundle.dropped_rows += gt.dropped;
        gt.frames.resize(bundle.frame_count);
        bundle.gt = std::move(gt.frames);
    }
    if (std::filesystem::exists(dir / "gmc.txt")) {
        bundle.gmc = load_gmc(dir / "gmc.txt");
    }
    if (std::filesystem::exists(dir / "embeddings.txt")) {
        if (bundle.embedding_dim < 1) {
            throw ParseError(info_path.string(), 0,
                             "embeddings.txt present but embedding_dim missing from seqinfo");
        }
        bundle.embeddings = parse_embeddings(dir / "embeddings.txt", bundle.embedding_dim);
    }
    return bundle;
}

void save_sequence(const std::filesystem::path& dir, const SequenceBundle& bundle) {
    std::filesystem::create_directories(dir);

    json info;
    info["name"] = bundle.name;
    info["frame_count"] = bundle.frame_count;
    info["width"] = bundle.width;
    info["height"] = bundle.height;
    if (bundle.embedding_dim > 0) info["embedding_dim"] = bundle.embedding_dim;
    std::ofstream info_out(dir / "seqinfo.json");
    info_out << info.dump(2) << '\n';
    if (!info_out) {
        throw std::runtime_error("cannot write " + (dir / "seqinfo.json").string());
    }

    write_detections(dir / "det.txt", bundle.detections);
    if (bundle.gt) write_tracks(dir / "gt.txt", *bundle.gt);
    if (bundle.gmc) write_gmc(dir / "gmc.txt", *bundle.gmc);
    if (bundle.embeddings) write_embeddings(dir / "embeddings.txt", *bundle.embeddings);
}

std::vector<std::filesystem::path> discover_sequences(const std::filesystem::path& root) {
    std::vector<std::filesystem::path> dirs;
    if (std::filesystem::exists(root / "seqinfo.json")) {
        dirs.push_back(root);
        return dirs;
    }
    if (!std::filesystem::is_directory(root)) return dirs;
    for (const auto& entry : std::filesystem::directory_iterator(root)) {
        if (entry.is_directory() && std::filesystem::exists(entry.path() / "seqinfo.json")) {
            dirs.push_back(entry.path());
        }
    }
    std::sort(dirs.begin(), dirs.end());
    return dirs;
}

void write_sot_json(const std::filesystem::path& path,
                    const std::vector<std::optional<BoundingBox>>& boxes) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "{\"res\": [";
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        if (i > 0) out << ", ";
        if (boxes[i]) {
            out << '[' << detail::format_number(boxes[i]->x) << ", "
                << detail::format_number(boxes[i]->y) << ", "
                << detail::format_number(boxes[i]->w) << ", "
                << detail::format_number(boxes[i]->h) << ']';
        } else {
            out << "[]";
        }
    }
    out << "]}\n";
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

std::vector<std::optional<BoundingBox>> parse_sot_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string(), 0, "cannot open file");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string(), 0, e.what());
    }
    if (!doc.is_object() || !doc.contains("res") || !doc["res"].is_array()) {
        throw ParseError(path.string(), 0, "expected an object with a \"res\" array");
    }

    std::vector<std::optional<BoundingBox>> boxes;
    for (const auto& entry : doc["res"]) {
        if (!entry.is_array()) {
            throw ParseError(path.string(), 0, "res entries must be arrays");
        }
        if (entry.empty()) {
            boxes.push_back(std::nullopt);
            continue;
        }
        if (entry.size() != 4) {
            throw ParseError(path.string(), 0, "res entries must have 4 values or be empty");
        }
        boxes.push_back(BoundingBox{entry[0].get<double>(), entry[1].get<double>(),
                                    entry[2].get<double>(), entry[3].get<double>()});
    }
    return boxes;
}

} // namespace uavtrack
