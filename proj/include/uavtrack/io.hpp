#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uavtrack/assoc.hpp"
#include "uavtrack/cmc.hpp"
#include "uavtrack/geometry.hpp"

namespace uavtrack {

/// Row of a MOT-convention CSV: `frame,id,x,y,w,h,score,class,visibility`.
/// Raw detections use id = -1; ground truth and tracker output use real IDs.
struct MotRow {
    int id = -1;
    BoundingBox box;
    double score = 1.0;
    int cls = -1;
    int visibility = 1;
};

struct ParseOptions {
    /// Frame resolution, needed for the full-frame-box cleanup rule.
    std::optional<std::pair<double, double>> frame_size;
    /// Drop boxes whose area equals the frame area (annotation cleanup).
    bool drop_full_frame = true;
};

struct DetectionFile {
    std::vector<std::vector<Detection>> frames; // index 0 = frame 1
    int dropped = 0; // zero-sized or full-frame rows removed at parse time
};

struct MotFile {
    std::vector<std::vector<MotRow>> frames; // index 0 = frame 1
    int dropped = 0;
};

/// Detections grouped by frame, original order preserved. Zero-sized boxes
/// are dropped (counted); negative sizes and out-of-range scores are
/// ParseErrors carrying the line number.
DetectionFile parse_detections(const std::filesystem::path& path, const ParseOptions& opts = {});

/// Ground truth with real IDs; visibility must be 0 or 1.
MotFile parse_ground_truth(const std::filesystem::path& path, const ParseOptions& opts = {});

/// Tracker output rows (same format, any visibility).
MotFile parse_tracks(const std::filesystem::path& path, const ParseOptions& opts = {});

/// Writes MOT rows sorted by (frame, id). parse_tracks(write_tracks(x))
/// round-trips exactly.
void write_tracks(const std::filesystem::path& path,
                  const std::vector<std::vector<MotRow>>& frames);

void write_detections(const std::filesystem::path& path,
                      const std::vector<std::vector<Detection>>& frames);

/// Embeddings keyed by (frame, detection index within that frame).
using EmbeddingTable = std::map<std::pair<int, int>, EmbeddingVector>;

/// Rows `frame,det_index,v1,...,v_dim`. Vectors are unit-normalized on load.
/// Arity mismatches, duplicate keys and zero vectors are errors.
EmbeddingTable parse_embeddings(const std::filesystem::path& path, int dim);
void write_embeddings(const std::filesystem::path& path, const EmbeddingTable& table);

/// Width/height/area statistics over ground-truth boxes.
struct DimStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double stddev = 0.0; // population
};

struct AnnotationStats {
    DimStats width, height, area;
    long long sequences = 0;
    long long frames = 0;
    long long boxes = 0;
};

AnnotationStats summarize_annotations(const std::vector<std::filesystem::path>& gt_paths,
                                      const ParseOptions& opts = {});

/// Everything one sequence directory provides. Frame indices are 1-based and
/// contiguous; vectors are sized to frame_count.
struct SequenceBundle {
    std::string name;
    int frame_count = 0;
    double width = 640.0;
    double height = 512.0;
    int embedding_dim = 0; // 0 when the bundle carries no embeddings
    std::vector<std::vector<Detection>> detections;
    std::optional<EmbeddingTable> embeddings;
    std::optional<std::map<int, AffineTransform>> gmc;
    std::optional<std::vector<std::vector<MotRow>>> gt;
    int dropped_rows = 0;
};

/// Loads a sequence directory (seqinfo.json + det.txt, optional gt.txt,
/// embeddings.txt, gmc.txt).
SequenceBundle load_sequence(const std::filesystem::path& dir, const ParseOptions& opts = {});

/// Writes a bundle as a sequence directory in the formats above.
void save_sequence(const std::filesystem::path& dir, const SequenceBundle& bundle);

/// Sequence directories under root (directories containing seqinfo.json),
/// sorted by name; root itself when it is a sequence directory.
std::vector<std::filesystem::path> discover_sequences(const std::filesystem::path& root);

/// Single-object result file: {"res": [[x,y,w,h], ...]}, one entry per
/// frame; an empty array marks an abstained frame.
void write_sot_json(const std::filesystem::path& path,
                    const std::vector<std::optional<BoundingBox>>& boxes);
std::vector<std::optional<BoundingBox>> parse_sot_json(const std::filesystem::path& path);

} // namespace uavtrack
