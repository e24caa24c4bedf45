#pragma once

#include <optional>
#include <vector>

#include "uavtrack/geometry.hpp"

namespace uavtrack {

/// One frame of a single-object evaluation stream. The predicted-visibility
/// flag p_t is 1 exactly when the prediction is absent; v is the
/// ground-truth visibility flag (v > 0 means visible, which requires gt).
struct SotFrameRecord {
    std::optional<BoundingBox> pred;
    std::optional<BoundingBox> gt;
    int v = 0;
};

struct SotScore {
    double acc = 0.0;
    int frames = 0;          // T
    int visible_frames = 0;  // T*
    double mean_iou_term = 0.0;
    double penalty_term = 0.0;
};

/// Single-object tracking accuracy:
///   acc = sum_t [IoU_t * [v_t>0] + p_t * (1 - [v_t>0])] / T
///         - 0.2 * (sum_t p_t * [v_t>0] / T*)^0.3
/// IoU_t is 0 when either box is absent. A stream with no visible frames
/// (T* = 0) carries no penalty term.
SotScore sot_accuracy(const std::vector<SotFrameRecord>& records);

/// Identity-bearing box, one row of a frame's GT or prediction set.
struct IdBox {
    int id = 0;
    BoundingBox box;
};

struct ClearCounts {
    long long fp = 0;
    long long fn = 0;
    long long ids = 0;
    long long gt = 0; // total ground-truth boxes
};

/// CLEAR-style per-frame matching: correspondences from the previous frames
/// persist while they still overlap at iou_thresh; the remainder is matched
/// by minimum (1 - IoU) assignment subject to IoU >= iou_thresh. Unmatched
/// predictions count FP, unmatched GT boxes FN; a GT matched to a different
/// prediction ID than its last match counts one identity switch.
/// Inputs are frame-aligned (index 0 = frame 1). Throws on duplicate IDs
/// within one frame.
ClearCounts clear_match(const std::vector<std::vector<IdBox>>& gt_frames,
                        const std::vector<std::vector<IdBox>>& pred_frames,
                        double iou_thresh = 0.5);

/// MOTA = 1 - (FP + FN + IDS) / GT. Throws when GT is 0.
double mota(const ClearCounts& counts);

/// Arithmetic mean over per-sequence MOTA values. Throws on an empty list.
double average_mota(const std::vector<double>& per_sequence);

} // namespace uavtrack
